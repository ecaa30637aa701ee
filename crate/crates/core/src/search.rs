//! Exhaustive enumeration of proper colourings up to DJ-equivalence.
//!
//! The search assigns colours facet by facet. Colour-space symmetry is broken
//! by a frame rule: a colour outside the span of the colours already placed
//! must be the next frame vector. Polytope symmetry is broken once, after a
//! fixed prefix of facets has been coloured, by requiring the prefix to be the
//! smallest in its orbit under the prefix stabiliser. Everything that survives
//! is deduplicated by [`canonical_form`].
//!
//! For orientable searches every colour is taken with first coordinate 1. Any
//! orientable colouring can be moved there by a change of basis sending ε to
//! the first row, and the residual colour group is the affine group of the
//! hyperplane.

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::colouring::{canonical_form, flat_class_from_hits, Colouring, FlatClass};
use crate::f2::{self, F2Matrix, TrackedBasis};
use crate::polytope::{cube3, Polytope, Symmetry};

/// What to enumerate. Colourings are always surjective onto 𝔽₂^k, one search
/// per k in `rank_min..=rank_max`.
#[derive(Clone, Debug)]
pub struct SearchSpec {
    pub polytope: Arc<Polytope>,
    pub rank_min: usize,
    pub rank_max: usize,
    pub orientable: bool,
    /// Flat class required at every ideal vertex.
    pub cusp_class: Option<FlatClass>,
    /// Orbit pruning on the prefix. Turning it off leaves only the frame rule.
    pub prune: bool,
}

impl SearchSpec {
    pub fn new(polytope: Arc<Polytope>, rank_min: usize, rank_max: usize) -> SearchSpec {
        SearchSpec { polytope, rank_min, rank_max, orientable: false, cusp_class: None, prune: true }
    }

    pub fn orientable(mut self, yes: bool) -> Self {
        self.orientable = yes;
        self
    }

    pub fn cusp_class(mut self, class: Option<FlatClass>) -> Self {
        self.cusp_class = class;
        self
    }

    pub fn prune(mut self, yes: bool) -> Self {
        self.prune = yes;
        self
    }

    pub fn echo(&self) -> SpecEcho {
        SpecEcho {
            polytope: self.polytope.name().to_string(),
            rank_min: self.rank_min,
            rank_max: self.rank_max,
            orientable: self.orientable,
            cusp_class: self.cusp_class,
            prune: self.prune,
        }
    }
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum SearchError {
    #[error("rank range {0}..={1} is empty or outside 1..=m")]
    RankRange(usize, usize),
    #[error("a cusp class filter needs a polytope with ideal vertices")]
    NoIdealVertices,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpecEcho {
    pub polytope: String,
    pub rank_min: usize,
    pub rank_max: usize,
    pub orientable: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cusp_class: Option<FlatClass>,
    pub prune: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassLabels {
    pub rank: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub flat_class: Option<FlatClass>,
    pub betti: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub independent_pairs: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps_image_zero: Option<bool>,
}

impl ClassLabels {
    /// Short label used for the per-rank counts.
    pub fn label(&self) -> String {
        match self.flat_class {
            Some(c) => c.label().to_string(),
            None => {
                let b: Vec<String> = self.betti.iter().map(|x| x.to_string()).collect();
                format!("betti({})", b.join(","))
            }
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DjClass {
    pub canonical: F2Matrix,
    pub representative_columns: Vec<String>,
    pub labels: ClassLabels,
}

impl DjClass {
    pub fn representative(&self, polytope: Arc<Polytope>) -> Colouring {
        let colours = self
            .representative_columns
            .iter()
            .map(|s| s.parse::<f2::F2Vector>().expect("stored columns are valid").bits())
            .collect();
        Colouring::new(polytope, self.labels.rank, colours).expect("stored colouring is valid")
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStats {
    /// Independent subtrees handed to the worker pool.
    pub subtrees: usize,
    /// Accepted complete colourings before deduplication.
    pub leaves: u64,
    /// Search nodes visited.
    pub nodes: u64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CensusResult {
    pub spec: SpecEcho,
    pub classes: Vec<DjClass>,
    /// rank → label → number of classes.
    pub counts: BTreeMap<usize, BTreeMap<String, usize>>,
    pub stats: SearchStats,
    #[serde(skip)]
    pub wall_time: Duration,
}

impl CensusResult {
    pub fn total(&self) -> usize {
        self.classes.len()
    }

    pub fn count(&self, rank: usize, label: &str) -> usize {
        self.counts.get(&rank).and_then(|m| m.get(label)).copied().unwrap_or(0)
    }

    pub fn rank_total(&self, rank: usize) -> usize {
        self.counts.get(&rank).map(|m| m.values().sum()).unwrap_or(0)
    }

    pub fn contains(&self, canonical: &F2Matrix) -> bool {
        self.classes.iter().any(|c| &c.canonical == canonical)
    }
}

/// Progress callback: (subtrees finished, subtrees total).
pub type Progress<'a> = &'a (dyn Fn(usize, usize) + Sync);

#[derive(Clone, Copy)]
pub struct RunOptions<'a> {
    /// Worker threads; 0 uses rayon's default pool.
    pub jobs: usize,
    pub progress: Option<Progress<'a>>,
}

impl Default for RunOptions<'_> {
    fn default() -> Self {
        RunOptions { jobs: 1, progress: None }
    }
}

pub fn enumerate(spec: &SearchSpec, opts: RunOptions<'_>) -> Result<CensusResult, SearchError> {
    let m = spec.polytope.m();
    if spec.rank_min == 0 || spec.rank_min > spec.rank_max || spec.rank_max > m.min(f2::MAX_BITS) {
        return Err(SearchError::RankRange(spec.rank_min, spec.rank_max));
    }
    if spec.cusp_class.is_some() && spec.polytope.ideal_vertices().is_empty() {
        return Err(SearchError::NoIdealVertices);
    }
    let start = Instant::now();
    let run = |opts: RunOptions<'_>| {
        let mut found: BTreeMap<F2Matrix, Vec<u64>> = BTreeMap::new();
        let mut stats = SearchStats::default();
        for k in spec.rank_min..=spec.rank_max {
            let engine = Engine::new(spec, k);
            let (part, s) = engine.run(opts);
            stats.subtrees += s.subtrees;
            stats.leaves += s.leaves;
            stats.nodes += s.nodes;
            for (canon, colours) in part {
                found.entry(canon).or_insert(colours);
            }
        }
        (found, stats)
    };
    let (found, stats) = if opts.jobs == 0 {
        run(opts)
    } else {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(opts.jobs).build().expect("thread pool");
        pool.install(|| run(opts))
    };
    let mut classes = Vec::with_capacity(found.len());
    let mut counts: BTreeMap<usize, BTreeMap<String, usize>> = BTreeMap::new();
    for (canonical, colours) in found {
        let k = canonical.nrows();
        let c = Colouring::new(spec.polytope.clone(), k, colours).expect("search emits valid colourings");
        let labels = labels_of(&c);
        *counts.entry(k).or_default().entry(labels.label()).or_default() += 1;
        classes.push(DjClass { canonical, representative_columns: c.column_strings(), labels });
    }
    Ok(CensusResult { spec: spec.echo(), classes, counts, stats, wall_time: start.elapsed() })
}

fn labels_of(c: &Colouring) -> ClassLabels {
    let is_cube = c.polytope().cube_opposite_pairs().is_some();
    let flat_class = if is_cube && c.is_orientable() { c.classify_flat_cube().ok() } else { None };
    let inv = if is_cube { c.dj_invariants().ok() } else { None };
    ClassLabels {
        rank: c.rank(),
        flat_class,
        betti: c.betti_profile().betti,
        independent_pairs: inv.map(|i| i.independent_pairs),
        eps_image_zero: inv.map(|i| i.eps_image_zero),
    }
}

/// Orientable census of the labelled cube for ranks `rank_min..=rank_max`.
pub fn enumerate_cube(rank_min: usize, rank_max: usize, prune: bool) -> CensusResult {
    let spec = SearchSpec::new(cube3(), rank_min, rank_max).orientable(true).prune(prune);
    enumerate(&spec, RunOptions::default()).expect("cube ranks are valid")
}

/// Orientable rank-4 colourings of the 24-cell with every cusp section
/// Hantzsche–Wendt.
pub fn uniqueness_spec() -> SearchSpec {
    let polytope = crate::cell24::TwentyFourCell::shared().polytope().clone();
    SearchSpec::new(polytope, 4, 4).orientable(true).cusp_class(Some(FlatClass::F6HantzscheWendt))
}

pub fn enumerate_24cell_uniqueness(opts: RunOptions<'_>) -> CensusResult {
    enumerate(&uniqueness_spec(), opts).expect("built-in spec is valid")
}

/// Whether `prefix` (colours in visit order) is the smallest frame-normal
/// image of itself under the given symmetries. `order` lists the prefix
/// facets; every symmetry must map that set to itself.
pub fn orbit_prune(order: &[usize], colours: &[u64], symmetries: &[Symmetry], affine: bool) -> bool {
    let current: Vec<u64> = order.iter().map(|&f| colours[f]).collect();
    let normal = frame_normalise(&current, affine);
    let mut image = vec![0u64; order.len()];
    symmetries.iter().all(|s| {
        for (slot, &f) in image.iter_mut().zip(order) {
            *slot = colours[s.apply(f)];
        }
        frame_normalise(&image, affine) >= normal
    })
}

/// Image of a colour sequence under the unique colour-space map sending its
/// new directions, in order, to the frame vectors.
pub fn frame_normalise(seq: &[u64], affine: bool) -> Vec<u64> {
    let mut basis = TrackedBasis::new();
    seq.iter()
        .map(|&c| {
            basis.insert(c);
            let coords = basis.coordinates(c).expect("just inserted");
            if affine {
                let mut out = 0u64;
                let mut bits = coords;
                while bits != 0 {
                    let i = bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    out ^= frame_vector(i, true);
                }
                out
            } else {
                coords
            }
        })
        .collect()
}

fn frame_vector(i: usize, affine: bool) -> u64 {
    match (affine, i) {
        (true, 0) => 1,
        (true, i) => 1 | 1 << i,
        (false, i) => 1 << i,
    }
}

/// Feasibility of partially coloured vertex figures.
enum FigureCheck {
    None,
    /// Dense bitset over packed partial figure keys (6 slots of k bits, 0 = open).
    Table(Vec<u64>),
    /// Checked only once a figure is complete.
    Complete,
}

struct Engine<'a> {
    m: usize,
    k: usize,
    affine: bool,
    prune: bool,
    class: Option<FlatClass>,
    symmetries: &'a [Symmetry],
    prefix: Vec<usize>,
    stabiliser: Vec<Symmetry>,
    neighbours: Vec<u64>,
    /// Per facet: the other vertices of each simplex of dimension ≥ 2 through it.
    higher: Vec<Vec<u64>>,
    /// Per facet: (figure, slot) memberships.
    figures_of: Vec<Vec<(usize, usize)>>,
    figures: Vec<[usize; 6]>,
    check: FigureCheck,
    candidates: Vec<u64>,
}

#[derive(Clone)]
struct Node {
    colours: Vec<u64>,
    assigned: u64,
    depth: usize,
    span: Echelon,
    keys: Vec<u64>,
}

#[derive(Clone, Default)]
struct Echelon {
    rows: Vec<u64>,
}

impl Echelon {
    fn reduce(&self, mut v: u64) -> u64 {
        for &r in &self.rows {
            if v >> r.trailing_zeros() & 1 == 1 {
                v ^= r;
            }
        }
        v
    }
}

/// Canonical form → first colouring reaching it in search order.
type Found = BTreeMap<F2Matrix, Vec<u64>>;

#[derive(Default)]
struct Sink {
    found: Found,
    frontier: Vec<Node>,
    leaves: u64,
    nodes: u64,
}

impl<'a> Engine<'a> {
    fn new(spec: &'a SearchSpec, k: usize) -> Engine<'a> {
        let p = &*spec.polytope;
        let m = p.m();
        let affine = spec.orientable;
        let dual = p.dual_k();
        let mut higher = vec![Vec::new(); m];
        for d in 2..=dual.max_dim() {
            for s in dual.simplices(d) {
                let mask = s.iter().fold(0u64, |acc, &v| acc | 1 << v);
                for &v in s {
                    // a triple of distinct points on the affine hyperplane is always independent
                    if !(affine && d == 2) {
                        higher[v].push(mask & !(1 << v));
                    }
                }
            }
        }
        let figures: Vec<[usize; 6]> = p.ideal_vertices().iter().map(|v| *v.facets()).collect();
        let mut figures_of = vec![Vec::new(); m];
        if spec.cusp_class.is_some() {
            for (i, f) in figures.iter().enumerate() {
                for (slot, &facet) in f.iter().enumerate() {
                    figures_of[facet].push((i, slot));
                }
            }
        }
        let candidates: Vec<u64> = (1u64..1 << k).filter(|c| !affine || c & 1 == 1).collect();
        let check = match spec.cusp_class {
            None => FigureCheck::None,
            Some(class) if 6 * k <= 24 => FigureCheck::Table(figure_table(k, &candidates, class, affine)),
            Some(_) => FigureCheck::Complete,
        };
        let prefix: Vec<usize> = match figures.first() {
            Some(f) => f.to_vec(),
            None => (0..m.min(8)).collect(),
        };
        let prefix_mask = prefix.iter().fold(0u64, |acc, &f| acc | 1 << f);
        let stabiliser = p.setwise_stabiliser(prefix_mask);
        Engine {
            m,
            k,
            affine,
            prune: spec.prune,
            class: spec.cusp_class,
            symmetries: p.symmetry_group(),
            prefix,
            stabiliser,
            neighbours: (0..m).map(|f| p.neighbours(f)).collect(),
            higher,
            figures_of,
            figures,
            check,
            candidates,
        }
    }

    fn root(&self) -> Node {
        Node {
            colours: vec![0; self.m],
            assigned: 0,
            depth: 0,
            span: Echelon::default(),
            keys: vec![0; self.figures.len()],
        }
    }

    fn run(&self, opts: RunOptions<'_>) -> (Found, SearchStats) {
        let split = (self.prefix.len() + 3).min(self.m);
        let mut head = Sink::default();
        self.dfs(&mut self.root(), Some(split), &mut head);
        let frontier = std::mem::take(&mut head.frontier);
        let total = frontier.len();
        let done = AtomicUsize::new(0);
        let parts: Vec<Sink> = frontier
            .into_par_iter()
            .map(|mut node| {
                let mut sink = Sink::default();
                self.dfs(&mut node, None, &mut sink);
                let d = done.fetch_add(1, Ordering::Relaxed) + 1;
                if let Some(p) = opts.progress {
                    p(d, total);
                }
                sink
            })
            .collect();
        let mut stats = SearchStats { subtrees: total, leaves: head.leaves, nodes: head.nodes };
        let mut found = head.found;
        for part in parts {
            stats.leaves += part.leaves;
            stats.nodes += part.nodes;
            for (canon, colours) in part.found {
                found.entry(canon).or_insert(colours);
            }
        }
        (found, stats)
    }

    fn frame_ok(&self, node: &Node, c: u64) -> bool {
        node.span.reduce(c) == 0 || c == frame_vector(node.span.rows.len(), self.affine)
    }

    fn legal(&self, node: &Node, v: usize, c: u64) -> bool {
        let mut nb = self.neighbours[v] & node.assigned;
        while nb != 0 {
            let u = nb.trailing_zeros() as usize;
            nb &= nb - 1;
            if node.colours[u] == c {
                return false;
            }
        }
        for &mask in &self.higher[v] {
            if mask & node.assigned == mask {
                let mut cols = vec![c];
                let mut bits = mask;
                while bits != 0 {
                    cols.push(node.colours[bits.trailing_zeros() as usize]);
                    bits &= bits - 1;
                }
                if !f2::independent(&cols) {
                    return false;
                }
            }
        }
        for &(fig, slot) in &self.figures_of[v] {
            let key = node.keys[fig] | c << (slot * self.k);
            match &self.check {
                FigureCheck::None => {}
                FigureCheck::Table(bits) => {
                    if bits[(key >> 6) as usize] >> (key & 63) & 1 == 0 {
                        return false;
                    }
                }
                FigureCheck::Complete => {
                    let full = self.figures[fig].iter().all(|&f| f == v || node.assigned >> f & 1 == 1);
                    if full && !figure_valid(&unpack(key, self.k), self.k, self.class.expect("filter set"), self.affine) {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn assign(&self, node: &mut Node, v: usize, c: u64) -> bool {
        node.colours[v] = c;
        node.assigned |= 1 << v;
        node.depth += 1;
        for &(fig, slot) in &self.figures_of[v] {
            node.keys[fig] |= c << (slot * self.k);
        }
        let r = node.span.reduce(c);
        if r != 0 {
            node.span.rows.push(r);
        }
        r != 0
    }

    fn unassign(&self, node: &mut Node, v: usize, c: u64, grew: bool) {
        node.colours[v] = 0;
        node.assigned &= !(1 << v);
        node.depth -= 1;
        for &(fig, slot) in &self.figures_of[v] {
            node.keys[fig] &= !(c << (slot * self.k));
        }
        if grew {
            node.span.rows.pop();
        }
    }

    /// Next facet to colour, or `None` when some open facet has no legal colour.
    fn choose(&self, node: &Node) -> Option<usize> {
        if node.depth < self.prefix.len() {
            return Some(self.prefix[node.depth]);
        }
        let mut best: Option<(usize, usize)> = None;
        for v in 0..self.m {
            if node.assigned >> v & 1 == 1 {
                continue;
            }
            let n = self.candidates.iter().filter(|&&c| self.legal(node, v, c)).count();
            if n == 0 {
                return None;
            }
            if best.is_none_or(|(_, b)| n < b) {
                best = Some((v, n));
            }
        }
        best.map(|(v, _)| v)
    }

    fn dfs(&self, node: &mut Node, split: Option<usize>, sink: &mut Sink) {
        sink.nodes += 1;
        if node.depth == self.m {
            self.leaf(node, sink);
            return;
        }
        if self.m - node.depth < self.k - node.span.rows.len() {
            return;
        }
        if split == Some(node.depth) {
            sink.frontier.push(node.clone());
            return;
        }
        let Some(v) = self.choose(node) else { return };
        for &c in &self.candidates {
            if !self.frame_ok(node, c) || !self.legal(node, v, c) {
                continue;
            }
            let grew = self.assign(node, v, c);
            let keep = node.depth != self.prefix.len()
                || !self.prune
                || orbit_prune(&self.prefix, &node.colours, &self.stabiliser, self.affine);
            if keep {
                self.dfs(node, split, sink);
            }
            self.unassign(node, v, c, grew);
        }
    }

    fn leaf(&self, node: &Node, sink: &mut Sink) {
        if node.span.rows.len() != self.k {
            return;
        }
        sink.leaves += 1;
        let canon = canonical_form(self.symmetries, &node.colours, self.k);
        sink.found.entry(canon).or_insert_with(|| node.colours.clone());
    }
}

fn unpack(key: u64, k: usize) -> [u64; 6] {
    let mask = (1u64 << k) - 1;
    std::array::from_fn(|i| key >> (i * k) & mask)
}

/// Whether six colours on the labelled cube form a proper colouring of the
/// required flat class (orientability is part of the requirement).
fn figure_valid(cols: &[u64; 6], k: usize, class: FlatClass, affine: bool) -> bool {
    for i in 0..6 {
        for j in i + 1..6 {
            if i / 2 != j / 2 && !f2::independent(&[cols[i], cols[j]]) {
                return false;
            }
        }
    }
    if !affine {
        for a in 0..2 {
            for b in 2..4 {
                for c in 4..6 {
                    if !f2::independent(&[cols[a], cols[b], cols[c]]) {
                        return false;
                    }
                }
            }
        }
    }
    let row = F2Matrix::from_columns(cols, k).row_space();
    if !row.contains_all_ones() {
        return false;
    }
    let hits = [0b11u64, 0b1100, 0b11_0000].iter().filter(|&&t| row.contains(t)).count();
    flat_class_from_hits(hits) == class
}

fn figure_table(k: usize, candidates: &[u64], class: FlatClass, affine: bool) -> Vec<u64> {
    let bits = 6 * k;
    let mut table = vec![0u64; (1usize << bits).div_ceil(64)];
    let n = candidates.len();
    let mut idx = [0usize; 6];
    loop {
        let cols: [u64; 6] = std::array::from_fn(|i| candidates[idx[i]]);
        if figure_valid(&cols, k, class, affine) {
            for sub in 0u32..64 {
                let key = (0..6)
                    .filter(|i| sub >> i & 1 == 1)
                    .fold(0u64, |acc, i| acc | cols[i] << (i * k));
                table[(key >> 6) as usize] |= 1 << (key & 63);
            }
        }
        let mut i = 0;
        loop {
            if i == 6 {
                return table;
            }
            idx[i] += 1;
            if idx[i] < n {
                break;
            }
            idx[i] = 0;
            i += 1;
        }
    }
}
