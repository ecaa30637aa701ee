//! Combinatorial right-angled polytopes: facets, the facet-adjacency graph,
//! the dual flag complex and ideal vertices with cube vertex figures.

use std::collections::HashSet;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complex::FlagComplex;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PolytopeError {
    #[error("polytope has {0} facets; supported range is 1..=64")]
    FacetCount(usize),
    #[error("adjacency pair ({0},{1}) is invalid")]
    BadEdge(usize, usize),
    #[error("vertex figure {index}: {msg}")]
    BadVertexFigure { index: usize, msg: String },
    #[error("unknown built-in polytope {0:?}")]
    UnknownName(String),
    #[error("24-cell model: {0}")]
    Model(String),
}

/// Six facets around an ideal vertex whose Euclidean figure is a cube.
///
/// Positions (0,1), (2,3), (4,5) hold the three opposite pairs. Each pair is
/// stored smaller index first and the pairs are sorted by their first member.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct VertexFigure {
    facets: [usize; 6],
}

impl VertexFigure {
    /// Builds a figure from facets listed pairwise (opposite pairs at (0,1), (2,3), (4,5)).
    pub fn new(facets: [usize; 6]) -> Self {
        let mut pairs = [
            [facets[0].min(facets[1]), facets[0].max(facets[1])],
            [facets[2].min(facets[3]), facets[2].max(facets[3])],
            [facets[4].min(facets[5]), facets[4].max(facets[5])],
        ];
        pairs.sort();
        VertexFigure { facets: [pairs[0][0], pairs[0][1], pairs[1][0], pairs[1][1], pairs[2][0], pairs[2][1]] }
    }

    pub fn facets(&self) -> &[usize; 6] {
        &self.facets
    }

    pub fn opposite_pairs(&self) -> [(usize, usize); 3] {
        let f = &self.facets;
        [(f[0], f[1]), (f[2], f[3]), (f[4], f[5])]
    }

    pub fn mask(&self) -> u64 {
        self.facets.iter().fold(0, |acc, &f| acc | 1 << f)
    }

    /// Pair masks, sorted: the structure a symmetry must preserve.
    fn pair_key(&self, map: impl Fn(usize) -> usize) -> [u64; 3] {
        let mut key = self.opposite_pairs().map(|(a, b)| (1u64 << map(a)) | (1u64 << map(b)));
        key.sort();
        key
    }
}

/// A facet permutation: `image[f]` is where facet `f` goes.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Symmetry(pub Vec<usize>);

impl Symmetry {
    pub fn identity(m: usize) -> Self {
        Symmetry((0..m).collect())
    }

    pub fn apply(&self, f: usize) -> usize {
        self.0[f]
    }

    /// `self ∘ other`: first `other`, then `self`.
    pub fn compose(&self, other: &Symmetry) -> Symmetry {
        Symmetry(other.0.iter().map(|&f| self.0[f]).collect())
    }

    pub fn inverse(&self) -> Symmetry {
        let mut inv = vec![0; self.0.len()];
        for (f, &g) in self.0.iter().enumerate() {
            inv[g] = f;
        }
        Symmetry(inv)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &j)| i == j)
    }
}

/// JSON description of a user-supplied polytope.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolytopeSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub facets: usize,
    pub adjacency: Vec<[usize; 2]>,
    #[serde(default)]
    pub ideal_vertices: Vec<[usize; 6]>,
    pub max_dual_dim: usize,
    /// Dimension of the polytope; defaults to `max_dual_dim + 1`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dimension: Option<usize>,
}

#[derive(Debug)]
pub struct Polytope {
    name: String,
    dimension: usize,
    adjacency: Vec<u64>,
    dual_k: FlagComplex,
    ideal_vertices: Vec<VertexFigure>,
    symmetries: OnceLock<Vec<Symmetry>>,
}

impl Polytope {
    pub fn from_spec(spec: &PolytopeSpec) -> Result<Polytope, PolytopeError> {
        let m = spec.facets;
        if m == 0 || m > 64 {
            return Err(PolytopeError::FacetCount(m));
        }
        let mut adjacency = vec![0u64; m];
        for &[a, b] in &spec.adjacency {
            if a == b || a >= m || b >= m {
                return Err(PolytopeError::BadEdge(a, b));
            }
            adjacency[a] |= 1 << b;
            adjacency[b] |= 1 << a;
        }
        let mut figures = Vec::with_capacity(spec.ideal_vertices.len());
        for (index, raw) in spec.ideal_vertices.iter().enumerate() {
            let fig = VertexFigure::new(*raw);
            check_cube_figure(&adjacency, &fig).map_err(|msg| PolytopeError::BadVertexFigure { index, msg })?;
            figures.push(fig);
        }
        let mut edges: Vec<[usize; 2]> = Vec::new();
        for a in 0..m {
            for b in a + 1..m {
                if adjacency[a] >> b & 1 == 1 {
                    edges.push([a, b]);
                }
            }
        }
        let dual_k = FlagComplex::clique_complex(m, &edges, spec.max_dual_dim);
        Ok(Polytope {
            name: spec.name.clone().unwrap_or_else(|| "custom".into()),
            dimension: spec.dimension.unwrap_or(spec.max_dual_dim + 1),
            adjacency,
            dual_k,
            ideal_vertices: figures,
            symmetries: OnceLock::new(),
        })
    }

    pub fn to_spec(&self) -> PolytopeSpec {
        PolytopeSpec {
            name: Some(self.name.clone()),
            facets: self.m(),
            adjacency: self.dual_k.simplices(1).iter().map(|e| [e[0], e[1]]).collect(),
            ideal_vertices: self.ideal_vertices.iter().map(|v| *v.facets()).collect(),
            max_dual_dim: self.dual_k.max_dim(),
            dimension: Some(self.dimension),
        }
    }

    /// Looks up a built-in polytope by name (`cube3` or `24cell`).
    pub fn builtin(name: &str) -> Result<Arc<Polytope>, PolytopeError> {
        match name {
            "cube3" | "cube" => Ok(cube3()),
            "24cell" | "24-cell" => Ok(crate::cell24::TwentyFourCell::shared().polytope().clone()),
            other => Err(PolytopeError::UnknownName(other.to_string())),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Number of facets.
    pub fn m(&self) -> usize {
        self.adjacency.len()
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.adjacency[a] >> b & 1 == 1
    }

    pub fn neighbours(&self, f: usize) -> u64 {
        self.adjacency[f]
    }

    pub fn dual_k(&self) -> &FlagComplex {
        &self.dual_k
    }

    pub fn ideal_vertices(&self) -> &[VertexFigure] {
        &self.ideal_vertices
    }

    /// For a 6-facet cube: its opposite pairs, read off as the non-adjacent pairs.
    pub fn cube_opposite_pairs(&self) -> Option<[(usize, usize); 3]> {
        if self.m() != 6 {
            return None;
        }
        let mut pairs = Vec::new();
        for a in 0..6 {
            for b in a + 1..6 {
                if !self.adjacent(a, b) {
                    pairs.push((a, b));
                }
            }
        }
        if pairs.len() != 3 {
            return None;
        }
        let fig = VertexFigure::new([pairs[0].0, pairs[0].1, pairs[1].0, pairs[1].1, pairs[2].0, pairs[2].1]);
        check_cube_figure(&self.adjacency, &fig).ok()?;
        Some(fig.opposite_pairs())
    }

    /// All adjacency-preserving facet permutations (graph automorphisms).
    pub fn graph_automorphisms(&self) -> Vec<Symmetry> {
        let m = self.m();
        // visit facets breadth-first so every new facet has an assigned neighbour when possible
        let mut order = Vec::with_capacity(m);
        let mut seen = 0u64;
        for start in 0..m {
            if seen >> start & 1 == 1 {
                continue;
            }
            seen |= 1 << start;
            order.push(start);
            let mut head = order.len() - 1;
            while head < order.len() {
                let f = order[head];
                head += 1;
                let mut nb = self.adjacency[f] & !seen;
                while nb != 0 {
                    let g = nb.trailing_zeros() as usize;
                    nb &= nb - 1;
                    seen |= 1 << g;
                    order.push(g);
                }
            }
        }
        let degrees: Vec<u32> = self.adjacency.iter().map(|a| a.count_ones()).collect();
        let mut image = vec![usize::MAX; m];
        let mut out = Vec::new();
        self.extend_automorphism(&order, 0, &degrees, &mut image, 0, &mut out);
        out.sort();
        out
    }

    fn extend_automorphism(
        &self,
        order: &[usize],
        depth: usize,
        degrees: &[u32],
        image: &mut [usize],
        used: u64,
        out: &mut Vec<Symmetry>,
    ) {
        if depth == order.len() {
            out.push(Symmetry(image.to_vec()));
            return;
        }
        let f = order[depth];
        for g in 0..self.m() {
            if used >> g & 1 == 1 || degrees[g] != degrees[f] {
                continue;
            }
            let consistent = order[..depth]
                .iter()
                .all(|&prev| self.adjacent(f, prev) == self.adjacent(g, image[prev]));
            if !consistent {
                continue;
            }
            image[f] = g;
            self.extend_automorphism(order, depth + 1, degrees, image, used | 1 << g, out);
            image[f] = usize::MAX;
        }
    }

    /// Whether `s` maps the set of vertex figures onto itself, respecting opposite pairs.
    pub fn preserves_vertex_figures(&self, s: &Symmetry) -> bool {
        let keys: HashSet<[u64; 3]> = self.ideal_vertices.iter().map(|v| v.pair_key(|f| f)).collect();
        self.ideal_vertices.iter().all(|v| keys.contains(&v.pair_key(|f| s.apply(f))))
    }

    /// The combinatorial symmetry group: adjacency- and vertex-figure-preserving
    /// permutations, sorted. Computed once and cached.
    pub fn symmetry_group(&self) -> &[Symmetry] {
        self.symmetries.get_or_init(|| {
            self.graph_automorphisms()
                .into_iter()
                .filter(|s| self.preserves_vertex_figures(s))
                .collect()
        })
    }

    /// Symmetries mapping the facet set `mask` onto itself.
    pub fn setwise_stabiliser(&self, mask: u64) -> Vec<Symmetry> {
        self.symmetry_group()
            .iter()
            .filter(|s| {
                let mut img = 0u64;
                let mut bits = mask;
                while bits != 0 {
                    let f = bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    img |= 1 << s.apply(f);
                }
                img == mask
            })
            .cloned()
            .collect()
    }

    pub(crate) fn from_parts(
        name: &str,
        dimension: usize,
        adjacency: Vec<u64>,
        max_dual_dim: usize,
        ideal_vertices: Vec<VertexFigure>,
    ) -> Polytope {
        let m = adjacency.len();
        let mut edges = Vec::new();
        for a in 0..m {
            for b in a + 1..m {
                if adjacency[a] >> b & 1 == 1 {
                    edges.push([a, b]);
                }
            }
        }
        Polytope {
            name: name.into(),
            dimension,
            dual_k: FlagComplex::clique_complex(m, &edges, max_dual_dim),
            adjacency,
            ideal_vertices,
            symmetries: OnceLock::new(),
        }
    }
}

fn check_cube_figure(adjacency: &[u64], fig: &VertexFigure) -> Result<(), String> {
    let f = fig.facets();
    let m = adjacency.len();
    if f.iter().any(|&x| x >= m) {
        return Err("facet index out of range".into());
    }
    if (fig.mask().count_ones() as usize) != 6 {
        return Err("facets are not pairwise distinct".into());
    }
    for i in 0..6 {
        for j in i + 1..6 {
            let opposite = i / 2 == j / 2;
            let adj = adjacency[f[i]] >> f[j] & 1 == 1;
            if opposite && adj {
                return Err(format!("opposite facets {} and {} are adjacent", f[i], f[j]));
            }
            if !opposite && !adj {
                return Err(format!("facets {} and {} should be adjacent", f[i], f[j]));
            }
        }
    }
    Ok(())
}

/// The 3-cube with facets 0..6, opposite pairs {0,1}, {2,3}, {4,5}.
pub fn cube3() -> Arc<Polytope> {
    static CUBE: OnceLock<Arc<Polytope>> = OnceLock::new();
    CUBE.get_or_init(|| {
        let adjacency = (0..6)
            .map(|a| (0..6).filter(|&b| a / 2 != b / 2).fold(0u64, |acc, b| acc | 1 << b))
            .collect();
        Arc::new(Polytope::from_parts("cube3", 3, adjacency, 2, Vec::new()))
    })
    .clone()
}
