//! Counting DJ classes of orientable colourings without listing them.
//!
//! After a change of basis an orientable colouring of rank k takes values in
//! the affine hyperplane AG(k−1, 2), and two of them are DJ-equivalent exactly
//! when they differ by an affine map and a polytope symmetry. If no simplex of
//! the dual complex has more than three vertices, properness only asks that
//! adjacent facets receive distinct points, so the classes are the orbits of
//! AGL(k−1, 2) × Sym(P) on point colourings whose image spans the space.
//! Burnside's lemma counts them.
//!
//! The colourings fixed by (A, s) satisfy λ∘s = A∘λ. They are counted by a
//! frontier dynamic programme over the cycles of s whose states record each
//! colour only up to the centraliser of A: which A-orbit it lies in, numbered
//! by first appearance, and its offset inside that orbit. The spanning
//! condition is imposed by Möbius inversion over A-invariant affine subspaces.

use std::collections::{HashMap, HashSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::f2;
use crate::polytope::Polytope;

/// Largest rank handled; AGL(4, 2) has 322560 elements.
pub const MAX_RANK: usize = 5;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum CountError {
    #[error("rank {0} is outside 1..={MAX_RANK}")]
    Rank(usize),
    #[error("the dual complex has simplices with more than three vertices")]
    NotTriangular,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassCount {
    pub polytope: String,
    pub rank: usize,
    /// Proper colourings into AG(rank−1, 2) whose image spans it.
    pub colourings: u128,
    /// |AGL(rank−1, 2)| · |Sym(P)|.
    pub group_order: u128,
    /// Fixed colourings summed over the group.
    pub fixed_total: u128,
    pub classes: u128,
}

type Perm = Vec<u8>;

fn compose(p: &[u8], q: &[u8]) -> Perm {
    q.iter().map(|&x| p[x as usize]).collect()
}

fn invert(p: &[u8]) -> Perm {
    let mut out = vec![0u8; p.len()];
    for (i, &x) in p.iter().enumerate() {
        out[x as usize] = i as u8;
    }
    out
}

/// AGL(d, 2) as permutations of the points 0..2^d.
pub fn affine_group(d: usize) -> Vec<Vec<u8>> {
    let n = 1usize << d;
    let mut out = Vec::new();
    for code in 0..n.pow(d as u32) {
        let cols: Vec<u64> = (0..d).map(|j| (code / n.pow(j as u32) % n) as u64).collect();
        if f2::span_dim(&cols) != d {
            continue;
        }
        for b in 0..n as u64 {
            let perm = (0..n as u64)
                .map(|x| {
                    let mx = (0..d).filter(|&j| x >> j & 1 == 1).fold(0, |acc, j| acc ^ cols[j]);
                    (mx ^ b) as u8
                })
                .collect();
            out.push(perm);
        }
    }
    out
}

/// Transvections and one translation.
fn affine_generators(d: usize) -> Vec<Perm> {
    let n = 1u64 << d;
    let mut gens = Vec::new();
    for i in 0..d {
        for j in 0..d {
            if i != j {
                gens.push((0..n).map(|x| (x ^ ((x >> j & 1) << i)) as u8).collect());
            }
        }
    }
    if d > 0 {
        gens.push((0..n).map(|x| (x ^ 1) as u8).collect());
    }
    gens
}

/// Conjugacy class representatives and sizes, in order of first appearance.
fn conjugacy_classes(elements: &[Perm], generators: &[Perm]) -> Vec<(Perm, usize)> {
    let inverses: Vec<Perm> = generators.iter().map(|g| invert(g)).collect();
    let mut seen: HashSet<Perm> = HashSet::new();
    let mut out = Vec::new();
    for g in elements {
        if seen.contains(g) {
            continue;
        }
        let mut class = vec![g.clone()];
        seen.insert(g.clone());
        let mut i = 0;
        while i < class.len() {
            for (x, xi) in generators.iter().zip(&inverses) {
                let c = compose(&compose(x, &class[i]), xi);
                if seen.insert(c.clone()) {
                    class.push(c);
                }
            }
            i += 1;
        }
        out.push((g.clone(), class.len()));
    }
    out
}

/// Every affine subspace of AG(d, 2) as a mask over its points.
fn affine_subspaces(d: usize) -> Vec<u32> {
    let n = 1u32 << d;
    let mut linear: HashSet<u32> = HashSet::from([1u32]);
    let mut frontier = vec![1u32];
    while let Some(l) = frontier.pop() {
        for v in 0..n {
            if l >> v & 1 == 1 {
                continue;
            }
            let shifted = (0..n).filter(|&x| l >> x & 1 == 1).fold(0u32, |acc, x| acc | 1 << (x ^ v));
            let bigger = l | shifted;
            if linear.insert(bigger) {
                frontier.push(bigger);
            }
        }
    }
    let mut out: Vec<u32> = linear
        .iter()
        .flat_map(|&l| (0..n).map(move |b| (0..n).filter(|&x| l >> x & 1 == 1).fold(0u32, |acc, x| acc | 1 << (x ^ b))))
        .collect::<HashSet<u32>>()
        .into_iter()
        .collect();
    out.sort_by_key(|m| (m.count_ones(), *m));
    out
}

/// The facet graph folded along the cycles of a symmetry.
struct Quotient {
    cycle_len: Vec<usize>,
    /// (a, b, t): x_a ≠ A^t x_b.
    constraints: Vec<(usize, usize, i64)>,
    order: Vec<usize>,
    /// Step after which a variable leaves the frontier.
    last: Vec<usize>,
}

impl Quotient {
    fn new(adjacency: &[u64], s: &[usize]) -> Quotient {
        let m = s.len();
        let mut cycle_of = vec![(usize::MAX, 0usize); m];
        let mut cycle_len = Vec::new();
        for f in 0..m {
            if cycle_of[f].0 != usize::MAX {
                continue;
            }
            let c = cycle_len.len();
            let (mut x, mut i) = (f, 0);
            while cycle_of[x].0 == usize::MAX {
                cycle_of[x] = (c, i);
                x = s[x];
                i += 1;
            }
            cycle_len.push(i);
        }
        let mut constraints = Vec::new();
        for a in 0..m {
            for b in a + 1..m {
                if adjacency[a] >> b & 1 == 1 {
                    let ((ca, i), (cb, j)) = (cycle_of[a], cycle_of[b]);
                    constraints.push((ca, cb, j as i64 - i as i64));
                }
            }
        }
        constraints.sort_unstable();
        constraints.dedup();
        let nv = cycle_len.len();
        let mut adj = vec![0u64; nv];
        for &(a, b, _) in &constraints {
            if a != b {
                adj[a] |= 1 << b;
                adj[b] |= 1 << a;
            }
        }
        // greedy order keeping the frontier small
        let mut order = Vec::with_capacity(nv);
        let mut placed = 0u64;
        while order.len() < nv {
            let v = (0..nv)
                .filter(|&v| placed >> v & 1 == 0)
                .min_by_key(|&v| {
                    let p = placed | 1 << v;
                    let frontier = (0..nv).filter(|&u| p >> u & 1 == 1 && adj[u] & !p != 0).count();
                    (frontier, std::cmp::Reverse((adj[v] & placed).count_ones()), v)
                })
                .expect("unplaced variable");
            order.push(v);
            placed |= 1 << v;
        }
        let mut pos = vec![0; nv];
        for (i, &v) in order.iter().enumerate() {
            pos[v] = i;
        }
        let last = (0..nv)
            .map(|v| (0..nv).filter(|&u| adj[v] >> u & 1 == 1).map(|u| pos[u]).chain([pos[v]]).max().unwrap())
            .collect();
        Quotient { cycle_len, constraints, order, last }
    }

    /// Colourings with values in `points` (an A-invariant set) satisfying
    /// λ∘s = A∘λ and properness.
    fn count(&self, a: &[u8], points: u32) -> u128 {
        // A-orbits inside `points`, grouped by length
        let mut seen = 0u32;
        let mut by_len: Vec<(usize, usize)> = Vec::new();
        for x in 0..a.len() {
            if points >> x & 1 == 0 || seen >> x & 1 == 1 {
                continue;
            }
            let mut len = 0;
            let mut y = x;
            while seen >> y & 1 == 0 {
                seen |= 1 << y;
                y = a[y] as usize;
                len += 1;
            }
            match by_len.iter_mut().find(|(l, _)| *l == len) {
                Some(e) => e.1 += 1,
                None => by_len.push((len, 1)),
            }
        }
        by_len.sort_unstable();
        let lens: Vec<u8> = by_len.iter().map(|&(l, _)| l as u8).collect();
        let nv = self.cycle_len.len();
        let mut pos = vec![0; nv];
        for (i, &v) in self.order.iter().enumerate() {
            pos[v] = i;
        }
        // state: (length index, label, offset) per frontier variable
        let mut states: HashMap<Vec<u8>, u128> = HashMap::from([(Vec::new(), 1u128)]);
        let mut frontier: Vec<usize> = Vec::new();
        for (step, &v) in self.order.iter().enumerate() {
            let mut earlier: Vec<(usize, i64)> = Vec::new();
            let mut own: Vec<i64> = Vec::new();
            for &(x, y, t) in &self.constraints {
                if x == v && y == v {
                    own.push(t);
                } else if x == v && pos[y] < step {
                    earlier.push((y, t));
                } else if y == v && pos[x] < step {
                    earlier.push((x, -t));
                }
            }
            let slot: HashMap<usize, usize> = frontier.iter().enumerate().map(|(i, &u)| (u, i)).collect();
            let earlier: Vec<(usize, i64)> = earlier.into_iter().map(|(u, t)| (slot[&u], t)).collect();
            let mut next: HashMap<Vec<u8>, u128> = HashMap::new();
            for (state, &count) in &states {
                for (li, &(len, total)) in by_len.iter().enumerate() {
                    if !self.cycle_len[v].is_multiple_of(len) || own.iter().any(|t| t.rem_euclid(len as i64) == 0) {
                        continue;
                    }
                    let used = state.chunks(3).filter(|e| e[0] as usize == li).map(|e| e[1] + 1).max().unwrap_or(0);
                    for label in 0..used {
                        for off in 0..len as u8 {
                            let clash = earlier.iter().any(|&(i, t)| {
                                let e = &state[3 * i..3 * i + 3];
                                e[0] as usize == li
                                    && e[1] == label
                                    && (off as i64 - e[2] as i64 - t).rem_euclid(len as i64) == 0
                            });
                            if !clash {
                                let mut s = state.clone();
                                s.extend([li as u8, label, off]);
                                *next.entry(s).or_default() += count;
                            }
                        }
                    }
                    let fresh = total - used as usize;
                    if fresh > 0 {
                        let mut s = state.clone();
                        s.extend([li as u8, used, 0]);
                        *next.entry(s).or_default() += count * (fresh * len) as u128;
                    }
                }
            }
            frontier.push(v);
            let keep: Vec<usize> = (0..frontier.len()).filter(|&i| self.last[frontier[i]] > step).collect();
            frontier = keep.iter().map(|&i| frontier[i]).collect();
            states = HashMap::new();
            for (state, count) in next {
                *states.entry(canonical_state(&state, &keep, &lens)).or_default() += count;
            }
        }
        states.values().sum()
    }
}

/// Keeps the listed entries, renumbers orbits by first appearance and
/// measures offsets from the first entry in each orbit.
fn canonical_state(state: &[u8], keep: &[usize], lens: &[u8]) -> Vec<u8> {
    let mut seen: Vec<(u8, u8, u8, u8)> = Vec::new();
    let mut out = Vec::with_capacity(3 * keep.len());
    for &i in keep {
        let (li, label, off) = (state[3 * i], state[3 * i + 1], state[3 * i + 2]);
        let (new_label, base) = match seen.iter().find(|e| e.0 == li && e.1 == label) {
            Some(e) => (e.2, e.3),
            None => {
                let n = seen.iter().filter(|e| e.0 == li).count() as u8;
                seen.push((li, label, n, off));
                (n, off)
            }
        };
        let len = lens[li as usize];
        out.extend([li, new_label, (off + len - base) % len]);
    }
    out
}

/// Number of DJ classes of proper orientable colourings of rank `rank`.
pub fn count_orientable_classes(p: &Polytope, rank: usize) -> Result<ClassCount, CountError> {
    if rank == 0 || rank > MAX_RANK {
        return Err(CountError::Rank(rank));
    }
    if p.dual_k().max_dim() > 2 {
        return Err(CountError::NotTriangular);
    }
    let d = rank - 1;
    let full = ((1u64 << (1 << d)) - 1) as u32;
    let affine = affine_group(d);
    let affine_classes = conjugacy_classes(&affine, &affine_generators(d));
    let syms: Vec<Perm> = p.symmetry_group().iter().map(|s| s.0.iter().map(|&x| x as u8).collect()).collect();
    let sym_classes = conjugacy_classes(&syms, &syms);
    let subspaces = affine_subspaces(d);
    let adjacency: Vec<u64> = (0..p.m()).map(|f| p.neighbours(f)).collect();

    let pairs: Vec<(usize, usize)> =
        (0..sym_classes.len()).flat_map(|i| (0..affine_classes.len()).map(move |j| (i, j))).collect();
    let quotients: Vec<Quotient> = sym_classes
        .iter()
        .map(|(s, _)| Quotient::new(&adjacency, &s.iter().map(|&x| x as usize).collect::<Vec<_>>()))
        .collect();
    let terms: Vec<(usize, usize, u128)> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let a = &affine_classes[j].0;
            let fixed = spanning_fixed(&quotients[i], a, &subspaces, full);
            (i, j, fixed)
        })
        .collect();
    let mut fixed_total = 0u128;
    let mut colourings = 0u128;
    for (i, j, fixed) in terms {
        fixed_total += fixed * (sym_classes[i].1 * affine_classes[j].1) as u128;
        if is_identity(&sym_classes[i].0) && is_identity(&affine_classes[j].0) {
            colourings = fixed;
        }
    }
    let group_order = (affine.len() * syms.len()) as u128;
    assert_eq!(fixed_total % group_order, 0, "Burnside sum not divisible by the group order");
    Ok(ClassCount {
        polytope: p.name().to_string(),
        rank,
        colourings,
        group_order,
        fixed_total,
        classes: fixed_total / group_order,
    })
}

fn is_identity(p: &[u8]) -> bool {
    p.iter().enumerate().all(|(i, &x)| i == x as usize)
}

/// Fixed colourings of (A, s) whose image spans the whole space.
fn spanning_fixed(q: &Quotient, a: &[u8], subspaces: &[u32], full: u32) -> u128 {
    let image = |u: u32| (0..a.len()).filter(|&x| u >> x & 1 == 1).fold(0u32, |acc, x| acc | 1 << a[x]);
    let invariant: Vec<u32> = subspaces.iter().copied().filter(|&u| image(u) == u).collect();
    let mut exact: Vec<i128> = Vec::with_capacity(invariant.len());
    for (i, &u) in invariant.iter().enumerate() {
        let mut n = q.count(a, u) as i128;
        for (j, &w) in invariant[..i].iter().enumerate() {
            if w & !u == 0 {
                n -= exact[j];
            }
        }
        exact.push(n);
    }
    let top = invariant.iter().position(|&u| u == full).expect("the whole space is invariant");
    u128::try_from(exact[top]).expect("a count is nonnegative")
}
