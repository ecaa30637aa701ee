//! Flag (clique) complexes and their reduced rational homology.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

/// Clique complex of a graph, truncated at `max_dim`.
///
/// Simplices are sorted vertex lists; `simplices[d]` holds the d-simplices in
/// lexicographic order. Vertex labels are preserved by [`FlagComplex::induced`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlagComplex {
    n_vertices: usize,
    adjacency: Vec<u64>,
    max_dim: usize,
    simplices: Vec<Vec<Vec<usize>>>,
}

/// JSON form of a complex: the graph plus the dimension cap.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexSpec {
    pub vertices: usize,
    pub edges: Vec<[usize; 2]>,
    pub max_dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub support: Option<Vec<usize>>,
}

impl FlagComplex {
    /// Enumerates all cliques with at most `max_dim + 1` vertices.
    ///
    /// Panics on loops, out-of-range endpoints or more than 64 vertices.
    pub fn clique_complex(n_vertices: usize, edges: &[[usize; 2]], max_dim: usize) -> FlagComplex {
        assert!(n_vertices <= 64, "at most 64 vertices supported");
        let mut adjacency = vec![0u64; n_vertices];
        for &[a, b] in edges {
            assert!(a != b, "loop at vertex {a}");
            assert!(a < n_vertices && b < n_vertices, "edge ({a},{b}) out of range");
            adjacency[a] |= 1 << b;
            adjacency[b] |= 1 << a;
        }
        let all = if n_vertices == 64 { u64::MAX } else { (1u64 << n_vertices) - 1 };
        Self::build(n_vertices, adjacency, max_dim, all)
    }

    fn build(n_vertices: usize, adjacency: Vec<u64>, max_dim: usize, support: u64) -> FlagComplex {
        let mut simplices: Vec<Vec<Vec<usize>>> = Vec::new();
        let mut layer: Vec<(Vec<usize>, u64)> = (0..n_vertices)
            .filter(|&v| support >> v & 1 == 1)
            .map(|v| (vec![v], adjacency[v] & support & !((2u64 << v) - 1)))
            .collect();
        for _ in 0..=max_dim {
            if layer.is_empty() {
                break;
            }
            simplices.push(layer.iter().map(|(s, _)| s.clone()).collect());
            let mut next = Vec::new();
            for (s, cand) in &layer {
                let mut c = *cand;
                while c != 0 {
                    let v = c.trailing_zeros() as usize;
                    c &= c - 1;
                    let mut t = s.clone();
                    t.push(v);
                    next.push((t, cand & adjacency[v] & !((2u64 << v) - 1)));
                }
            }
            layer = next;
        }
        while simplices.len() <= max_dim {
            simplices.push(Vec::new());
        }
        FlagComplex { n_vertices, adjacency, max_dim, simplices }
    }

    pub fn from_spec(spec: &ComplexSpec) -> FlagComplex {
        let full = FlagComplex::clique_complex(spec.vertices, &spec.edges, spec.max_dim);
        match &spec.support {
            Some(s) => full.induced(s),
            None => full,
        }
    }

    pub fn to_spec(&self) -> ComplexSpec {
        let verts = self.vertices();
        let support = if verts.len() == self.n_vertices { None } else { Some(verts) };
        ComplexSpec {
            vertices: self.n_vertices,
            edges: self.all_graph_edges(),
            max_dim: self.max_dim,
            support,
        }
    }

    fn all_graph_edges(&self) -> Vec<[usize; 2]> {
        let mut out = Vec::new();
        for a in 0..self.n_vertices {
            let mut nb = self.adjacency[a] & !((2u64 << a) - 1);
            while nb != 0 {
                let b = nb.trailing_zeros() as usize;
                nb &= nb - 1;
                out.push([a, b]);
            }
        }
        out
    }

    /// Subcomplex of simplices whose vertices all lie in `support`.
    pub fn induced(&self, support: &[usize]) -> FlagComplex {
        let mask = support.iter().fold(0u64, |acc, &v| {
            assert!(v < self.n_vertices, "vertex {v} not in complex");
            acc | 1 << v
        });
        self.induced_mask(mask)
    }

    pub fn induced_mask(&self, mask: u64) -> FlagComplex {
        let present = self.vertex_mask();
        Self::build(self.n_vertices, self.adjacency.clone(), self.max_dim, mask & present)
    }

    fn vertex_mask(&self) -> u64 {
        self.simplices[0].iter().fold(0, |acc, s| acc | 1 << s[0])
    }

    /// Size of the label space (vertices of the ambient graph).
    pub fn label_count(&self) -> usize {
        self.n_vertices
    }

    pub fn vertices(&self) -> Vec<usize> {
        self.simplices[0].iter().map(|s| s[0]).collect()
    }

    pub fn max_dim(&self) -> usize {
        self.max_dim
    }

    pub fn is_empty(&self) -> bool {
        self.simplices[0].is_empty()
    }

    pub fn simplices(&self, dim: usize) -> &[Vec<usize>] {
        self.simplices.get(dim).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Simplex counts c₀, c₁, …, c_max_dim.
    pub fn counts(&self) -> Vec<usize> {
        self.simplices.iter().map(Vec::len).collect()
    }

    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.adjacency[a] >> b & 1 == 1
    }

    pub fn neighbours(&self, v: usize) -> u64 {
        self.adjacency[v] & self.vertex_mask()
    }

    /// Whether the underlying graph (restricted to present vertices) has a clique of `size` vertices.
    pub fn has_clique_of_size(&self, size: usize) -> bool {
        fn extend(adj: &[u64], cand: u64, need: usize) -> bool {
            if need == 0 {
                return true;
            }
            if (cand.count_ones() as usize) < need {
                return false;
            }
            let mut c = cand;
            while c != 0 {
                let v = c.trailing_zeros() as usize;
                c &= c - 1;
                if extend(adj, c & adj[v], need - 1) {
                    return true;
                }
            }
            false
        }
        extend(&self.adjacency, self.vertex_mask(), size)
    }

    /// Signed boundary ∂_d : C_d → C_{d-1} as a dense integer matrix
    /// (rows = (d−1)-simplices, columns = d-simplices). Requires d ≥ 1.
    pub fn boundary(&self, d: usize) -> Vec<Vec<i64>> {
        assert!(d >= 1);
        let faces = self.simplices(d - 1);
        let index: HashMap<&[usize], usize> =
            faces.iter().enumerate().map(|(i, s)| (s.as_slice(), i)).collect();
        let cells = self.simplices(d);
        let mut m = vec![vec![0i64; cells.len()]; faces.len()];
        for (j, s) in cells.iter().enumerate() {
            for skip in 0..s.len() {
                let face: Vec<usize> =
                    s.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &v)| v).collect();
                let row = index[face.as_slice()];
                m[row][j] = if skip % 2 == 0 { 1 } else { -1 };
            }
        }
        m
    }

    /// Checks ∂_{d}∘∂_{d+1} = 0 for every available d ≥ 1.
    pub fn boundary_squared_vanishes(&self) -> bool {
        (1..self.max_dim).all(|d| {
            let a = self.boundary(d);
            let b = self.boundary(d + 1);
            let inner = b.len();
            a.iter().all(|row| {
                (0..b.first().map_or(0, Vec::len)).all(|j| {
                    (0..inner).map(|k| row[k] * b[k][j]).sum::<i64>() == 0
                })
            })
        })
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.counts()
            .iter()
            .enumerate()
            .map(|(i, &c)| if i % 2 == 0 { c as i64 } else { -(c as i64) })
            .sum()
    }

    /// Reduced Betti numbers over ℚ from the augmented chain complex.
    pub fn reduced_betti(&self) -> BettiVector {
        let counts = self.counts();
        // ranks[d] = rank ∂_d for d = 0..=max_dim; ∂_0 is the augmentation.
        let mut ranks = vec![0usize; self.max_dim + 2];
        ranks[0] = usize::from(counts[0] > 0);
        for d in 1..=self.max_dim {
            ranks[d] = rational_rank(&self.boundary(d));
        }
        let mut reduced = Vec::with_capacity(self.max_dim + 2);
        reduced.push(1 - ranks[0]);
        for d in 0..=self.max_dim {
            reduced.push(counts[d] - ranks[d] - ranks[d + 1]);
        }
        BettiVector { reduced }
    }
}

/// Reduced Betti numbers `[β̃₋₁, β̃₀, β̃₁, …]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BettiVector {
    pub reduced: Vec<usize>,
}

impl BettiVector {
    /// β̃ in degree `i` (i ≥ −1); zero beyond the stored range.
    pub fn get(&self, i: isize) -> usize {
        usize::try_from(i + 1).ok().and_then(|k| self.reduced.get(k).copied()).unwrap_or(0)
    }

    /// Unreduced Betti numbers β₀, β₁, …
    pub fn unreduced(&self) -> Vec<usize> {
        let mut out: Vec<usize> = self.reduced[1..].to_vec();
        if self.reduced[0] == 0 {
            out[0] += 1;
        }
        out
    }
}

/// Rank over ℚ by fraction-free elimination; rows are divided by their content
/// after every step, so entries stay small and all arithmetic is exact.
pub fn rational_rank(matrix: &[Vec<i64>]) -> usize {
    let mut rows: Vec<Vec<BigInt>> = matrix
        .iter()
        .filter(|r| r.iter().any(|&x| x != 0))
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let ncols = matrix.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..ncols {
        if rank == rows.len() {
            break;
        }
        // prefer a unit pivot
        let pick = (rank..rows.len())
            .filter(|&i| !rows[i][c].is_zero())
            .min_by_key(|&i| rows[i][c].abs());
        let Some(p) = pick else { continue };
        rows.swap(rank, p);
        let (head, tail) = rows.split_at_mut(rank + 1);
        let pivot_row = &head[rank];
        let pivot = pivot_row[c].clone();
        for row in tail.iter_mut() {
            if row[c].is_zero() {
                continue;
            }
            let factor = row[c].clone();
            for j in c..ncols {
                row[j] = &row[j] * &pivot - &factor * &pivot_row[j];
            }
            normalise(row);
        }
        rank += 1;
    }
    rank
}

fn normalise(row: &mut [BigInt]) {
    let mut g = BigInt::zero();
    for x in row.iter() {
        if !x.is_zero() {
            g = num_integer_gcd(&g, x);
            if g.is_one() {
                return;
            }
        }
    }
    if !g.is_zero() && !g.is_one() {
        for x in row.iter_mut() {
            *x = &*x / &g;
        }
    }
}

fn num_integer_gcd(a: &BigInt, b: &BigInt) -> BigInt {
    let (mut x, mut y) = (a.abs(), b.abs());
    while !y.is_zero() {
        let r = &x % &y;
        x = y;
        y = r;
    }
    x
}
