//! The Hurwitz unit quaternions and the matching model of the 24-cell inside
//! GL(4,𝔽₂).
//!
//! Vertices of the 24-cell are the 24 unit Hurwitz quaternions; two vertices
//! are adjacent when `Re(p q⁻¹) = ½`. The homomorphism ψ carries the group
//! onto 24 invertible 4×4 matrices over 𝔽₂, and adjacency becomes "`M N⁻¹` has
//! order 6". Because the 24-cell is self-dual, colouring its facets is the same
//! as colouring these 24 vertices, so the matrices double as facet labels.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::colouring::{Colouring, ColouringError};
use crate::f2::F2Matrix;
use crate::polytope::{Polytope, PolytopeError, Symmetry, VertexFigure};

/// A unit quaternion with integral or half-integral coordinates, stored doubled.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct HurwitzElement {
    doubled: [i8; 4],
}

impl HurwitzElement {
    /// `doubled` holds (2a, 2b, 2c, 2d) for a + bi + cj + dk. Returns `None`
    /// unless the element is a unit Hurwitz quaternion.
    pub fn new(doubled: [i8; 4]) -> Option<Self> {
        let norm4: i32 = doubled.iter().map(|&x| i32::from(x) * i32::from(x)).sum();
        let all_even = doubled.iter().all(|x| x % 2 == 0);
        let all_odd = doubled.iter().all(|x| x % 2 != 0);
        (norm4 == 4 && (all_even || all_odd)).then_some(HurwitzElement { doubled })
    }

    pub fn one() -> Self {
        HurwitzElement { doubled: [2, 0, 0, 0] }
    }

    pub fn minus_one() -> Self {
        HurwitzElement { doubled: [-2, 0, 0, 0] }
    }

    /// s = ½(1 + i + j + k)
    pub fn s() -> Self {
        HurwitzElement { doubled: [1, 1, 1, 1] }
    }

    /// t = ½(1 + i + j − k)
    pub fn t() -> Self {
        HurwitzElement { doubled: [1, 1, 1, -1] }
    }

    pub fn doubled(&self) -> [i8; 4] {
        self.doubled
    }

    /// Twice the real part.
    pub fn real_doubled(&self) -> i8 {
        self.doubled[0]
    }

    pub fn mul(&self, rhs: &HurwitzElement) -> HurwitzElement {
        let [a1, b1, c1, d1] = self.doubled.map(i32::from);
        let [a2, b2, c2, d2] = rhs.doubled.map(i32::from);
        let prod = [
            a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
            a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
            a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
            a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
        ];
        // (2p)(2q) = 4pq, so halve once to get 2pq
        let doubled = prod.map(|x| {
            debug_assert_eq!(x % 2, 0);
            (x / 2) as i8
        });
        HurwitzElement::new(doubled).expect("Hurwitz units are closed under multiplication")
    }

    /// Inverse of a unit quaternion is its conjugate.
    pub fn inverse(&self) -> HurwitzElement {
        let [a, b, c, d] = self.doubled;
        HurwitzElement { doubled: [a, -b, -c, -d] }
    }

    pub fn order(&self) -> usize {
        let mut x = *self;
        let mut n = 1;
        while x != Self::one() {
            x = x.mul(self);
            n += 1;
        }
        n
    }

    pub fn pow(&self, e: usize) -> HurwitzElement {
        (0..e).fold(Self::one(), |acc, _| acc.mul(self))
    }

    /// All 24 unit Hurwitz quaternions, sorted.
    pub fn all() -> Vec<HurwitzElement> {
        let mut out = Vec::with_capacity(24);
        let range = [-2i8, -1, 0, 1, 2];
        for a in range {
            for b in range {
                for c in range {
                    for d in range {
                        if let Some(q) = HurwitzElement::new([a, b, c, d]) {
                            out.push(q);
                        }
                    }
                }
            }
        }
        out
    }
}

impl fmt::Display for HurwitzElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .doubled
            .iter()
            .map(|&x| if x % 2 == 0 { format!("{}", x / 2) } else { format!("{x}/2") })
            .collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// The Hurwitz group with its multiplication table.
#[derive(Clone, Debug)]
pub struct HurwitzGroup {
    elements: Vec<HurwitzElement>,
    index: HashMap<HurwitzElement, usize>,
    table: Vec<Vec<usize>>,
}

impl HurwitzGroup {
    pub fn new() -> Self {
        let elements = HurwitzElement::all();
        let index: HashMap<_, _> = elements.iter().enumerate().map(|(i, &q)| (q, i)).collect();
        let table = elements
            .iter()
            .map(|p| elements.iter().map(|q| index[&p.mul(q)]).collect())
            .collect();
        HurwitzGroup { elements, index, table }
    }

    pub fn elements(&self) -> &[HurwitzElement] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn index_of(&self, q: &HurwitzElement) -> usize {
        self.index[q]
    }

    /// Index of `elements[a] · elements[b]`.
    pub fn product(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.index[&self.elements[a].inverse()]
    }

    /// (st)² = s³ = t³, and the common value is −1.
    pub fn presentation_holds(&self) -> bool {
        let (s, t) = (HurwitzElement::s(), HurwitzElement::t());
        let st = s.mul(&t);
        let z = st.pow(2);
        z == s.pow(3) && z == t.pow(3) && z == HurwitzElement::minus_one()
    }

    /// Whether s and t generate all 24 elements.
    pub fn generated_by_s_t(&self) -> bool {
        let gens = [self.index_of(&HurwitzElement::s()), self.index_of(&HurwitzElement::t())];
        let mut seen = vec![false; self.len()];
        let mut stack = vec![self.index_of(&HurwitzElement::one())];
        seen[stack[0]] = true;
        while let Some(x) = stack.pop() {
            for &g in &gens {
                let y = self.product(x, g);
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        seen.iter().all(|&b| b)
    }

    /// Quaternion adjacency: `Re(p q⁻¹) = ½`.
    pub fn adjacent(&self, p: usize, q: usize) -> bool {
        self.elements[self.product(p, self.inverse(q))].real_doubled() == 1
    }
}

impl Default for HurwitzGroup {
    fn default() -> Self {
        Self::new()
    }
}

/// Image of s under ψ.
pub const PSI_S: [&str; 4] = ["0011", "0101", "1101", "0100"];
/// Image of t under ψ.
pub const PSI_T: [&str; 4] = ["1100", "0001", "1000", "1010"];
/// ψ(−1). The pair (M, M) generates the kernel of the H × H action.
pub const CENTRAL_M: [&str; 4] = ["0111", "0100", "1101", "0001"];
/// Order-3 element acting on the right and fixing every colour.
pub const RIGHT_S: [&str; 4] = ["1100", "0101", "0010", "0100"];

/// The 24 vertex matrices; the first six form the octahedron O with antipodal
/// pairs (0,1), (2,3), (4,5).
pub const VERTEX_TABLE: [[&str; 4]; 24] = [
    ["1000", "0100", "0010", "0001"],
    ["1001", "0100", "1100", "1110"],
    ["0010", "1010", "0011", "0100"],
    ["0111", "0101", "0110", "1011"],
    ["0110", "0001", "1101", "0101"],
    ["1101", "1110", "1001", "0101"],
    ["0111", "0100", "1101", "0001"],
    ["0011", "1011", "1001", "1110"],
    ["0110", "0100", "0011", "1110"],
    ["0010", "1011", "0111", "0001"],
    ["1100", "1011", "0110", "1110"],
    ["1101", "1011", "1000", "0001"],
    ["1001", "1010", "0111", "1011"],
    ["1100", "0001", "1000", "1010"],
    ["0011", "0101", "1101", "0100"],
    ["0111", "1110", "1100", "1010"],
    ["1100", "0101", "0010", "0100"],
    ["1000", "1110", "0011", "1010"],
    ["1101", "1010", "1100", "0100"],
    ["0010", "1110", "0110", "0101"],
    ["1000", "0101", "1001", "1011"],
    ["1001", "0001", "0010", "0101"],
    ["0110", "1010", "1000", "1011"],
    ["0011", "0001", "0111", "1010"],
];

pub fn matrix(rows: &[&str; 4]) -> F2Matrix {
    F2Matrix::from_strings(rows).expect("static matrix data is well formed")
}

pub fn vertex_table() -> Vec<F2Matrix> {
    VERTEX_TABLE.iter().map(matrix).collect()
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum PsiError {
    #[error("generator images violate (st)^2 = s^3 = t^3")]
    Relations,
    #[error("word images disagree: psi({a}) psi({b}) != psi({a}{b})")]
    Inconsistent { a: String, b: String },
    #[error("psi is not injective")]
    NotInjective,
}

/// ψ : 𝔥 → GL(4,𝔽₂), indexed like [`HurwitzGroup::elements`].
#[derive(Clone, Debug)]
pub struct Psi {
    images: Vec<F2Matrix>,
    preimage: HashMap<F2Matrix, usize>,
}

impl Psi {
    /// Extends generator images along words in s and t, then checks the result
    /// on the whole multiplication table.
    pub fn from_generators(group: &HurwitzGroup, s_img: &F2Matrix, t_img: &F2Matrix) -> Result<Psi, PsiError> {
        let st = s_img.mul(t_img);
        let z = st.mul(&st);
        if z != s_img.pow(3) || z != t_img.pow(3) {
            return Err(PsiError::Relations);
        }
        let gens = [
            (group.index_of(&HurwitzElement::s()), s_img),
            (group.index_of(&HurwitzElement::t()), t_img),
        ];
        let mut images: Vec<Option<F2Matrix>> = vec![None; group.len()];
        let one = group.index_of(&HurwitzElement::one());
        images[one] = Some(F2Matrix::identity(4));
        let mut queue = vec![one];
        let mut head = 0;
        while head < queue.len() {
            let x = queue[head];
            head += 1;
            for &(g, img) in &gens {
                let y = group.product(x, g);
                if images[y].is_none() {
                    images[y] = Some(images[x].as_ref().unwrap().mul(img));
                    queue.push(y);
                }
            }
        }
        let images: Vec<F2Matrix> = images.into_iter().map(|m| m.expect("s and t generate")).collect();
        for a in 0..group.len() {
            for b in 0..group.len() {
                if images[a].mul(&images[b]) != images[group.product(a, b)] {
                    return Err(PsiError::Inconsistent {
                        a: group.elements()[a].to_string(),
                        b: group.elements()[b].to_string(),
                    });
                }
            }
        }
        let preimage: HashMap<F2Matrix, usize> =
            images.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
        if preimage.len() != images.len() {
            return Err(PsiError::NotInjective);
        }
        Ok(Psi { images, preimage })
    }

    /// ψ built from the standard generator images.
    pub fn standard(group: &HurwitzGroup) -> Result<Psi, PsiError> {
        Self::from_generators(group, &matrix(&PSI_S), &matrix(&PSI_T))
    }

    pub fn image(&self, q: usize) -> &F2Matrix {
        &self.images[q]
    }

    pub fn images(&self) -> &[F2Matrix] {
        &self.images
    }

    pub fn preimage(&self, m: &F2Matrix) -> Option<usize> {
        self.preimage.get(m).copied()
    }
}

/// Outcome of comparing quaternion adjacency with matrix adjacency.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransportCheck {
    pub pairs_checked: usize,
    pub mismatches: usize,
    /// Table entries that are not images of ψ.
    pub missing: Vec<usize>,
}

impl TransportCheck {
    pub fn passed(&self) -> bool {
        self.missing.is_empty() && self.mismatches == 0 && self.pairs_checked == 276
    }
}

/// For every pair of table entries, `Re(p q⁻¹) = ½` ⇔ `ord(ψ(p) ψ(q)⁻¹) = 6`.
pub fn adjacency_transport(group: &HurwitzGroup, psi: &Psi, table: &[F2Matrix]) -> TransportCheck {
    let pre: Vec<Option<usize>> = table.iter().map(|m| psi.preimage(m)).collect();
    let missing: Vec<usize> = pre.iter().enumerate().filter(|(_, p)| p.is_none()).map(|(i, _)| i).collect();
    let mut pairs_checked = 0;
    let mut mismatches = 0;
    if missing.is_empty() {
        for a in 0..table.len() {
            for b in a + 1..table.len() {
                pairs_checked += 1;
                let quaternion = group.adjacent(pre[a].unwrap(), pre[b].unwrap());
                let matrix = matrix_adjacent(&table[a], &table[b]);
                if quaternion != matrix {
                    mismatches += 1;
                }
            }
        }
    }
    TransportCheck { pairs_checked, mismatches, missing }
}

fn matrix_adjacent(a: &F2Matrix, b: &F2Matrix) -> bool {
    b.inverse().and_then(|inv| a.mul(&inv).order()) == Some(6)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdmissibleStructure {
    pub order: usize,
    /// The group is exactly {L_h ∘ R_{S^j}}, with 72 distinct products and L, R commuting.
    pub is_h_times_c3: bool,
    pub phi_is_h_on_left: bool,
    pub phi_trivial_on_right: bool,
    pub closed_homomorphism: bool,
}

impl AdmissibleStructure {
    pub fn holds(&self) -> bool {
        self.order == 72
            && self.is_h_times_c3
            && self.phi_is_h_on_left
            && self.phi_trivial_on_right
            && self.closed_homomorphism
    }
}

/// The ideal right-angled 24-cell in its GL(4,𝔽₂) vertex model.
#[derive(Debug)]
pub struct TwentyFourCell {
    polytope: Arc<Polytope>,
    matrices: Vec<F2Matrix>,
    facet_of: HashMap<F2Matrix, usize>,
    orbit_octahedra: Vec<VertexFigure>,
    searched_octahedra: Vec<VertexFigure>,
}

impl TwentyFourCell {
    /// The model built from the built-in vertex table, shared.
    pub fn shared() -> &'static TwentyFourCell {
        static CELL: OnceLock<TwentyFourCell> = OnceLock::new();
        CELL.get_or_init(|| TwentyFourCell::from_table(vertex_table()).expect("built-in table is consistent"))
    }

    /// Builds the model from 24 matrices whose first six form the octahedron O
    /// (antipodal pairs (0,1), (2,3), (4,5)).
    pub fn from_table(matrices: Vec<F2Matrix>) -> Result<TwentyFourCell, PolytopeError> {
        let err = |msg: String| PolytopeError::Model(msg);
        if matrices.len() != 24 {
            return Err(err(format!("expected 24 matrices, got {}", matrices.len())));
        }
        let mut facet_of = HashMap::new();
        for (i, m) in matrices.iter().enumerate() {
            if m.nrows() != 4 || m.ncols() != 4 || !m.is_invertible() {
                return Err(err(format!("entry {i} is not an invertible 4x4 matrix")));
            }
            if facet_of.insert(m.clone(), i).is_some() {
                return Err(err(format!("entry {i} is repeated")));
            }
        }
        let adjacency: Vec<u64> = (0..24)
            .map(|a| {
                (0..24)
                    .filter(|&b| a != b && matrix_adjacent(&matrices[a], &matrices[b]))
                    .fold(0u64, |acc, b| acc | 1 << b)
            })
            .collect();
        if let Some(a) = adjacency.iter().position(|n| n.count_ones() != 8) {
            return Err(err(format!("vertex {a} has {} neighbours, expected 8", adjacency[a].count_ones())));
        }

        // octahedra as the left orbit of O
        let mut orbit = BTreeSet::new();
        for h in &matrices {
            let mut facets = [0usize; 6];
            for (slot, v) in matrices[..6].iter().enumerate() {
                let hv = h.mul(v);
                facets[slot] = *facet_of
                    .get(&hv)
                    .ok_or_else(|| err(format!("left translate of O leaves the table (entry {slot})")))?;
            }
            orbit.insert(VertexFigure::new(facets));
        }
        let orbit_octahedra: Vec<VertexFigure> = orbit.into_iter().collect();
        let searched_octahedra = induced_octahedra(&adjacency);
        if orbit_octahedra != searched_octahedra {
            return Err(err(format!(
                "octahedra disagree: {} from the orbit of O, {} from induced-subgraph search",
                orbit_octahedra.len(),
                searched_octahedra.len()
            )));
        }
        if orbit_octahedra.len() != 24 {
            return Err(err(format!("found {} octahedra, expected 24", orbit_octahedra.len())));
        }
        let polytope = Polytope::from_parts("24cell", 4, adjacency, 2, orbit_octahedra.clone());
        Ok(TwentyFourCell {
            polytope: Arc::new(polytope),
            matrices,
            facet_of,
            orbit_octahedra,
            searched_octahedra,
        })
    }

    pub fn polytope(&self) -> &Arc<Polytope> {
        &self.polytope
    }

    pub fn matrices(&self) -> &[F2Matrix] {
        &self.matrices
    }

    pub fn facet_of(&self, m: &F2Matrix) -> Option<usize> {
        self.facet_of.get(m).copied()
    }

    pub fn orbit_octahedra(&self) -> &[VertexFigure] {
        &self.orbit_octahedra
    }

    pub fn searched_octahedra(&self) -> &[VertexFigure] {
        &self.searched_octahedra
    }

    /// P ↦ h·P. `None` if `h` is not in the group.
    pub fn left_action(&self, h: &F2Matrix) -> Option<Symmetry> {
        self.matrices.iter().map(|p| self.facet_of(&h.mul(p))).collect::<Option<Vec<_>>>().map(Symmetry)
    }

    /// P ↦ P·s. `None` if `s` is not in the group.
    pub fn right_action(&self, s: &F2Matrix) -> Option<Symmetry> {
        self.matrices.iter().map(|p| self.facet_of(&p.mul(s))).collect::<Option<Vec<_>>>().map(Symmetry)
    }

    /// λ(P) = P·e₁, i.e. the first column of each vertex matrix.
    pub fn hantzsche_wendt_colouring(&self) -> Colouring {
        let colours = self.matrices.iter().map(|p| p.mul_vec(1)).collect();
        Colouring::new(self.polytope.clone(), 4, colours).expect("first columns of invertible matrices are nonzero")
    }

    /// Compares the admissible group of `c` with {L_h ∘ R_{S^j}}, where L is
    /// the left action of the vertex group and R the right action of `RIGHT_S`.
    pub fn admissible_structure(&self, c: &Colouring) -> Result<AdmissibleStructure, ColouringError> {
        let adm = c.admissible_group()?;
        let s = matrix(&RIGHT_S);
        let rights: Vec<Symmetry> = (0..3)
            .map(|j| self.right_action(&s.pow(j)).expect("S lies in the vertex group"))
            .collect();
        let lefts: Vec<(&F2Matrix, Symmetry)> =
            self.matrices.iter().map(|h| (h, self.left_action(h).expect("closed under products"))).collect();
        let mut products = BTreeSet::new();
        let mut commute = true;
        for (_, l) in &lefts {
            for r in &rights {
                commute &= l.compose(r) == r.compose(l);
                products.insert(l.compose(r).0);
            }
        }
        let adm_set: BTreeSet<Vec<usize>> = adm.elements.iter().map(|e| e.symmetry.0.clone()).collect();
        let identity = F2Matrix::identity(c.k());
        Ok(AdmissibleStructure {
            order: adm.order(),
            is_h_times_c3: commute && products.len() == 72 && adm_set == products,
            phi_is_h_on_left: lefts.iter().all(|(h, l)| adm.find(l).is_some_and(|e| &e.phi == *h)),
            phi_trivial_on_right: rights.iter().all(|r| adm.find(r).is_some_and(|e| e.phi == identity)),
            closed_homomorphism: adm.is_closed_homomorphism(),
        })
    }
}

/// Exhaustive search for 6-vertex induced subgraphs isomorphic to K_{2,2,2}.
pub fn induced_octahedra(adjacency: &[u64]) -> Vec<VertexFigure> {
    let n = adjacency.len();
    let mut out = Vec::new();
    let mut chosen = Vec::with_capacity(6);
    fn rec(adjacency: &[u64], n: usize, start: usize, chosen: &mut Vec<usize>, out: &mut Vec<VertexFigure>) {
        if chosen.len() == 6 {
            let mask = chosen.iter().fold(0u64, |acc, &v| acc | 1 << v);
            let octahedral = chosen.iter().all(|&v| (adjacency[v] & mask).count_ones() == 4);
            if octahedral {
                let mut pairs = Vec::new();
                for (i, &a) in chosen.iter().enumerate() {
                    for &b in &chosen[i + 1..] {
                        if adjacency[a] >> b & 1 == 0 {
                            pairs.push((a, b));
                        }
                    }
                }
                out.push(VertexFigure::new([
                    pairs[0].0, pairs[0].1, pairs[1].0, pairs[1].1, pairs[2].0, pairs[2].1,
                ]));
            }
            return;
        }
        for v in start..n {
            chosen.push(v);
            // inside an octahedron each vertex misses exactly one other vertex
            let mask = chosen.iter().fold(0u64, |acc, &c| acc | 1 << c);
            let ok = chosen.iter().all(|&c| (mask & !adjacency[c] & !(1u64 << c)).count_ones() <= 1);
            if ok {
                rec(adjacency, n, v + 1, chosen, out);
            }
            chosen.pop();
        }
    }
    rec(adjacency, n, 0, &mut chosen, &mut out);
    out.sort();
    out
}
