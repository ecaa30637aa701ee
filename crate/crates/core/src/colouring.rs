//! 𝔽₂-colourings of right-angled polytopes.
//!
//! A colouring assigns a nonzero vector of 𝔽₂^k to every facet. Column `i` of
//! the defining matrix is the colour of facet `i`.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::f2::{self, bits_to_string, F2Matrix, TrackedBasis};
use crate::polytope::{cube3, Polytope, PolytopeError, PolytopeSpec, Symmetry, VertexFigure};
use crate::toric::{betti_numbers, BettiProfile};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ColouringError {
    #[error("colour dimension k = {0} is outside 1..=64")]
    Width(usize),
    #[error("expected {expected} colours (one per facet), got {got}")]
    FacetCount { expected: usize, got: usize },
    #[error("facet {0} has the zero colour")]
    ZeroColour(usize),
    #[error("colour of facet {facet} does not fit in {k} bits")]
    ColourTooWide { facet: usize, k: usize },
    #[error("column {index}: {msg}")]
    BadColumn { index: usize, msg: String },
    #[error("colouring is not proper: simplex {0:?} has dependent colours")]
    NotProper(Vec<usize>),
    #[error("colouring is not orientable")]
    NotOrientable,
    #[error("polytope {0:?} is not a labelled 3-cube")]
    NotCube(String),
    #[error("colouring is not surjective (rank {rank} < k = {k})")]
    NotSurjective { rank: usize, k: usize },
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
}

/// Orientable closed flat 3-manifolds that arise from proper cube colourings.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FlatClass {
    /// The 3-torus.
    #[serde(rename = "F1_torus")]
    F1Torus,
    /// The half-twist manifold.
    #[serde(rename = "F2_half_twist")]
    F2HalfTwist,
    /// The Hantzsche–Wendt manifold.
    #[serde(rename = "F6_hantzsche_wendt")]
    F6HantzscheWendt,
}

impl FlatClass {
    pub fn label(&self) -> &'static str {
        match self {
            FlatClass::F1Torus => "F1_torus",
            FlatClass::F2HalfTwist => "F2_half_twist",
            FlatClass::F6HantzscheWendt => "F6_hantzsche_wendt",
        }
    }

    /// First Betti number of the manifold.
    pub fn first_betti(&self) -> usize {
        match self {
            FlatClass::F1Torus => 3,
            FlatClass::F2HalfTwist => 1,
            FlatClass::F6HantzscheWendt => 0,
        }
    }
}

impl fmt::Display for FlatClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for FlatClass {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "f1" | "f1_torus" => Ok(FlatClass::F1Torus),
            "f2" | "f2_half_twist" => Ok(FlatClass::F2HalfTwist),
            "f6" | "f6_hantzsche_wendt" => Ok(FlatClass::F6HantzscheWendt),
            other => Err(format!("unknown flat class {other:?} (expected F1, F2 or F6)")),
        }
    }
}

/// T-set of a cube with the given opposite pairs, as vectors in 𝔽₂^m.
pub fn t_set(pairs: &[(usize, usize); 3]) -> [u64; 3] {
    pairs.map(|(a, b)| (1u64 << a) | (1u64 << b))
}

/// Flat class from the number of T-set vectors lying in the row space.
///
/// Panics on 2, which orientability rules out.
pub fn flat_class_from_hits(hits: usize) -> FlatClass {
    match hits {
        3 => FlatClass::F1Torus,
        1 => FlatClass::F2HalfTwist,
        0 => FlatClass::F6HantzscheWendt,
        n => panic!("row space meets the T-set in {n} vectors; impossible for an orientable colouring"),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CuspRecord {
    pub figure: usize,
    /// Dimension of the span of the six colours around the vertex.
    pub span_dim: usize,
    /// Number of cusps of the cover lying over this vertex, 2^(k − span_dim).
    pub copies: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CuspCensus {
    pub per_vertex: Vec<CuspRecord>,
    pub total: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DjInvariants {
    /// Opposite facet pairs whose colours are linearly independent.
    pub independent_pairs: usize,
    /// Whether Λ·ε = 0.
    pub eps_image_zero: bool,
}

/// An admissible symmetry together with its linear realisation φ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdmissibleSymmetry {
    pub symmetry: Symmetry,
    pub phi: F2Matrix,
}

#[derive(Clone, Debug)]
pub struct AdmissibleGroup {
    pub elements: Vec<AdmissibleSymmetry>,
}

impl AdmissibleGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn find(&self, s: &Symmetry) -> Option<&AdmissibleSymmetry> {
        self.elements.iter().find(|e| &e.symmetry == s)
    }

    /// Closure under composition and φ(a∘b) = φ(a)φ(b) on every pair.
    pub fn is_closed_homomorphism(&self) -> bool {
        self.elements.iter().all(|a| {
            self.elements.iter().all(|b| {
                let c = a.symmetry.compose(&b.symmetry);
                self.find(&c).is_some_and(|e| e.phi == a.phi.mul(&b.phi))
            })
        })
    }
}

#[derive(Clone, Debug)]
pub struct Colouring {
    polytope: Arc<Polytope>,
    k: usize,
    colours: Vec<u64>,
}

impl Colouring {
    pub fn new(polytope: Arc<Polytope>, k: usize, colours: Vec<u64>) -> Result<Colouring, ColouringError> {
        if k == 0 || k > f2::MAX_BITS {
            return Err(ColouringError::Width(k));
        }
        if colours.len() != polytope.m() {
            return Err(ColouringError::FacetCount { expected: polytope.m(), got: colours.len() });
        }
        for (facet, &c) in colours.iter().enumerate() {
            if c == 0 {
                return Err(ColouringError::ZeroColour(facet));
            }
            if k < 64 && c >> k != 0 {
                return Err(ColouringError::ColourTooWide { facet, k });
            }
        }
        Ok(Colouring { polytope, k, colours })
    }

    /// Colouring whose defining matrix (in facet order) is `matrix`.
    pub fn from_matrix(polytope: Arc<Polytope>, matrix: &F2Matrix) -> Result<Colouring, ColouringError> {
        Colouring::new(polytope, matrix.nrows(), matrix.columns())
    }

    pub fn polytope(&self) -> &Arc<Polytope> {
        &self.polytope
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn colours(&self) -> &[u64] {
        &self.colours
    }

    pub fn colour(&self, facet: usize) -> u64 {
        self.colours[facet]
    }

    pub fn column_strings(&self) -> Vec<String> {
        self.colours.iter().map(|&c| bits_to_string(c, self.k)).collect()
    }

    /// k×m matrix with column i the colour of facet i.
    pub fn defining_matrix(&self) -> F2Matrix {
        F2Matrix::from_columns(&self.colours, self.k)
    }

    /// Defining matrix with columns taken in `order`.
    pub fn defining_matrix_in(&self, order: &[usize]) -> F2Matrix {
        let cols: Vec<u64> = order.iter().map(|&f| self.colours[f]).collect();
        F2Matrix::from_columns(&cols, self.k)
    }

    pub fn rank(&self) -> usize {
        f2::span_dim(&self.colours)
    }

    pub fn is_surjective(&self) -> bool {
        self.rank() == self.k
    }

    /// First simplex of the dual complex whose colours are dependent, if any.
    pub fn properness_violation(&self) -> Option<Vec<usize>> {
        let k = self.polytope.dual_k();
        for d in 1..=k.max_dim() {
            for s in k.simplices(d) {
                let cols: Vec<u64> = s.iter().map(|&f| self.colours[f]).collect();
                if !f2::independent(&cols) {
                    return Some(s.clone());
                }
            }
        }
        None
    }

    pub fn is_proper(&self) -> bool {
        self.properness_violation().is_none()
    }

    /// ε = (1,…,1) lies in the row space of the defining matrix.
    pub fn is_orientable(&self) -> bool {
        self.defining_matrix().row_space().contains_all_ones()
    }

    /// `m ∘ λ ∘ s`: facet f receives m·λ(s(f)).
    pub fn transform(&self, m: &F2Matrix, s: &Symmetry) -> Colouring {
        assert_eq!(m.ncols(), self.k);
        let colours = (0..self.colours.len()).map(|f| m.mul_vec(self.colours[s.apply(f)])).collect();
        Colouring::new(self.polytope.clone(), m.nrows(), colours).expect("invertible m keeps colours nonzero")
    }

    /// Cube colouring read off around an ideal vertex; cube facet i carries the
    /// colour of the figure's i-th facet.
    pub fn restrict_to_vertex_figure(&self, v: &VertexFigure) -> Colouring {
        let colours = v.facets().iter().map(|&f| self.colours[f]).collect();
        Colouring::new(cube3(), self.k, colours).expect("restriction of a valid colouring")
    }

    fn cube_pairs(&self) -> Result<[(usize, usize); 3], ColouringError> {
        self.polytope
            .cube_opposite_pairs()
            .ok_or_else(|| ColouringError::NotCube(self.polytope.name().to_string()))
    }

    /// |Row(Λ) ∩ T| for a cube colouring.
    pub fn t_set_hits(&self) -> Result<usize, ColouringError> {
        let row = self.defining_matrix().row_space();
        Ok(t_set(&self.cube_pairs()?).iter().filter(|&&t| row.contains(t)).count())
    }

    /// Flat class of a proper orientable cube colouring.
    pub fn classify_flat_cube(&self) -> Result<FlatClass, ColouringError> {
        let pairs = self.cube_pairs()?;
        if let Some(s) = self.properness_violation() {
            return Err(ColouringError::NotProper(s));
        }
        let row = self.defining_matrix().row_space();
        if !row.contains_all_ones() {
            return Err(ColouringError::NotOrientable);
        }
        let hits = t_set(&pairs).iter().filter(|&&t| row.contains(t)).count();
        Ok(flat_class_from_hits(hits))
    }

    pub fn dj_invariants(&self) -> Result<DjInvariants, ColouringError> {
        let pairs = self.cube_pairs()?;
        let independent_pairs =
            pairs.iter().filter(|&&(a, b)| f2::independent(&[self.colours[a], self.colours[b]])).count();
        let eps_image = self.colours.iter().fold(0u64, |acc, &c| acc ^ c);
        Ok(DjInvariants { independent_pairs, eps_image_zero: eps_image == 0 })
    }

    pub fn cusp_census(&self) -> CuspCensus {
        let per_vertex: Vec<CuspRecord> = self
            .polytope
            .ideal_vertices()
            .iter()
            .enumerate()
            .map(|(figure, v)| {
                let cols: Vec<u64> = v.facets().iter().map(|&f| self.colours[f]).collect();
                let span_dim = f2::span_dim(&cols);
                CuspRecord { figure, span_dim, copies: 1u64 << (self.k - span_dim) }
            })
            .collect();
        let total = per_vertex.iter().map(|r| r.copies).sum();
        CuspCensus { per_vertex, total }
    }

    /// Canonical representative of the DJ class: the smallest reduced row
    /// echelon form (zero rows dropped) over all column permutations induced by
    /// polytope symmetries.
    pub fn dj_canonical_form(&self) -> F2Matrix {
        canonical_form(self.polytope.symmetry_group(), &self.colours, self.k)
    }

    /// If `s` is admissible, the matrix φ with φ(λ(f)) = λ(s(f)) for every facet.
    pub fn admissible_realisation(&self, s: &Symmetry) -> Option<F2Matrix> {
        let mut basis = TrackedBasis::new();
        let mut basis_facets = Vec::new();
        for (f, &c) in self.colours.iter().enumerate() {
            if basis.insert(c) {
                basis_facets.push(f);
            }
        }
        let targets: Vec<u64> = basis_facets.iter().map(|&f| self.colours[s.apply(f)]).collect();
        for (f, &c) in self.colours.iter().enumerate() {
            let coords = basis.coordinates(c)?;
            let predicted = targets
                .iter()
                .enumerate()
                .filter(|(j, _)| coords >> j & 1 == 1)
                .fold(0u64, |acc, (_, &t)| acc ^ t);
            if predicted != self.colours[s.apply(f)] {
                return None;
            }
        }
        if !f2::independent(&targets) || basis_facets.len() != self.k {
            return None;
        }
        let sources: Vec<u64> = basis_facets.iter().map(|&f| self.colours[f]).collect();
        let b = F2Matrix::from_columns(&sources, self.k);
        let t = F2Matrix::from_columns(&targets, self.k);
        Some(t.mul(&b.inverse().expect("basis colours are independent")))
    }

    /// Symmetries whose induced colour permutation is realised by some φ ∈ GL(k).
    pub fn admissible_group(&self) -> Result<AdmissibleGroup, ColouringError> {
        self.require_surjective()?;
        let elements = self
            .polytope
            .symmetry_group()
            .iter()
            .filter_map(|s| self.admissible_realisation(s).map(|phi| AdmissibleSymmetry { symmetry: s.clone(), phi }))
            .collect();
        Ok(AdmissibleGroup { elements })
    }

    /// |W ⋊ Adm| = 2^k · |Adm|.
    pub fn coloured_isometry_order(&self) -> Result<u128, ColouringError> {
        let adm = self.admissible_group()?;
        Ok((1u128 << self.k) * adm.order() as u128)
    }

    fn require_surjective(&self) -> Result<(), ColouringError> {
        let rank = self.rank();
        if rank != self.k {
            return Err(ColouringError::NotSurjective { rank, k: self.k });
        }
        Ok(())
    }

    /// Betti numbers of the cover, reported up to the polytope's dimension.
    pub fn betti_profile(&self) -> BettiProfile {
        betti_numbers(self.polytope.dual_k(), &self.defining_matrix(), self.polytope.dimension())
    }

    pub fn to_file(&self) -> ColouringFile {
        let polytope = match self.polytope.name() {
            name @ ("cube3" | "24cell") => PolytopeRef::Name(name.to_string()),
            _ => PolytopeRef::Inline(self.polytope.to_spec()),
        };
        ColouringFile { polytope, k: self.k, columns: self.column_strings() }
    }
}

/// Smallest `rref` (zero rows removed) of the column-permuted defining
/// matrices over the given symmetries.
pub fn canonical_form(symmetries: &[Symmetry], colours: &[u64], k: usize) -> F2Matrix {
    let mut best: Option<F2Matrix> = None;
    let mut cols = vec![0u64; colours.len()];
    for s in symmetries {
        for (i, c) in cols.iter_mut().enumerate() {
            *c = colours[s.apply(i)];
        }
        let r = F2Matrix::from_columns(&cols, k).rref();
        let rank = r.rows().iter().take_while(|&&x| x != 0).count();
        let r = F2Matrix::from_rows(r.rows()[..rank].to_vec(), colours.len());
        if best.as_ref().is_none_or(|b| r < *b) {
            best = Some(r);
        }
    }
    best.expect("symmetry group contains the identity")
}

/// Polytope given by built-in name or inline.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PolytopeRef {
    Name(String),
    Inline(PolytopeSpec),
}

impl PolytopeRef {
    pub fn resolve(&self) -> Result<Arc<Polytope>, PolytopeError> {
        match self {
            PolytopeRef::Name(n) => Polytope::builtin(n),
            PolytopeRef::Inline(spec) => Polytope::from_spec(spec).map(Arc::new),
        }
    }
}

/// On-disk colouring: `{polytope, k, columns}` with one '0'/'1' string per facet.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColouringFile {
    pub polytope: PolytopeRef,
    pub k: usize,
    pub columns: Vec<String>,
}

impl ColouringFile {
    pub fn into_colouring(&self) -> Result<Colouring, ColouringError> {
        let polytope = self.polytope.resolve()?;
        let mut colours = Vec::with_capacity(self.columns.len());
        for (index, col) in self.columns.iter().enumerate() {
            if col.len() != self.k {
                return Err(ColouringError::BadColumn {
                    index,
                    msg: format!("has {} entries, expected k = {}", col.len(), self.k),
                });
            }
            let v: f2::F2Vector =
                col.parse().map_err(|e: f2::F2Error| ColouringError::BadColumn { index, msg: e.to_string() })?;
            colours.push(v.bits());
        }
        Colouring::new(polytope, self.k, colours)
    }
}

/// Everything the library can say about one colouring.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub polytope: String,
    pub k: usize,
    pub rank: usize,
    pub proper: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub violation: Option<Vec<usize>>,
    pub orientable: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub flat_class: Option<FlatClass>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dj_invariants: Option<DjInvariants>,
    pub betti: Vec<usize>,
    pub euler: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cusps: Option<CuspCensus>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cusp_classes: Option<Vec<Option<FlatClass>>>,
    pub dj_canonical: F2Matrix,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub adm_order: Option<usize>,
}

pub fn classify(c: &Colouring) -> Classification {
    let violation = c.properness_violation();
    let proper = violation.is_none();
    let orientable = c.is_orientable();
    let is_cube = c.polytope().cube_opposite_pairs().is_some();
    let flat_class = if is_cube && proper && orientable { c.classify_flat_cube().ok() } else { None };
    let dj_invariants = if is_cube { c.dj_invariants().ok() } else { None };
    let profile = c.betti_profile();
    let has_cusps = !c.polytope().ideal_vertices().is_empty();
    let cusps = has_cusps.then(|| c.cusp_census());
    let cusp_classes = has_cusps.then(|| {
        c.polytope()
            .ideal_vertices()
            .iter()
            .map(|v| c.restrict_to_vertex_figure(v).classify_flat_cube().ok())
            .collect()
    });
    let adm_order = c.admissible_group().ok().map(|g| g.order());
    Classification {
        polytope: c.polytope().name().to_string(),
        k: c.k(),
        rank: c.rank(),
        proper,
        violation,
        orientable,
        flat_class,
        dj_invariants,
        euler: profile.euler(),
        betti: profile.betti,
        cusps,
        cusp_classes,
        dj_canonical: c.dj_canonical_form(),
        adm_order,
    }
}
