//! Colourings of right-angled polytopes over 𝔽₂.
//!
//! A proper colouring of an ideal right-angled polytope defines a hyperbolic
//! manifold cover. This crate checks properness and orientability, computes
//! rational Betti numbers of the cover, classifies flat cusp sections, and
//! enumerates colourings up to DJ-equivalence.

pub mod cell24;
pub mod colouring;
pub mod complex;
pub mod f2;
pub mod polytope;
pub mod orbit_count;
pub mod search;
pub mod toric;

pub use cell24::{AdmissibleStructure, HurwitzElement, HurwitzGroup, Psi, TwentyFourCell};
pub use colouring::{
    classify, AdmissibleGroup, Classification, Colouring, ColouringError, ColouringFile, CuspCensus, DjInvariants,
    FlatClass,
};
pub use complex::{BettiVector, FlagComplex};
pub use f2::{F2Error, F2Matrix, F2Vector, Subspace};
pub use polytope::{cube3, Polytope, PolytopeError, PolytopeSpec, Symmetry, VertexFigure};
pub use orbit_count::{count_orientable_classes, ClassCount};
pub use search::{enumerate, CensusResult, DjClass, RunOptions, SearchSpec};
pub use toric::{betti_numbers, euler_from_betti, BettiProfile};
