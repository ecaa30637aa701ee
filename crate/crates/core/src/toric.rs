//! Rational Betti numbers of real toric spaces.
//!
//! For a colouring with defining matrix Λ of the simplicial complex K,
//! β^i = Σ_{ω ∈ Row Λ} β̃^{i−1}(K_ω), where K_ω is the full subcomplex on the
//! support of ω.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::complex::FlagComplex;
use crate::f2::F2Matrix;

/// Contribution of one row-space vector.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OmegaTerm {
    pub omega: u64,
    /// β̃^{j−1}(K_ω) at index j.
    pub reduced: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BettiProfile {
    /// β^0, …, β^n.
    pub betti: Vec<usize>,
    pub per_omega: Vec<OmegaTerm>,
}

impl BettiProfile {
    pub fn euler(&self) -> i64 {
        euler_from_betti(&self.betti)
    }
}

pub fn euler_from_betti(betti: &[usize]) -> i64 {
    betti.iter().enumerate().map(|(i, &b)| if i % 2 == 0 { b as i64 } else { -(b as i64) }).sum()
}

/// Betti numbers β^0..=β^n of the real toric space of (K, Λ).
///
/// The columns of Λ are indexed by the vertex labels of K.
pub fn betti_numbers(k: &FlagComplex, lambda: &F2Matrix, n: usize) -> BettiProfile {
    assert_eq!(lambda.ncols(), k.label_count(), "one column per vertex label");
    let mut omegas: Vec<u64> = lambda.row_space().iter().collect();
    omegas.sort_unstable();
    let per_omega: Vec<OmegaTerm> = omegas
        .par_iter()
        .map(|&omega| {
            let sub = k.induced_mask(omega);
            let b = sub.reduced_betti();
            let reduced = (0..=n).map(|j| b.get(j as isize - 1)).collect();
            OmegaTerm { omega, reduced }
        })
        .collect();
    let mut betti = vec![0usize; n + 1];
    for term in &per_omega {
        for (i, &r) in term.reduced.iter().enumerate() {
            betti[i] += r;
        }
    }
    BettiProfile { betti, per_omega }
}
