//! Executable perturbation bounds for symplectic spectra and Williamson
//! diagonalizers, together with the matrix lemmata they rest on.
//!
//! Every checker returns a [`BoundReport`] holding both sides of the
//! inequality. Computable side conditions are evaluated and recorded in
//! `preconditions_met`; a report whose preconditions fail is still produced
//! but is non-binding.

mod diagonalizer;
mod lemmas;
mod spectrum;
mod sweep;

use serde::{Deserialize, Serialize};

pub use diagonalizer::{
    bound_gram, bound_gram_with, bound_s, degenerate_demo, degenerate_demo_matrices, gram_gates,
    s_gates, DegenerateDemo,
};
pub use lemmas::{
    check_eigvec_bound, check_inv_lemma, check_kappa_growth, check_projection_bound,
    check_sqrt_lemma, check_woodbury_norm,
};
pub use spectrum::{
    bound_bhatia_jain, bound_spectrum, counterexample_matrices, counterexample_scaling,
    counterexample_direction, BhatiaJainReport, CounterexampleReport,
};
pub use sweep::{fit_slope, sweep, BoundSelector, SweepPoint, SweepReport};

use crate::densemat::{norm, spd_eig, DenseMatrix, NormKind};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Relative slack granted to `lhs ≤ rhs` before a report counts as violated.
pub const HOLDS_SLACK: f64 = 1e-12;

/// One evaluation of an inequality `lhs ≤ rhs`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct BoundReport<T> {
    pub label: String,
    pub norm_kind: NormKind,
    pub lhs: T,
    pub rhs: T,
    /// `rhs − lhs`.
    pub margin: T,
    pub holds: bool,
    pub preconditions_met: bool,
    /// Whether a violation with preconditions met indicates a defect. False
    /// for bounds that are only flagged and for counterexamples.
    pub binding: bool,
}

impl<T: Scalar> BoundReport<T> {
    pub fn new(label: &str, norm_kind: NormKind, lhs: T, rhs: T, preconditions_met: bool) -> Self {
        let slack = T::of(HOLDS_SLACK) * rhs.abs().max(T::one());
        Self {
            label: label.to_string(),
            norm_kind,
            lhs,
            rhs,
            margin: rhs - lhs,
            holds: lhs <= rhs + slack,
            preconditions_met,
            binding: true,
        }
    }

    pub fn non_binding(mut self) -> Self {
        self.binding = false;
        self
    }

    /// True when the bound is violated although it should hold.
    pub fn is_violation(&self) -> bool {
        self.binding && self.preconditions_met && !self.holds
    }
}

/// A perturbed pair `(M, M + εE)` with `E` rescaled to unit operator norm.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct PerturbationCase<T> {
    pub m: DenseMatrix<T>,
    pub e: DenseMatrix<T>,
    pub epsilon: T,
}

impl<T: Scalar> PerturbationCase<T> {
    /// Validates `M` SPD, `E` symmetric and nonzero, `ε > 0` and `M + εE` SPD.
    pub fn new(m: &DenseMatrix<T>, e: &DenseMatrix<T>, epsilon: T) -> Result<Self> {
        spd_eig(m)?;
        let e = unit_symmetric(e)?;
        if e.rows() != m.rows() {
            return Err(Error::DimensionMismatch {
                left: m.rows(),
                right: e.rows(),
            });
        }
        if !(epsilon > T::zero()) || !epsilon.is_finite() {
            return Err(Error::OutOfValidityRange(format!(
                "epsilon must be positive, got {epsilon}"
            )));
        }
        let case = Self {
            m: m.symmetrize(),
            e,
            epsilon,
        };
        spd_eig(&case.perturbed())?;
        Ok(case)
    }

    /// `M + εE`.
    pub fn perturbed(&self) -> DenseMatrix<T> {
        (&self.m + &self.e.scale(self.epsilon)).symmetrize()
    }

    pub fn with_epsilon(&self, epsilon: T) -> Result<Self> {
        Self::new(&self.m, &self.e, epsilon)
    }
}

/// Symmetrizes `E` and rescales it to unit operator norm.
pub fn unit_symmetric<T: Scalar>(e: &DenseMatrix<T>) -> Result<DenseMatrix<T>> {
    crate::densemat::require_symmetric(e)?;
    let e = e.symmetrize();
    let s = norm(&e, NormKind::Operator)?;
    if s == T::zero() {
        return Err(Error::PreconditionViolated(
            "perturbation direction must be nonzero".into(),
        ));
    }
    Ok(e.scale(T::one() / s))
}

/// Rescales any nonzero matrix to unit operator norm.
pub(crate) fn unit_operator<T: Scalar>(e: &DenseMatrix<T>) -> Result<DenseMatrix<T>> {
    let s = norm(e, NormKind::Operator)?;
    if s == T::zero() {
        return Err(Error::PreconditionViolated(
            "perturbation direction must be nonzero".into(),
        ));
    }
    Ok(e.scale(T::one() / s))
}

pub(crate) fn same_dim<T: Scalar>(a: &DenseMatrix<T>, b: &DenseMatrix<T>) -> Result<()> {
    if a.rows() != b.rows() || a.cols() != b.cols() {
        return Err(Error::DimensionMismatch {
            left: a.rows(),
            right: b.rows(),
        });
    }
    Ok(())
}
