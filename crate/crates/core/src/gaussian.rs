//! Gaussian-state utilities on top of the symplectic spectrum.
//!
//! Covariance matrices use the global ordering `(q₁…qₙ, p₁…pₙ)` of the
//! standard form. A covariance matrix is physical when all its symplectic
//! eigenvalues are at least one.

use serde::{Deserialize, Serialize};

use crate::densemat::{norm, spd_eig, DenseMatrix, NormKind};
use crate::error::{Error, Result};
use crate::perturb::{same_dim, BoundReport};
use crate::scalar::Scalar;
use crate::symplectic::{mode_count, symplectic_spectrum};

/// Symplectic eigenvalues may undershoot one by this much and still be valid.
pub const VALIDITY_TOL: f64 = 1e-10;
/// Distance from one within which a state counts as pure.
pub const PURITY_TOL: f64 = 1e-8;
/// Required clearance above one for the entropy continuity bound.
pub const INTERIOR_TOL: f64 = 1e-6;
/// Symplectic eigenvalues this close to one contribute no entropy.
pub const UNIT_SNAP: f64 = 1e-14;

/// Covariance matrix and mean vector of an `n`-mode Gaussian state.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct GaussianState<T> {
    pub cov: DenseMatrix<T>,
    pub mean: Vec<T>,
    pub n_modes: usize,
    pub valid: bool,
    pub min_d: T,
}

impl<T: Scalar> GaussianState<T> {
    pub fn new(cov: DenseMatrix<T>, mean: Vec<T>) -> Result<Self> {
        let check = validate_covariance(&cov)?;
        if mean.len() != cov.rows() {
            return Err(Error::DimensionMismatch {
                left: cov.rows(),
                right: mean.len(),
            });
        }
        if mean.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self {
            n_modes: cov.rows() / 2,
            cov: cov.symmetrize(),
            mean,
            valid: check.valid,
            min_d: check.min_d,
        })
    }

    /// Zero-mean state.
    pub fn centered(cov: DenseMatrix<T>) -> Result<Self> {
        let dim = cov.rows();
        Self::new(cov, vec![T::zero(); dim])
    }

    /// Marginal on the given zero-based modes.
    pub fn reduce(&self, modes: &[usize]) -> Result<Self> {
        let idx = coordinate_indices(self.n_modes, modes)?;
        let mean = idx.iter().map(|&i| self.mean[i]).collect();
        Self::new(self.cov.principal_submatrix(&idx), mean)
    }

    pub fn entropy(&self) -> Result<EntropyReport<T>> {
        entanglement_entropy(&self.cov)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct CovarianceCheck<T> {
    pub valid: bool,
    pub min_d: T,
}

/// Checks the uncertainty relation through the smallest symplectic eigenvalue.
pub fn validate_covariance<T: Scalar>(cov: &DenseMatrix<T>) -> Result<CovarianceCheck<T>> {
    mode_count(cov)?;
    let d = symplectic_spectrum(cov)?;
    let min_d = d.iter().copied().fold(T::infinity(), T::min);
    Ok(CovarianceCheck {
        valid: min_d >= T::one() - T::tol(VALIDITY_TOL),
        min_d,
    })
}

/// Whether every symplectic eigenvalue is one, i.e. the covariance matrix is
/// itself symplectic.
pub fn is_pure<T: Scalar>(cov: &DenseMatrix<T>) -> Result<bool> {
    mode_count(cov)?;
    let d = symplectic_spectrum(cov)?;
    Ok(d.iter().all(|&v| (v - T::one()).abs() <= T::tol(PURITY_TOL)))
}

fn coordinate_indices(n: usize, modes: &[usize]) -> Result<Vec<usize>> {
    if modes.is_empty() {
        return Err(Error::BadIndices("mode list is empty".into()));
    }
    let mut seen = vec![false; n];
    for &k in modes {
        if k >= n {
            return Err(Error::BadIndices(format!("mode {k} out of range 0..{n}")));
        }
        if std::mem::replace(&mut seen[k], true) {
            return Err(Error::BadIndices(format!("mode {k} listed twice")));
        }
    }
    Ok(modes.iter().copied().chain(modes.iter().map(|&k| k + n)).collect())
}

/// Covariance of the marginal on zero-based `modes`: rows and columns of both
/// the `q` and the `p` coordinates of the selected modes.
pub fn reduced_state<T: Scalar>(cov: &DenseMatrix<T>, modes: &[usize]) -> Result<DenseMatrix<T>> {
    let n = mode_count(cov)?;
    let idx = coordinate_indices(n, modes)?;
    Ok(cov.principal_submatrix(&idx).symmetrize())
}

/// `g(x) = x ln x` with `g(0) = 0`.
pub fn xlogx<T: Scalar>(x: T) -> T {
    if x <= T::zero() {
        T::zero()
    } else {
        x * x.ln()
    }
}

/// Entropy contribution `g((d+1)/2) − g((d−1)/2)` of one mode, in nats.
pub fn mode_entropy<T: Scalar>(d: T) -> T {
    if (d - T::one()).abs() <= T::tol(UNIT_SNAP) {
        return T::zero();
    }
    let half = T::of(0.5);
    xlogx((d + T::one()) * half) - xlogx(((d - T::one()) * half).max(T::zero()))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct EntropyReport<T> {
    /// Entropy in nats.
    pub entropy: T,
    pub per_mode_terms: Vec<T>,
    pub symplectic_eigenvalues: Vec<T>,
    pub min_symplectic_eigenvalue: T,
}

impl<T: Scalar> EntropyReport<T> {
    /// The same report with entropies converted to bits.
    pub fn in_bits(&self) -> Self {
        let ln2 = T::of(std::f64::consts::LN_2);
        Self {
            entropy: self.entropy / ln2,
            per_mode_terms: self.per_mode_terms.iter().map(|&t| t / ln2).collect(),
            ..self.clone()
        }
    }
}

/// Von Neumann entropy of the Gaussian state with covariance `cov`, which for
/// a reduced pure state is its entanglement entropy.
pub fn entanglement_entropy<T: Scalar>(cov: &DenseMatrix<T>) -> Result<EntropyReport<T>> {
    let check = validate_covariance(cov)?;
    if !check.valid {
        return Err(Error::InvalidCovariance {
            min_d: check.min_d.as_f64(),
        });
    }
    let d = symplectic_spectrum(cov)?;
    let per_mode_terms: Vec<T> = d.iter().map(|&v| mode_entropy(v.max(T::one()))).collect();
    let entropy = per_mode_terms.iter().fold(T::zero(), |a, &t| a + t);
    Ok(EntropyReport {
        entropy,
        per_mode_terms,
        symplectic_eigenvalues: d,
        min_symplectic_eigenvalue: check.min_d,
    })
}

/// Entropy continuity estimate
/// `|H(γ) − H(γ̃)| ≤ (κ(γ)κ(γ̃))^{1/2} (1 + ln max(‖γ‖, (‖γ⁻¹‖⁻¹ − 1)/2)) ‖γ − γ̃‖₁`
/// for covariance matrices strictly inside the physical set.
///
/// The estimate degrades as symplectic eigenvalues approach one, so the
/// report is non-binding: violations are flagged, not treated as defects.
pub fn entropy_difference_bound<T: Scalar>(
    cov: &DenseMatrix<T>,
    cov2: &DenseMatrix<T>,
) -> Result<BoundReport<T>> {
    same_dim(cov, cov2)?;
    let h1 = entanglement_entropy(cov)?;
    let h2 = entanglement_entropy(cov2)?;
    let floor = T::one() + T::tol(INTERIOR_TOL);
    for h in [&h1, &h2] {
        if h.min_symplectic_eigenvalue < floor {
            return Err(Error::NotInterior {
                min_d: h.min_symplectic_eigenvalue.as_f64(),
            });
        }
    }
    let s1 = spd_eig(cov)?;
    let s2 = spd_eig(cov2)?;
    let kk = (s1.max() / s1.min() * (s2.max() / s2.min())).sqrt();
    let log_arg = s1.max().max((s1.min() - T::one()) * T::of(0.5));
    let rhs = kk * (T::one() + log_arg.ln()) * norm(&(cov - cov2), NormKind::Trace)?;
    let lhs = (h1.entropy - h2.entropy).abs();
    Ok(BoundReport::new("entropy-continuity", NormKind::Trace, lhs, rhs, true).non_binding())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::LN_2;

    #[test]
    fn vacuum_is_valid_pure_and_has_zero_entropy() {
        for n in 1..5 {
            let id = DenseMatrix::<f64>::identity(2 * n);
            let c = validate_covariance(&id).unwrap();
            assert!(c.valid && c.min_d == 1.0);
            assert!(is_pure(&id).unwrap());
            assert_eq!(entanglement_entropy(&id).unwrap().entropy, 0.0);
        }
    }

    #[test]
    fn squeezed_and_sub_heisenberg() {
        let c = validate_covariance(&DenseMatrix::from_diagonal(&[2.0, 0.5])).unwrap();
        assert!(c.valid && c.min_d == 1.0);
        let c = validate_covariance(&DenseMatrix::<f64>::identity(2).scale(0.5)).unwrap();
        assert!(!c.valid && c.min_d == 0.5);
        assert!(!is_pure(&DenseMatrix::<f64>::identity(2).scale(2.0)).unwrap());
    }

    #[test]
    fn thermal_entropies() {
        let h = entanglement_entropy(&DenseMatrix::from_diagonal(&[3.0, 3.0])).unwrap();
        assert!((h.entropy - 2.0 * LN_2).abs() < 1e-12);
        let h = entanglement_entropy(&DenseMatrix::from_diagonal(&[3.0, 1.0, 3.0, 1.0])).unwrap();
        assert!((h.entropy - 2.0 * LN_2).abs() < 1e-12);
        assert_eq!(h.per_mode_terms[1], 0.0);
        assert!((h.in_bits().entropy - 2.0).abs() < 1e-12);
    }

    #[test]
    fn invalid_covariance_has_no_entropy() {
        assert!(matches!(
            entanglement_entropy(&DenseMatrix::<f64>::identity(2).scale(0.5)),
            Err(Error::InvalidCovariance { .. })
        ));
    }

    #[test]
    fn reduction_picks_q_and_p_rows() {
        let cov = DenseMatrix::<f64>::from_fn(6, 6, |i, j| if i == j { 1.0 + i as f64 } else { 0.0 });
        let r = reduced_state(&cov, &[1]).unwrap();
        assert_eq!(r, DenseMatrix::from_diagonal(&[2.0, 5.0]));
        assert_eq!(reduced_state(&cov, &[0, 1, 2]).unwrap(), cov);
        assert!(matches!(reduced_state(&cov, &[3]), Err(Error::BadIndices(_))));
        assert!(matches!(reduced_state(&cov, &[0, 0]), Err(Error::BadIndices(_))));
        assert!(matches!(reduced_state(&cov, &[]), Err(Error::BadIndices(_))));
    }

    #[test]
    fn continuity_bound_examples() {
        let g = DenseMatrix::<f64>::identity(2).scale(2.0);
        let r = entropy_difference_bound(&g, &g).unwrap();
        assert_eq!(r.lhs, 0.0);
        let g2 = DenseMatrix::<f64>::identity(2).scale(2.1);
        let r = entropy_difference_bound(&g, &g2).unwrap();
        let expect = (mode_entropy(2.1f64) - mode_entropy(2.0)).abs();
        assert!((r.lhs - expect).abs() < 1e-14);
        assert!(r.holds && !r.binding);
        assert!(matches!(
            entropy_difference_bound(&DenseMatrix::identity(2), &g),
            Err(Error::NotInterior { .. })
        ));
    }
}
