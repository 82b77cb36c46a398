use std::f64::consts::PI;
use std::ops::Range;

use super::{same_dim, unit_operator, unit_symmetric, BoundReport};
use crate::densemat::{
    euclidean, inverse, norm, psd_sqrt, spd_eig, spd_inverse, sym_eig, DenseMatrix, NormKind,
};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::symplectic::GAP_TOL;

/// `‖A^{1/2} − B^{1/2}‖ ≤ ‖A − B‖_op^{1/2} ‖I‖` for PSD `A`, `B`.
pub fn check_sqrt_lemma<T: Scalar>(
    a: &DenseMatrix<T>,
    b: &DenseMatrix<T>,
    kind: NormKind,
) -> Result<BoundReport<T>> {
    same_dim(a, b)?;
    let lhs = norm(&(&psd_sqrt(a)? - &psd_sqrt(b)?), kind)?;
    let rhs = norm(&(a - b), NormKind::Operator)?.sqrt() * kind.of_identity::<T>(a.rows());
    Ok(BoundReport::new("sqrt", kind, lhs, rhs, true))
}

/// `‖A⁻¹ − B⁻¹‖ ≤ ‖A⁻¹‖_op ‖B⁻¹‖_op ‖A − B‖` for SPD `A`, `B`.
pub fn check_inv_lemma<T: Scalar>(
    a: &DenseMatrix<T>,
    b: &DenseMatrix<T>,
    kind: NormKind,
) -> Result<BoundReport<T>> {
    same_dim(a, b)?;
    let ai = spd_eig(a)?;
    let bi = spd_eig(b)?;
    let lhs = norm(&(&spd_inverse(a)? - &spd_inverse(b)?), kind)?;
    let rhs = (T::one() / ai.min()) * (T::one() / bi.min()) * norm(&(a - b), kind)?;
    Ok(BoundReport::new("inverse", kind, lhs, rhs, true))
}

/// `‖(M + εE)⁻¹‖ ≤ 2‖M⁻¹‖` whenever `‖M⁻¹‖ ≤ 1/(2ε)`, for invertible `M` and
/// `E` rescaled to unit operator norm.
pub fn check_woodbury_norm<T: Scalar>(
    m: &DenseMatrix<T>,
    e: &DenseMatrix<T>,
    epsilon: T,
) -> Result<BoundReport<T>> {
    same_dim(m, e)?;
    let e = unit_operator(e)?;
    let m_inv = norm(&inverse(m)?, NormKind::Operator)?;
    let gate = T::one() / (T::of(2.0) * epsilon);
    if !(epsilon > T::zero()) || m_inv > gate * (T::one() + T::tol(1e-12)) {
        return Err(Error::PreconditionViolated(format!(
            "need ‖M⁻¹‖ ≤ 1/(2ε): ‖M⁻¹‖ = {m_inv}, 1/(2ε) = {gate}"
        )));
    }
    let lhs = norm(&inverse(&(m + &e.scale(epsilon)))?, NormKind::Operator)?;
    let rhs = T::of(2.0) * m_inv;
    Ok(BoundReport::new("woodbury", NormKind::Operator, lhs, rhs, true))
}

/// `κ(M + εE) ≤ 4κ(M)` whenever `‖M⁻¹‖ ≤ 1/(2ε)` and `ε < ‖M‖`.
pub fn check_kappa_growth<T: Scalar>(
    m: &DenseMatrix<T>,
    e: &DenseMatrix<T>,
    epsilon: T,
) -> Result<BoundReport<T>> {
    same_dim(m, e)?;
    let e = unit_symmetric(e)?;
    let s = spd_eig(m)?;
    let (m_norm, m_inv) = (s.max(), T::one() / s.min());
    if !(epsilon > T::zero())
        || m_inv > T::one() / (T::of(2.0) * epsilon) * (T::one() + T::tol(1e-12))
        || epsilon >= m_norm
    {
        return Err(Error::PreconditionViolated(format!(
            "need ‖M⁻¹‖ ≤ 1/(2ε) and ε < ‖M‖: ‖M⁻¹‖ = {m_inv}, ‖M‖ = {m_norm}, ε = {epsilon}"
        )));
    }
    let p = spd_eig(&(m + &e.scale(epsilon)).symmetrize())?;
    let lhs = p.max() / p.min();
    let rhs = T::of(4.0) * s.max() / s.min();
    Ok(BoundReport::new("kappa-growth", NormKind::Operator, lhs, rhs, true))
}

/// Smallest gap between consecutive ascending eigenvalues.
fn min_gap<T: Scalar>(values: &[T]) -> T {
    values
        .windows(2)
        .fold(T::infinity(), |g, w| g.min(w[1] - w[0]))
}

/// Eigenvector perturbation `‖xᵢ − xᵢ(ε)‖₂ ≤ 2nε / min|λᵢ − λⱼ|` for symmetric
/// `A` with simple spectrum and `‖B‖ ≤ 1`; reports the worst index.
///
/// The estimate is first-order, so `preconditions_met` also requires
/// `ε ≤ gap/100`.
pub fn check_eigvec_bound<T: Scalar>(
    a: &DenseMatrix<T>,
    b: &DenseMatrix<T>,
    epsilon: T,
) -> Result<BoundReport<T>> {
    same_dim(a, b)?;
    let sa = sym_eig(a)?;
    let n = sa.dim();
    let gap = min_gap(&sa.eigenvalues);
    let tolerance = T::tol(GAP_TOL) * sa.spectral_radius().max(T::min_positive_value());
    if gap <= tolerance {
        return Err(Error::DegenerateSpectrum {
            gap: gap.as_f64(),
            tolerance: tolerance.as_f64(),
        });
    }
    let b_norm = norm(b, NormKind::Operator)?;
    let sp = sym_eig(&(a + &b.scale(epsilon)).symmetrize())?;
    let mut lhs = T::zero();
    for i in 0..n {
        let x = sa.eigenvectors.column(i);
        let mut y = sp.eigenvectors.column(i);
        let dot = x.iter().zip(&y).fold(T::zero(), |s, (&p, &q)| s + p * q);
        if dot < T::zero() {
            y.iter_mut().for_each(|v| *v = -*v);
        }
        let diff: Vec<T> = x.iter().zip(&y).map(|(&p, &q)| p - q).collect();
        lhs = lhs.max(euclidean(&diff));
    }
    let rhs = T::of(2.0 * n as f64) * epsilon / gap;
    let pre = b_norm <= T::one() + T::tol(1e-12) && epsilon >= T::zero() && epsilon <= gap / T::of(100.0);
    Ok(BoundReport::new("eigenvector", NormKind::Operator, lhs, rhs, pre))
}

/// Spectral projections `E = P_A(S₁)`, `F = P_B(S₂)` with
/// `‖EF‖ ≤ π/(2δ) ‖A − B‖`, where `S₁`, `S₂` are index ranges into the
/// ascending spectra and `δ` is the distance between the selected eigenvalues.
pub fn check_projection_bound<T: Scalar>(
    a: &DenseMatrix<T>,
    b: &DenseMatrix<T>,
    s1: Range<usize>,
    s2: Range<usize>,
    kind: NormKind,
) -> Result<BoundReport<T>> {
    same_dim(a, b)?;
    let sa = sym_eig(a)?;
    let sb = sym_eig(b)?;
    for (r, name) in [(&s1, "first"), (&s2, "second")] {
        if r.is_empty() || r.end > sa.dim() {
            return Err(Error::BadIndices(format!(
                "{name} index range {r:?} must be nonempty within 0..{}",
                sa.dim()
            )));
        }
    }
    let mut delta = T::infinity();
    for &x in &sa.eigenvalues[s1.clone()] {
        for &y in &sb.eigenvalues[s2.clone()] {
            delta = delta.min((x - y).abs());
        }
    }
    if delta <= T::zero() {
        return Err(Error::ZeroGap {
            distance: delta.as_f64(),
        });
    }
    let e = sa.projector(s1);
    let f = sb.projector(s2);
    let lhs = norm(&(&e * &f), kind)?;
    let rhs = T::of(PI) / (T::of(2.0) * delta) * norm(&(a - b), kind)?;
    Ok(BoundReport::new("projection", kind, lhs, rhs, true))
}
