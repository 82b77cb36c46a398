use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::{BoundReport, PerturbationCase};
use crate::densemat::{norm, spd_eig, DenseMatrix, NormKind};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::symplectic::{
    gauge_align, rotate_modes, signed_gap, standard_form, williamson, williamson_with,
    WilliamsonOptions,
};

/// Spectral data of `M` used by the gates and right-hand sides.
struct Scales<T> {
    n: usize,
    norm: T,
    inv_norm: T,
    kappa: T,
}

fn scales<T: Scalar>(m: &DenseMatrix<T>) -> Result<Scales<T>> {
    let s = spd_eig(m)?;
    Ok(Scales {
        n: m.rows() / 2,
        norm: s.max(),
        inv_norm: T::one() / s.min(),
        kappa: s.max() / s.min(),
    })
}

/// Largest ε admitted by the computable gates of the diagonalizer bound:
/// `min{1/(2‖M⁻¹‖), ‖M‖}`.
pub fn s_gates<T: Scalar>(m: &DenseMatrix<T>) -> Result<T> {
    let s = scales(m)?;
    Ok((T::one() / (T::of(2.0) * s.inv_norm)).min(s.norm))
}

/// Largest ε admitted by the Gram-matrix bound:
/// `min{‖M‖/(6κ)^{4/3}, 1/(2‖M‖), ‖M‖, 1/(2‖M⁻¹‖)}`.
pub fn gram_gates<T: Scalar>(m: &DenseMatrix<T>) -> Result<T> {
    let s = scales(m)?;
    let two = T::of(2.0);
    let a = s.norm / (T::of(6.0) * s.kappa).powf(T::of(4.0 / 3.0));
    let b = T::one() / (two * s.norm);
    let c = T::one() / (two * s.inv_norm);
    Ok(a.min(b).min(s.norm).min(c))
}

/// `‖S − S_ε‖ < 4(√κ + √(n³‖M‖/‖M⁻¹‖)/(2δ)) ‖M^{-1/2}‖ √ε` after aligning the
/// gauge of `S_ε` to `S`. Requires a nondegenerate symplectic spectrum.
pub fn bound_s<T: Scalar>(case: &PerturbationCase<T>) -> Result<BoundReport<T>> {
    let f = williamson(&case.m)?;
    let fe = williamson(&case.perturbed())?;
    let align = gauge_align(&f, &fe)?;
    let s = scales(&case.m)?;
    let delta = signed_gap(&f.d);
    let n3 = T::of((s.n * s.n * s.n) as f64);
    let inner = s.kappa.sqrt() + (n3 * s.norm / s.inv_norm).sqrt() / (T::of(2.0) * delta);
    let rhs = T::of(4.0) * inner * s.inv_norm.sqrt() * case.epsilon.sqrt();
    let pre = case.epsilon < s_gates(&case.m)?;
    Ok(BoundReport::new("diagonalizer", NormKind::Operator, align.distance, rhs, pre))
}

/// `‖S^{-T}S^{-1} − S_ε^{-T}S_ε^{-1}‖ ≤ 9πn³κ(M)²‖M⁻¹‖^{1/4}ε^{1/4}`.
pub fn bound_gram<T: Scalar>(case: &PerturbationCase<T>) -> Result<BoundReport<T>> {
    bound_gram_with(case, &WilliamsonOptions::default())
}

/// [`bound_gram`] with explicit pairing options for both factorizations.
pub fn bound_gram_with<T: Scalar>(
    case: &PerturbationCase<T>,
    opts: &WilliamsonOptions,
) -> Result<BoundReport<T>> {
    let g = williamson_with(&case.m, opts)?.gram()?;
    let ge = williamson_with(&case.perturbed(), opts)?.gram()?;
    let lhs = norm(&(&g - &ge), NormKind::Operator)?;
    let s = scales(&case.m)?;
    let n3 = T::of((s.n * s.n * s.n) as f64);
    let rhs = T::of(9.0 * PI)
        * n3
        * s.kappa
        * s.kappa
        * s.inv_norm.powf(T::of(0.25))
        * case.epsilon.powf(T::of(0.25));
    let pre = case.epsilon < gram_gates(&case.m)?;
    Ok(BoundReport::new("gram", NormKind::Operator, lhs, rhs, pre))
}

/// Distances for the crossing example `M = [[A,0],[0,A]]`, `A = [[1,ε],[ε,1]]`
/// against `M′ = diag(1+ε, 1−ε, 1+ε, 1−ε)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct DegenerateDemo<T> {
    pub epsilon: T,
    /// `‖S − S′‖` for the canonical gauges.
    pub s_dist_canonical: T,
    /// `min ‖S − S′R‖` over per-mode rotations `R` on a one-degree grid.
    pub s_dist_aligned: T,
    /// Minimizing angles in degrees.
    pub best_angles_deg: [u32; 2],
    pub gram_dist: T,
    /// `‖σMσM′ − σM′σM‖`.
    pub commutator_norm: T,
    pub residual_diag: [T; 2],
    pub residual_symp: [T; 2],
}

pub fn degenerate_demo_matrices<T: Scalar>(epsilon: T) -> (DenseMatrix<T>, DenseMatrix<T>) {
    let (o, z, e) = (T::one(), T::zero(), epsilon);
    let m = DenseMatrix::from_rows(&[[o, e, z, z], [e, o, z, z], [z, z, o, e], [z, z, e, o]])
        .expect("finite entries");
    let mp = DenseMatrix::from_diagonal(&[o + e, o - e, o + e, o - e]);
    (m, mp)
}

pub fn degenerate_demo<T: Scalar>(epsilon: T) -> Result<DegenerateDemo<T>> {
    if !(epsilon > T::zero() && epsilon < T::one()) {
        return Err(Error::OutOfValidityRange(format!(
            "epsilon must lie in (0, 1), got {epsilon}"
        )));
    }
    let (m, mp) = degenerate_demo_matrices(epsilon);
    let f = williamson(&m)?;
    let fp = williamson(&mp)?;
    let s_dist_canonical = norm(&(&f.s - &fp.s), NormKind::Operator)?;

    let deg = T::of(PI / 180.0);
    let mut best = (T::infinity(), [0u32, 0u32]);
    for a in 0..360u32 {
        for b in 0..360u32 {
            let rotated = rotate_modes(&fp.s, &[T::of(a as f64) * deg, T::of(b as f64) * deg])?;
            let dist = norm(&(&f.s - &rotated), NormKind::Operator)?;
            if dist < best.0 {
                best = (dist, [a, b]);
            }
        }
    }

    let gram_dist = norm(&(&f.gram()? - &fp.gram()?), NormKind::Operator)?;
    let sigma = standard_form::<T>(2)?;
    let a = &sigma * &m;
    let b = &sigma * &mp;
    let commutator_norm = norm(&(&(&a * &b) - &(&b * &a)), NormKind::Operator)?;
    Ok(DegenerateDemo {
        epsilon,
        s_dist_canonical,
        s_dist_aligned: best.0,
        best_angles_deg: best.1,
        gram_dist,
        commutator_norm,
        residual_diag: [f.residual_diag, fp.residual_diag],
        residual_symp: [f.residual_symp, fp.residual_symp],
    })
}
