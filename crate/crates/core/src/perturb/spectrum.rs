use serde::{Deserialize, Serialize};

use super::{same_dim, BoundReport};
use crate::densemat::{condition_number, norm, DenseMatrix, NormKind};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::symplectic::symplectic_spectrum;

/// `‖diag(d, d) − diag(d′, d′)‖` in the given norm.
fn doubled_diag_distance<T: Scalar>(d: &[T], dp: &[T], kind: NormKind) -> T {
    let diffs: Vec<T> = d
        .iter()
        .zip(dp)
        .flat_map(|(&a, &b)| [(a - b).abs(), (a - b).abs()])
        .collect();
    kind.from_singular_values(&diffs)
}

/// `‖diag(d,d) − diag(d′,d′)‖ ≤ (κ(M)κ(M′))^{1/2} ‖M − M′‖`.
pub fn bound_spectrum<T: Scalar>(
    m: &DenseMatrix<T>,
    mp: &DenseMatrix<T>,
    kind: NormKind,
) -> Result<BoundReport<T>> {
    same_dim(m, mp)?;
    let d = symplectic_spectrum(m)?;
    let dp = symplectic_spectrum(mp)?;
    let lhs = doubled_diag_distance(&d, &dp, kind);
    let kk = (condition_number(m)? * condition_number(mp)?).sqrt();
    let rhs = kk * norm(&(m - mp), kind)?;
    Ok(BoundReport::new("spectrum", kind, lhs, rhs, true))
}

/// Operator-norm comparison bound
/// `‖diag(d,d) − diag(d′,d′)‖ ≤ (‖M‖^{1/2} + ‖M′‖^{1/2}) ‖M − M′‖^{1/2}`,
/// alongside the condition-number bound for the same pair.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct BhatiaJainReport<T> {
    pub report: BoundReport<T>,
    /// Right-hand side of [`bound_spectrum`] in operator norm.
    pub condition_rhs: T,
}

pub fn bound_bhatia_jain<T: Scalar>(
    m: &DenseMatrix<T>,
    mp: &DenseMatrix<T>,
) -> Result<BhatiaJainReport<T>> {
    let kind = NormKind::Operator;
    let spectral = bound_spectrum(m, mp, kind)?;
    let rhs = (norm(m, kind)?.sqrt() + norm(mp, kind)?.sqrt()) * norm(&(m - mp), kind)?.sqrt();
    Ok(BhatiaJainReport {
        report: BoundReport::new("bhatia-jain", kind, spectral.lhs, rhs, true),
        condition_rhs: spectral.rhs,
    })
}

/// Outcome of the two-by-two scaling counterexample.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct CounterexampleReport<T> {
    /// `lhs = c‖M − M_ε‖`, `rhs = |d − d_ε|`; `holds` means the
    /// counterexample fires (`rhs > lhs`).
    pub report: BoundReport<T>,
    pub x: T,
    pub epsilon: T,
    pub c: T,
    /// Smallest integer `x₀ ≥ 1` such that the firing inequality holds for
    /// every integer `x ≥ x₀`, by direct scan.
    pub x0: u64,
    /// `√x` from the closed form.
    pub d_closed: T,
    /// `√(x − 2ε(x−1) − 29ε²)` from the closed form.
    pub d_eps_closed: T,
    /// The same two values from [`symplectic_spectrum`].
    pub d_computed: T,
    pub d_eps_computed: T,
}

/// The traceless direction `[[2, -5], [-5, -2]]`.
pub fn counterexample_direction<T: Scalar>() -> DenseMatrix<T> {
    DenseMatrix::from_rows(&[[T::of(2.0), T::of(-5.0)], [T::of(-5.0), T::of(-2.0)]])
        .expect("finite constants")
}

/// `M = diag(x, 1)` and `M_ε = M + εE` with the unnormalized direction `E`.
pub fn counterexample_matrices<T: Scalar>(x: T, epsilon: T) -> (DenseMatrix<T>, DenseMatrix<T>) {
    let m = DenseMatrix::from_diagonal(&[x, T::one()]);
    let me = &m + &counterexample_direction::<T>().scale(epsilon);
    (m, me)
}

fn counter_inequality(x: f64, eps: f64, c: f64) -> bool {
    2.0 * (29.0 * x).sqrt() * c * eps <= 29.0 * eps * eps * (1.0 + c * c) + 2.0 * eps * (x - 1.0)
}

/// Smallest integer `x₀ ≥ 1` past which the firing inequality holds for all
/// integers. The failing set is an interval around `x = 29c²/4`, so the scan
/// stops at the first success beyond that point.
fn scan_x0(eps: f64, c: f64) -> u64 {
    let vertex = 29.0 * c * c / 4.0;
    let mut last_fail = None;
    let mut x: u64 = 1;
    loop {
        let ok = counter_inequality(x as f64, eps, c);
        if !ok {
            last_fail = Some(x);
        } else if x as f64 > vertex {
            break;
        }
        x += 1;
    }
    last_fail.map_or(1, |f| f + 1)
}

/// Shows that no `M`-independent constant `c` can bound the symplectic
/// spectrum shift linearly: for `M = diag(x, 1)` and large `x` the shift
/// exceeds `c‖M − M_ε‖`.
pub fn counterexample_scaling<T: Scalar>(x: T, epsilon: T, c: T) -> Result<CounterexampleReport<T>> {
    let (xf, ef, cf) = (x.as_f64(), epsilon.as_f64(), c.as_f64());
    if !(xf >= 1.0) || !xf.is_finite() {
        return Err(Error::OutOfValidityRange(format!("x must be at least 1, got {x}")));
    }
    if !(ef > 0.0 && ef < 0.1) {
        return Err(Error::OutOfValidityRange(format!(
            "epsilon must lie in (0, 0.1), got {epsilon}"
        )));
    }
    if !(cf > 0.0) || !cf.is_finite() {
        return Err(Error::OutOfValidityRange(format!("c must be positive, got {c}")));
    }
    let two = T::of(2.0);
    let t29 = T::of(29.0);
    let d_closed = x.sqrt();
    let d_eps_closed = (x - two * epsilon * (x - T::one()) - t29 * epsilon * epsilon).sqrt();
    let lhs = c * epsilon * t29.sqrt();
    let rhs = (d_closed - d_eps_closed).abs();
    let (m, me) = counterexample_matrices(x, epsilon);
    let d_computed = symplectic_spectrum(&m)?[0];
    let d_eps_computed = symplectic_spectrum(&me)?[0];
    let report = BoundReport {
        label: "counterexample".to_string(),
        norm_kind: NormKind::Operator,
        lhs,
        rhs,
        margin: rhs - lhs,
        holds: rhs > lhs,
        preconditions_met: true,
        binding: false,
    };
    Ok(CounterexampleReport {
        report,
        x,
        epsilon,
        c,
        x0: scan_x0(ef, cf),
        d_closed,
        d_eps_closed,
        d_computed,
        d_eps_computed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scaling_case_is_tight() {
        let m = DenseMatrix::<f64>::identity(4);
        let mp = m.scale(1.5);
        for kind in NormKind::ALL {
            let r = bound_spectrum(&m, &mp, kind).unwrap();
            let expect = 0.5 * kind.of_identity::<f64>(4);
            assert!((r.lhs - expect).abs() < 1e-12, "{kind}");
            assert!((r.rhs - expect).abs() < 1e-12, "{kind}");
            assert!(r.holds);
        }
    }

    #[test]
    fn bhatia_jain_identity_pair() {
        let m = DenseMatrix::<f64>::identity(2);
        let r = bound_bhatia_jain(&m, &m.scale(2.0)).unwrap();
        assert!((r.report.lhs - 1.0).abs() < 1e-14);
        assert!((r.report.rhs - (1.0 + 2f64.sqrt())).abs() < 1e-14);
        let same = bound_bhatia_jain(&m, &m).unwrap();
        assert_eq!((same.report.lhs, same.report.rhs), (0.0, 0.0));
        assert!(same.report.holds);
    }

    #[test]
    fn fires_at_thirty_three() {
        let r = counterexample_scaling(33.0f64, 0.05, 1.0).unwrap();
        assert!(r.report.holds);
        assert!((r.report.rhs - 0.29227).abs() < 1e-5);
        assert!((r.report.lhs - 0.26926).abs() < 1e-5);
        assert_eq!(r.x0, 29);
    }

    #[test]
    fn does_not_fire_at_one() {
        let r = counterexample_scaling(1.0f64, 0.05, 1.0).unwrap();
        assert!(!r.report.holds);
    }

    #[test]
    fn validity_range() {
        assert!(counterexample_scaling(0.5f64, 0.05, 1.0).is_err());
        assert!(counterexample_scaling(33.0f64, 0.1, 1.0).is_err());
        assert!(counterexample_scaling(33.0f64, 0.05, 0.0).is_err());
    }
}
