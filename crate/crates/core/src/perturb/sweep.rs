use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{
    bound_bhatia_jain, bound_gram, bound_s, bound_spectrum, check_kappa_growth,
    check_woodbury_norm, unit_symmetric, BoundReport, PerturbationCase,
};
use crate::densemat::{DenseMatrix, NormKind};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Points with `lhs` at or below this are left out of the slope fit.
pub const SLOPE_FLOOR: f64 = 1e-14;

/// Which bound a sweep evaluates at each ε.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundSelector {
    Spectrum,
    BhatiaJain,
    Diagonalizer,
    Gram,
    Woodbury,
    KappaGrowth,
}

impl BoundSelector {
    pub const ALL: [BoundSelector; 6] = [
        BoundSelector::Spectrum,
        BoundSelector::BhatiaJain,
        BoundSelector::Diagonalizer,
        BoundSelector::Gram,
        BoundSelector::Woodbury,
        BoundSelector::KappaGrowth,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            BoundSelector::Spectrum => "spectrum",
            BoundSelector::BhatiaJain => "bhatia-jain",
            BoundSelector::Diagonalizer => "diagonalizer",
            BoundSelector::Gram => "gram",
            BoundSelector::Woodbury => "woodbury",
            BoundSelector::KappaGrowth => "kappa-growth",
        }
    }

    /// Evaluates the bound for `(M, M + εE)`.
    pub fn evaluate<T: Scalar>(
        self,
        m: &DenseMatrix<T>,
        e: &DenseMatrix<T>,
        epsilon: T,
        kind: NormKind,
    ) -> Result<BoundReport<T>> {
        match self {
            BoundSelector::Woodbury => check_woodbury_norm(m, e, epsilon),
            BoundSelector::KappaGrowth => check_kappa_growth(m, e, epsilon),
            _ => {
                let case = PerturbationCase::new(m, e, epsilon)?;
                match self {
                    BoundSelector::Spectrum => bound_spectrum(&case.m, &case.perturbed(), kind),
                    BoundSelector::BhatiaJain => {
                        bound_bhatia_jain(&case.m, &case.perturbed()).map(|r| r.report)
                    }
                    BoundSelector::Diagonalizer => bound_s(&case),
                    _ => bound_gram(&case),
                }
            }
        }
    }
}

impl fmt::Display for BoundSelector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for BoundSelector {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Self::ALL
            .into_iter()
            .find(|b| b.as_str() == s)
            .or(match s {
                "s" | "prop4" => Some(BoundSelector::Diagonalizer),
                "kappa" => Some(BoundSelector::KappaGrowth),
                _ => None,
            })
            .ok_or_else(|| {
                let names: Vec<_> = Self::ALL.iter().map(|b| b.as_str()).collect();
                format!("unknown bound `{s}` (expected one of {})", names.join(", "))
            })
    }
}

/// One grid point: either a report or the error that prevented it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct SweepPoint<T> {
    pub epsilon: T,
    pub report: Option<BoundReport<T>>,
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct SweepReport<T> {
    pub description: String,
    pub selector: BoundSelector,
    pub points: Vec<SweepPoint<T>>,
    /// Least-squares slope of `ln lhs` against `ln ε`.
    pub slope: Option<T>,
    /// Number of points entering the fit.
    pub fitted: usize,
}

impl<T: Scalar> SweepReport<T> {
    pub fn reports(&self) -> impl Iterator<Item = (T, &BoundReport<T>)> {
        self.points
            .iter()
            .filter_map(|p| p.report.as_ref().map(|r| (p.epsilon, r)))
    }

    pub fn any_violation(&self) -> bool {
        self.reports().any(|(_, r)| r.is_violation())
    }
}

/// Slope of the least-squares line through `(ln ε, ln lhs)` for points with
/// `lhs > SLOPE_FLOOR`; `None` with fewer than two usable points.
pub fn fit_slope<T: Scalar>(points: &[(T, T)]) -> (Option<T>, usize) {
    let floor = T::of(SLOPE_FLOOR);
    let xy: Vec<(T, T)> = points
        .iter()
        .filter(|(e, l)| *l > floor && *e > T::zero())
        .map(|&(e, l)| (e.ln(), l.ln()))
        .collect();
    let k = xy.len();
    if k < 2 {
        return (None, k);
    }
    let kt = T::of(k as f64);
    let mx = xy.iter().fold(T::zero(), |a, p| a + p.0) / kt;
    let my = xy.iter().fold(T::zero(), |a, p| a + p.1) / kt;
    let sxx = xy.iter().fold(T::zero(), |a, p| a + (p.0 - mx) * (p.0 - mx));
    let sxy = xy.iter().fold(T::zero(), |a, p| a + (p.0 - mx) * (p.1 - my));
    if sxx == T::zero() {
        return (None, k);
    }
    (Some(sxy / sxx), k)
}

/// Evaluates `selector` at every ε of a strictly increasing grid. Failures at
/// individual points are recorded in the report rather than returned.
pub fn sweep<T: Scalar>(
    m: &DenseMatrix<T>,
    e: &DenseMatrix<T>,
    grid: &[T],
    selector: BoundSelector,
    kind: NormKind,
) -> Result<SweepReport<T>> {
    if grid.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::PreconditionViolated(
            "epsilon grid must be strictly increasing".into(),
        ));
    }
    let e = unit_symmetric(e)?;
    let points: Vec<SweepPoint<T>> = grid
        .iter()
        .map(|&eps| match selector.evaluate(m, &e, eps, kind) {
            Ok(r) => SweepPoint {
                epsilon: eps,
                report: Some(r),
                error: None,
            },
            Err(err) => SweepPoint {
                epsilon: eps,
                report: None,
                error: Some(err.to_string()),
            },
        })
        .collect();
    let pairs: Vec<(T, T)> = points
        .iter()
        .filter_map(|p| p.report.as_ref().map(|r| (p.epsilon, r.lhs)))
        .collect();
    let (slope, fitted) = fit_slope(&pairs);
    Ok(SweepReport {
        description: format!("{selector} sweep, dimension {}, {} points", m.rows(), grid.len()),
        selector,
        points,
        slope,
        fitted,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slope_of_power_law() {
        let pts: Vec<(f64, f64)> = [1e-4, 1e-3, 1e-2].iter().map(|&e| (e, 3.0 * e * e)).collect();
        let (s, k) = fit_slope(&pts);
        assert_eq!(k, 3);
        assert!((s.unwrap() - 2.0).abs() < 1e-12);
        assert_eq!(fit_slope::<f64>(&[(1e-3, 0.0)]), (None, 0));
    }

    #[test]
    fn rejects_unsorted_grid() {
        let m = DenseMatrix::<f64>::identity(2);
        assert!(sweep(&m, &m, &[1e-2, 1e-3], BoundSelector::Spectrum, NormKind::Operator).is_err());
    }

    #[test]
    fn failing_points_are_recorded() {
        let m = DenseMatrix::<f64>::identity(2);
        let e = DenseMatrix::from_diagonal(&[-1.0, 0.0]);
        let r = sweep(&m, &e, &[2.0, 3.0], BoundSelector::Spectrum, NormKind::Operator).unwrap();
        assert_eq!(r.reports().count(), 0);
        assert_eq!(r.slope, None);
        assert!(r.points.iter().all(|p| p.error.is_some()));
    }

    #[test]
    fn selector_names_round_trip() {
        for b in BoundSelector::ALL {
            assert_eq!(b.as_str().parse::<BoundSelector>().unwrap(), b);
        }
    }
}
