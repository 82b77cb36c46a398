//! Dense real matrix kernels: symmetric eigen-decomposition, matrix functions
//! of positive (semi)definite matrices, unitarily invariant norms, singular
//! values and condition numbers.
//!
//! Everything here is self-contained; the eigensolver is cyclic Jacobi and
//! the singular values come from one-sided Jacobi.

mod eigen;
mod matrix;
mod svd;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use eigen::{sym_eig, Spectrum, JACOBI_TOL, MAX_SWEEPS, SYMMETRY_TOL};
pub use matrix::DenseMatrix;
pub use svd::{euclidean, singular_values};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Negative eigenvalues down to `-PSD_TOL * ‖A‖` are clamped to zero.
pub const PSD_TOL: f64 = 1e-10;
/// Smallest eigenvalue accepted as positive, relative to `‖A‖`.
pub const PD_TOL: f64 = 1e-12;

/// The unitarily invariant norms implemented by [`norm`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NormKind {
    /// Largest singular value.
    Operator,
    /// Root sum of squared entries.
    Frobenius,
    /// Sum of singular values.
    Trace,
}

impl NormKind {
    pub const ALL: [NormKind; 3] = [NormKind::Operator, NormKind::Frobenius, NormKind::Trace];

    /// Norm of the `n x n` identity.
    pub fn of_identity<T: Scalar>(self, n: usize) -> T {
        let n = T::of(n as f64);
        match self {
            NormKind::Operator => T::one(),
            NormKind::Frobenius => n.sqrt(),
            NormKind::Trace => n,
        }
    }

    /// Evaluates the norm from a list of singular values.
    pub fn from_singular_values<T: Scalar>(self, sv: &[T]) -> T {
        match self {
            NormKind::Operator => sv.iter().fold(T::zero(), |m, &s| m.max(s.abs())),
            NormKind::Frobenius => euclidean(sv),
            NormKind::Trace => sv.iter().fold(T::zero(), |a, &s| a + s.abs()),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            NormKind::Operator => "operator",
            NormKind::Frobenius => "frobenius",
            NormKind::Trace => "trace",
        }
    }
}

impl fmt::Display for NormKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for NormKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "op" | "operator" | "spectral" => Ok(NormKind::Operator),
            "fro" | "frobenius" => Ok(NormKind::Frobenius),
            "trace" | "nuclear" => Ok(NormKind::Trace),
            other => Err(format!("unknown norm kind `{other}` (expected op, fro or trace)")),
        }
    }
}

/// Unitarily invariant norm of any real matrix.
pub fn norm<T: Scalar>(a: &DenseMatrix<T>, kind: NormKind) -> Result<T> {
    a.require_finite()?;
    match kind {
        NormKind::Frobenius => Ok(a.frobenius()),
        _ => Ok(kind.from_singular_values(&singular_values(a)?)),
    }
}

/// Operator norm (largest singular value).
pub fn operator_norm<T: Scalar>(a: &DenseMatrix<T>) -> Result<T> {
    norm(a, NormKind::Operator)
}

/// Checks positive definiteness on an existing spectrum.
fn require_pd<T: Scalar>(spectrum: &Spectrum<T>) -> Result<()> {
    let floor = T::tol(PD_TOL) * spectrum.spectral_radius();
    let min = spectrum.min();
    if min <= floor || min <= T::zero() {
        return Err(Error::NotPositiveDefinite {
            min_eigenvalue: min.as_f64(),
        });
    }
    Ok(())
}

/// Eigen-decomposition of a symmetric positive definite matrix, rejecting
/// eigenvalues at or below `PD_TOL * ‖A‖`.
pub fn spd_eig<T: Scalar>(a: &DenseMatrix<T>) -> Result<Spectrum<T>> {
    let s = sym_eig(a)?;
    require_pd(&s)?;
    Ok(s)
}

/// Symmetric PSD square root.
pub fn psd_sqrt<T: Scalar>(a: &DenseMatrix<T>) -> Result<DenseMatrix<T>> {
    let s = sym_eig(a)?;
    let floor = -T::tol(PSD_TOL) * s.spectral_radius();
    if s.min() < floor {
        return Err(Error::NotPsd {
            min_eigenvalue: s.min().as_f64(),
        });
    }
    Ok(s.apply(|l| l.max(T::zero()).sqrt()))
}

/// `A^{-1/2}` of a symmetric positive definite matrix.
pub fn spd_inverse_sqrt<T: Scalar>(a: &DenseMatrix<T>) -> Result<DenseMatrix<T>> {
    Ok(spd_eig(a)?.apply(|l| T::one() / l.sqrt()))
}

/// Inverse of a symmetric positive definite matrix.
pub fn spd_inverse<T: Scalar>(a: &DenseMatrix<T>) -> Result<DenseMatrix<T>> {
    Ok(spd_eig(a)?.apply(|l| T::one() / l))
}

/// `λ_max / λ_min` of a symmetric positive definite matrix.
pub fn condition_number<T: Scalar>(a: &DenseMatrix<T>) -> Result<T> {
    let s = spd_eig(a)?;
    Ok(s.max() / s.min())
}

/// Checks `A` is square, finite and symmetric within `SYMMETRY_TOL`.
pub fn require_symmetric<T: Scalar>(a: &DenseMatrix<T>) -> Result<usize> {
    let n = a.require_square()?;
    a.require_finite()?;
    let tolerance = T::tol(SYMMETRY_TOL) * a.frobenius();
    let asym = a.asymmetry();
    if asym > tolerance {
        return Err(Error::NotSymmetric {
            asymmetry: asym.as_f64(),
            tolerance: tolerance.as_f64(),
        });
    }
    Ok(n)
}

/// LU factorization with partial pivoting; `None` when a pivot vanishes.
struct Lu<T> {
    lu: DenseMatrix<T>,
    perm: Vec<usize>,
    sign: T,
}

fn lu<T: Scalar>(a: &DenseMatrix<T>) -> Result<Option<Lu<T>>> {
    let n = a.require_square()?;
    a.require_finite()?;
    let mut m = a.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut sign = T::one();
    let floor = T::epsilon() * T::of(n.max(1) as f64) * a.max_abs();
    for k in 0..n {
        let mut piv = k;
        for i in (k + 1)..n {
            if m[(i, k)].abs() > m[(piv, k)].abs() {
                piv = i;
            }
        }
        if m[(piv, k)].abs() <= floor || m[(piv, k)] == T::zero() {
            return Ok(None);
        }
        if piv != k {
            for j in 0..n {
                let tmp = m[(k, j)];
                m[(k, j)] = m[(piv, j)];
                m[(piv, j)] = tmp;
            }
            perm.swap(k, piv);
            sign = -sign;
        }
        for i in (k + 1)..n {
            let f = m[(i, k)] / m[(k, k)];
            m[(i, k)] = f;
            for j in (k + 1)..n {
                let u = m[(k, j)];
                m[(i, j)] -= f * u;
            }
        }
    }
    Ok(Some(Lu { lu: m, perm, sign }))
}

/// General inverse by LU with partial pivoting.
pub fn inverse<T: Scalar>(a: &DenseMatrix<T>) -> Result<DenseMatrix<T>> {
    let f = lu(a)?.ok_or(Error::NotInvertible)?;
    let n = a.rows();
    let mut inv = DenseMatrix::zeros(n, n);
    for col in 0..n {
        let mut x: Vec<T> = (0..n)
            .map(|i| if f.perm[i] == col { T::one() } else { T::zero() })
            .collect();
        for i in 0..n {
            for k in 0..i {
                let l = f.lu[(i, k)];
                x[i] = x[i] - l * x[k];
            }
        }
        for i in (0..n).rev() {
            for k in (i + 1)..n {
                let u = f.lu[(i, k)];
                x[i] = x[i] - u * x[k];
            }
            x[i] /= f.lu[(i, i)];
        }
        inv.set_column(col, &x);
    }
    Ok(inv)
}

/// Determinant by LU; exactly zero for numerically singular input.
pub fn determinant<T: Scalar>(a: &DenseMatrix<T>) -> Result<T> {
    Ok(match lu(a)? {
        Some(f) => f.lu.diagonal().into_iter().fold(f.sign, |acc, d| acc * d),
        None => T::zero(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[[f64; 2]]) -> DenseMatrix<f64> {
        DenseMatrix::from_rows(rows).unwrap()
    }

    #[test]
    fn norms_of_small_examples() {
        let i3 = DenseMatrix::<f64>::identity(3);
        assert!((norm(&i3, NormKind::Trace).unwrap() - 3.0).abs() < 1e-15);
        let d = m(&[[3.0, 0.0], [0.0, -4.0]]);
        assert!((norm(&d, NormKind::Operator).unwrap() - 4.0).abs() < 1e-15);
        let e = m(&[[2.0, -5.0], [-5.0, -2.0]]);
        let r29 = 29f64.sqrt();
        assert!((norm(&e, NormKind::Operator).unwrap() - r29).abs() < 1e-14);
        assert!((norm(&e, NormKind::Trace).unwrap() - 2.0 * r29).abs() < 1e-14);
        assert!((norm(&e, NormKind::Frobenius).unwrap() - 58f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn sqrt_and_inverse_of_diagonals() {
        assert_eq!(
            psd_sqrt(&DenseMatrix::<f64>::identity(3)).unwrap(),
            DenseMatrix::identity(3)
        );
        let r = psd_sqrt(&DenseMatrix::from_diagonal(&[4.0, 9.0])).unwrap();
        assert_eq!(r, DenseMatrix::from_diagonal(&[2.0, 3.0]));
        let inv = spd_inverse(&DenseMatrix::from_diagonal(&[2.0, 4.0])).unwrap();
        assert_eq!(inv, DenseMatrix::from_diagonal(&[0.5, 0.25]));
        assert_eq!(
            spd_inverse(&DenseMatrix::<f64>::identity(2)).unwrap(),
            DenseMatrix::identity(2)
        );
    }

    #[test]
    fn condition_numbers() {
        assert_eq!(condition_number(&DenseMatrix::<f64>::identity(4)).unwrap(), 1.0);
        assert_eq!(
            condition_number(&DenseMatrix::from_diagonal(&[4.0, 1.0])).unwrap(),
            4.0
        );
    }

    #[test]
    fn definiteness_errors() {
        let indefinite = DenseMatrix::from_diagonal(&[1.0, -1.0]);
        assert!(matches!(psd_sqrt(&indefinite), Err(Error::NotPsd { .. })));
        assert!(matches!(
            spd_inverse(&indefinite),
            Err(Error::NotPositiveDefinite { .. })
        ));
        let singular = DenseMatrix::from_diagonal(&[1.0, 0.0]);
        assert!(matches!(
            condition_number(&singular),
            Err(Error::NotPositiveDefinite { .. })
        ));
        // tiny negative eigenvalues are clamped
        let nearly = DenseMatrix::from_diagonal(&[1.0, -1e-13]);
        assert_eq!(psd_sqrt(&nearly).unwrap(), DenseMatrix::from_diagonal(&[1.0, 0.0]));
    }

    #[test]
    fn general_inverse_and_determinant() {
        let a = m(&[[0.0, 2.0], [1.0, 1.0]]);
        let inv = inverse(&a).unwrap();
        let prod = &a * &inv;
        assert!((&prod - &DenseMatrix::identity(2)).max_abs() < 1e-15);
        assert!((determinant(&a).unwrap() + 2.0).abs() < 1e-15);
        let singular = m(&[[1.0, 2.0], [2.0, 4.0]]);
        assert_eq!(inverse(&singular), Err(Error::NotInvertible));
        assert_eq!(determinant(&singular).unwrap(), 0.0);
    }

    #[test]
    fn norm_kind_parsing() {
        assert_eq!("op".parse::<NormKind>().unwrap(), NormKind::Operator);
        assert_eq!("fro".parse::<NormKind>().unwrap(), NormKind::Frobenius);
        assert_eq!("trace".parse::<NormKind>().unwrap(), NormKind::Trace);
        assert!("max".parse::<NormKind>().is_err());
    }
}
