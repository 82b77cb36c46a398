use serde::{Deserialize, Serialize};

use super::DenseMatrix;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Relative off-diagonal level at which a Jacobi run is declared converged.
pub const JACOBI_TOL: f64 = 1e-14;
/// Hard sweep cap for the cyclic Jacobi iteration.
pub const MAX_SWEEPS: usize = 100;
/// Relative asymmetry accepted by [`sym_eig`].
pub const SYMMETRY_TOL: f64 = 1e-12;

/// Eigen-decomposition of a symmetric matrix.
///
/// Eigenvalues are ascending; column `i` of `eigenvectors` is the unit
/// eigenvector for `eigenvalues[i]`, with its largest-magnitude component
/// positive (lowest index wins ties).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct Spectrum<T> {
    pub eigenvalues: Vec<T>,
    pub eigenvectors: DenseMatrix<T>,
}

impl<T: Scalar> Spectrum<T> {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn min(&self) -> T {
        self.eigenvalues.first().copied().unwrap_or_else(T::zero)
    }

    pub fn max(&self) -> T {
        self.eigenvalues.last().copied().unwrap_or_else(T::zero)
    }

    /// Largest eigenvalue magnitude, i.e. the operator norm of the matrix.
    pub fn spectral_radius(&self) -> T {
        self.min().abs().max(self.max().abs())
    }

    /// `V f(Λ) Vᵀ`, symmetrized.
    pub fn apply(&self, f: impl Fn(T) -> T) -> DenseMatrix<T> {
        let n = self.dim();
        let v = &self.eigenvectors;
        let fl: Vec<T> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        let mut out = DenseMatrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let mut acc = T::zero();
                for (k, &w) in fl.iter().enumerate() {
                    acc += v[(i, k)] * w * v[(j, k)];
                }
                out[(i, j)] = acc;
                out[(j, i)] = acc;
            }
        }
        out
    }

    /// `VΛVᵀ`.
    pub fn reconstruct(&self) -> DenseMatrix<T> {
        self.apply(|l| l)
    }

    /// Orthogonal projector onto the span of eigenvectors `indices`.
    pub fn projector(&self, indices: impl IntoIterator<Item = usize>) -> DenseMatrix<T> {
        let n = self.dim();
        let mut p = DenseMatrix::zeros(n, n);
        for k in indices {
            for i in 0..n {
                for j in 0..n {
                    p[(i, j)] += self.eigenvectors[(i, k)] * self.eigenvectors[(j, k)];
                }
            }
        }
        p
    }
}

/// Symmetric eigen-decomposition by cyclic Jacobi rotations with threshold
/// sweeps.
pub fn sym_eig<T: Scalar>(a: &DenseMatrix<T>) -> Result<Spectrum<T>> {
    super::require_symmetric(a)?;
    let (values, vectors) = jacobi(a.symmetrize())?;
    Ok(canonicalize(values, vectors))
}

/// Runs Jacobi on an already-symmetric matrix and returns the raw diagonal and
/// accumulated rotations.
fn jacobi<T: Scalar>(mut a: DenseMatrix<T>) -> Result<(Vec<T>, DenseMatrix<T>)> {
    let n = a.rows();
    let mut v = DenseMatrix::identity(n);
    let target = T::tol(JACOBI_TOL) * a.frobenius();
    let hundred = T::of(100.0);
    let half = T::of(0.5);

    for sweep in 0..=MAX_SWEEPS {
        let off = off_diagonal_norm(&a);
        if off <= target {
            return Ok((a.diagonal(), v));
        }
        if sweep == MAX_SWEEPS {
            break;
        }
        let threshold = if sweep < 3 {
            T::of(0.2) * off / T::of((n * n) as f64)
        } else {
            T::zero()
        };
        for p in 0..n.saturating_sub(1) {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                let g = hundred * apq.abs();
                let app = a[(p, p)];
                let aqq = a[(q, q)];
                if sweep > 3 && app.abs() + g == app.abs() && aqq.abs() + g == aqq.abs() {
                    a[(p, q)] = T::zero();
                    a[(q, p)] = T::zero();
                    continue;
                }
                if apq.abs() <= threshold || apq == T::zero() {
                    continue;
                }
                let h = aqq - app;
                let t = if h.abs() + g == h.abs() {
                    apq / h
                } else {
                    let theta = half * h / apq;
                    let t = T::one() / (theta.abs() + (T::one() + theta * theta).sqrt());
                    if theta < T::zero() {
                        -t
                    } else {
                        t
                    }
                };
                let c = T::one() / (T::one() + t * t).sqrt();
                let s = t * c;
                let tau = s / (T::one() + c);
                a[(p, p)] = app - t * apq;
                a[(q, q)] = aqq + t * apq;
                a[(p, q)] = T::zero();
                a[(q, p)] = T::zero();
                for r in 0..n {
                    if r == p || r == q {
                        continue;
                    }
                    let arp = a[(r, p)];
                    let arq = a[(r, q)];
                    let new_p = arp - s * (arq + arp * tau);
                    let new_q = arq + s * (arp - arq * tau);
                    a[(r, p)] = new_p;
                    a[(p, r)] = new_p;
                    a[(r, q)] = new_q;
                    a[(q, r)] = new_q;
                }
                for r in 0..n {
                    let vrp = v[(r, p)];
                    let vrq = v[(r, q)];
                    v[(r, p)] = vrp - s * (vrq + vrp * tau);
                    v[(r, q)] = vrq + s * (vrp - vrq * tau);
                }
            }
        }
    }
    Err(Error::NoConvergence { sweeps: MAX_SWEEPS })
}

fn off_diagonal_norm<T: Scalar>(a: &DenseMatrix<T>) -> T {
    let n = a.rows();
    let mut off = DenseMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            if i != j {
                off[(i, j)] = a[(i, j)];
            }
        }
    }
    off.frobenius()
}

/// Sorts ascending (stable) and fixes eigenvector signs.
fn canonicalize<T: Scalar>(values: Vec<T>, vectors: DenseMatrix<T>) -> Spectrum<T> {
    let n = values.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| values[i].partial_cmp(&values[j]).expect("finite eigenvalues"));
    let mut eigenvectors = DenseMatrix::zeros(n, n);
    let mut eigenvalues = Vec::with_capacity(n);
    for (dst, &src) in order.iter().enumerate() {
        eigenvalues.push(values[src]);
        let mut col = vectors.column(src);
        let mut lead = 0;
        for (i, x) in col.iter().enumerate() {
            if x.abs() > col[lead].abs() {
                lead = i;
            }
        }
        if col[lead] < T::zero() {
            col.iter_mut().for_each(|x| *x = -*x);
        }
        eigenvectors.set_column(dst, &col);
    }
    Spectrum {
        eigenvalues,
        eigenvectors,
    }
}
