//! Seeded generators for the randomized checks.
//!
//! Every generator draws from a caller-owned [`Rng`] so that a fixed seed
//! reproduces the same sequence of matrices on every platform.

use rand::{Rng as _, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::densemat::{euclidean, norm, DenseMatrix, NormKind};
use crate::scalar::Scalar;

pub type Rng = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn normal<T: Scalar>(rng: &mut Rng) -> T {
    T::of(rng.sample::<f64, _>(StandardNormal))
}

pub fn uniform<T: Scalar>(rng: &mut Rng, lo: f64, hi: f64) -> T {
    T::of(rng.random_range(lo..hi))
}

pub fn gaussian_matrix<T: Scalar>(rng: &mut Rng, rows: usize, cols: usize) -> DenseMatrix<T> {
    DenseMatrix::from_fn(rows, cols, |_, _| normal(rng))
}

/// Symmetric matrix with independent standard normal upper triangle.
pub fn symmetric<T: Scalar>(rng: &mut Rng, dim: usize) -> DenseMatrix<T> {
    let mut a = DenseMatrix::zeros(dim, dim);
    for i in 0..dim {
        for j in i..dim {
            let v = normal(rng);
            a[(i, j)] = v;
            a[(j, i)] = v;
        }
    }
    a
}

/// Symmetric matrix scaled to unit operator norm.
pub fn unit_symmetric<T: Scalar>(rng: &mut Rng, dim: usize) -> DenseMatrix<T> {
    let a = symmetric::<T>(rng, dim);
    let s = norm(&a, NormKind::Operator).expect("finite matrix");
    a.scale(T::one() / s)
}

/// Haar-ish orthogonal matrix from Gram–Schmidt (applied twice) on a Gaussian
/// matrix.
pub fn orthogonal<T: Scalar>(rng: &mut Rng, dim: usize) -> DenseMatrix<T> {
    let g = gaussian_matrix::<T>(rng, dim, dim);
    let mut cols: Vec<Vec<T>> = Vec::with_capacity(dim);
    for j in 0..dim {
        let mut v = g.column(j);
        for _ in 0..2 {
            for u in &cols {
                let dot = u.iter().zip(&v).fold(T::zero(), |a, (&x, &y)| a + x * y);
                v.iter_mut().zip(u).for_each(|(x, &e)| *x -= dot * e);
            }
        }
        let nv = euclidean(&v);
        v.iter_mut().for_each(|x| *x /= nv);
        cols.push(v);
    }
    let mut q = DenseMatrix::zeros(dim, dim);
    for (j, c) in cols.iter().enumerate() {
        q.set_column(j, c);
    }
    q
}

/// `Q diag(λ) Qᵀ` with `λ` log-uniform in `[1, kappa]`; the extremes are
/// pinned so the condition number is exactly `kappa` up to rounding.
pub fn spd<T: Scalar>(rng: &mut Rng, dim: usize, kappa: f64) -> DenseMatrix<T> {
    let q = orthogonal::<T>(rng, dim);
    let top = kappa.ln();
    let mut lam: Vec<f64> = (0..dim).map(|_| (rng.random::<f64>() * top).exp()).collect();
    if dim >= 2 {
        lam[0] = 1.0;
        lam[dim - 1] = kappa;
    }
    let lam: Vec<T> = lam.into_iter().map(T::of).collect();
    let qd = DenseMatrix::from_fn(dim, dim, |i, j| q[(i, j)] * lam[j]);
    (&qd * &q.transpose()).symmetrize()
}

/// Random symplectic matrix: a product of symmetric shears and a squeeze.
/// `spread` bounds the squeeze exponents and scales the shears.
pub fn symplectic<T: Scalar>(rng: &mut Rng, n: usize, spread: f64) -> DenseMatrix<T> {
    let shear = |rng: &mut Rng, upper: bool| {
        let a = symmetric::<T>(rng, n).scale(T::of(spread / (n as f64).sqrt()));
        let mut s = DenseMatrix::identity(2 * n);
        for i in 0..n {
            for j in 0..n {
                if upper {
                    s[(i, n + j)] = a[(i, j)];
                } else {
                    s[(n + i, j)] = a[(i, j)];
                }
            }
        }
        s
    };
    let mut squeeze = DenseMatrix::identity(2 * n);
    for i in 0..n {
        let r: T = uniform(rng, -spread, spread);
        squeeze[(i, i)] = r.exp();
        squeeze[(n + i, n + i)] = (-r).exp();
    }
    let a = shear(rng, true);
    let b = shear(rng, false);
    let c = shear(rng, true);
    &(&(&a * &b) * &squeeze) * &c
}

/// Valid covariance matrix `Sᵀ diag(ν, ν) S` with symplectic eigenvalues
/// drawn uniformly from `[lo, hi]`.
pub fn covariance<T: Scalar>(rng: &mut Rng, n: usize, lo: f64, hi: f64, spread: f64) -> DenseMatrix<T> {
    let nu: Vec<T> = (0..n).map(|_| uniform(rng, lo, hi.max(lo + f64::EPSILON))).collect();
    let mut dd = nu.clone();
    dd.extend_from_slice(&nu);
    let s = symplectic::<T>(rng, n, spread);
    (&(&s.transpose() * &DenseMatrix::from_diagonal(&dd)) * &s).symmetrize()
}

/// Uniformly random permutation of `0..len`.
pub fn permutation(rng: &mut Rng, len: usize) -> Vec<usize> {
    use rand::seq::SliceRandom;
    let mut p: Vec<usize> = (0..len).collect();
    p.shuffle(rng);
    p
}
