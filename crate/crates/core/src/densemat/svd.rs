use super::eigen::MAX_SWEEPS;
use super::DenseMatrix;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Singular values, descending.
///
/// These are the square roots of the eigenvalues of `AᵀA`, computed by
/// one-sided (Hestenes) Jacobi so that `AᵀA` is never formed and small
/// singular values keep absolute accuracy of order `eps * ‖A‖`.
pub fn singular_values<T: Scalar>(a: &DenseMatrix<T>) -> Result<Vec<T>> {
    a.require_finite()?;
    let (m, n) = (a.rows(), a.cols());
    // Work on columns of A (or Aᵀ when wide) stored contiguously.
    let (len, count, mut cols) = if m >= n {
        (m, n, (0..n).map(|j| a.column(j)).collect::<Vec<_>>())
    } else {
        (n, m, (0..m).map(|i| a.row(i).to_vec()).collect::<Vec<_>>())
    };
    let tol = T::epsilon() * T::of(len as f64);

    let mut converged = count < 2;
    for _ in 0..MAX_SWEEPS {
        if converged {
            break;
        }
        let mut rotated = false;
        for p in 0..count.saturating_sub(1) {
            for q in (p + 1)..count {
                let (alpha, beta, gamma) = dots(&cols[p], &cols[q]);
                if alpha == T::zero() || beta == T::zero() {
                    continue;
                }
                if gamma.abs() <= tol * alpha.sqrt() * beta.sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (T::of(2.0) * gamma);
                let t = zeta.signum() / (zeta.abs() + (T::one() + zeta * zeta).sqrt());
                let c = T::one() / (T::one() + t * t).sqrt();
                let s = c * t;
                let (left, right) = cols.split_at_mut(q);
                for (x, y) in left[p].iter_mut().zip(right[0].iter_mut()) {
                    let (xp, yq) = (*x, *y);
                    *x = c * xp - s * yq;
                    *y = s * xp + c * yq;
                }
            }
        }
        converged = !rotated;
    }
    if !converged {
        return Err(Error::NoConvergence { sweeps: MAX_SWEEPS });
    }
    let mut values: Vec<T> = cols.iter().map(|c| euclidean(c)).collect();
    values.sort_by(|x, y| y.partial_cmp(x).expect("finite singular values"));
    debug_assert_eq!(values.len(), count.min(len));
    Ok(values)
}

fn dots<T: Scalar>(x: &[T], y: &[T]) -> (T, T, T) {
    let mut a = T::zero();
    let mut b = T::zero();
    let mut g = T::zero();
    for (&u, &v) in x.iter().zip(y) {
        a += u * u;
        b += v * v;
        g += u * v;
    }
    (a, b, g)
}

/// Overflow-safe 2-norm of a vector.
pub fn euclidean<T: Scalar>(x: &[T]) -> T {
    let scale = x.iter().fold(T::zero(), |m, v| m.max(v.abs()));
    if scale == T::zero() {
        return T::zero();
    }
    let sum = x.iter().fold(T::zero(), |acc, &v| acc + (v / scale) * (v / scale));
    scale * sum.sqrt()
}
