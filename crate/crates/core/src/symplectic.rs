//! Standard symplectic form, symplectic spectra and Williamson normal forms.
//!
//! For a real symmetric positive definite `M` of size `2n` there is a
//! symplectic `S` with `SᵀMS = diag(d, d)`, `d₁ ≥ … ≥ dₙ > 0`. The `d` are the
//! positive eigenvalues of `iσM`.
//!
//! The factorization is built as `S = M^{-1/2} K diag(d,d)^{1/2}` with `K`
//! orthogonal. The columns of `K` come from the real antisymmetric matrix
//! `B = M^{-1/2} σ M^{-1/2}`: the embedding `[[0, -B], [B, 0]]` is symmetric,
//! its eigenvalues are `±1/dⱼ`, each doubled, and every eigenvector `[a; b]`
//! for `+1/dⱼ` yields a pair `x = a/‖a‖`, `y = -b/‖b‖` with `y = -dⱼ B x`.
//! Degenerate eigenspaces are paired deterministically by projecting the
//! canonical basis vectors in order.

use serde::{Deserialize, Serialize};

use crate::densemat::{
    euclidean, norm, psd_sqrt, spd_eig, sym_eig, DenseMatrix, NormKind,
};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Relative closeness under which eigenvalues of the embedding are grouped.
pub const GROUP_TOL: f64 = 1e-8;
/// Seeds whose projected residual falls below this are skipped.
pub const SEED_TOL: f64 = 1e-6;
/// Orthogonality defect of `K` (and pairing defect) tolerated before failing.
pub const PAIRING_TOL: f64 = 1e-8;
/// Relative spectral gap below which gauge alignment is refused.
pub const GAP_TOL: f64 = 1e-8;

/// `σ = [[0, I], [-I, 0]]` of size `2n`.
pub fn standard_form<T: Scalar>(n: usize) -> Result<DenseMatrix<T>> {
    if n == 0 {
        return Err(Error::ZeroModes);
    }
    let mut s = DenseMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        s[(i, n + i)] = T::one();
        s[(n + i, i)] = -T::one();
    }
    Ok(s)
}

/// Number of modes of a square matrix of even dimension.
pub fn mode_count<T: Scalar>(m: &DenseMatrix<T>) -> Result<usize> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    match m.rows() {
        0 => Err(Error::ZeroModes),
        k if k % 2 == 1 => Err(Error::OddDimension(k)),
        k => Ok(k / 2),
    }
}

/// `σA`, computed by row shuffling.
fn sigma_left<T: Scalar>(a: &DenseMatrix<T>) -> DenseMatrix<T> {
    let n = a.rows() / 2;
    DenseMatrix::from_fn(a.rows(), a.cols(), |i, j| {
        if i < n {
            a[(i + n, j)]
        } else {
            -a[(i - n, j)]
        }
    })
}

/// `Aσ`, computed by column shuffling.
fn sigma_right<T: Scalar>(a: &DenseMatrix<T>) -> DenseMatrix<T> {
    let n = a.cols() / 2;
    DenseMatrix::from_fn(a.rows(), a.cols(), |i, j| {
        if j < n {
            -a[(i, j + n)]
        } else {
            a[(i, j - n)]
        }
    })
}

/// `‖SᵀσS − σ‖` in operator norm.
pub fn symplectic_defect<T: Scalar>(s: &DenseMatrix<T>) -> Result<T> {
    let n = mode_count(s)?;
    let st_sigma_s = &s.transpose() * &sigma_left(s);
    let diff = &st_sigma_s - &standard_form(n)?;
    norm(&diff, NormKind::Operator)
}

/// Whether `‖SᵀσS − σ‖_op ≤ tol`.
pub fn is_symplectic<T: Scalar>(s: &DenseMatrix<T>, tol: T) -> Result<bool> {
    Ok(symplectic_defect(s)? <= tol)
}

/// `S⁻¹ = -σSᵀσ` for symplectic `S`.
pub fn symplectic_inverse<T: Scalar>(s: &DenseMatrix<T>) -> Result<DenseMatrix<T>> {
    mode_count(s)?;
    Ok(-&sigma_right(&sigma_left(&s.transpose())))
}

/// `S^{-T} S^{-1}` of a symplectic `S`. For a Williamson diagonalizer of `M`
/// this does not depend on the gauge.
pub fn gram<T: Scalar>(s: &DenseMatrix<T>) -> Result<DenseMatrix<T>> {
    let inv = symplectic_inverse(s)?;
    Ok((&inv.transpose() * &inv).symmetrize())
}

/// `ac - b²` with a single rounding error (Kahan).
fn det2<T: Scalar>(a: T, b: T, c: T) -> T {
    let w = b * b;
    let e = (-b).mul_add(b, w);
    let f = a.mul_add(c, -w);
    f + e
}

/// Symplectic eigenvalues of an SPD matrix, descending.
///
/// For `n > 1` these are the singular values of `A = M^{1/2} σ M^{1/2}`,
/// read off the symmetric embedding `[[0, -A], [A, 0]]` and collapsed pairwise.
/// For `n = 1` the value is `√det M`.
pub fn symplectic_spectrum<T: Scalar>(m: &DenseMatrix<T>) -> Result<Vec<T>> {
    let n = mode_count(m)?;
    spd_eig(m)?;
    if n == 1 {
        let d = det2(m[(0, 0)], T::of(0.5) * (m[(0, 1)] + m[(1, 0)]), m[(1, 1)]);
        if d <= T::zero() {
            return Err(Error::NotPositiveDefinite {
                min_eigenvalue: d.as_f64(),
            });
        }
        return Ok(vec![d.sqrt()]);
    }
    let root = psd_sqrt(m)?;
    let a = &root * &sigma_left(&root);
    let a = (&a - &a.transpose()).scale(T::of(0.5));
    let g = embed(&a);
    let spec = sym_eig(&g)?;
    let m2 = 2 * n;
    // The top 2n eigenvalues hold each dⱼ twice; walk them from the top.
    let top = &spec.eigenvalues[m2..];
    let mut d: Vec<T> = (0..n)
        .map(|j| {
            let hi = top[m2 - 1 - 2 * j];
            let lo = top[m2 - 2 - 2 * j];
            T::of(0.5) * (hi + lo)
        })
        .collect();
    d.sort_by(|x, y| y.partial_cmp(x).expect("finite spectrum"));
    Ok(d)
}

/// `[[0, -A], [A, 0]]` for antisymmetric `A`; symmetric with eigenvalues `±s(A)`.
fn embed<T: Scalar>(a: &DenseMatrix<T>) -> DenseMatrix<T> {
    let m = a.rows();
    DenseMatrix::from_fn(2 * m, 2 * m, |i, j| match (i < m, j < m) {
        (true, false) => -a[(i, j - m)],
        (false, true) => a[(i - m, j)],
        _ => T::zero(),
    })
}

/// Signed-spectrum gap `min |λᵢ − λⱼ|` over the eigenvalues `±dⱼ` of `iσM`.
pub fn signed_gap<T: Scalar>(d: &[T]) -> T {
    let mut gap = T::infinity();
    for (i, &a) in d.iter().enumerate() {
        gap = gap.min(T::of(2.0) * a.abs());
        for &b in &d[i + 1..] {
            gap = gap.min((a - b).abs());
        }
    }
    gap
}

/// Smallest gap between distinct symplectic eigenvalues (infinite for `n = 1`).
pub fn mode_gap<T: Scalar>(d: &[T]) -> T {
    let mut gap = T::infinity();
    for (i, &a) in d.iter().enumerate() {
        for &b in &d[i + 1..] {
            gap = gap.min((a - b).abs());
        }
    }
    gap
}

/// Options for [`williamson_with`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct WilliamsonOptions {
    /// Order in which canonical basis vectors seed degenerate eigenspaces.
    /// Defaults to `0, 1, …, 2n-1`.
    pub seed_order: Option<Vec<usize>>,
}

/// Williamson factorization `SᵀMS = diag(d, d)` of an SPD matrix.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct WilliamsonFactorization<T> {
    pub n_modes: usize,
    #[serde(rename = "S")]
    pub s: DenseMatrix<T>,
    pub d: Vec<T>,
    /// `‖SᵀMS − diag(d,d)‖_op`.
    pub residual_diag: T,
    /// `‖SᵀσS − σ‖_op`.
    pub residual_symp: T,
    /// Largest `|‖dⱼ B xⱼ‖ − 1|` seen while pairing.
    pub pairing_deviation: T,
    /// The factorized matrix.
    pub m: DenseMatrix<T>,
}

impl<T: Scalar> WilliamsonFactorization<T> {
    /// `diag(d, d)`.
    pub fn diagonal(&self) -> DenseMatrix<T> {
        let mut dd = self.d.clone();
        dd.extend_from_slice(&self.d);
        DenseMatrix::from_diagonal(&dd)
    }

    /// `S^{-T} S^{-1}`.
    pub fn gram(&self) -> Result<DenseMatrix<T>> {
        gram(&self.s)
    }
}

/// Williamson normal form with the canonical gauge.
pub fn williamson<T: Scalar>(m: &DenseMatrix<T>) -> Result<WilliamsonFactorization<T>> {
    williamson_with(m, &WilliamsonOptions::default())
}

pub fn williamson_with<T: Scalar>(
    m: &DenseMatrix<T>,
    opts: &WilliamsonOptions,
) -> Result<WilliamsonFactorization<T>> {
    let n = mode_count(m)?;
    let dim = 2 * n;
    let seeds: Vec<usize> = match &opts.seed_order {
        None => (0..dim).collect(),
        Some(order) => {
            let mut sorted = order.clone();
            sorted.sort_unstable();
            if sorted != (0..dim).collect::<Vec<_>>() {
                return Err(Error::BadIndices(format!(
                    "seed order must be a permutation of 0..{dim}"
                )));
            }
            order.clone()
        }
    };
    let m = m.symmetrize();
    let spec_m = spd_eig(&m)?;
    let inv_root = spec_m.apply(|l| T::one() / l.sqrt());
    let b = &inv_root * &sigma_left(&inv_root);
    let b = (&b - &b.transpose()).scale(T::of(0.5));
    let g = embed(&b);
    let spec = sym_eig(&g)?;

    // Positive half, ascending in 1/d.
    let w: Vec<T> = spec.eigenvalues[dim..].to_vec();
    let idx: Vec<usize> = (dim..2 * dim).collect();
    let groups = group_doubled(&w);

    let mut modes: Vec<(T, Vec<T>, Vec<T>)> = Vec::with_capacity(n);
    let mut deviation = T::zero();
    let seed_tol = T::tol(SEED_TOL);
    for (start, end) in groups {
        let want = (end - start) / 2;
        let p = spec.projector(idx[start..end].iter().copied());
        let mean = w[start..end].iter().fold(T::zero(), |a, &v| a + v) / T::of((end - start) as f64);
        let d = T::one() / mean;
        let mut chosen: Vec<Vec<T>> = Vec::with_capacity(want);
        for &k in &seeds {
            if chosen.len() == want {
                break;
            }
            let mut v = p.column(k);
            for u in &chosen {
                let ju = rotate_halves(u);
                for basis in [u, &ju] {
                    let dot = dotv(basis, &v);
                    v.iter_mut().zip(basis).for_each(|(x, &e)| *x -= dot * e);
                }
            }
            let nv = euclidean(&v);
            if nv < seed_tol {
                continue;
            }
            v.iter_mut().for_each(|x| *x /= nv);
            let (a, bb) = v.split_at(dim);
            let na = euclidean(a);
            let nb = euclidean(bb);
            if na < seed_tol || nb < seed_tol {
                continue;
            }
            let x: Vec<T> = a.iter().map(|&t| t / na).collect();
            let y: Vec<T> = bb.iter().map(|&t| -t / nb).collect();
            let dbx = euclidean(&b.mul_vec(&x)) * d;
            let dev = (dbx - T::one()).abs();
            if dev > T::tol(PAIRING_TOL) {
                return Err(Error::PairingFailure {
                    mode: modes.len(),
                    deviation: dev.as_f64(),
                });
            }
            deviation = deviation.max(dev);
            modes.push((d, x, y));
            chosen.push(v);
        }
        if chosen.len() != want {
            return Err(Error::PairingFailure {
                mode: modes.len(),
                deviation: 1.0,
            });
        }
    }
    if modes.len() != n {
        return Err(Error::PairingFailure {
            mode: modes.len(),
            deviation: 1.0,
        });
    }
    modes.sort_by(|a, b| b.0.partial_cmp(&a.0).expect("finite spectrum"));

    // Accurate symplectic eigenvalues replace the reciprocal group means.
    let d = symplectic_spectrum(&m)?;

    let mut k = DenseMatrix::zeros(dim, dim);
    for (j, (_, x, y)) in modes.iter().enumerate() {
        k.set_column(j, x);
        k.set_column(n + j, y);
    }
    let ortho = norm(&(&(&k.transpose() * &k) - &DenseMatrix::identity(dim)), NormKind::Operator)?;
    if ortho > T::tol(PAIRING_TOL) {
        return Err(Error::PairingFailure {
            mode: n,
            deviation: ortho.as_f64(),
        });
    }

    let mut half = Vec::with_capacity(dim);
    half.extend(d.iter().map(|v| v.sqrt()));
    half.extend(d.iter().map(|v| v.sqrt()));
    let s = &(&inv_root * &k) * &DenseMatrix::from_diagonal(&half);
    let mut dd = d.clone();
    dd.extend_from_slice(&d);
    let stms = &(&s.transpose() * &m) * &s;
    let residual_diag = norm(&(&stms - &DenseMatrix::from_diagonal(&dd)), NormKind::Operator)?;
    let residual_symp = symplectic_defect(&s)?;
    Ok(WilliamsonFactorization {
        n_modes: n,
        s,
        d,
        residual_diag,
        residual_symp,
        pairing_deviation: deviation,
        m,
    })
}

/// Splits ascending eigenvalues (each expected twice) into runs of even
/// length whose consecutive members agree to `GROUP_TOL` relative.
fn group_doubled<T: Scalar>(w: &[T]) -> Vec<(usize, usize)> {
    let tol = T::tol(GROUP_TOL);
    let mut groups = Vec::new();
    let mut i = 0;
    while i < w.len() {
        let mut j = (i + 2).min(w.len());
        while j < w.len() && (w[j] - w[j - 1]).abs() <= tol * w[j].abs().max(w[j - 1].abs()) {
            j = (j + 2).min(w.len());
        }
        groups.push((i, j));
        i = j;
    }
    groups
}

/// `[a; b] ↦ [-b; a]`, the partner eigenvector of the embedding.
fn rotate_halves<T: Scalar>(v: &[T]) -> Vec<T> {
    let m = v.len() / 2;
    let mut out = Vec::with_capacity(v.len());
    out.extend(v[m..].iter().map(|&t| -t));
    out.extend_from_slice(&v[..m]);
    out
}

fn dotv<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (&x, &y)| acc + x * y)
}

/// Result of rotating one factorization's gauge onto another's.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct GaugeAlignment<T> {
    /// Per-mode rotation angle of `other` relative to `ref`.
    pub angles: Vec<T>,
    #[serde(rename = "aligned_S")]
    pub aligned_s: DenseMatrix<T>,
    /// `‖ref.S − aligned_S‖_op`.
    pub distance: T,
    /// `‖aligned_Sᵀ M aligned_S − diag(d,d)‖_op` for `other`'s `M` and `d`.
    pub residual_diag: T,
    /// `‖aligned_Sᵀ σ aligned_S − σ‖_op`.
    pub residual_symp: T,
}

/// Rotates each mode's column pair `(j, n+j)` of `other.S` to best match
/// `reference.S` in Frobenius norm.
///
/// With a nondegenerate spectrum the diagonalizers of a fixed `M` differ
/// exactly by such planar rotations, so the returned angle for mode `j` is
/// `θ` when `other.S = reference.S · O(θ)`.
pub fn gauge_align<T: Scalar>(
    reference: &WilliamsonFactorization<T>,
    other: &WilliamsonFactorization<T>,
) -> Result<GaugeAlignment<T>> {
    if reference.s.rows() != other.s.rows() {
        return Err(Error::DimensionMismatch {
            left: reference.s.rows(),
            right: other.s.rows(),
        });
    }
    let n = reference.n_modes;
    let gap = mode_gap(&reference.d);
    let tolerance = T::tol(GAP_TOL) * reference.d[0];
    if gap <= tolerance {
        return Err(Error::DegenerateSpectrum {
            gap: gap.as_f64(),
            tolerance: tolerance.as_f64(),
        });
    }
    let mut aligned = other.s.clone();
    let mut angles = Vec::with_capacity(n);
    for j in 0..n {
        let (a, b) = (other.s.column(j), other.s.column(n + j));
        let (ar, br) = (reference.s.column(j), reference.s.column(n + j));
        let n11 = dotv(&ar, &a);
        let n22 = dotv(&br, &b);
        let n21 = dotv(&br, &a);
        let n12 = dotv(&ar, &b);
        let theta = (n21 - n12).atan2(n11 + n22);
        let (s, c) = theta.sin_cos();
        // other · O(θ)⁻¹
        let na: Vec<T> = a.iter().zip(&b).map(|(&x, &y)| c * x - s * y).collect();
        let nb: Vec<T> = a.iter().zip(&b).map(|(&x, &y)| s * x + c * y).collect();
        aligned.set_column(j, &na);
        aligned.set_column(n + j, &nb);
        angles.push(theta);
    }
    let distance = norm(&(&reference.s - &aligned), NormKind::Operator)?;
    let stms = &(&aligned.transpose() * &other.m) * &aligned;
    let residual_diag = norm(&(&stms - &other.diagonal()), NormKind::Operator)?;
    let residual_symp = symplectic_defect(&aligned)?;
    Ok(GaugeAlignment {
        angles,
        aligned_s: aligned,
        distance,
        residual_diag,
        residual_symp,
    })
}

/// Applies the per-mode rotation `O(θ)` on the right: `S · O(θ)`.
pub fn rotate_modes<T: Scalar>(s: &DenseMatrix<T>, angles: &[T]) -> Result<DenseMatrix<T>> {
    let n = mode_count(s)?;
    if angles.len() != n {
        return Err(Error::DimensionMismatch {
            left: n,
            right: angles.len(),
        });
    }
    let mut out = s.clone();
    for (j, &theta) in angles.iter().enumerate() {
        let (sn, c) = theta.sin_cos();
        let (a, b) = (s.column(j), s.column(n + j));
        let na: Vec<T> = a.iter().zip(&b).map(|(&x, &y)| c * x + sn * y).collect();
        let nb: Vec<T> = a.iter().zip(&b).map(|(&x, &y)| -sn * x + c * y).collect();
        out.set_column(j, &na);
        out.set_column(n + j, &nb);
    }
    Ok(out)
}
