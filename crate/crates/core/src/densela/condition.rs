//! Extreme singular values without a full SVD.
//!
//! The matrix (or its transpose, whichever is tall) is reduced to a square
//! triangular factor `R` by Householder QR, which preserves the singular
//! values and is backward stable. Lanczos with full reorthogonalisation is
//! then run on `R^T R` for `sigma_max^2` and on `(R^T R)^{-1}`, applied by
//! two triangular solves, for `1 / sigma_min^2`. The Gram matrix is never
//! formed, so no precision is lost to squaring.

use super::matrix::{axpy, dot, norm, DenseMatrix};
use super::qr::{solve_upper, solve_upper_transpose, HouseholderQr};
use super::random::{seeded_stream, standard_normals};
use crate::{Error, Result, Scalar};

/// Cap on Lanczos steps per extreme value.
pub const MAX_LANCZOS_STEPS: usize = 10_000;

/// Ratio below which `sigma_min / sigma_max` is treated as rank deficiency.
pub const RANK_TOLERANCE: f64 = 1e-14;

/// Largest and smallest singular values of a full-rank matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtremeSingularValues<T> {
    pub sigma_max: T,
    pub sigma_min: T,
}

impl<T: Scalar> ExtremeSingularValues<T> {
    pub fn condition_number(&self) -> T {
        self.sigma_max / self.sigma_min
    }
}

/// `sigma_max / sigma_min` of `a`, each extreme value to relative accuracy
/// about `tol`.
pub fn estimate_condition_number<T: Scalar>(a: &DenseMatrix<T>, tol: T) -> Result<T> {
    Ok(extreme_singular_values(a, tol)?.condition_number())
}

pub fn extreme_singular_values<T: Scalar>(
    a: &DenseMatrix<T>,
    tol: T,
) -> Result<ExtremeSingularValues<T>> {
    if !(tol > T::zero()) {
        return Err(Error::invalid("tolerance must be positive"));
    }
    if a.rows() == 0 || a.cols() == 0 {
        return Err(Error::invalid("empty matrix has no condition number"));
    }
    let qr = if a.rows() >= a.cols() {
        HouseholderQr::new(a)?
    } else {
        HouseholderQr::new(&a.transpose())?
    };
    let r = qr.r();
    let q = r.rows();

    let diag = qr.r_diagonal();
    let dmax = diag.iter().fold(T::zero(), |m, d| m.max(d.abs()));
    if dmax == T::zero() {
        return Err(Error::RankDeficient { sigma_max: 0.0, sigma_min: 0.0 });
    }
    if diag.iter().any(|d| *d == T::zero()) {
        return Err(Error::RankDeficient { sigma_max: dmax.to_f64_lossy(), sigma_min: 0.0 });
    }

    // Internal stopping threshold sits below the requested accuracy because
    // Ritz values approach the extreme eigenvalue monotonically but slowly
    // when the spectrum clusters at the end.
    let stop = tol * T::lit(1e-2);
    let mut scratch = vec![T::zero(); q];
    let lam_max = lanczos_max_eigenvalue(q, stop, |v, out| {
        upper_mul(&r, v, &mut scratch);
        upper_transpose_mul(&r, &scratch, out);
    })?;
    let inv_lam_min = lanczos_max_eigenvalue(q, stop, |v, out| {
        out.copy_from_slice(v);
        solve_upper_transpose(&r, out);
        solve_upper(&r, out);
    })?;
    let sigma_max = lam_max.sqrt();
    let sigma_min = T::one() / inv_lam_min.sqrt();
    if !sigma_min.is_finite() || !sigma_max.is_finite() || sigma_min < T::lit(RANK_TOLERANCE) * sigma_max {
        return Err(Error::RankDeficient {
            sigma_max: sigma_max.to_f64_lossy(),
            sigma_min: if sigma_min.is_finite() { sigma_min.to_f64_lossy() } else { 0.0 },
        });
    }
    Ok(ExtremeSingularValues { sigma_max, sigma_min })
}

fn upper_mul<T: Scalar>(r: &DenseMatrix<T>, v: &[T], out: &mut [T]) {
    for i in 0..r.rows() {
        out[i] = dot(&r.row(i)[i..], &v[i..]);
    }
}

fn upper_transpose_mul<T: Scalar>(r: &DenseMatrix<T>, v: &[T], out: &mut [T]) {
    out.iter_mut().for_each(|x| *x = T::zero());
    for i in 0..r.rows() {
        axpy(v[i], &r.row(i)[i..], &mut out[i..]);
    }
}

/// Largest eigenvalue of a symmetric positive semi-definite operator of
/// dimension `dim`, by Lanczos with full reorthogonalisation. Stops when the
/// top Ritz value moves by less than `stop` relative, when the Krylov space
/// becomes invariant, or after `min(dim, MAX_LANCZOS_STEPS)` steps.
pub fn lanczos_max_eigenvalue<T, F>(dim: usize, stop: T, mut op: F) -> Result<T>
where
    T: Scalar,
    F: FnMut(&[T], &mut [T]),
{
    let mut start: Vec<T> = standard_normals(&mut seeded_stream(0x6c61_6e63_7a6f_7321, 0), dim);
    let n0 = norm(&start);
    start.iter_mut().for_each(|x| *x /= n0);

    let steps = dim.min(MAX_LANCZOS_STEPS);
    let mut basis: Vec<Vec<T>> = Vec::with_capacity(steps.min(64));
    let mut alphas: Vec<T> = Vec::new();
    let mut betas: Vec<T> = Vec::new();
    let mut w = vec![T::zero(); dim];
    let mut prev = T::zero();
    basis.push(start);

    for j in 0..steps {
        op(&basis[j], &mut w);
        if w.iter().any(|x| !x.is_finite()) {
            return Err(Error::RankDeficient { sigma_max: f64::NAN, sigma_min: 0.0 });
        }
        let alpha = dot(&basis[j], &w);
        alphas.push(alpha);
        for _ in 0..2 {
            for qv in &basis {
                let h = dot(qv, &w);
                axpy(-h, qv, &mut w);
            }
        }
        let beta = norm(&w);
        let theta = tridiagonal_max_eigenvalue(&alphas, &betas);
        if j > 0 && (theta - prev).abs() <= stop * theta.abs() {
            return Ok(theta);
        }
        if beta <= T::epsilon() * theta.abs().max(T::min_positive_value()) {
            return Ok(theta);
        }
        prev = theta;
        if j + 1 == steps {
            return Ok(theta);
        }
        betas.push(beta);
        let next: Vec<T> = w.iter().map(|&x| x / beta).collect();
        basis.push(next);
    }
    Ok(prev)
}

/// Number of eigenvalues of the symmetric tridiagonal matrix strictly below
/// `x` (Sturm count via the LDL^T pivots).
fn sturm_count<T: Scalar>(diag: &[T], off: &[T], x: T) -> usize {
    let tiny = T::min_positive_value();
    let mut count = 0;
    let mut d = T::one();
    for i in 0..diag.len() {
        let b2 = if i == 0 { T::zero() } else { off[i - 1] * off[i - 1] };
        d = diag[i] - x - if i == 0 { T::zero() } else { b2 / d };
        if d == T::zero() {
            d = -tiny;
        }
        if d < T::zero() {
            count += 1;
        }
    }
    count
}

/// Largest eigenvalue of the symmetric tridiagonal matrix with diagonal
/// `diag` and off-diagonal `off`, by bisection.
pub fn tridiagonal_max_eigenvalue<T: Scalar>(diag: &[T], off: &[T]) -> T {
    let k = diag.len();
    if k == 1 {
        return diag[0];
    }
    let mut lo = T::infinity();
    let mut hi = -T::infinity();
    for i in 0..k {
        let left = if i > 0 { off[i - 1].abs() } else { T::zero() };
        let right = if i < k - 1 { off[i].abs() } else { T::zero() };
        lo = lo.min(diag[i] - left - right);
        hi = hi.max(diag[i] + left + right);
    }
    let two = T::lit(2.0);
    for _ in 0..256 {
        let mid = (lo + hi) / two;
        if mid <= lo || mid >= hi {
            break;
        }
        if sturm_count(diag, off, mid) == k {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo <= two * T::epsilon() * lo.abs().max(hi.abs()) {
            break;
        }
    }
    hi
}
