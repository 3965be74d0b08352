//! Householder QR for tall matrices (rows >= cols).

use super::matrix::DenseMatrix;
use crate::{Error, Result, Scalar};

/// Compact Householder factorization: the upper triangle holds `R`, the part
/// below the diagonal holds the reflector vectors (implicit leading 1).
pub struct HouseholderQr<T> {
    packed: DenseMatrix<T>,
    tau: Vec<T>,
}

impl<T: Scalar> HouseholderQr<T> {
    pub fn new(a: &DenseMatrix<T>) -> Result<Self> {
        let (m, n) = a.shape();
        if m < n {
            return Err(Error::invalid(format!("QR needs rows >= cols, got {m}x{n}")));
        }
        let mut packed = a.clone();
        let mut tau = vec![T::zero(); n];
        let mut w = vec![T::zero(); n];
        for k in 0..n {
            let mut sq = T::zero();
            for i in k..m {
                let v = packed[(i, k)];
                sq += v * v;
            }
            let norm_x = sq.sqrt();
            let x0 = packed[(k, k)];
            if norm_x == T::zero() {
                tau[k] = T::zero();
                continue;
            }
            let beta = if x0 >= T::zero() { -norm_x } else { norm_x };
            let scale = T::one() / (x0 - beta);
            for i in k + 1..m {
                packed[(i, k)] *= scale;
            }
            packed[(k, k)] = beta;
            let t = (beta - x0) / beta;
            tau[k] = t;

            // Apply H = I - t v v^T to the trailing columns, row by row.
            let wk = &mut w[k + 1..n];
            wk.iter_mut().for_each(|x| *x = T::zero());
            {
                let row = packed.row(k);
                for (wj, &a) in wk.iter_mut().zip(&row[k + 1..]) {
                    *wj += a;
                }
            }
            for i in k + 1..m {
                let row = packed.row(i);
                let vi = row[k];
                for (wj, &a) in wk.iter_mut().zip(&row[k + 1..]) {
                    *wj += vi * a;
                }
            }
            for wj in wk.iter_mut() {
                *wj *= t;
            }
            {
                let row = packed.row_mut(k);
                for (a, &wj) in row[k + 1..].iter_mut().zip(wk.iter()) {
                    *a -= wj;
                }
            }
            for i in k + 1..m {
                let row = packed.row_mut(i);
                let vi = row[k];
                for (a, &wj) in row[k + 1..].iter_mut().zip(wk.iter()) {
                    *a -= vi * wj;
                }
            }
        }
        Ok(HouseholderQr { packed, tau })
    }

    /// The `cols x cols` upper-triangular factor.
    pub fn r(&self) -> DenseMatrix<T> {
        let n = self.packed.cols();
        let mut r = DenseMatrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                r[(i, j)] = self.packed[(i, j)];
            }
        }
        r
    }

    /// The `rows x cols` factor with orthonormal columns.
    pub fn thin_q(&self) -> DenseMatrix<T> {
        let (m, n) = self.packed.shape();
        let mut q = DenseMatrix::zeros(m, n);
        for j in 0..n {
            q[(j, j)] = T::one();
        }
        let mut w = vec![T::zero(); n];
        for k in (0..n).rev() {
            let t = self.tau[k];
            if t == T::zero() {
                continue;
            }
            // Columns < k of Q are still zero in rows >= k.
            let wk = &mut w[k..n];
            wk.copy_from_slice(&q.row(k)[k..n]);
            for i in k + 1..m {
                let vi = self.packed[(i, k)];
                for (wj, &a) in wk.iter_mut().zip(&q.row(i)[k..n]) {
                    *wj += vi * a;
                }
            }
            for wj in wk.iter_mut() {
                *wj *= t;
            }
            for (a, &wj) in q.row_mut(k)[k..n].iter_mut().zip(wk.iter()) {
                *a -= wj;
            }
            for i in k + 1..m {
                let vi = self.packed[(i, k)];
                for (a, &wj) in q.row_mut(i)[k..n].iter_mut().zip(wk.iter()) {
                    *a -= vi * wj;
                }
            }
        }
        q
    }

    /// Diagonal of `R`.
    pub fn r_diagonal(&self) -> Vec<T> {
        (0..self.packed.cols()).map(|i| self.packed[(i, i)]).collect()
    }
}

/// Solves `R x = b` for upper-triangular `R` in place.
pub(crate) fn solve_upper<T: Scalar>(r: &DenseMatrix<T>, b: &mut [T]) {
    let n = r.rows();
    for i in (0..n).rev() {
        let row = r.row(i);
        let mut s = b[i];
        for j in i + 1..n {
            s -= row[j] * b[j];
        }
        b[i] = s / row[i];
    }
}

/// Solves `R^T x = b` for upper-triangular `R` in place.
pub(crate) fn solve_upper_transpose<T: Scalar>(r: &DenseMatrix<T>, b: &mut [T]) {
    let n = r.rows();
    for j in 0..n {
        let row = r.row(j);
        let xj = b[j] / row[j];
        b[j] = xj;
        for i in j + 1..n {
            b[i] -= row[i] * xj;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> DenseMatrix<f64> {
        DenseMatrix::from_rows(&[
            vec![2.0, -1.0, 0.5],
            vec![1.0, 3.0, -2.0],
            vec![0.0, 1.0, 4.0],
            vec![-1.0, 2.0, 1.0],
            vec![3.0, 0.0, 1.5],
        ])
        .unwrap()
    }

    #[test]
    fn reconstructs_input() {
        let a = sample();
        let qr = HouseholderQr::new(&a).unwrap();
        let back = qr.thin_q().matmul(&qr.r()).unwrap();
        assert!(back.max_abs_diff(&a) < 1e-14);
    }

    #[test]
    fn q_is_orthonormal() {
        let qr = HouseholderQr::new(&sample()).unwrap();
        let q = qr.thin_q();
        let qtq = q.transpose().matmul(&q).unwrap();
        assert!(qtq.max_abs_diff(&DenseMatrix::identity(3)) < 1e-15);
    }

    #[test]
    fn triangular_solves() {
        let r = HouseholderQr::new(&sample()).unwrap().r();
        let x = [1.0, -2.0, 0.25];
        let mut b = r.matvec(&x).unwrap().into_inner();
        solve_upper(&r, &mut b);
        for (u, v) in b.iter().zip(&x) {
            assert!((u - v).abs() < 1e-14);
        }
        let mut b = r.matvec_transpose(&x).unwrap().into_inner();
        solve_upper_transpose(&r, &mut b);
        for (u, v) in b.iter().zip(&x) {
            assert!((u - v).abs() < 1e-14);
        }
    }

    #[test]
    fn rejects_wide() {
        assert!(HouseholderQr::new(&DenseMatrix::<f64>::zeros(2, 3)).is_err());
    }
}
