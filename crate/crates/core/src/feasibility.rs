//! Agmon-Motzkin-Schoenberg projections with overshoot.
//!
//! For a violated row (`<a^i, x> > b_i`) the step moves `x` along `-a^i` to
//! the shifted hyperplane `<a^i, x> = b_i - r ||a^i||`, i.e. a distance `r`
//! past the boundary. A sweep applies the rows in index order `1..m`.

use crate::densela::{axpy, dot, norm, DenseMatrix, Vector};
use crate::{Error, Result, Scalar};

/// Default overshoot depth.
pub const DEFAULT_OVERSHOOT: f64 = 1e-3;

/// Linear inequalities `A x <= b` with cached row norms.
#[derive(Debug, Clone)]
pub struct HalfspaceSystem<'a, T> {
    a: &'a DenseMatrix<T>,
    b: &'a [T],
    row_norms: Vec<T>,
    row_norms_sq: Vec<T>,
    overshoot: T,
}

impl<'a, T: Scalar> HalfspaceSystem<'a, T> {
    pub fn new(a: &'a DenseMatrix<T>, b: &'a [T], overshoot: T) -> Result<Self> {
        if !(overshoot > T::zero()) || !overshoot.is_finite() {
            return Err(Error::invalid(format!("overshoot must be positive, got {overshoot}")));
        }
        Self::build(a, b, overshoot)
    }

    /// Plain orthogonal projections (`r = 0`). Only meant for checking the
    /// geometry against textbook formulas.
    pub fn exact_projection(a: &'a DenseMatrix<T>, b: &'a [T]) -> Result<Self> {
        Self::build(a, b, T::zero())
    }

    fn build(a: &'a DenseMatrix<T>, b: &'a [T], overshoot: T) -> Result<Self> {
        if b.len() != a.rows() {
            return Err(Error::invalid(format!("{} right-hand sides for {} rows", b.len(), a.rows())));
        }
        let row_norms_sq: Vec<T> = a.row_iter().map(|r| dot(r, r)).collect();
        if let Some(i) = row_norms_sq.iter().position(|&v| v == T::zero()) {
            return Err(Error::invalid(format!("row {i} is zero")));
        }
        let row_norms = a.row_iter().map(norm).collect();
        Ok(HalfspaceSystem { a, b, row_norms, row_norms_sq, overshoot })
    }

    pub fn rows(&self) -> usize {
        self.a.rows()
    }

    pub fn cols(&self) -> usize {
        self.a.cols()
    }

    pub fn overshoot(&self) -> T {
        self.overshoot
    }

    pub fn row_norms(&self) -> &[T] {
        &self.row_norms
    }

    fn check_len(&self, x: &[T]) -> Result<()> {
        if x.len() != self.cols() {
            return Err(Error::invalid(format!("point of length {} for {} columns", x.len(), self.cols())));
        }
        Ok(())
    }

    /// Applies the projection onto row `i` in place; returns whether `x` moved.
    #[inline]
    pub fn project_in_place(&self, x: &mut [T], i: usize) -> bool {
        let row = self.a.row(i);
        let excess = dot(row, x) - self.b[i];
        if excess > T::zero() {
            let step = (excess + self.overshoot * self.row_norms[i]) / self.row_norms_sq[i];
            axpy(-step, row, x);
            true
        } else {
            false
        }
    }

    /// The sweep `A_m o ... o A_1` in place; returns the number of rows that moved `x`.
    pub fn sweep_in_place(&self, x: &mut [T]) -> usize {
        (0..self.rows()).filter(|&i| self.project_in_place(x, i)).count()
    }

    pub fn max_violation_of(&self, x: &[T]) -> T {
        self.a
            .row_iter()
            .zip(self.b)
            .map(|(row, &bi)| dot(row, x) - bi)
            .fold(T::neg_infinity(), T::max)
    }
}

/// Projection of `x` onto row `i` of `sys`, with overshoot.
pub fn project_halfspace<T: Scalar>(x: &[T], sys: &HalfspaceSystem<'_, T>, i: usize) -> Result<Vector<T>> {
    sys.check_len(x)?;
    if i >= sys.rows() {
        return Err(Error::invalid(format!("row index {i} out of range 0..{}", sys.rows())));
    }
    let mut y = x.to_vec();
    sys.project_in_place(&mut y, i);
    Ok(Vector::from_vec_unchecked(y))
}

/// One cyclic sweep over all rows in index order.
pub fn sweep<T: Scalar>(x: &[T], sys: &HalfspaceSystem<'_, T>) -> Result<Vector<T>> {
    sys.check_len(x)?;
    let mut y = x.to_vec();
    sys.sweep_in_place(&mut y);
    Ok(Vector::from_vec_unchecked(y))
}

/// `max_i (<a^i, x> - b_i)`; negative when `x` is strictly inside.
pub fn max_violation<T: Scalar>(x: &[T], sys: &HalfspaceSystem<'_, T>) -> Result<T> {
    sys.check_len(x)?;
    Ok(sys.max_violation_of(x))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one_row(a: [f64; 2], b: f64) -> (DenseMatrix<f64>, Vec<f64>) {
        (DenseMatrix::from_rows(&[a.to_vec()]).unwrap(), vec![b])
    }

    #[test]
    fn moves_past_boundary_by_overshoot() {
        let (a, b) = one_row([1.0, 0.0], 0.0);
        let sys = HalfspaceSystem::new(&a, &b, 1e-3).unwrap();
        let y = project_halfspace(&[2.0, 5.0], &sys, 0).unwrap();
        assert!((y[0] + 1e-3).abs() < 1e-15);
        assert_eq!(y[1], 5.0);
    }

    #[test]
    fn satisfied_point_unchanged() {
        let (a, b) = one_row([1.0, 0.0], 0.0);
        let sys = HalfspaceSystem::new(&a, &b, 0.5).unwrap();
        assert_eq!(project_halfspace(&[-1.0, 3.0], &sys, 0).unwrap().as_slice(), &[-1.0, 3.0]);
    }

    #[test]
    fn boundary_point_unchanged() {
        let (a, b) = one_row([1.0, 1.0], 2.0);
        let sys = HalfspaceSystem::new(&a, &b, 0.5).unwrap();
        assert_eq!(project_halfspace(&[1.0, 1.0], &sys, 0).unwrap().as_slice(), &[1.0, 1.0]);
    }

    #[test]
    fn zero_overshoot_lands_on_hyperplane() {
        let (a, b) = one_row([3.0, 4.0], 1.0);
        let sys = HalfspaceSystem::exact_projection(&a, &b).unwrap();
        let y = project_halfspace(&[3.0, 4.0], &sys, 0).unwrap();
        assert!((3.0 * y[0] + 4.0 * y[1] - 1.0).abs() < 1e-14);
        // Orthogonal projection: (3,4) - (24/25)(3,4).
        assert!((y[0] - 3.0 / 25.0).abs() < 1e-15);
        assert!((y[1] - 4.0 / 25.0).abs() < 1e-15);
    }

    #[test]
    fn orthogonal_rows_sweep() {
        let a = DenseMatrix::from_rows(&[vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        let b = vec![0.0, 0.0];
        let sys = HalfspaceSystem::exact_projection(&a, &b).unwrap();
        assert_eq!(sweep(&[1.0, 1.0], &sys).unwrap().as_slice(), &[0.0, 0.0]);
    }

    #[test]
    fn single_row_sweep_is_projection() {
        let (a, b) = one_row([2.0, -1.0], 0.5);
        let sys = HalfspaceSystem::new(&a, &b, 1e-3).unwrap();
        let x = [3.0, 1.0];
        assert_eq!(sweep(&x, &sys).unwrap(), project_halfspace(&x, &sys, 0).unwrap());
    }

    #[test]
    fn max_violation_values() {
        let (a, b) = one_row([1.0, 0.0], 0.0);
        let sys = HalfspaceSystem::new(&a, &b, 1e-3).unwrap();
        assert_eq!(max_violation(&[2.0, 0.0], &sys).unwrap(), 2.0);
        assert!(max_violation(&[-4.0, 9.0], &sys).unwrap() < 0.0);
    }

    #[test]
    fn construction_errors() {
        let a = DenseMatrix::from_rows(&[vec![1.0, 0.0], vec![0.0, 0.0]]).unwrap();
        let b = vec![0.0, -1.0];
        assert!(HalfspaceSystem::new(&a, &b, 1e-3).is_err());
        let (a, b) = one_row([1.0, 0.0], 0.0);
        assert!(HalfspaceSystem::new(&a, &b, 0.0).is_err());
        assert!(HalfspaceSystem::new(&a, &b[..0], 1e-3).is_err());
        let sys = HalfspaceSystem::new(&a, &b, 1e-3).unwrap();
        assert!(project_halfspace(&[0.0, 0.0], &sys, 1).is_err());
        assert!(project_halfspace(&[0.0], &sys, 0).is_err());
    }

    #[test]
    fn row_order_matters() {
        let a = DenseMatrix::from_rows(&[vec![1.0, 1.0], vec![1.0, -2.0]]).unwrap();
        let b = vec![0.0, 0.0];
        let swapped = DenseMatrix::from_rows(&[vec![1.0, -2.0], vec![1.0, 1.0]]).unwrap();
        let s1 = HalfspaceSystem::new(&a, &b, 1e-3).unwrap();
        let s2 = HalfspaceSystem::new(&swapped, &b, 1e-3).unwrap();
        let x = [3.0, 1.0];
        let y1 = sweep(&x, &s1).unwrap();
        let y2 = sweep(&x, &s2).unwrap();
        assert_ne!(y1, y2);
        // Pinned: row 1 first moves to x1 + x2 = -r sqrt(2), then row 2.
        let r = 1e-3_f64;
        let p = [3.0 - (4.0 + r * 2f64.sqrt()) / 2.0, 1.0 - (4.0 + r * 2f64.sqrt()) / 2.0];
        let ex = p[0] - 2.0 * p[1];
        let step = (ex + r * 5f64.sqrt()) / 5.0;
        let expect = [p[0] - step, p[1] + 2.0 * step];
        assert!((y1[0] - expect[0]).abs() < 1e-14 && (y1[1] - expect[1]).abs() < 1e-14);
    }
}
