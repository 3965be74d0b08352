//! Brute-force optimum over all vertices of `{A x <= b, lower <= x <= upper}`.
//!
//! A vertex has `n` linearly independent active constraints, and a variable
//! can have at most one of its two bounds active. So every vertex is found
//! by choosing `k` active rows, `k` variables left free, and a bound for each
//! of the other `n - k` variables, then solving the `k x k` system.

use super::simplex::lu_solve;
use crate::densela::DenseMatrix;
use crate::probgen::LpInstance;
use crate::{Error, Result, Scalar};

/// Default cap on the number of candidate vertices.
pub const DEFAULT_VERTEX_BUDGET: u128 = 10_000_000;

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Number of candidate vertices: `sum_k C(m,k) C(n,k) 2^(n-k)`.
pub fn vertex_candidate_count(m: usize, n: usize) -> u128 {
    (0..=m.min(n))
        .map(|k| {
            let pow = if n - k >= 127 { u128::MAX } else { 1u128 << (n - k) };
            binomial(m, k).saturating_mul(binomial(n, k)).saturating_mul(pow)
        })
        .fold(0u128, u128::saturating_add)
}

/// Minimum of `<c, x>` over the feasible vertices, with the default budget.
/// Returns `+inf` when no vertex is feasible.
pub fn enumerate_vertices_optimum<T: Scalar>(inst: &LpInstance<T>) -> Result<T> {
    enumerate_vertices_optimum_with_budget(inst, DEFAULT_VERTEX_BUDGET)
}

pub fn enumerate_vertices_optimum_with_budget<T: Scalar>(inst: &LpInstance<T>, budget: u128) -> Result<T> {
    let (m, n) = (inst.m(), inst.n());
    let count = vertex_candidate_count(m, n);
    if count > budget {
        return Err(Error::Capacity(format!("{m}x{n} has {count} vertex candidates, budget {budget}")));
    }
    let bscale = inst.b.iter().fold(T::one(), |acc, v| acc.max(v.abs()));
    let tol = T::lit(1e-9) * bscale;
    let mut best = T::infinity();
    let mut x = vec![T::zero(); n];

    for k in 0..=m.min(n) {
        for rows in Combinations::new(m, k) {
            for free in Combinations::new(n, k) {
                let mut is_free = vec![false; n];
                for &j in &free {
                    is_free[j] = true;
                }
                let fixed: Vec<usize> = (0..n).filter(|&j| !is_free[j]).collect();
                let mut sub = DenseMatrix::zeros(k, k);
                for (r, &i) in rows.iter().enumerate() {
                    for (cidx, &j) in free.iter().enumerate() {
                        sub[(r, cidx)] = inst.a[(i, j)];
                    }
                }
                for mask in 0u64..(1u64 << fixed.len()) {
                    for (bit, &j) in fixed.iter().enumerate() {
                        x[j] = if mask >> bit & 1 == 1 { inst.upper[j] } else { inst.lower[j] };
                    }
                    if k > 0 {
                        let rhs: Vec<T> = rows
                            .iter()
                            .map(|&i| {
                                let row = inst.a.row(i);
                                fixed.iter().fold(inst.b[i], |acc, &j| acc - row[j] * x[j])
                            })
                            .collect();
                        let sol = match lu_solve(sub.clone(), rhs) {
                            Some(s) => s,
                            // Singular for every bound pattern.
                            None => break,
                        };
                        for (&j, &v) in free.iter().zip(&sol) {
                            x[j] = v;
                        }
                    }
                    let in_box = (0..n).all(|j| x[j] >= inst.lower[j] - tol && x[j] <= inst.upper[j] + tol);
                    if in_box && inst.max_violation(&x) <= tol {
                        best = best.min(inst.objective(&x));
                    }
                }
            }
        }
    }
    Ok(best)
}

/// Lexicographic `k`-subsets of `0..n`.
struct Combinations {
    n: usize,
    idx: Vec<usize>,
    done: bool,
}

impl Combinations {
    fn new(n: usize, k: usize) -> Self {
        Combinations { n, idx: (0..k).collect(), done: k > n }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;
    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.idx.clone();
        let k = self.idx.len();
        let mut i = k;
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.idx[i] < self.n - k + i {
                self.idx[i] += 1;
                for j in i + 1..k {
                    self.idx[j] = self.idx[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::densela::Vector;

    fn lp(rows: &[Vec<f64>], b: &[f64], c: &[f64], bound: f64) -> LpInstance<f64> {
        let n = c.len();
        LpInstance::from_parts(
            DenseMatrix::from_rows(rows).unwrap(),
            Vector::new(b.to_vec()).unwrap(),
            Vector::new(c.to_vec()).unwrap(),
            Vector::filled(n, -bound),
            Vector::filled(n, bound),
        )
        .unwrap()
    }

    #[test]
    fn combinations_count() {
        assert_eq!(Combinations::new(5, 2).count(), 10);
        assert_eq!(Combinations::new(4, 0).count(), 1);
        assert_eq!(Combinations::new(3, 3).count(), 1);
        assert_eq!(Combinations::new(2, 3).count(), 0);
    }

    #[test]
    fn candidate_count_small_cases() {
        // No rows: only the 2^n box corners.
        assert_eq!(vertex_candidate_count(0, 3), 8);
        // m=8, n=10 sums to 2,719,028.
        assert_eq!(vertex_candidate_count(8, 10), 2_719_028);
    }

    #[test]
    fn one_dimensional() {
        let inst = lp(&[vec![1.0]], &[1.0], &[-1.0], 100.0);
        assert!((enumerate_vertices_optimum(&inst).unwrap() + 1.0).abs() < 1e-12);
    }

    #[test]
    fn square_box_corner() {
        let inst = lp(&[vec![0.0, 0.0]], &[1.0], &[1.0, 1.0], 100.0);
        assert_eq!(enumerate_vertices_optimum(&inst).unwrap(), -200.0);
    }

    #[test]
    fn budget_enforced() {
        let inst = lp(&[vec![1.0, 1.0]], &[1.0], &[1.0, 1.0], 1.0);
        assert!(matches!(enumerate_vertices_optimum_with_budget(&inst, 3), Err(Error::Capacity(_))));
    }

    #[test]
    fn infeasible_is_infinite() {
        let inst = lp(&[vec![1.0], vec![-1.0]], &[-1.0, -1.0], &[1.0], 5.0);
        assert_eq!(enumerate_vertices_optimum(&inst).unwrap(), f64::INFINITY);
    }
}
