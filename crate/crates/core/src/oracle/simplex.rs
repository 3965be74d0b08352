//! Dense bounded-variable primal simplex with Bland's rule.
//!
//! Rows `A x + s = b` with slacks `s >= 0`; structural variables keep their
//! box `[lower, upper]` as variable bounds instead of extra rows. Rows whose
//! starting residual is negative get an artificial variable, removed in a
//! first phase that minimises the sum of artificials.

use std::time::Instant;

use super::{OracleResult, OracleStatus};
use crate::densela::{dot, DenseMatrix, Vector};
use crate::probgen::LpInstance;
use crate::{Error, Result, Scalar};

#[derive(Debug, Clone)]
pub struct SimplexOptions {
    /// Magnitude below which a tableau entry or reduced cost counts as zero.
    pub pivot_tolerance: f64,
    /// Phase-one objective above which the problem is declared infeasible.
    pub feasibility_tolerance: f64,
    /// Largest `m (n + 2m)` the solver accepts; the default admits 200x250.
    pub max_tableau_entries: usize,
    /// Pivot cap; reaching it is reported as an internal (cycling) error.
    pub max_pivots: Option<usize>,
}

impl Default for SimplexOptions {
    fn default() -> Self {
        SimplexOptions {
            pivot_tolerance: 1e-10,
            feasibility_tolerance: 1e-9,
            max_tableau_entries: 200_000,
            max_pivots: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Status {
    Lower,
    Upper,
    Basic,
}

struct Tableau<T> {
    m: usize,
    n: usize,
    cols: usize,
    t: Vec<T>,
    beta: Vec<T>,
    basis: Vec<usize>,
    status: Vec<Status>,
    lo: Vec<T>,
    hi: Vec<T>,
    d: Vec<T>,
    /// Index of the first artificial column.
    art_start: usize,
    /// Row owning each artificial, in column order.
    art_rows: Vec<usize>,
    ptol: T,
}

enum StepOutcome {
    Optimal,
    Unbounded,
    Moved,
}

impl<T: Scalar> Tableau<T> {
    fn new(inst: &LpInstance<T>, ptol: T, max_entries: usize) -> Result<Self> {
        let (m, n) = (inst.m(), inst.n());
        if m.saturating_mul(n + 2 * m) > max_entries {
            return Err(Error::Capacity(format!(
                "{m}x{n} tableau exceeds {max_entries} entries"
            )));
        }
        if let Some(j) = (0..n).find(|&j| !inst.lower[j].is_finite() || !inst.upper[j].is_finite()) {
            return Err(Error::invalid(format!("variable {j} needs finite bounds")));
        }
        // Start every structural at the bound nearer zero.
        let x_n: Vec<T> = (0..n)
            .map(|j| if inst.lower[j].abs() <= inst.upper[j].abs() { inst.lower[j] } else { inst.upper[j] })
            .collect();
        let resid: Vec<T> = (0..m).map(|i| inst.b[i] - dot(inst.a.row(i), &x_n)).collect();
        let art_rows: Vec<usize> = (0..m).filter(|&i| resid[i] < T::zero()).collect();
        let art_start = n + m;
        let cols = art_start + art_rows.len();

        let mut t = vec![T::zero(); m * cols];
        let mut beta = vec![T::zero(); m];
        let mut basis = vec![0; m];
        let mut status = vec![Status::Lower; cols];
        let mut lo = vec![T::zero(); cols];
        let mut hi = vec![T::infinity(); cols];
        for j in 0..n {
            lo[j] = inst.lower[j];
            hi[j] = inst.upper[j];
            status[j] = if x_n[j] == inst.lower[j] { Status::Lower } else { Status::Upper };
        }
        let mut art_of_row = vec![None; m];
        for (k, &i) in art_rows.iter().enumerate() {
            art_of_row[i] = Some(art_start + k);
        }
        for i in 0..m {
            let row = &mut t[i * cols..(i + 1) * cols];
            match art_of_row[i] {
                None => {
                    row[..n].copy_from_slice(inst.a.row(i));
                    row[n + i] = T::one();
                    beta[i] = resid[i];
                    basis[i] = n + i;
                    status[n + i] = Status::Basic;
                }
                Some(a) => {
                    for (dst, &src) in row[..n].iter_mut().zip(inst.a.row(i)) {
                        *dst = -src;
                    }
                    row[n + i] = -T::one();
                    row[a] = T::one();
                    beta[i] = -resid[i];
                    basis[i] = a;
                    status[a] = Status::Basic;
                }
            }
        }
        Ok(Tableau {
            m,
            n,
            cols,
            t,
            beta,
            basis,
            status,
            lo,
            hi,
            d: vec![T::zero(); cols],
            art_start,
            art_rows,
            ptol,
        })
    }

    fn value(&self, j: usize) -> T {
        match self.status[j] {
            Status::Lower => self.lo[j],
            Status::Upper => self.hi[j],
            Status::Basic => {
                let r = self.basis.iter().position(|&b| b == j).expect("basic variable has a row");
                self.beta[r]
            }
        }
    }

    fn structural(&self) -> Vec<T> {
        let mut x: Vec<T> = (0..self.n)
            .map(|j| match self.status[j] {
                Status::Lower => self.lo[j],
                Status::Upper => self.hi[j],
                Status::Basic => T::zero(),
            })
            .collect();
        for (r, &b) in self.basis.iter().enumerate() {
            if b < self.n {
                x[b] = self.beta[r];
            }
        }
        x
    }

    fn set_costs(&mut self, cost: &[T]) {
        self.d.copy_from_slice(cost);
        for r in 0..self.m {
            let cb = cost[self.basis[r]];
            if cb != T::zero() {
                let row = &self.t[r * self.cols..(r + 1) * self.cols];
                for (dj, &v) in self.d.iter_mut().zip(row) {
                    *dj -= cb * v;
                }
            }
        }
        for r in 0..self.m {
            self.d[self.basis[r]] = T::zero();
        }
    }

    fn entering(&self) -> Option<usize> {
        (0..self.cols).find(|&j| {
            self.lo[j] < self.hi[j]
                && match self.status[j] {
                    Status::Lower => self.d[j] < -self.ptol,
                    Status::Upper => self.d[j] > self.ptol,
                    Status::Basic => false,
                }
        })
    }

    fn step(&mut self) -> StepOutcome {
        let q = match self.entering() {
            Some(q) => q,
            None => return StepOutcome::Optimal,
        };
        let dir = if self.status[q] == Status::Lower { T::one() } else { -T::one() };
        let flip = self.hi[q] - self.lo[q];
        // (limit, leaving basic variable index, row, leaves at upper?)
        let mut best: Option<(T, usize, usize, bool)> = None;
        for r in 0..self.m {
            let alpha = self.t[r * self.cols + q] * dir;
            let b = self.basis[r];
            let (limit, to_upper) = if alpha > self.ptol {
                ((self.beta[r] - self.lo[b]) / alpha, false)
            } else if alpha < -self.ptol && self.hi[b].is_finite() {
                ((self.hi[b] - self.beta[r]) / -alpha, true)
            } else {
                continue;
            };
            let limit = limit.max(T::zero());
            let better = match best {
                None => true,
                Some((l, bv, _, _)) => limit < l || (limit == l && b < bv),
            };
            if better {
                best = Some((limit, b, r, to_upper));
            }
        }
        let theta = match best {
            Some((l, ..)) if l < flip => l,
            _ => flip,
        };
        if !theta.is_finite() {
            return StepOutcome::Unbounded;
        }
        for r in 0..self.m {
            let a = self.t[r * self.cols + q];
            if a != T::zero() {
                self.beta[r] -= theta * dir * a;
            }
        }
        match best {
            Some((l, _, r, to_upper)) if l < flip => {
                let entering_value = self.value(q) + dir * theta;
                let leaving = self.basis[r];
                self.status[leaving] = if to_upper { Status::Upper } else { Status::Lower };
                self.pivot(r, q);
                self.beta[r] = entering_value;
                self.basis[r] = q;
                self.status[q] = Status::Basic;
            }
            _ => {
                self.status[q] = if self.status[q] == Status::Lower { Status::Upper } else { Status::Lower };
            }
        }
        StepOutcome::Moved
    }

    /// Row operations making column `q` the unit vector `e_r` (values in
    /// `beta` are maintained by the caller).
    fn pivot(&mut self, r: usize, q: usize) {
        let cols = self.cols;
        let p = self.t[r * cols + q];
        {
            let row = &mut self.t[r * cols..(r + 1) * cols];
            for v in row.iter_mut() {
                *v /= p;
            }
            row[q] = T::one();
        }
        let (head, rest) = self.t.split_at_mut(r * cols);
        let (prow, tail) = rest.split_at_mut(cols);
        for other in head.chunks_exact_mut(cols).chain(tail.chunks_exact_mut(cols)) {
            let f = other[q];
            if f != T::zero() {
                for (o, &pv) in other.iter_mut().zip(prow.iter()) {
                    *o -= f * pv;
                }
                other[q] = T::zero();
            }
        }
        let f = self.d[q];
        if f != T::zero() {
            for (o, &pv) in self.d.iter_mut().zip(prow.iter()) {
                *o -= f * pv;
            }
            self.d[q] = T::zero();
        }
    }

    /// Pivots zero-level artificials out of the basis where possible and
    /// pins every artificial to zero.
    fn retire_artificials(&mut self) {
        for r in 0..self.m {
            if self.basis[r] < self.art_start {
                continue;
            }
            let row = &self.t[r * self.cols..(r + 1) * self.cols];
            let candidate = (0..self.art_start).find(|&j| self.status[j] != Status::Basic && row[j].abs() > self.ptol);
            if let Some(j) = candidate {
                let value = self.value(j);
                let leaving = self.basis[r];
                self.status[leaving] = Status::Lower;
                self.pivot(r, j);
                self.beta[r] = value;
                self.basis[r] = j;
                self.status[j] = Status::Basic;
            }
        }
        for j in self.art_start..self.cols {
            self.hi[j] = T::zero();
            self.lo[j] = T::zero();
        }
    }

    /// Recomputes basic values from the original data with a fresh
    /// factorisation of the basis matrix.
    fn refine(&mut self, inst: &LpInstance<T>) {
        let m = self.m;
        let column = |j: usize, i: usize| -> T {
            if j < self.n {
                inst.a[(i, j)]
            } else if j < self.art_start {
                if j - self.n == i { T::one() } else { T::zero() }
            } else if self.art_rows[j - self.art_start] == i {
                -T::one()
            } else {
                T::zero()
            }
        };
        let mut bmat = DenseMatrix::zeros(m, m);
        for (r, &j) in self.basis.iter().enumerate() {
            for i in 0..m {
                bmat[(i, r)] = column(j, i);
            }
        }
        let mut rhs: Vec<T> = inst.b.to_vec();
        for j in 0..self.cols {
            if self.status[j] != Status::Basic {
                let v = self.value(j);
                if v != T::zero() {
                    for (i, ri) in rhs.iter_mut().enumerate() {
                        *ri -= column(j, i) * v;
                    }
                }
            }
        }
        if let Some(sol) = lu_solve(bmat, rhs) {
            if sol.iter().all(|v| v.is_finite()) {
                self.beta = sol;
            }
        }
    }
}

/// Gaussian elimination with partial pivoting; `None` when singular.
pub(crate) fn lu_solve<T: Scalar>(mut a: DenseMatrix<T>, mut b: Vec<T>) -> Option<Vec<T>> {
    let n = a.rows();
    let scale = a.as_slice().iter().fold(T::zero(), |m, v| m.max(v.abs()));
    let tiny = scale * T::epsilon() * T::lit(n.max(1) as f64);
    for k in 0..n {
        let p = (k..n).max_by(|&i, &j| a[(i, k)].abs().partial_cmp(&a[(j, k)].abs()).unwrap())?;
        if !(a[(p, k)].abs() > tiny) {
            return None;
        }
        if p != k {
            for j in 0..n {
                let tmp = a[(k, j)];
                a[(k, j)] = a[(p, j)];
                a[(p, j)] = tmp;
            }
            b.swap(k, p);
        }
        let piv = a[(k, k)];
        for i in k + 1..n {
            let f = a[(i, k)] / piv;
            if f != T::zero() {
                for j in k..n {
                    let v = a[(k, j)];
                    a[(i, j)] -= f * v;
                }
                let bk = b[k];
                b[i] -= f * bk;
            }
        }
    }
    for k in (0..n).rev() {
        let mut s = b[k];
        for j in k + 1..n {
            s -= a[(k, j)] * b[j];
        }
        b[k] = s / a[(k, k)];
    }
    Some(b)
}

/// Progress callback argument: pivot count, seconds since start, current
/// structural point.
pub struct SimplexProgress<'a, T> {
    pub pivots: usize,
    pub elapsed: f64,
    pub x: &'a [T],
}

pub fn simplex_solve<T: Scalar>(inst: &LpInstance<T>) -> Result<OracleResult<T>> {
    simplex_solve_with(inst, &SimplexOptions::default(), |_| {})
}

pub fn simplex_solve_with<T, F>(inst: &LpInstance<T>, opts: &SimplexOptions, mut progress: F) -> Result<OracleResult<T>>
where
    T: Scalar,
    F: FnMut(SimplexProgress<'_, T>),
{
    let start = Instant::now();
    let mut tab = Tableau::new(inst, T::lit(opts.pivot_tolerance), opts.max_tableau_entries)?;
    let max_pivots = opts.max_pivots.unwrap_or(200 * (tab.m + tab.cols) + 10_000);
    let mut pivots = 0usize;
    progress(SimplexProgress { pivots, elapsed: 0.0, x: &tab.structural() });

    let mut run_phase = |tab: &mut Tableau<T>, pivots: &mut usize| -> Result<StepOutcome> {
        loop {
            match tab.step() {
                StepOutcome::Moved => {
                    *pivots += 1;
                    if *pivots > max_pivots {
                        return Err(Error::Internal(format!("no progress after {max_pivots} pivots (cycling?)")));
                    }
                    progress(SimplexProgress {
                        pivots: *pivots,
                        elapsed: start.elapsed().as_secs_f64(),
                        x: &tab.structural(),
                    });
                }
                outcome => return Ok(outcome),
            }
        }
    };

    if !tab.art_rows.is_empty() {
        let mut cost = vec![T::zero(); tab.cols];
        for c in cost[tab.art_start..].iter_mut() {
            *c = T::one();
        }
        tab.set_costs(&cost);
        run_phase(&mut tab, &mut pivots)?;
        let infeas: T = (tab.art_start..tab.cols).map(|j| tab.value(j)).sum();
        let scale = T::one() + inst.b.iter().fold(T::zero(), |m, v| m.max(v.abs()));
        if infeas > T::lit(opts.feasibility_tolerance) * scale {
            return Ok(OracleResult { status: OracleStatus::Infeasible, x_opt: None, objective: None, pivot_count: pivots });
        }
        tab.retire_artificials();
    }

    let mut cost = vec![T::zero(); tab.cols];
    cost[..tab.n].copy_from_slice(&inst.c);
    tab.set_costs(&cost);
    if let StepOutcome::Unbounded = run_phase(&mut tab, &mut pivots)? {
        return Ok(OracleResult { status: OracleStatus::Unbounded, x_opt: None, objective: None, pivot_count: pivots });
    }
    tab.refine(inst);
    let mut x = tab.structural();
    for (j, v) in x.iter_mut().enumerate() {
        *v = v.max(inst.lower[j]).min(inst.upper[j]);
    }
    let objective = inst.objective(&x);
    Ok(OracleResult {
        status: OracleStatus::Optimal,
        x_opt: Some(Vector::new(x).map_err(|_| Error::Internal("non-finite simplex solution".into()))?),
        objective: Some(objective),
        pivot_count: pivots,
    })
}
