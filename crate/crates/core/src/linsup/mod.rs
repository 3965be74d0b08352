//! Superiorized AMS: every iteration takes a step of length `eta_k` along
//! `-c / ||c||`, sweeps once through the half-spaces, and clips to the box.
//! The loop stops once the iterate is feasible to `epsilon` and its
//! relative change falls below `epsilon`.

mod params;
mod schedule;
mod trace;

use std::time::Instant;

pub use params::SuperiorizationParams;
pub use schedule::{step_size_schedule, ScheduleState, StepSizes};
pub use trace::{
    fmt_f64, parse_trace_csv, read_trace_csv, trace_csv_string, write_trace_csv, IterateTrace,
    TerminationReason, TraceSample, TRACE_HEADER,
};

use crate::densela::{axpy, norm, Vector};
use crate::feasibility::HalfspaceSystem;
use crate::probgen::LpInstance;
use crate::{Error, Result, Scalar};

/// Above this many rows only every `SPARSE_TRACE_STRIDE`-th iterate is
/// recorded (plus the first and the last).
pub const DENSE_TRACE_MAX_ROWS: usize = 1000;
pub const SPARSE_TRACE_STRIDE: usize = 10;

/// Floor of the relative-change denominator.
const MIN_REFERENCE_NORM: f64 = 1e-12;

/// `x - eta c / ||c||`.
pub fn perturb<T: Scalar>(x: &[T], c: &[T], eta: T) -> Result<Vector<T>> {
    let dir = descent_direction(c)?;
    if x.len() != c.len() {
        return Err(Error::invalid(format!("point of length {} for cost of length {}", x.len(), c.len())));
    }
    let mut y = x.to_vec();
    axpy(-eta, &dir, &mut y);
    Ok(Vector::from_vec_unchecked(y))
}

fn descent_direction<T: Scalar>(c: &[T]) -> Result<Vec<T>> {
    let nc = norm(c);
    if nc == T::zero() {
        return Err(Error::invalid("cost vector is zero"));
    }
    Ok(c.iter().map(|&v| v / nc).collect())
}

/// Componentwise median of `(lower, x, upper)`.
pub fn clip_box<T: Scalar>(x: &[T], lower: &[T], upper: &[T]) -> Result<Vector<T>> {
    if x.len() != lower.len() || x.len() != upper.len() {
        return Err(Error::invalid("clip_box: length mismatch"));
    }
    if let Some(j) = (0..x.len()).find(|&j| lower[j] > upper[j]) {
        return Err(Error::invalid(format!("lower bound exceeds upper bound at {j}")));
    }
    let mut y = x.to_vec();
    clip_in_place(&mut y, lower, upper);
    Ok(Vector::from_vec_unchecked(y))
}

#[inline]
fn clip_in_place<T: Scalar>(x: &mut [T], lower: &[T], upper: &[T]) {
    for ((v, &lo), &hi) in x.iter_mut().zip(lower).zip(upper) {
        *v = v.max(lo).min(hi);
    }
}

fn distance<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).map(|(&u, &v)| (u - v) * (u - v)).sum::<T>().sqrt()
}

/// Result of a superiorization run.
#[derive(Debug, Clone)]
pub struct Superiorized<T> {
    pub solution: Vector<T>,
    pub trace: IterateTrace<T>,
}

impl<T: Scalar> Superiorized<T> {
    pub fn converged(&self) -> bool {
        self.trace.termination_reason == TerminationReason::Converged
    }
}

/// Runs the superiorization loop from `x0` (the all-ones vector when `None`).
pub fn superiorize<T: Scalar>(
    inst: &LpInstance<T>,
    params: &SuperiorizationParams<T>,
    x0: Option<&[T]>,
) -> Result<Superiorized<T>> {
    params.validate()?;
    let n = inst.n();
    let dir = descent_direction(&inst.c)?;
    let sys = HalfspaceSystem::new(&inst.a, &inst.b, params.overshoot)?;
    let mut x: Vec<T> = match x0 {
        Some(x0) if x0.len() != n => {
            return Err(Error::invalid(format!("start point of length {} for {n} variables", x0.len())))
        }
        Some(x0) => x0.to_vec(),
        None => vec![T::one(); n],
    };
    // x^{-1} = x^0 + 1 so that the first relative-change test cannot pass.
    let mut prev: Vec<T> = x.iter().map(|&v| v + T::one()).collect();
    let dense_trace = inst.m() <= DENSE_TRACE_MAX_ROWS;
    let floor = T::lit(MIN_REFERENCE_NORM);

    let mut steps = StepSizes::new(params.eta0, params.alpha, params.tau_reset);
    let mut samples = Vec::new();
    let start = Instant::now();
    let mut violation = sys.max_violation_of(&x);
    let mut k = 0usize;
    samples.push(TraceSample {
        iteration: 0,
        elapsed: 0.0,
        max_violation: violation,
        objective: inst.objective(&x),
        eta: steps.current(),
    });

    let reason = loop {
        let rel_change = distance(&x, &prev) / norm(&prev).max(floor);
        if !(violation >= params.epsilon) && !(rel_change >= params.epsilon) {
            break TerminationReason::Converged;
        }
        if k >= params.max_iterations {
            break TerminationReason::IterationCap;
        }
        if let Some(limit) = params.time_limit {
            if start.elapsed() >= limit {
                break TerminationReason::TimeLimit;
            }
        }

        std::mem::swap(&mut prev, &mut x);
        x.copy_from_slice(&prev);
        axpy(-steps.current(), &dir, &mut x);
        sys.sweep_in_place(&mut x);
        clip_in_place(&mut x, &inst.lower, &inst.upper);
        steps.advance();
        k += 1;

        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::NumericalFailure { iteration: k });
        }
        violation = sys.max_violation_of(&x);
        if dense_trace || k.is_multiple_of(SPARSE_TRACE_STRIDE) {
            samples.push(TraceSample {
                iteration: k,
                elapsed: start.elapsed().as_secs_f64(),
                max_violation: violation,
                objective: inst.objective(&x),
                eta: steps.current(),
            });
        }
    };
    let elapsed = start.elapsed().as_secs_f64();
    if samples.last().map(|s| s.iteration) != Some(k) {
        samples.push(TraceSample {
            iteration: k,
            elapsed,
            max_violation: violation,
            objective: inst.objective(&x),
            eta: steps.current(),
        });
    }
    Ok(Superiorized {
        solution: Vector::from_vec_unchecked(x),
        trace: IterateTrace { samples, termination_reason: reason, iterations: k, elapsed },
    })
}
