use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use crate::csvio::{read_table, write_table};
use crate::{Error, Result, Scalar};

pub const TRACE_HEADER: &str = "iteration,elapsed_seconds,max_violation,objective,eta";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TerminationReason {
    Converged,
    IterationCap,
    TimeLimit,
}

impl TerminationReason {
    pub fn as_str(self) -> &'static str {
        match self {
            TerminationReason::Converged => "converged",
            TerminationReason::IterationCap => "iteration-cap",
            TerminationReason::TimeLimit => "time-limit",
        }
    }
}

impl fmt::Display for TerminationReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TerminationReason {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "converged" => Ok(TerminationReason::Converged),
            "iteration-cap" => Ok(TerminationReason::IterationCap),
            "time-limit" => Ok(TerminationReason::TimeLimit),
            other => Err(Error::invalid(format!("unknown termination reason {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceSample<T> {
    pub iteration: usize,
    pub elapsed: f64,
    pub max_violation: T,
    pub objective: T,
    pub eta: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IterateTrace<T> {
    pub samples: Vec<TraceSample<T>>,
    pub termination_reason: TerminationReason,
    /// Iterations performed.
    pub iterations: usize,
    /// Wall-clock seconds spent in the loop.
    pub elapsed: f64,
}

impl<T: Scalar> IterateTrace<T> {
    pub fn last(&self) -> Option<&TraceSample<T>> {
        self.samples.last()
    }
}

/// Formats a float with 17 significant digits.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn trace_csv_string<T: Scalar>(samples: &[TraceSample<T>]) -> String {
    let rows = samples.iter().map(|p| {
        [
            p.iteration.to_string(),
            fmt_f64(p.elapsed),
            fmt_f64(p.max_violation.to_f64_lossy()),
            fmt_f64(p.objective.to_f64_lossy()),
            fmt_f64(p.eta.to_f64_lossy()),
        ]
    });
    write_table(TRACE_HEADER, rows).expect("writing to memory")
}

pub fn write_trace_csv<T: Scalar>(samples: &[TraceSample<T>], path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, trace_csv_string(samples))?;
    Ok(())
}

pub fn parse_trace_csv(text: &str) -> Result<Vec<TraceSample<f64>>> {
    read_table(text, TRACE_HEADER)?
        .into_iter()
        .map(|(line, f)| {
            let perr = |m: String| Error::Parse { line, message: m };
            let num = |s: &str| s.parse::<f64>().map_err(|e| perr(format!("{s:?}: {e}")));
            Ok(TraceSample {
                iteration: f[0].parse().map_err(|e| perr(format!("{:?}: {e}", &f[0])))?,
                elapsed: num(&f[1])?,
                max_violation: num(&f[2])?,
                objective: num(&f[3])?,
                eta: num(&f[4])?,
            })
        })
        .collect()
}

pub fn read_trace_csv(path: impl AsRef<Path>) -> Result<Vec<TraceSample<f64>>> {
    parse_trace_csv(&fs::read_to_string(path)?)
}
