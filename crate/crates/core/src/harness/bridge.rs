//! Subprocess contract for external solvers.
//!
//! The harness exports the cell's instance as MPS and runs
//!
//! ```text
//! <command...> --solver NAME --mps PATH --trace-out PATH --record-out PATH --time-limit SECONDS
//! ```
//!
//! The bridge writes a benchmark CSV (header plus one row) to `--record-out`
//! and, when the solver reports intermediate iterates, a trace CSV to
//! `--trace-out`. Both use the harness schemas byte for byte. Exit status 0
//! means the record is valid; [`EXIT_SOLVER_UNAVAILABLE`] means the solver
//! could not be loaded. The key columns of the bridge record (`m`, `n`,
//! `kappa`, `seed`, `algorithm`) are replaced by the cell's own key.

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::process::Command;

use super::records::{parse_benchmark_csv, BenchmarkRecord, REASON_SOLVER_UNAVAILABLE};
use crate::{Error, Result};

pub const EXIT_SOLVER_UNAVAILABLE: i32 = 3;
pub const REASON_BRIDGE_ERROR: &str = "bridge-error";
pub const REASON_BRIDGE_FORMAT_ERROR: &str = "bridge-format-error";

#[derive(Debug, Clone, PartialEq)]
pub struct BridgeInvocation {
    /// Program followed by its leading arguments.
    pub command: Vec<String>,
    pub solver: String,
    pub mps: PathBuf,
    pub trace_out: PathBuf,
    pub record_out: PathBuf,
    pub time_limit_seconds: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum BridgeOutcome {
    Completed(BenchmarkRecord),
    /// The record carries `termination_reason = solver-unavailable`.
    SolverUnavailable(BenchmarkRecord),
    /// Spawning failed; the program is missing or not executable.
    NotLaunched(String),
    Failed { exit_code: Option<i32>, message: String },
}

impl BridgeInvocation {
    pub fn args(&self) -> Vec<OsString> {
        let mut a: Vec<OsString> = self.command.iter().skip(1).map(OsString::from).collect();
        a.push("--solver".into());
        a.push(self.solver.clone().into());
        for (flag, p) in [("--mps", &self.mps), ("--trace-out", &self.trace_out), ("--record-out", &self.record_out)] {
            a.push(flag.into());
            a.push(p.clone().into_os_string());
        }
        a.push("--time-limit".into());
        a.push(format!("{}", self.time_limit_seconds).into());
        a
    }

    pub fn run(&self) -> Result<BridgeOutcome> {
        let program = self
            .command
            .first()
            .ok_or_else(|| Error::invalid("empty bridge command"))?;
        let _ = std::fs::remove_file(&self.record_out);
        let output = match Command::new(program).args(self.args()).output() {
            Ok(o) => o,
            Err(e) => return Ok(BridgeOutcome::NotLaunched(format!("{program}: {e}"))),
        };
        let code = output.status.code();
        let record = read_record(&self.record_out);
        Ok(match (code, record) {
            (Some(0), Ok(r)) => BridgeOutcome::Completed(r),
            (Some(EXIT_SOLVER_UNAVAILABLE), r) => BridgeOutcome::SolverUnavailable(r.unwrap_or_else(|_| {
                BenchmarkRecord::failed(0, 0, f64::NAN, 0, &format!("bridge:{}", self.solver), REASON_SOLVER_UNAVAILABLE)
            })),
            (code, r) => BridgeOutcome::Failed {
                exit_code: code,
                message: match r {
                    Err(e) if code == Some(0) => e.to_string(),
                    _ => String::from_utf8_lossy(&output.stderr).trim().to_string(),
                },
            },
        })
    }
}

fn read_record(path: &Path) -> Result<BenchmarkRecord> {
    let text = std::fs::read_to_string(path)?;
    let mut rows = parse_benchmark_csv(&text)?;
    if rows.len() != 1 {
        return Err(Error::Parse { line: 2, message: format!("expected one record, found {}", rows.len()) });
    }
    Ok(rows.remove(0))
}
