use std::cmp::Ordering;
use std::fs;
use std::io::Write;
use std::path::Path;

use crate::csvio::{read_table, write_table};
use crate::linsup::fmt_f64;
use crate::{Error, Result};

pub const BENCHMARK_HEADER: &str =
    "m,n,kappa,seed,algorithm,runtime_seconds,objective_final,max_violation_final,iterations,termination_reason";
/// Header of the canonical form, which drops the wall-clock column.
pub const CANONICAL_HEADER: &str =
    "m,n,kappa,seed,algorithm,objective_final,max_violation_final,iterations,termination_reason";

pub const REASON_KAPPA_MISMATCH: &str = "kappa-mismatch";
pub const REASON_SOLVER_UNAVAILABLE: &str = "solver-unavailable";
pub const REASON_OPTIMAL: &str = "optimal";
pub const REASON_INFEASIBLE: &str = "infeasible";
pub const REASON_UNBOUNDED: &str = "unbounded";

#[derive(Debug, Clone, PartialEq)]
pub struct BenchmarkRecord {
    pub m: usize,
    pub n: usize,
    pub kappa: f64,
    pub seed: u64,
    pub algorithm: String,
    pub runtime_seconds: f64,
    pub objective_final: f64,
    pub max_violation_final: f64,
    pub iterations: u64,
    pub termination_reason: String,
}

impl BenchmarkRecord {
    /// Placeholder record for a cell that produced no iterate.
    pub fn failed(m: usize, n: usize, kappa: f64, seed: u64, algorithm: &str, reason: &str) -> Self {
        BenchmarkRecord {
            m,
            n,
            kappa,
            seed,
            algorithm: algorithm.into(),
            runtime_seconds: 0.0,
            objective_final: f64::NAN,
            max_violation_final: f64::NAN,
            iterations: 0,
            termination_reason: reason.into(),
        }
    }

    pub fn key_cmp(&self, other: &Self) -> Ordering {
        (self.m, self.n)
            .cmp(&(other.m, other.n))
            .then(self.kappa.total_cmp(&other.kappa))
            .then(self.seed.cmp(&other.seed))
            .then_with(|| self.algorithm.cmp(&other.algorithm))
    }

    pub fn fields(&self) -> [String; 10] {
        [
            self.m.to_string(),
            self.n.to_string(),
            fmt_f64(self.kappa),
            self.seed.to_string(),
            self.algorithm.clone(),
            fmt_f64(self.runtime_seconds),
            fmt_f64(self.objective_final),
            fmt_f64(self.max_violation_final),
            self.iterations.to_string(),
            self.termination_reason.clone(),
        ]
    }

    /// [`Self::fields`] without `runtime_seconds`.
    pub fn canonical_fields(&self) -> [String; 9] {
        let [m, n, k, s, a, _, o, v, i, t] = self.fields();
        [m, n, k, s, a, o, v, i, t]
    }

    fn from_record(f: &csv::StringRecord, lineno: usize) -> Result<Self> {
        let perr = |message: String| Error::Parse { line: lineno, message };
        fn p<T: std::str::FromStr>(s: &str, what: &str, line: usize) -> Result<T>
        where
            T::Err: std::fmt::Display,
        {
            s.parse().map_err(|e| Error::Parse { line, message: format!("{what} {s:?}: {e}") })
        }
        let runtime_seconds: f64 = p(&f[5], "runtime_seconds", lineno)?;
        if !(runtime_seconds >= 0.0) {
            return Err(perr(format!("negative runtime {runtime_seconds}")));
        }
        if f[4].is_empty() || f[9].is_empty() {
            return Err(perr("empty algorithm or termination_reason".into()));
        }
        Ok(BenchmarkRecord {
            m: p(&f[0], "m", lineno)?,
            n: p(&f[1], "n", lineno)?,
            kappa: p(&f[2], "kappa", lineno)?,
            seed: p(&f[3], "seed", lineno)?,
            algorithm: f[4].to_string(),
            runtime_seconds,
            objective_final: p(&f[6], "objective_final", lineno)?,
            max_violation_final: p(&f[7], "max_violation_final", lineno)?,
            iterations: p(&f[8], "iterations", lineno)?,
            termination_reason: f[9].to_string(),
        })
    }
}

pub fn benchmark_csv_string(records: &[BenchmarkRecord]) -> String {
    write_table(BENCHMARK_HEADER, records.iter().map(BenchmarkRecord::fields)).expect("writing to memory")
}

pub fn canonical_csv_string(records: &[BenchmarkRecord]) -> String {
    write_table(CANONICAL_HEADER, records.iter().map(BenchmarkRecord::canonical_fields)).expect("writing to memory")
}

pub fn parse_benchmark_csv(text: &str) -> Result<Vec<BenchmarkRecord>> {
    read_table(text, BENCHMARK_HEADER)?
        .iter()
        .map(|(line, rec)| BenchmarkRecord::from_record(rec, *line))
        .collect()
}

pub fn read_benchmark_csv(path: impl AsRef<Path>) -> Result<Vec<BenchmarkRecord>> {
    parse_benchmark_csv(&fs::read_to_string(path)?)
}

/// Writes through a sibling temporary file and a rename.
pub fn write_atomic(path: impl AsRef<Path>, contents: &[u8]) -> Result<()> {
    let path = path.as_ref();
    let name = path
        .file_name()
        .ok_or_else(|| Error::invalid(format!("{} has no file name", path.display())))?;
    let mut tmp_name = std::ffi::OsString::from(".");
    tmp_name.push(name);
    tmp_name.push(".tmp");
    let tmp = path.with_file_name(tmp_name);
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(contents)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

pub fn write_benchmark_csv(records: &[BenchmarkRecord], path: impl AsRef<Path>) -> Result<()> {
    write_atomic(path, benchmark_csv_string(records).as_bytes())
}

pub fn write_canonical_csv(records: &[BenchmarkRecord], path: impl AsRef<Path>) -> Result<()> {
    write_atomic(path, canonical_csv_string(records).as_bytes())
}
