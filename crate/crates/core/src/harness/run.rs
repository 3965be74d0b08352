use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use log::{info, warn};
use rayon::prelude::*;

use super::bridge::{BridgeInvocation, BridgeOutcome, REASON_BRIDGE_ERROR, REASON_BRIDGE_FORMAT_ERROR};
use super::grid::{derive_cell_seed, Algorithm, GridSpec};
use super::records::*;
use crate::densela::estimate_condition_number;
use crate::linsup::{superiorize, write_trace_csv, TraceSample, TRACE_HEADER};
use crate::oracle::{simplex_solve_with, OracleStatus, SimplexOptions};
use crate::probgen::{export_mps, generate_instance_with_scale, write_instance, LpInstance};
use crate::{Error, Result};

/// Relative tolerance of the per-cell condition-number check.
pub const KAPPA_VERIFY_TOLERANCE: f64 = 1e-4;
pub const SIMPLEX_TRACE_STRIDE: usize = 10;
pub const DEFAULT_BRIDGE_TIME_LIMIT: Duration = Duration::from_secs(600);

pub const BENCHMARK_FILE: &str = "benchmark.csv";
pub const CANONICAL_FILE: &str = "benchmark_canonical.csv";
pub const INSTANCES_DIR: &str = "instances";
pub const TRACES_DIR: &str = "traces";

/// `1e3`, `2.5e1`, ...
pub fn kappa_tag(kappa: f64) -> String {
    format!("{kappa:e}")
}

pub fn cell_stem(m: usize, n: usize, kappa: f64, seed: u64) -> String {
    format!("{m}x{n}_kappa{}_seed{seed}", kappa_tag(kappa))
}

pub fn trace_file_name(m: usize, n: usize, kappa: f64, seed: u64, algorithm: &str) -> String {
    format!("{}_{}.csv", cell_stem(m, n, kappa, seed), algorithm.replace(':', "-"))
}

pub fn instance_file_name(m: usize, n: usize, kappa: f64, seed: u64) -> String {
    format!("{}.lsup", cell_stem(m, n, kappa, seed))
}

struct Cell {
    m: usize,
    n: usize,
    kappa_index: usize,
    kappa: f64,
    seed: u64,
}

/// Runs every cell of `spec`, writing instances, traces and both benchmark
/// CSVs under `out_dir`. Returns the records sorted by cell key.
pub fn run_grid(spec: &GridSpec, out_dir: impl AsRef<Path>, workers: usize) -> Result<Vec<BenchmarkRecord>> {
    spec.validate()?;
    let out = out_dir.as_ref();
    fs::create_dir_all(out.join(INSTANCES_DIR))?;
    fs::create_dir_all(out.join(TRACES_DIR))?;

    let mut cells = Vec::new();
    for &(m, n) in &spec.dims {
        for (kappa_index, &kappa) in spec.kappas.iter().enumerate() {
            for &seed in &spec.seeds {
                cells.push(Cell { m, n, kappa_index, kappa, seed });
            }
        }
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::Internal(format!("thread pool: {e}")))?;
    let per_cell: Vec<Result<Vec<BenchmarkRecord>>> =
        pool.install(|| cells.par_iter().map(|c| run_cell(spec, c, out)).collect());

    let mut records = Vec::new();
    for r in per_cell {
        records.extend(r?);
    }
    records.sort_by(BenchmarkRecord::key_cmp);
    write_benchmark_csv(&records, out.join(BENCHMARK_FILE))?;
    write_canonical_csv(&records, out.join(CANONICAL_FILE))?;
    Ok(records)
}

/// Only I/O errors escape; solver failures become termination reasons.
fn run_cell(spec: &GridSpec, cell: &Cell, out: &Path) -> Result<Vec<BenchmarkRecord>> {
    let Cell { m, n, kappa, seed, .. } = *cell;
    let inst_seed = derive_cell_seed(spec.base_seed, m, n, cell.kappa_index, seed);
    let trace_path = |alg: &str| out.join(TRACES_DIR).join(trace_file_name(m, n, kappa, seed, alg));
    let names: Vec<String> = spec.algorithms.iter().map(Algorithm::name).collect();

    let fail_all = |reason: &str| -> Result<Vec<BenchmarkRecord>> {
        names
            .iter()
            .map(|alg| {
                fs::write(trace_path(alg), format!("{TRACE_HEADER}\n"))?;
                Ok(BenchmarkRecord::failed(m, n, kappa, seed, alg, reason))
            })
            .collect()
    };

    let inst = match generate_instance_with_scale(m, n, kappa, spec.scale, inst_seed) {
        Ok(i) => i,
        Err(e) => {
            warn!("{}: generation failed: {e}", cell_stem(m, n, kappa, seed));
            return fail_all(error_reason(&e));
        }
    };
    write_instance(&inst, out.join(INSTANCES_DIR).join(instance_file_name(m, n, kappa, seed)))?;

    let verified = estimate_condition_number(&inst.a, 1e-10)
        .map(|est| ((est - kappa) / kappa).abs() <= KAPPA_VERIFY_TOLERANCE)
        .unwrap_or(false);
    if !verified {
        warn!("{}: condition number re-verification failed", cell_stem(m, n, kappa, seed));
        return fail_all(REASON_KAPPA_MISMATCH);
    }

    let mut records = Vec::with_capacity(names.len());
    for (alg, name) in spec.algorithms.iter().zip(&names) {
        let path = trace_path(name);
        let (rec, samples) = match alg {
            Algorithm::Linsup => run_linsup(spec, &inst, false),
            Algorithm::AmsOnly => run_linsup(spec, &inst, true),
            Algorithm::SimplexOracle => run_simplex(&inst),
            Algorithm::Bridge(solver) => run_bridge(spec, &inst, solver, out, &path)?,
        };
        let mut rec = rec;
        rec.m = m;
        rec.n = n;
        rec.kappa = kappa;
        rec.seed = seed;
        rec.algorithm = name.clone();
        if let Some(samples) = samples {
            write_trace_csv(&samples, &path)?;
        }
        info!("{} {name}: {} in {:.3}s", cell_stem(m, n, kappa, seed), rec.termination_reason, rec.runtime_seconds);
        records.push(rec);
    }
    Ok(records)
}

fn error_reason(e: &Error) -> &'static str {
    match e {
        Error::NumericalFailure { .. } => "numerical-failure",
        Error::Capacity(_) => "capacity",
        Error::RankDeficient { .. } => "rank-deficient",
        _ => "error",
    }
}

fn blank(reason: &str) -> BenchmarkRecord {
    BenchmarkRecord::failed(0, 0, 0.0, 0, "", reason)
}

fn run_linsup(
    spec: &GridSpec,
    inst: &LpInstance<f64>,
    unperturbed: bool,
) -> (BenchmarkRecord, Option<Vec<TraceSample<f64>>>) {
    let params = if unperturbed { spec.params.unperturbed() } else { spec.params.clone() };
    match superiorize(inst, &params, None) {
        Ok(res) => {
            let last = res.trace.last().expect("trace has an initial sample");
            let rec = BenchmarkRecord {
                runtime_seconds: res.trace.elapsed,
                objective_final: last.objective,
                max_violation_final: last.max_violation,
                iterations: res.trace.iterations as u64,
                termination_reason: res.trace.termination_reason.as_str().into(),
                ..blank("")
            };
            (rec, Some(res.trace.samples))
        }
        Err(e) => (blank(error_reason(&e)), Some(Vec::new())),
    }
}

fn run_simplex(inst: &LpInstance<f64>) -> (BenchmarkRecord, Option<Vec<TraceSample<f64>>>) {
    let mut samples = Vec::new();
    let mut last_pivot = 0;
    let start = Instant::now();
    let result = simplex_solve_with(inst, &SimplexOptions::default(), |p| {
        last_pivot = p.pivots;
        if p.pivots % SIMPLEX_TRACE_STRIDE == 0 {
            samples.push(TraceSample {
                iteration: p.pivots,
                elapsed: p.elapsed,
                max_violation: inst.max_violation(p.x),
                objective: inst.objective(p.x),
                eta: 0.0,
            });
        }
    });
    let runtime = start.elapsed().as_secs_f64();
    match result {
        Ok(res) => {
            let mut rec = BenchmarkRecord {
                runtime_seconds: runtime,
                iterations: res.pivot_count as u64,
                ..blank(match res.status {
                    OracleStatus::Optimal => REASON_OPTIMAL,
                    OracleStatus::Infeasible => REASON_INFEASIBLE,
                    OracleStatus::Unbounded => REASON_UNBOUNDED,
                })
            };
            if let Some(x) = &res.x_opt {
                rec.objective_final = inst.objective(x);
                rec.max_violation_final = inst.max_violation(x);
                if samples.last().map(|s| s.iteration) == Some(res.pivot_count) {
                    samples.pop();
                }
                samples.push(TraceSample {
                    iteration: res.pivot_count,
                    elapsed: runtime,
                    max_violation: rec.max_violation_final,
                    objective: rec.objective_final,
                    eta: 0.0,
                });
            }
            (rec, Some(samples))
        }
        Err(e) => {
            let mut rec = blank(error_reason(&e));
            rec.runtime_seconds = runtime;
            rec.iterations = last_pivot as u64;
            (rec, Some(samples))
        }
    }
}

fn run_bridge(
    spec: &GridSpec,
    inst: &LpInstance<f64>,
    solver: &str,
    out: &Path,
    trace_path: &Path,
) -> Result<(BenchmarkRecord, Option<Vec<TraceSample<f64>>>)> {
    let stem = trace_path.file_stem().and_then(|s| s.to_str()).unwrap_or("bridge").to_string();
    let work: PathBuf = out.join("bridge");
    fs::create_dir_all(&work)?;
    let mps = work.join(format!("{stem}.mps"));
    export_mps(inst, &mps)?;
    let _ = fs::remove_file(trace_path);
    let inv = BridgeInvocation {
        command: spec.bridge_command.clone(),
        solver: solver.into(),
        mps,
        trace_out: trace_path.to_path_buf(),
        record_out: work.join(format!("{stem}.record.csv")),
        time_limit_seconds: spec.params.time_limit.unwrap_or(DEFAULT_BRIDGE_TIME_LIMIT).as_secs_f64(),
    };
    let rec = match inv.run()? {
        BridgeOutcome::Completed(r) => r,
        BridgeOutcome::SolverUnavailable(mut r) => {
            r.termination_reason = REASON_SOLVER_UNAVAILABLE.into();
            r
        }
        BridgeOutcome::NotLaunched(msg) => {
            warn!("bridge not launched: {msg}");
            blank(REASON_SOLVER_UNAVAILABLE)
        }
        BridgeOutcome::Failed { exit_code, message } => {
            warn!("bridge exited with {exit_code:?}: {message}");
            blank(if exit_code == Some(0) { REASON_BRIDGE_FORMAT_ERROR } else { REASON_BRIDGE_ERROR })
        }
    };
    if trace_path.exists() {
        return Ok((rec, None));
    }
    let samples = if rec.objective_final.is_finite() {
        vec![TraceSample {
            iteration: rec.iterations as usize,
            elapsed: rec.runtime_seconds,
            max_violation: rec.max_violation_final,
            objective: rec.objective_final,
            eta: 0.0,
        }]
    } else {
        Vec::new()
    };
    Ok((rec, Some(samples)))
}
