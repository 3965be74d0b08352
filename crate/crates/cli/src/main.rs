use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use log::info;

use linsup_core::densela::estimate_condition_number;
use linsup_core::harness::{emit_plots, read_benchmark_csv, run_grid, GridSpec, BENCHMARK_FILE, CANONICAL_FILE};
use linsup_core::linsup::{fmt_f64, superiorize, write_trace_csv, SuperiorizationParams};
use linsup_core::oracle::simplex_solve;
use linsup_core::probgen::{export_mps, generate_instance_with_scale, read_instance, write_instance, DEFAULT_SCALE};

#[derive(Parser)]
#[command(name = "linsup", version, about = "Linear superiorization workbench")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate an instance with a prescribed condition number.
    Gen {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        kappa: f64,
        #[arg(long)]
        seed: u64,
        /// Singular-value scale.
        #[arg(long, default_value_t = DEFAULT_SCALE)]
        s: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Solve an instance and report the final iterate.
    Solve {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, value_enum, default_value_t = SolveAlgorithm::Linsup)]
        algorithm: SolveAlgorithm,
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        trace_out: Option<PathBuf>,
    },
    /// Run a benchmark grid.
    Bench {
        #[arg(long, conflicts_with = "preset", required_unless_present = "preset")]
        grid_file: Option<PathBuf>,
        #[arg(long, value_parser = ["desk", "paper"])]
        preset: Option<String>,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Estimate the condition number of an instance's constraint matrix.
    Cond {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Write an instance in fixed-format MPS.
    ExportMps {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Render SVG panels and data files from a benchmark run.
    Plot {
        #[arg(long)]
        records: PathBuf,
        #[arg(long)]
        traces: PathBuf,
        #[arg(long)]
        out_dir: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SolveAlgorithm {
    Linsup,
    AmsOnly,
    SimplexOracle,
}

#[derive(Args)]
struct ParamArgs {
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    eta0: Option<f64>,
    #[arg(long)]
    overshoot: Option<f64>,
    #[arg(long)]
    tau_reset: Option<usize>,
    #[arg(long)]
    max_iterations: Option<usize>,
    /// Wall-clock limit in seconds.
    #[arg(long)]
    time_limit: Option<f64>,
}

impl ParamArgs {
    fn resolve(&self) -> SuperiorizationParams<f64> {
        let mut p = SuperiorizationParams::default();
        p.epsilon = self.epsilon.unwrap_or(p.epsilon);
        p.alpha = self.alpha.unwrap_or(p.alpha);
        p.eta0 = self.eta0.unwrap_or(p.eta0);
        p.overshoot = self.overshoot.unwrap_or(p.overshoot);
        p.tau_reset = self.tau_reset.unwrap_or(p.tau_reset);
        p.max_iterations = self.max_iterations.unwrap_or(p.max_iterations);
        if let Some(t) = self.time_limit {
            p.time_limit = Some(Duration::from_secs_f64(t));
        }
        p
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Gen { m, n, kappa, seed, s, out } => {
            let inst = generate_instance_with_scale(m, n, kappa, s, seed)?;
            write_instance(&inst, &out).with_context(|| format!("writing {}", out.display()))?;
            println!("wrote {m}x{n} instance (kappa {kappa:e}, seed {seed}) to {}", out.display());
        }
        Command::Solve { instance, algorithm, params, trace_out } => {
            let inst = read_instance(&instance).with_context(|| format!("reading {}", instance.display()))?;
            let (x, iterations, reason) = match algorithm {
                SolveAlgorithm::SimplexOracle => {
                    if trace_out.is_some() {
                        bail!("--trace-out is only available for linsup and ams-only");
                    }
                    let res = simplex_solve(&inst)?;
                    let Some(x) = res.x_opt else {
                        println!("status: {}", res.status.as_str());
                        return Ok(ExitCode::FAILURE);
                    };
                    (x, res.pivot_count, res.status.as_str().to_string())
                }
                SolveAlgorithm::Linsup | SolveAlgorithm::AmsOnly => {
                    let mut p = params.resolve();
                    if matches!(algorithm, SolveAlgorithm::AmsOnly) {
                        p = p.unperturbed();
                    }
                    let res = superiorize(&inst, &p, None)?;
                    if let Some(path) = &trace_out {
                        write_trace_csv(&res.trace.samples, path)
                            .with_context(|| format!("writing {}", path.display()))?;
                    }
                    println!("elapsed_seconds: {}", fmt_f64(res.trace.elapsed));
                    (res.solution, res.trace.iterations, res.trace.termination_reason.as_str().to_string())
                }
            };
            println!("termination_reason: {reason}");
            println!("iterations: {iterations}");
            println!("objective: {}", fmt_f64(inst.objective(&x)));
            println!("max_violation: {}", fmt_f64(inst.max_violation(&x)));
        }
        Command::Bench { grid_file, preset, workers, out_dir } => {
            let spec = match (grid_file, preset) {
                (Some(path), _) => {
                    GridSpec::from_file(&path).with_context(|| format!("grid file {}", path.display()))?
                }
                (None, Some(name)) => GridSpec::preset(&name)?,
                (None, None) => bail!("one of --grid-file or --preset is required"),
            };
            info!("running {} dims x {} kappas x {} seeds", spec.dims.len(), spec.kappas.len(), spec.seeds.len());
            let records = run_grid(&spec, &out_dir, workers)?;
            println!(
                "{} records written to {} and {}",
                records.len(),
                out_dir.join(BENCHMARK_FILE).display(),
                out_dir.join(CANONICAL_FILE).display()
            );
        }
        Command::Cond { instance, tol } => {
            let inst = read_instance(&instance).with_context(|| format!("reading {}", instance.display()))?;
            println!("{}", fmt_f64(estimate_condition_number(&inst.a, tol)?));
        }
        Command::ExportMps { instance, out } => {
            let inst = read_instance(&instance).with_context(|| format!("reading {}", instance.display()))?;
            export_mps(&inst, &out).with_context(|| format!("writing {}", out.display()))?;
        }
        Command::Plot { records, traces, out_dir } => {
            let recs = read_benchmark_csv(&records).with_context(|| format!("reading {}", records.display()))?;
            let report = emit_plots(&recs, &traces, &out_dir)?;
            println!("{} files written, {} warnings", report.files.len(), report.warnings.len());
            if report.files.is_empty() {
                return Ok(ExitCode::FAILURE);
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}
