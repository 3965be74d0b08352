//! Experiment grids, benchmark records and plot emission.

mod bridge;
mod grid;
mod plot;
mod records;
mod run;

pub use bridge::{
    BridgeInvocation, BridgeOutcome, EXIT_SOLVER_UNAVAILABLE, REASON_BRIDGE_ERROR, REASON_BRIDGE_FORMAT_ERROR,
};
pub use grid::{default_bridge_command, derive_cell_seed, Algorithm, GridSpec, DEFAULT_KAPPAS, FULL_GRID_DIMS};
pub use plot::{emit_plots, render_data, render_svg, Panel, PlotReport, Series, MAX_SERIES_POINTS};
pub use records::{
    benchmark_csv_string, canonical_csv_string, parse_benchmark_csv, read_benchmark_csv, write_atomic,
    write_benchmark_csv, write_canonical_csv, BenchmarkRecord, BENCHMARK_HEADER, CANONICAL_HEADER,
    REASON_INFEASIBLE, REASON_KAPPA_MISMATCH, REASON_OPTIMAL, REASON_SOLVER_UNAVAILABLE, REASON_UNBOUNDED,
};
pub use run::{
    cell_stem, instance_file_name, kappa_tag, run_grid, trace_file_name, BENCHMARK_FILE, CANONICAL_FILE,
    DEFAULT_BRIDGE_TIME_LIMIT, INSTANCES_DIR, KAPPA_VERIFY_TOLERANCE, SIMPLEX_TRACE_STRIDE, TRACES_DIR,
};
