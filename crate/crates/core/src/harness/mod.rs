//! File formats, grid rendering, the experiment suites and the command line.

pub mod cli;
pub mod experiment;
pub mod grid;
pub mod samples_csv;

pub use cli::{run_cli, CliOutput};
pub use experiment::{
    experiment_harmonic, experiment_invariance, invariance_trial, Cell, ExperimentReport,
    HarmonicFunction,
};
pub use grid::{evaluate_grid, render_pgm, write_pgm, GridSpec, Method};
pub use samples_csv::{load_samples_csv, parse_samples_csv};

/// Seventeen significant digits; round-trips every `f64`.
pub fn fmt_f64(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return format!("{v}");
    }
    format!("{v:.16e}")
}
