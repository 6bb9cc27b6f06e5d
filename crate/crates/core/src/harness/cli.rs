//! `moebius-nn` command line.
//!
//! Exit status: 0 on success, 1 on a usage error, 2 when the library
//! reports a domain or degeneracy error, 3 when an experiment runs but
//! misses its tolerance.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use super::experiment::{experiment_harmonic, experiment_invariance, HarmonicFunction};
use super::grid::{evaluate_grid, write_pgm, GridSpec, Method};
use super::{fmt_f64, load_samples_csv};
use crate::error::{Error, Result};
use crate::geom::Point;
use crate::interp::{
    classify_query, interpolate, lune_angles, query_weights, InterpOptions, Policy, QueryClass,
    Value, WeightFunction, DEFAULT_SNAP_TOLERANCE,
};

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CliOutput {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Parser, Debug)]
#[command(name = "moebius-nn", version, about = "Möbius-invariant natural neighbor interpolation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Interpolate at one point and print the value
    Eval(QueryArgs),
    /// Print the neighbors, lune angles and weights at one point as CSV
    Weights(QueryArgs),
    /// Rasterise the interpolant over a grid into an ASCII PGM
    Grid(GridArgs),
    /// Run an experiment suite and write its report as CSV
    Experiment(ExperimentArgs),
}

#[derive(Args, Debug)]
struct InterpFlags {
    #[arg(long, value_enum, default_value_t = WeightFn::TanHalf)]
    weight_fn: WeightFn,
    /// Evaluate outside the convex hull of the sites
    #[arg(long)]
    allow_exterior: bool,
    /// Snap distance as a fraction of the site bounding-box diagonal
    #[arg(long, default_value_t = DEFAULT_SNAP_TOLERANCE)]
    snap_tolerance: f64,
}

impl InterpFlags {
    fn options(&self) -> InterpOptions {
        InterpOptions {
            weight_fn: self.weight_fn.into(),
            policy: if self.allow_exterior {
                Policy::AllowExterior
            } else {
                Policy::Strict
            },
            snap_tolerance: self.snap_tolerance,
        }
    }
}

#[derive(Args, Debug)]
struct QueryArgs {
    #[arg(long)]
    samples: PathBuf,
    /// Query point as X,Y
    #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
    at: Point,
    #[command(flatten)]
    flags: InterpFlags,
}

#[derive(Args, Debug)]
struct GridArgs {
    #[arg(long)]
    samples: PathBuf,
    /// XMIN,XMAX,YMIN,YMAX,NX,NY
    #[arg(long, allow_hyphen_values = true)]
    grid: GridSpec,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, value_enum, default_value_t = MethodArg::Moebius)]
    method: MethodArg,
    #[command(flatten)]
    flags: InterpFlags,
}

#[derive(Args, Debug)]
struct ExperimentArgs {
    #[arg(value_enum)]
    kind: ExperimentKind,
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
    /// Number of invariance trials
    #[arg(long, default_value_t = 50)]
    trials: usize,
    /// Harmonic test function
    #[arg(long, value_enum, default_value_t = FunctionArg::ReZ2)]
    function: FunctionArg,
    /// Harmonic query point as X,Y
    #[arg(long, value_parser = parse_point, allow_hyphen_values = true, default_value = "0.3,0.2")]
    query: Point,
    /// Comma-separated sample counts for the harmonic experiment
    #[arg(long, value_delimiter = ',', default_value = "16,64,256,1024")]
    n_list: Vec<usize>,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum WeightFn {
    TanHalf,
    TanHalfSq,
    Angle,
}

impl From<WeightFn> for WeightFunction {
    fn from(w: WeightFn) -> Self {
        match w {
            WeightFn::TanHalf => WeightFunction::TanHalf,
            WeightFn::TanHalfSq => WeightFunction::TanHalfSquared,
            WeightFn::Angle => WeightFunction::Angle,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum MethodArg {
    Moebius,
    Sibson,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum ExperimentKind {
    Invariance,
    Harmonic,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum FunctionArg {
    #[value(name = "re_z2")]
    ReZ2,
    #[value(name = "im_z3")]
    ImZ3,
    #[value(name = "log_shift")]
    LogShift,
}

impl From<FunctionArg> for HarmonicFunction {
    fn from(f: FunctionArg) -> Self {
        match f {
            FunctionArg::ReZ2 => HarmonicFunction::ReZ2,
            FunctionArg::ImZ3 => HarmonicFunction::ImZ3,
            FunctionArg::LogShift => HarmonicFunction::LogShift,
        }
    }
}

fn parse_point(s: &str) -> std::result::Result<Point, String> {
    let (x, y) = s
        .split_once(',')
        .ok_or_else(|| format!("`{s}` is not X,Y"))?;
    let x: f64 = x.trim().parse().map_err(|_| format!("bad x in `{s}`"))?;
    let y: f64 = y.trim().parse().map_err(|_| format!("bad y in `{s}`"))?;
    if !(x.is_finite() && y.is_finite()) {
        return Err(format!("`{s}` is not finite"));
    }
    Ok(Point::new(x, y))
}

fn format_value(v: Value) -> String {
    match v {
        Value::Real(x) => fmt_f64(x),
        Value::Complex(z) => format!("{},{}", fmt_f64(z.re), fmt_f64(z.im)),
    }
}

enum Outcome {
    Done(String),
    ExperimentFailed(String),
}

fn run(command: Command) -> Result<Outcome> {
    match command {
        Command::Eval(q) => {
            let samples = load_samples_csv(&q.samples)?;
            let v = interpolate(&samples, q.at, &q.flags.options())?;
            Ok(Outcome::Done(format!("{}\n", format_value(v))))
        }
        Command::Weights(q) => {
            let samples = load_samples_csv(&q.samples)?;
            let opts = q.flags.options();
            let weights = query_weights(&samples, q.at, &opts)?;
            let angles = match classify_query(&samples, q.at, opts.snap_tolerance) {
                // a sample's own lune angle is pi in the limit
                QueryClass::Coincident(_) => None,
                _ => Some(lune_angles(&samples, q.at)?),
            };
            let mut out = String::from("index,theta,weight\n");
            for &(i, w) in &weights.entries {
                let theta = match &angles {
                    Some(a) => a.angle_of(i).unwrap_or(0.0),
                    None => std::f64::consts::PI,
                };
                out.push_str(&format!("{i},{},{}\n", fmt_f64(theta), fmt_f64(w)));
            }
            Ok(Outcome::Done(out))
        }
        Command::Grid(g) => {
            let samples = load_samples_csv(&g.samples)?;
            let method = match g.method {
                MethodArg::Moebius => Method::Moebius,
                MethodArg::Sibson => Method::Sibson,
            };
            let values = evaluate_grid(&samples, &g.grid, method, &g.flags.options());
            write_pgm(&values, g.grid.nx, g.grid.ny, &g.out)?;
            let failed = values.iter().filter(|v| v.is_none()).count();
            Ok(Outcome::Done(format!(
                "wrote {} ({}x{}, {failed} cells outside the domain)\n",
                g.out.display(),
                g.grid.nx,
                g.grid.ny
            )))
        }
        Command::Experiment(e) => {
            let report = match e.kind {
                ExperimentKind::Invariance => experiment_invariance(e.seed, e.trials)?,
                ExperimentKind::Harmonic => {
                    experiment_harmonic(e.seed, &e.n_list, e.query, e.function.into())?
                }
            };
            std::fs::write(&e.out, report.to_csv())
                .map_err(|err| Error::Io(format!("{}: {err}", e.out.display())))?;
            let line = format!("{}\n", report.summary);
            Ok(if report.passed {
                Outcome::Done(line)
            } else {
                Outcome::ExperimentFailed(line)
            })
        }
    }
}

/// Runs the command line; `args[0]` is the program name.
pub fn run_cli<I, S>(args: I) -> CliOutput
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                CliOutput {
                    code: 1,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                CliOutput {
                    code: 0,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    match run(cli.command) {
        Ok(Outcome::Done(stdout)) => CliOutput {
            code: 0,
            stdout,
            stderr: String::new(),
        },
        Ok(Outcome::ExperimentFailed(stdout)) => CliOutput {
            code: 3,
            stdout,
            stderr: String::new(),
        },
        Err(e) => CliOutput {
            code: 2,
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}
