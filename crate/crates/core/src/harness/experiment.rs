//! Möbius invariance and harmonic reconstruction experiments.

use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::fmt_f64;
use crate::error::{Error, Result};
use crate::geom::{random_moebius, MoebiusMap, Point};
use crate::interp::{
    classify_query, interpolate, lune_angles, InterpOptions, Policy, QueryClass, SampleSet,
    DEFAULT_SNAP_TOLERANCE,
};

pub const INVARIANCE_TOLERANCE: f64 = 1e-8;
pub const HARMONIC_FINAL_TOLERANCE: f64 = 1e-3;
const INVARIANCE_SITES: usize = 20;
const POLE_CLEARANCE: f64 = 0.1;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Text(String),
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Int(v) => write!(f, "{v}"),
            Cell::Float(v) => f.write_str(&fmt_f64(*v)),
            Cell::Text(s) => f.write_str(s),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentReport {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    pub passed: bool,
    pub summary: String,
}

impl ExperimentReport {
    /// Numeric values of `column`; text cells read as NaN.
    pub fn column(&self, column: &str) -> Vec<f64> {
        let Some(k) = self.columns.iter().position(|c| c == column) else {
            return Vec::new();
        };
        self.rows
            .iter()
            .map(|r| match &r[k] {
                Cell::Int(v) => *v as f64,
                Cell::Float(v) => *v,
                Cell::Text(_) => f64::NAN,
            })
            .collect()
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::to_string).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

/// Deviation of one invariance trial.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialOutcome {
    /// `|f(T(S), T(s)) - f(S, s)|` over the elevation range.
    pub value_deviation: f64,
    /// Largest lune-angle difference matched by index; infinite when the
    /// neighbor sets differ.
    pub angle_mismatch: f64,
}

/// Interpolates before and after mapping sites and query through `map`.
/// The mapped query may fall outside the mapped hull, so the transformed
/// side is evaluated with [`Policy::AllowExterior`].
pub fn invariance_trial(samples: &SampleSet, query: Point, map: &MoebiusMap) -> Result<TrialOutcome> {
    let image = |p: Point| {
        map.apply_point(p)
            .filter(Point::is_finite)
            .ok_or_else(|| Error::DegenerateInput(format!("({}, {}) maps to infinity", p.x, p.y)))
    };
    let sites = samples
        .sites()
        .iter()
        .map(|&p| image(p))
        .collect::<Result<Vec<_>>>()?;
    let mapped = SampleSet::new(sites, samples.elevations().clone())?;
    let mapped_query = image(query)?;

    let before = interpolate(samples, query, &InterpOptions::default())?.as_complex();
    let open = InterpOptions {
        policy: Policy::AllowExterior,
        ..InterpOptions::default()
    };
    let after = interpolate(&mapped, mapped_query, &open)?.as_complex();

    let zs: Vec<f64> = (0..samples.len())
        .map(|i| samples.elevations().get(i).re())
        .collect();
    let range = zs.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
        - zs.iter().cloned().fold(f64::INFINITY, f64::min);
    let scale = if range > 0.0 { range } else { 1.0 };

    let a0 = lune_angles(samples, query)?;
    let a1 = lune_angles(&mapped, mapped_query)?;
    let mut i0 = a0.indices();
    let mut i1 = a1.indices();
    i0.sort_unstable();
    i1.sort_unstable();
    let angle_mismatch = if i0 != i1 {
        f64::INFINITY
    } else {
        a0.entries
            .iter()
            .map(|&(i, t)| (a1.angle_of(i).unwrap_or(f64::NAN) - t).abs())
            .fold(0.0, f64::max)
    };
    Ok(TrialOutcome {
        value_deviation: (after - before).norm() / scale,
        angle_mismatch,
    })
}

fn describe(map: &MoebiusMap) -> &'static str {
    if map.is_conjugating() {
        "orientation-reversing"
    } else {
        "orientation-preserving"
    }
}

/// Random sites in `[-1, 1]^2` with random elevations and an interior query.
fn random_instance(rng: &mut ChaCha8Rng) -> Result<(SampleSet, Point)> {
    let sites: Vec<Point> = (0..INVARIANCE_SITES)
        .map(|_| Point::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let z: Vec<f64> = (0..INVARIANCE_SITES).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let samples = SampleSet::new(sites, z)?;
    for _ in 0..10_000 {
        let q = Point::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        if classify_query(&samples, q, DEFAULT_SNAP_TOLERANCE) == QueryClass::Interior {
            return Ok((samples, q));
        }
    }
    Err(Error::GeneratorExhausted(10_000))
}

/// Seeded invariance trials; fails if any deviation exceeds `1e-8`.
pub fn experiment_invariance(seed: u64, trials: usize) -> Result<ExperimentReport> {
    if trials == 0 {
        return Err(Error::Precondition("at least one trial".into()));
    }
    let mut master = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::with_capacity(trials);
    let mut worst_value = 0.0f64;
    let mut worst_angle = 0.0f64;
    let mut failures = 0;
    for trial in 0..trials {
        let trial_seed: u64 = master.gen();
        let mut rng = ChaCha8Rng::seed_from_u64(trial_seed);
        let (samples, query) = random_instance(&mut rng)?;
        let mut forbidden = samples.sites().to_vec();
        forbidden.push(query);
        let map = random_moebius(rng.gen(), &forbidden, POLE_CLEARANCE)?;
        let (dev, mis) = match invariance_trial(&samples, query, &map) {
            Ok(o) => (o.value_deviation, o.angle_mismatch),
            Err(_) => (f64::INFINITY, f64::INFINITY),
        };
        let ok = dev <= INVARIANCE_TOLERANCE && mis <= INVARIANCE_TOLERANCE;
        if !ok {
            failures += 1;
        }
        worst_value = worst_value.max(dev);
        worst_angle = worst_angle.max(mis);
        rows.push(vec![
            Cell::Int(trial as i64),
            Cell::Text(describe(&map).into()),
            Cell::Float(dev),
            Cell::Float(mis),
            Cell::Text(if ok { "pass" } else { "fail" }.into()),
        ]);
    }
    let passed = failures == 0;
    Ok(ExperimentReport {
        name: "invariance".into(),
        columns: ["trial", "map", "value_deviation", "angle_mismatch", "status"]
            .map(String::from)
            .to_vec(),
        rows,
        passed,
        summary: format!(
            "invariance: {} {trials} trials, {failures} failed, max value deviation {worst_value:e}, max angle mismatch {worst_angle:e} (tolerance {INVARIANCE_TOLERANCE:e})",
            if passed { "PASS" } else { "FAIL" }
        ),
    })
}

/// Test functions harmonic on the closed unit disk.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HarmonicFunction {
    /// `x^2 - y^2`
    ReZ2,
    /// `3 x^2 y - y^3`
    ImZ3,
    /// `ln |z - 2|`
    LogShift,
}

impl HarmonicFunction {
    pub fn eval(self, p: Point) -> f64 {
        match self {
            HarmonicFunction::ReZ2 => p.x * p.x - p.y * p.y,
            HarmonicFunction::ImZ3 => 3.0 * p.x * p.x * p.y - p.y * p.y * p.y,
            HarmonicFunction::LogShift => (p.x - 2.0).hypot(p.y).ln(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            HarmonicFunction::ReZ2 => "re_z2",
            HarmonicFunction::ImZ3 => "im_z3",
            HarmonicFunction::LogShift => "log_shift",
        }
    }
}

impl FromStr for HarmonicFunction {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "re_z2" => Ok(HarmonicFunction::ReZ2),
            "im_z3" => Ok(HarmonicFunction::ImZ3),
            "log_shift" => Ok(HarmonicFunction::LogShift),
            _ => Err(Error::Precondition(format!("unknown harmonic function `{s}`"))),
        }
    }
}

/// `n` equispaced points on the unit circle, rotated by a seeded phase
/// (zero for seed 0) of less than one spacing.
pub fn circle_samples(n: usize, seed: u64, f: HarmonicFunction) -> Result<SampleSet> {
    let phase = if seed == 0 {
        0.0
    } else {
        ChaCha8Rng::seed_from_u64(seed).gen_range(0.0..1.0) * TAU / n as f64
    };
    let sites: Vec<Point> = (0..n)
        .map(|k| {
            let t = phase + k as f64 * TAU / n as f64;
            Point::new(t.cos(), t.sin())
        })
        .collect();
    let z: Vec<f64> = sites.iter().map(|&p| f.eval(p)).collect();
    SampleSet::new(sites, z)
}

/// Dense-circle convergence of the `tan(theta/2)` interpolant and of the
/// normalised angle sum `(1 / 2 pi) sum theta_i f(s_i)`.
///
/// Passes when both error sequences decrease strictly with `n` and the last
/// errors are at most `1e-3`.
pub fn experiment_harmonic(
    seed: u64,
    n_list: &[usize],
    query: Point,
    function: HarmonicFunction,
) -> Result<ExperimentReport> {
    if !(query.is_finite() && query.norm() < 1.0) {
        return Err(Error::OutsideDomain {
            x: query.x,
            y: query.y,
        });
    }
    if n_list.is_empty() || n_list.iter().any(|&n| n < 3) {
        return Err(Error::Precondition("sample counts must be at least 3".into()));
    }
    let exact = function.eval(query);
    let mut rows = Vec::new();
    let mut tan_errors = Vec::new();
    let mut lemma_errors = Vec::new();
    for &n in n_list {
        let samples = circle_samples(n, seed, function)?;
        let interp = interpolate(&samples, query, &InterpOptions::default())?.re();
        let angles = lune_angles(&samples, query)?;
        let lemma = angles
            .entries
            .iter()
            .map(|&(i, t)| t * samples.elevations().get(i).re())
            .sum::<f64>()
            / TAU;
        let (te, le) = ((interp - exact).abs(), (lemma - exact).abs());
        tan_errors.push(te);
        lemma_errors.push(le);
        rows.push(vec![
            Cell::Int(n as i64),
            Cell::Float(TAU / n as f64),
            Cell::Float(interp),
            Cell::Float(te),
            Cell::Float(lemma),
            Cell::Float(le),
        ]);
    }
    let decreasing = |e: &[f64]| e.windows(2).all(|w| w[1] < w[0]);
    let final_ok = |e: &[f64]| e.last().is_some_and(|&v| v <= HARMONIC_FINAL_TOLERANCE);
    let passed = decreasing(&tan_errors)
        && decreasing(&lemma_errors)
        && final_ok(&tan_errors)
        && final_ok(&lemma_errors);
    Ok(ExperimentReport {
        name: format!("harmonic/{}", function.name()),
        columns: [
            "n",
            "epsilon",
            "tan_half_value",
            "tan_half_error",
            "angle_sum_value",
            "angle_sum_error",
        ]
        .map(String::from)
        .to_vec(),
        rows,
        passed,
        summary: format!(
            "harmonic {} at ({}, {}): {} exact {}, final errors tan-half {:e}, angle-sum {:e}",
            function.name(),
            query.x,
            query.y,
            if passed { "PASS" } else { "FAIL" },
            fmt_f64(exact),
            tan_errors.last().copied().unwrap_or(f64::NAN),
            lemma_errors.last().copied().unwrap_or(f64::NAN),
        ),
    })
}
