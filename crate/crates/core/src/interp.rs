//! The Möbius-invariant interpolant.
//!
//! For a query `s`, every site is inverted in the unit circle centered at
//! `s`. Circles through `s` become lines, so the maximal empty circles
//! through `s` and a neighbor become supporting lines of the inverted point
//! set, and the exterior lune angle of each neighbor is the turning angle at
//! its image on the convex hull of the images.

use std::collections::HashMap;
use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geom::Point;
use crate::hull::{convex_hull, turning_angles, HullPolygon, Location};

pub const DEFAULT_SNAP_TOLERANCE: f64 = 1e-12;

/// Angles closer than this to `pi` give an unbounded weight.
const INFINITE_WEIGHT_GAP: f64 = 1e-12;
const ANGLE_SUM_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub enum Elevations {
    Real(Vec<f64>),
    Complex(Vec<Complex64>),
}

impl Elevations {
    pub fn len(&self) -> usize {
        match self {
            Elevations::Real(v) => v.len(),
            Elevations::Complex(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get(&self, i: usize) -> Value {
        match self {
            Elevations::Real(v) => Value::Real(v[i]),
            Elevations::Complex(v) => Value::Complex(v[i]),
        }
    }

    /// Weighted sum, componentwise for complex elevations.
    pub fn combine(&self, weights: &WeightVector) -> Value {
        match self {
            Elevations::Real(v) => {
                Value::Real(weights.entries.iter().map(|&(i, w)| w * v[i]).sum())
            }
            Elevations::Complex(v) => Value::Complex(
                weights
                    .entries
                    .iter()
                    .fold(Complex64::new(0.0, 0.0), |acc, &(i, w)| acc + v[i] * w),
            ),
        }
    }
}

impl From<Vec<f64>> for Elevations {
    fn from(v: Vec<f64>) -> Self {
        Elevations::Real(v)
    }
}

impl From<Vec<Complex64>> for Elevations {
    fn from(v: Vec<Complex64>) -> Self {
        Elevations::Complex(v)
    }
}

/// An interpolated (or sampled) elevation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Value {
    Real(f64),
    Complex(Complex64),
}

impl Value {
    /// Real part.
    pub fn re(&self) -> f64 {
        match self {
            Value::Real(v) => *v,
            Value::Complex(z) => z.re,
        }
    }

    pub fn as_complex(&self) -> Complex64 {
        match self {
            Value::Real(v) => Complex64::new(*v, 0.0),
            Value::Complex(z) => *z,
        }
    }
}

/// Sites with elevations.
///
/// Construction rejects fewer than three sites, non-finite values, exact
/// duplicate sites and collinear site sets. The site hull is computed once.
#[derive(Debug, Clone)]
pub struct SampleSet {
    sites: Vec<Point>,
    elevations: Elevations,
    hull: HullPolygon,
    diagonal: f64,
}

impl SampleSet {
    pub fn new(sites: Vec<Point>, elevations: impl Into<Elevations>) -> Result<Self> {
        let elevations = elevations.into();
        if sites.len() != elevations.len() {
            return Err(Error::LengthMismatch(sites.len(), elevations.len()));
        }
        if sites.len() < 3 {
            return Err(Error::TooFewSites(sites.len()));
        }
        if let Some(i) = sites.iter().position(|p| !p.is_finite()) {
            return Err(Error::NonFinite(format!("site {i}")));
        }
        let finite = match &elevations {
            Elevations::Real(v) => v.iter().position(|z| !z.is_finite()),
            Elevations::Complex(v) => v.iter().position(|z| !z.is_finite()),
        };
        if let Some(i) = finite {
            return Err(Error::NonFinite(format!("elevation {i}")));
        }
        if let Some((first, second)) = find_duplicate(&sites) {
            let p = sites[second];
            return Err(Error::DuplicateSite {
                first,
                second,
                x: p.x,
                y: p.y,
            });
        }
        let hull = convex_hull(&sites)?;
        let (mut lo, mut hi) = (sites[0], sites[0]);
        for p in &sites {
            lo = Point::new(lo.x.min(p.x), lo.y.min(p.y));
            hi = Point::new(hi.x.max(p.x), hi.y.max(p.y));
        }
        Ok(SampleSet {
            sites,
            elevations,
            hull,
            diagonal: lo.distance(hi),
        })
    }

    pub fn sites(&self) -> &[Point] {
        &self.sites
    }

    pub fn elevations(&self) -> &Elevations {
        &self.elevations
    }

    pub fn hull(&self) -> &HullPolygon {
        &self.hull
    }

    /// Diagonal of the site bounding box.
    pub fn diagonal(&self) -> f64 {
        self.diagonal
    }

    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }
}

/// First exactly repeated site, as `(first index, repeat index)`.
pub(crate) fn find_duplicate(sites: &[Point]) -> Option<(usize, usize)> {
    let mut seen: HashMap<(u64, u64), usize> = HashMap::with_capacity(sites.len());
    for (i, p) in sites.iter().enumerate() {
        // adding 0.0 folds -0.0 into +0.0
        let key = ((p.x + 0.0).to_bits(), (p.y + 0.0).to_bits());
        if let Some(&first) = seen.get(&key) {
            return Some((first, i));
        }
        seen.insert(key, i);
    }
    None
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum WeightFunction {
    /// `tan(theta / 2)`: unbounded as `theta -> pi`, linear near zero.
    #[default]
    TanHalf,
    /// `tan^2(theta / 2)`: experimental; loses linearity near zero and with
    /// it the harmonic reconstruction.
    TanHalfSquared,
    /// `theta`: bounded at `pi`, so the interpolant is not continuous at
    /// the samples. Diagnostic only.
    Angle,
}

impl WeightFunction {
    pub fn eval(self, theta: f64) -> f64 {
        match self {
            WeightFunction::TanHalf => (0.5 * theta).tan(),
            WeightFunction::TanHalfSquared => (0.5 * theta).tan().powi(2),
            WeightFunction::Angle => theta,
        }
    }

    fn diverges_at_pi(self) -> bool {
        !matches!(self, WeightFunction::Angle)
    }
}

/// What to do with queries outside the site hull.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Policy {
    #[default]
    Strict,
    AllowExterior,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterpOptions {
    pub weight_fn: WeightFunction,
    pub policy: Policy,
    /// Snap distance as a fraction of the site bounding-box diagonal.
    pub snap_tolerance: f64,
}

impl Default for InterpOptions {
    fn default() -> Self {
        InterpOptions {
            weight_fn: WeightFunction::TanHalf,
            policy: Policy::Strict,
            snap_tolerance: DEFAULT_SNAP_TOLERANCE,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QueryClass {
    Coincident(usize),
    Interior,
    OnBoundary,
    Exterior,
}

/// Neighbors of a query with their exterior lune angles.
#[derive(Debug, Clone, PartialEq)]
pub struct LuneAngleSet {
    pub entries: Vec<(usize, f64)>,
}

impl LuneAngleSet {
    /// Validates that indices are distinct, angles lie in `(0, pi]` and sum
    /// to `2 pi` within `1e-9`.
    pub fn new(entries: Vec<(usize, f64)>) -> Result<Self> {
        let mut seen = std::collections::HashSet::new();
        for &(i, theta) in &entries {
            if !seen.insert(i) {
                return Err(Error::Precondition(format!("repeated neighbor index {i}")));
            }
            if !(theta > 0.0 && theta <= PI + INFINITE_WEIGHT_GAP) {
                return Err(Error::Precondition(format!(
                    "lune angle {theta} of neighbor {i} outside (0, pi]"
                )));
            }
        }
        let set = LuneAngleSet { entries };
        let err = (set.sum() - std::f64::consts::TAU).abs();
        if !(err <= ANGLE_SUM_TOLERANCE) {
            return Err(Error::Precondition(format!(
                "lune angles sum to {} (off by {err:e})",
                set.sum()
            )));
        }
        Ok(set)
    }

    pub fn sum(&self) -> f64 {
        self.entries.iter().map(|e| e.1).sum()
    }

    pub fn indices(&self) -> Vec<usize> {
        self.entries.iter().map(|e| e.0).collect()
    }

    pub fn angle_of(&self, index: usize) -> Option<f64> {
        self.entries.iter().find(|e| e.0 == index).map(|e| e.1)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Convex-combination weights keyed by sample index.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightVector {
    pub entries: Vec<(usize, f64)>,
}

impl WeightVector {
    pub fn sum(&self) -> f64 {
        self.entries.iter().map(|e| e.1).sum()
    }

    pub fn weight_of(&self, index: usize) -> Option<f64> {
        self.entries.iter().find(|e| e.0 == index).map(|e| e.1)
    }
}

pub fn classify_query(samples: &SampleSet, s: Point, snap_tolerance: f64) -> QueryClass {
    let snap = snap_tolerance * samples.diagonal;
    let nearest = samples
        .sites
        .iter()
        .enumerate()
        .map(|(i, p)| (i, p.distance(s)))
        .fold(None, |best: Option<(usize, f64)>, (i, d)| match best {
            Some((_, bd)) if bd <= d => best,
            _ => Some((i, d)),
        });
    if let Some((i, d)) = nearest {
        if d <= snap {
            return QueryClass::Coincident(i);
        }
    }
    match samples.hull.locate(&samples.sites, s) {
        Location::Inside => QueryClass::Interior,
        Location::Boundary => QueryClass::OnBoundary,
        Location::Outside => QueryClass::Exterior,
    }
}

/// Images of the sites under inversion in the unit circle centered at `s`.
fn invert_about(samples: &SampleSet, s: Point) -> Result<Vec<Point>> {
    samples
        .sites
        .iter()
        .enumerate()
        .map(|(i, &p)| {
            let d = p - s;
            let r2 = d.norm_sq();
            if r2 == 0.0 {
                Err(Error::CoincidentQuery { index: i })
            } else {
                Ok(d * (1.0 / r2))
            }
        })
        .collect()
}

fn inverted_hull(samples: &SampleSet, s: Point) -> Result<(Vec<Point>, HullPolygon)> {
    let images = invert_about(samples, s)?;
    let hull = convex_hull(&images).map_err(|_| {
        Error::DegenerateInput("inverted sites are collinear (query cocircular with all sites)".into())
    })?;
    Ok((images, hull))
}

/// Exterior lune angles of the query's extended Voronoi neighbors, in the
/// counterclockwise order of the inverted hull. Neighbors whose image lies
/// on a hull edge have zero angle and are omitted.
pub fn lune_angles(samples: &SampleSet, s: Point) -> Result<LuneAngleSet> {
    let (images, hull) = inverted_hull(samples, s)?;
    let angles = turning_angles(&images, &hull);
    LuneAngleSet::new(hull.vertices.iter().copied().zip(angles).collect())
}

/// Every site joined to `s` by a circle bounding an empty disk or an empty
/// disk complement, including those reached only through tangent circles.
pub fn extended_neighbors(samples: &SampleSet, s: Point) -> Result<Vec<usize>> {
    let (_, hull) = inverted_hull(samples, s)?;
    let mut out = hull.vertices;
    out.extend(hull.on_edge);
    out.sort_unstable();
    Ok(out)
}

/// Normalised weights `w(theta_i) / sum_j w(theta_j)`.
///
/// For weight functions that blow up at `pi`, a single angle within `1e-12`
/// of `pi` takes all the weight; two or more such angles are an error.
pub fn weights_from_angles(angles: &LuneAngleSet, wf: WeightFunction) -> Result<WeightVector> {
    if wf.diverges_at_pi() {
        let mut near_pi = angles
            .entries
            .iter()
            .filter(|e| PI - e.1 <= INFINITE_WEIGHT_GAP);
        if let Some(&(dominant, _)) = near_pi.next() {
            if near_pi.next().is_some() {
                return Err(Error::MultipleInfiniteWeights);
            }
            let entries = angles
                .entries
                .iter()
                .map(|&(i, _)| (i, if i == dominant { 1.0 } else { 0.0 }))
                .collect();
            return Ok(WeightVector { entries });
        }
    }
    let raw: Vec<(usize, f64)> = angles
        .entries
        .iter()
        .map(|&(i, theta)| (i, wf.eval(theta)))
        .collect();
    let total: f64 = raw.iter().map(|e| e.1).sum();
    if !(total.is_finite() && total > 0.0) {
        return Err(Error::DegenerateInput(format!("weight normaliser {total}")));
    }
    Ok(WeightVector {
        entries: raw.into_iter().map(|(i, w)| (i, w / total)).collect(),
    })
}

/// Weights at `s` after domain classification. Coincident queries return
/// the single sample with weight one.
pub fn query_weights(samples: &SampleSet, s: Point, opts: &InterpOptions) -> Result<WeightVector> {
    if !s.is_finite() {
        return Err(Error::NonFinite("query point".into()));
    }
    match classify_query(samples, s, opts.snap_tolerance) {
        QueryClass::Coincident(i) => Ok(WeightVector {
            entries: vec![(i, 1.0)],
        }),
        QueryClass::OnBoundary => Err(Error::DegenerateBoundary { x: s.x, y: s.y }),
        QueryClass::Exterior if opts.policy == Policy::Strict => {
            Err(Error::OutsideDomain { x: s.x, y: s.y })
        }
        QueryClass::Interior | QueryClass::Exterior => {
            weights_from_angles(&lune_angles(samples, s)?, opts.weight_fn)
        }
    }
}

/// Interpolated elevation at `s`.
pub fn interpolate(samples: &SampleSet, s: Point, opts: &InterpOptions) -> Result<Value> {
    if let QueryClass::Coincident(i) = classify_query(samples, s, opts.snap_tolerance) {
        return Ok(samples.elevations.get(i));
    }
    let w = query_weights(samples, s, opts)?;
    Ok(samples.elevations.combine(&w))
}
