//! Virtual insertion of a query point: the circumcircle route to the lune
//! angles, and Sibson's stolen-area coordinates.

use std::collections::{HashMap, HashSet};

use super::Triangulation;
use crate::error::{Error, Result};
use crate::geom::{
    circle_angle_at_common_point, circumcircle, incircle_sign_perturbed, orientation_sign, Point,
    Sign,
};
use crate::interp::{Elevations, LuneAngleSet, Value, WeightVector};

/// Triangles whose circumcircle contains the query, and the boundary of their
/// union as a counterclockwise vertex cycle.
pub(crate) struct Cavity {
    pub triangles: Vec<usize>,
    pub ring: Vec<usize>,
}

impl Triangulation {
    pub(crate) fn cavity(&self, s: Point) -> Result<Cavity> {
        if !s.is_finite() {
            return Err(Error::NonFinite("query point".into()));
        }
        if let Some(index) = self.sites().iter().position(|&p| p == s) {
            return Err(Error::CoincidentQuery { index });
        }
        let inside = self
            .hull_edges()
            .into_iter()
            .all(|(u, v)| orientation_sign(self.point(u), self.point(v), s) == Sign::Positive);
        if !inside {
            return Err(Error::OutsideDomain { x: s.x, y: s.y });
        }
        let start = self
            .locate(s, 0)
            .ok_or(Error::OutsideDomain { x: s.x, y: s.y })?;

        // the query ranks after every site in the symbolic perturbation
        let query_rank = self.sites().len();
        let conflicts = |t: usize| {
            let tri = self.triangles()[t];
            incircle_sign_perturbed([
                (self.point(tri[0]), tri[0]),
                (self.point(tri[1]), tri[1]),
                (self.point(tri[2]), tri[2]),
                (s, query_rank),
            ]) == Sign::Positive
        };

        let mut seen = HashSet::from([start]);
        let mut inside = HashSet::from([start]);
        let mut stack = vec![start];
        let mut triangles = Vec::new();
        while let Some(t) = stack.pop() {
            triangles.push(t);
            for n in self.neighbors()[t].iter().flatten() {
                if seen.insert(*n) && conflicts(*n) {
                    inside.insert(*n);
                    stack.push(*n);
                }
            }
        }
        triangles.sort_unstable();

        let mut next: HashMap<usize, usize> = HashMap::new();
        for &t in &triangles {
            let tri = self.triangles()[t];
            for k in 0..3 {
                let across = self.neighbors()[t][k];
                if !across.is_some_and(|n| inside.contains(&n)) {
                    next.insert(tri[k], tri[(k + 1) % 3]);
                }
            }
        }
        let first = *next.keys().min().expect("cavity has a boundary");
        let mut ring = vec![first];
        let mut v = next[&first];
        while v != first {
            ring.push(v);
            v = next[&v];
        }
        Ok(Cavity {
            triangles,
            ring,
        })
    }
}

/// Exterior lune angles from the circumcircles of the virtual fan around `s`.
///
/// Each neighbor `u` on the cavity boundary is shared by two fan triangles;
/// their circumcircles are the maximal empty circles through `s` and `u`, and
/// the angle between their radius vectors at `s` is the exterior lune angle.
/// Neighbors whose two circles coincide (exactly cocircular with `s`) are
/// omitted. The triangulation is not modified.
pub fn lune_angles_oracle(tri: &Triangulation, s: Point) -> Result<LuneAngleSet> {
    let cav = tri.cavity(s)?;
    let m = cav.ring.len();
    let circles = (0..m)
        .map(|k| circumcircle(s, tri.point(cav.ring[k]), tri.point(cav.ring[(k + 1) % m])))
        .collect::<Result<Vec<_>>>()?;
    let mut entries = Vec::with_capacity(m);
    for k in 0..m {
        let prev = cav.ring[(k + m - 1) % m];
        let u = cav.ring[k];
        let next = cav.ring[(k + 1) % m];
        let raw = crate::geom::incircle_raw_sign(s, tri.point(prev), tri.point(u), tri.point(next));
        if raw == Sign::Zero {
            continue;
        }
        let theta = circle_angle_at_common_point(&circles[(k + m - 1) % m], &circles[k], s)?;
        entries.push((u, theta));
    }
    LuneAngleSet::new(entries)
}

fn polygon_area(mut pts: Vec<Point>) -> f64 {
    // vertices of a convex polygon in arbitrary order
    let n = pts.len() as f64;
    let c = pts.iter().fold(Point::ORIGIN, |acc, &p| acc + p) * (1.0 / n);
    pts.sort_by(|a, b| {
        let (ta, tb) = ((*a - c).y.atan2((*a - c).x), (*b - c).y.atan2((*b - c).x));
        ta.total_cmp(&tb)
    });
    let k = pts.len();
    0.5 * (0..k).map(|i| pts[i].cross(pts[(i + 1) % k])).sum::<f64>()
}

struct StolenAreas {
    ring: Vec<usize>,
    areas: Vec<f64>,
    cell: Vec<Point>,
}

fn stolen_areas(tri: &Triangulation, s: Point) -> Result<StolenAreas> {
    let cav = tri.cavity(s)?;
    let m = cav.ring.len();
    // work relative to s
    let rel = |i: usize| tri.point(i) - s;
    let fan_centers = (0..m)
        .map(|k| {
            circumcircle(Point::ORIGIN, rel(cav.ring[k]), rel(cav.ring[(k + 1) % m]))
                .map(|c| c.center())
        })
        .collect::<Result<Vec<_>>>()?;
    let mut old_centers: HashMap<usize, Vec<Point>> = HashMap::new();
    for &t in &cav.triangles {
        let [a, b, c] = tri.triangles()[t];
        let cc = circumcircle(rel(a), rel(b), rel(c))?.center();
        for v in [a, b, c] {
            old_centers.entry(v).or_default().push(cc);
        }
    }
    let areas = (0..m)
        .map(|k| {
            let u = cav.ring[k];
            let mut poly = vec![fan_centers[(k + m - 1) % m], fan_centers[k]];
            poly.extend(old_centers.get(&u).into_iter().flatten().copied());
            polygon_area(poly).abs()
        })
        .collect();
    Ok(StolenAreas {
        ring: cav.ring,
        areas,
        cell: fan_centers.into_iter().map(|c| c + s).collect(),
    })
}

/// Voronoi cell of `s` after virtual insertion, as the counterclockwise
/// polygon of fan circumcenters.
pub fn virtual_cell(tri: &Triangulation, s: Point) -> Result<Vec<Point>> {
    Ok(stolen_areas(tri, s)?.cell)
}

/// Sibson coordinates: the fraction of the query's virtual Voronoi cell
/// taken from each neighbor's cell.
pub fn sibson_weights(tri: &Triangulation, s: Point) -> Result<WeightVector> {
    let st = stolen_areas(tri, s)?;
    let total: f64 = st.areas.iter().sum();
    if !(total > 0.0 && total.is_finite()) {
        return Err(Error::DegenerateInput(format!("stolen area total {total}")));
    }
    Ok(WeightVector {
        entries: st
            .ring
            .into_iter()
            .zip(st.areas)
            .map(|(i, a)| (i, a / total))
            .collect(),
    })
}

pub fn sibson_interpolate(tri: &Triangulation, elevations: &Elevations, s: Point) -> Result<Value> {
    if elevations.len() != tri.sites().len() {
        return Err(Error::LengthMismatch(tri.sites().len(), elevations.len()));
    }
    Ok(elevations.combine(&sibson_weights(tri, s)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::delaunay::build_delaunay;
    use crate::interp::{lune_angles, SampleSet};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, TAU};

    fn square() -> SampleSet {
        let sites = vec![
            Point::new(1., 1.),
            Point::new(-1., 1.),
            Point::new(-1., -1.),
            Point::new(1., -1.),
        ];
        SampleSet::new(sites, vec![10., 20., 30., 40.]).unwrap()
    }

    fn random_instance(seed: u64, n: usize) -> (SampleSet, Point) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sites: Vec<Point> = (0..n)
            .map(|_| Point::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let z = sites.iter().map(|p| 2.0 * p.x + 3.0 * p.y + 1.0).collect::<Vec<_>>();
        let samples = SampleSet::new(sites, z).unwrap();
        loop {
            let q = Point::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            if samples.hull().locate(samples.sites(), q) == crate::hull::Location::Inside {
                return (samples, q);
            }
        }
    }

    #[test]
    fn square_center() {
        let s = square();
        let t = build_delaunay(&s);
        let w = sibson_weights(&t, Point::ORIGIN).unwrap();
        assert_eq!(w.entries.len(), 4);
        assert!(w.entries.iter().all(|e| (e.1 - 0.25).abs() < 1e-12));
        let v = sibson_interpolate(&t, s.elevations(), Point::ORIGIN).unwrap();
        assert!((v.re() - 25.0).abs() < 1e-12);

        let a = lune_angles_oracle(&t, Point::ORIGIN).unwrap();
        assert_eq!(a.len(), 4);
        assert!(a.entries.iter().all(|e| (e.1 - FRAC_PI_2).abs() < 1e-12));
    }

    #[test]
    fn hexagon_center() {
        let sites: Vec<Point> = (0..6)
            .map(|k| {
                let t = k as f64 * TAU / 6.0;
                Point::new(t.cos(), t.sin())
            })
            .collect();
        let s = SampleSet::new(sites, vec![0.; 6]).unwrap();
        let a = lune_angles_oracle(&build_delaunay(&s), Point::ORIGIN).unwrap();
        assert_eq!(a.len(), 6);
        assert!(a.entries.iter().all(|e| (e.1 - FRAC_PI_3).abs() < 1e-12));
    }

    #[test]
    fn oracle_matches_inverted_hull() {
        for seed in 0..30 {
            let (s, q) = random_instance(seed, 12);
            let t = build_delaunay(&s);
            let oracle = lune_angles_oracle(&t, q).unwrap();
            let direct = lune_angles(&s, q).unwrap();
            let mut a = oracle.indices();
            let mut b = direct.indices();
            a.sort_unstable();
            b.sort_unstable();
            assert_eq!(a, b, "seed {seed}");
            for &(i, theta) in &oracle.entries {
                assert!((direct.angle_of(i).unwrap() - theta).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn local_coordinates_and_affine_precision() {
        for seed in 0..30 {
            let (s, q) = random_instance(100 + seed, 15);
            let t = build_delaunay(&s);
            let w = sibson_weights(&t, q).unwrap();
            assert!((w.sum() - 1.0).abs() < 1e-10);
            assert!(w.entries.iter().all(|e| e.1 >= 0.0));
            let c = w
                .entries
                .iter()
                .fold(Point::ORIGIN, |acc, &(i, wi)| acc + s.sites()[i] * wi);
            assert!(c.distance(q) < 1e-10, "seed {seed}: {c:?} vs {q:?}");
            let v = sibson_interpolate(&t, s.elevations(), q).unwrap().re();
            assert!((v - (2.0 * q.x + 3.0 * q.y + 1.0)).abs() < 1e-10);
        }
    }

    #[test]
    fn stolen_areas_fill_the_virtual_cell() {
        let (s, q) = random_instance(7, 10);
        let t = build_delaunay(&s);
        let st = stolen_areas(&t, q).unwrap();
        let cell = st.cell;
        let n = cell.len();
        let cell_area = 0.5 * (0..n).map(|k| cell[k].cross(cell[(k + 1) % n])).sum::<f64>();
        assert!(cell_area > 0.0, "cell is counterclockwise");
        assert!((st.areas.iter().sum::<f64>() - cell_area).abs() < 1e-10 * cell_area.max(1.0));
    }

    #[test]
    fn converges_to_sample_value() {
        let mut s = square().sites().to_vec();
        s.push(Point::new(0.2, 0.1));
        let samples = SampleSet::new(s, vec![0., 0., 0., 0., 7.]).unwrap();
        let t = build_delaunay(&samples);
        let mut last = f64::INFINITY;
        for k in 1..8 {
            let d = 10f64.powi(-k);
            let v = sibson_interpolate(&t, samples.elevations(), Point::new(0.2 + d, 0.1 + d)).unwrap();
            let err = (v.re() - 7.0).abs();
            assert!(err < last);
            last = err;
        }
        assert!(last < 1e-5);
    }

    #[test]
    fn query_errors() {
        let s = square();
        let t = build_delaunay(&s);
        assert!(matches!(sibson_weights(&t, Point::new(3., 0.)), Err(Error::OutsideDomain { .. })));
        assert!(matches!(sibson_weights(&t, Point::new(1., 0.)), Err(Error::OutsideDomain { .. })));
        assert_eq!(
            lune_angles_oracle(&t, Point::new(1., 1.)).unwrap_err(),
            Error::CoincidentQuery { index: 0 }
        );
    }

    #[test]
    fn virtual_insertion_is_pure() {
        let (s, q) = random_instance(9, 20);
        let t = build_delaunay(&s);
        let before = t.clone();
        let _ = sibson_weights(&t, q).unwrap();
        let _ = lune_angles_oracle(&t, q).unwrap();
        assert_eq!(t, before);
    }
}
