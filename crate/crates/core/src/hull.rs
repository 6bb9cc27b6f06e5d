//! Convex hull by monotone chain, and the turning angles at its corners.

use crate::error::{Error, Result};
use crate::geom::{orientation_sign, Point, Sign};

/// Counterclockwise convex hull of a point list.
///
/// `vertices` holds the strictly convex corners starting from the
/// lexicographically smallest point. Input points lying on a hull edge but
/// not at a corner are listed in `on_edge`, sorted by index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HullPolygon {
    pub vertices: Vec<usize>,
    pub on_edge: Vec<usize>,
}

impl HullPolygon {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Directed boundary edges `(from, to)` as index pairs.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |k| (self.vertices[k], self.vertices[(k + 1) % n]))
    }

    /// Exact location of `q` against the hull of `points`.
    pub fn locate(&self, points: &[Point], q: Point) -> Location {
        let mut on_line = false;
        for (u, v) in self.edges() {
            match orientation_sign(points[u], points[v], q) {
                Sign::Negative => return Location::Outside,
                Sign::Zero => on_line = true,
                Sign::Positive => {}
            }
        }
        if on_line {
            Location::Boundary
        } else {
            Location::Inside
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Location {
    Inside,
    Boundary,
    Outside,
}

/// Convex hull with exact orientation tests.
pub fn convex_hull(points: &[Point]) -> Result<HullPolygon> {
    if points.len() < 3 {
        return Err(Error::DegenerateInput(format!(
            "convex hull needs at least 3 points, got {}",
            points.len()
        )));
    }
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&i, &j| points[i].lex_cmp(&points[j]).then(i.cmp(&j)));

    let mut chain: Vec<usize> = Vec::with_capacity(2 * points.len());
    let push = |chain: &mut Vec<usize>, i: usize, floor: usize| {
        while chain.len() >= floor + 2 {
            let (a, b) = (chain[chain.len() - 2], chain[chain.len() - 1]);
            if orientation_sign(points[a], points[b], points[i]) == Sign::Positive {
                break;
            }
            chain.pop();
        }
        chain.push(i);
    };
    for &i in &order {
        push(&mut chain, i, 0);
    }
    let lower_len = chain.len();
    for &i in order.iter().rev().skip(1) {
        push(&mut chain, i, lower_len - 1);
    }
    chain.pop();

    if chain.len() < 3 {
        return Err(Error::DegenerateInput("all points are collinear".into()));
    }

    let mut is_corner = vec![false; points.len()];
    for &v in &chain {
        is_corner[v] = true;
    }
    let hull = HullPolygon {
        vertices: chain,
        on_edge: Vec::new(),
    };
    let on_edge = (0..points.len())
        .filter(|&i| !is_corner[i])
        .filter(|&i| {
            hull.edges().any(|(u, v)| {
                orientation_sign(points[u], points[v], points[i]) == Sign::Zero
            })
        })
        .collect();
    Ok(HullPolygon { on_edge, ..hull })
}

/// Exterior angle at each hull corner, in the order of `hull.vertices`.
/// Each lies in `(0, pi)` and they sum to `2 pi`.
pub fn turning_angles(points: &[Point], hull: &HullPolygon) -> Vec<f64> {
    let n = hull.vertices.len();
    (0..n)
        .map(|k| {
            let prev = points[hull.vertices[(k + n - 1) % n]];
            let v = points[hull.vertices[k]];
            let next = points[hull.vertices[(k + 1) % n]];
            let e1 = v - prev;
            let e2 = next - v;
            e1.cross(e2).atan2(e1.dot(e2))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, TAU};

    fn pts(v: &[(f64, f64)]) -> Vec<Point> {
        v.iter().map(|&(x, y)| Point::new(x, y)).collect()
    }

    fn hexagon() -> Vec<Point> {
        (0..6)
            .map(|k| {
                let t = k as f64 * TAU / 6.0;
                Point::new(t.cos(), t.sin())
            })
            .collect()
    }

    #[test]
    fn square_corners() {
        let p = pts(&[(1., 1.), (-1., 1.), (-1., -1.), (1., -1.)]);
        let h = convex_hull(&p).unwrap();
        assert_eq!(h.vertices, vec![2, 3, 0, 1]);
        assert!(h.on_edge.is_empty());
        for a in turning_angles(&p, &h) {
            assert!((a - FRAC_PI_2).abs() < 1e-15);
        }
    }

    #[test]
    fn interior_point_is_dropped() {
        let p = pts(&[(1., 1.), (-1., 1.), (-1., -1.), (1., -1.), (0., 0.)]);
        let h = convex_hull(&p).unwrap();
        assert_eq!(h.vertices, vec![2, 3, 0, 1]);
        assert!(h.on_edge.is_empty());
    }

    #[test]
    fn edge_midpoint_reported_separately() {
        let p = pts(&[(0., 0.), (1., 0.), (2., 0.), (1., 1.)]);
        let h = convex_hull(&p).unwrap();
        assert_eq!(h.vertices, vec![0, 2, 3]);
        assert_eq!(h.on_edge, vec![1]);
    }

    #[test]
    fn collinear_on_upper_chain_and_closing_edge() {
        let p = pts(&[(0., 0.), (2., 0.), (2., 2.), (1., 2.), (0., 2.), (0., 1.)]);
        let h = convex_hull(&p).unwrap();
        assert_eq!(h.vertices, vec![0, 1, 2, 4]);
        assert_eq!(h.on_edge, vec![3, 5]);
    }

    #[test]
    fn hexagon_turning_angles() {
        let p = hexagon();
        let h = convex_hull(&p).unwrap();
        assert_eq!(h.len(), 6);
        for a in turning_angles(&p, &h) {
            assert!((a - FRAC_PI_3).abs() < 1e-14);
        }
    }

    #[test]
    fn right_triangle_turning_angles() {
        let p = pts(&[(0., 0.), (4., 0.), (0., 3.)]);
        let h = convex_hull(&p).unwrap();
        let a = turning_angles(&p, &h);
        assert_eq!(h.vertices[0], 0);
        assert!((a[0] - FRAC_PI_2).abs() < 1e-15);
        assert!((a.iter().sum::<f64>() - TAU).abs() < 1e-12);
    }

    #[test]
    fn degenerate_inputs() {
        assert!(convex_hull(&pts(&[(0., 0.), (1., 1.)])).is_err());
        assert!(convex_hull(&pts(&[(0., 0.), (1., 1.), (2., 2.), (-3., -3.)])).is_err());
    }

    #[test]
    fn locate_points() {
        let p = pts(&[(1., 1.), (-1., 1.), (-1., -1.), (1., -1.)]);
        let h = convex_hull(&p).unwrap();
        assert_eq!(h.locate(&p, Point::new(0., 0.)), Location::Inside);
        assert_eq!(h.locate(&p, Point::new(1., 0.)), Location::Boundary);
        assert_eq!(h.locate(&p, Point::new(1., 1.)), Location::Boundary);
        assert_eq!(h.locate(&p, Point::new(5., 5.)), Location::Outside);
    }
}
