//! Delaunay triangulation by Bowyer–Watson insertion.
//!
//! The hull is closed off with ghost triangles `(u, v, GHOST)`, one per hull
//! edge `v -> u` of the real triangulation, whose circumcircle is the open
//! half-plane left of `u -> v` plus the open segment `uv`. Cocircular
//! quadruples are resolved by [`incircle_sign_perturbed`], so the result is
//! a deterministic function of the site list.

mod sibson;
mod voronoi;

pub use sibson::{lune_angles_oracle, sibson_interpolate, sibson_weights, virtual_cell};
pub use voronoi::{voronoi_cell_polygon, VoronoiCell};

use std::collections::HashMap;

use crate::geom::{incircle_sign_perturbed, orientation_sign, Point, Sign};
use crate::interp::SampleSet;

const GHOST: usize = usize::MAX;

#[derive(Debug, Clone, PartialEq)]
pub struct Triangulation {
    sites: Vec<Point>,
    triangles: Vec<[usize; 3]>,
    /// `neighbors[t][k]` is the triangle across edge `triangles[t][k] -> triangles[t][(k + 1) % 3]`.
    neighbors: Vec<[Option<usize>; 3]>,
}

impl Triangulation {
    pub fn sites(&self) -> &[Point] {
        &self.sites
    }

    /// Counterclockwise vertex triples.
    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn neighbors(&self) -> &[[Option<usize>; 3]] {
        &self.neighbors
    }

    /// Directed hull edges, interior on the left.
    pub fn hull_edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (t, tri) in self.triangles.iter().enumerate() {
            for k in 0..3 {
                if self.neighbors[t][k].is_none() {
                    out.push((tri[k], tri[(k + 1) % 3]));
                }
            }
        }
        out
    }

    pub(crate) fn point(&self, i: usize) -> Point {
        self.sites[i]
    }

    /// Triangle containing `q` (closed), by a visibility walk from `start`
    /// with a linear scan as fallback.
    pub(crate) fn locate(&self, q: Point, start: usize) -> Option<usize> {
        let mut t = start.min(self.triangles.len().saturating_sub(1));
        'walk: for _ in 0..=self.triangles.len() {
            let tri = self.triangles[t];
            for k in 0..3 {
                let (a, b) = (self.point(tri[k]), self.point(tri[(k + 1) % 3]));
                if orientation_sign(a, b, q) == Sign::Negative {
                    t = self.neighbors[t][k]?;
                    continue 'walk;
                }
            }
            return Some(t);
        }
        self.triangles.iter().position(|tri| {
            (0..3).all(|k| {
                orientation_sign(self.point(tri[k]), self.point(tri[(k + 1) % 3]), q)
                    != Sign::Negative
            })
        })
    }
}

struct Builder<'a> {
    pts: &'a [Point],
    tris: Vec<[usize; 3]>,
    alive: Vec<bool>,
    edges: HashMap<(usize, usize), usize>,
    last: usize,
}

impl<'a> Builder<'a> {
    fn add(&mut self, t: [usize; 3]) -> usize {
        // keep the ghost vertex last
        let t = match t.iter().position(|&v| v == GHOST) {
            Some(0) => [t[1], t[2], t[0]],
            Some(1) => [t[2], t[0], t[1]],
            _ => t,
        };
        let id = self.tris.len();
        for k in 0..3 {
            self.edges.insert((t[k], t[(k + 1) % 3]), id);
        }
        self.tris.push(t);
        self.alive.push(true);
        if t[2] != GHOST {
            self.last = id;
        }
        id
    }

    fn remove(&mut self, id: usize) {
        let t = self.tris[id];
        self.alive[id] = false;
        for k in 0..3 {
            self.edges.remove(&(t[k], t[(k + 1) % 3]));
        }
    }

    fn neighbor(&self, id: usize, k: usize) -> Option<usize> {
        let t = self.tris[id];
        self.edges.get(&(t[(k + 1) % 3], t[k])).copied()
    }

    fn in_conflict(&self, id: usize, ip: usize) -> bool {
        let t = self.tris[id];
        let p = self.pts[ip];
        if t[2] == GHOST {
            let (u, v) = (self.pts[t[0]], self.pts[t[1]]);
            return match orientation_sign(u, v, p) {
                Sign::Positive => true,
                Sign::Negative => false,
                Sign::Zero => {
                    let (lo, hi) = if u.lex_cmp(&v).is_lt() { (u, v) } else { (v, u) };
                    lo.lex_cmp(&p).is_lt() && p.lex_cmp(&hi).is_lt()
                }
            };
        }
        incircle_sign_perturbed([
            (self.pts[t[0]], t[0]),
            (self.pts[t[1]], t[1]),
            (self.pts[t[2]], t[2]),
            (p, ip),
        ]) == Sign::Positive
    }

    fn locate_conflict(&self, ip: usize) -> usize {
        let p = self.pts[ip];
        let mut t = self.last;
        'walk: for _ in 0..self.tris.len() {
            let tri = self.tris[t];
            if tri[2] == GHOST {
                break;
            }
            for k in 0..3 {
                let (a, b) = (self.pts[tri[k]], self.pts[tri[(k + 1) % 3]]);
                if orientation_sign(a, b, p) == Sign::Negative {
                    match self.neighbor(t, k) {
                        Some(n) if self.in_conflict(n, ip) && self.tris[n][2] == GHOST => {
                            return n
                        }
                        Some(n) => {
                            t = n;
                            continue 'walk;
                        }
                        None => break 'walk,
                    }
                }
            }
            return t;
        }
        (0..self.tris.len())
            .find(|&id| self.alive[id] && self.in_conflict(id, ip))
            .expect("every site conflicts with some triangle")
    }

    fn insert(&mut self, ip: usize) {
        let start = self.locate_conflict(ip);
        // 1 = in cavity, 2 = rejected
        let mut state: HashMap<usize, u8> = HashMap::new();
        state.insert(start, 1);
        let mut stack = vec![start];
        let mut cavity = Vec::new();
        while let Some(id) = stack.pop() {
            cavity.push(id);
            for k in 0..3 {
                if let Some(n) = self.neighbor(id, k) {
                    if state.contains_key(&n) {
                        continue;
                    }
                    if self.in_conflict(n, ip) {
                        state.insert(n, 1);
                        stack.push(n);
                    } else {
                        state.insert(n, 2);
                    }
                }
            }
        }
        let mut boundary = Vec::new();
        for &id in &cavity {
            for k in 0..3 {
                let inside = matches!(self.neighbor(id, k).and_then(|n| state.get(&n)), Some(1));
                if !inside {
                    let t = self.tris[id];
                    boundary.push((t[k], t[(k + 1) % 3]));
                }
            }
        }
        for id in cavity {
            self.remove(id);
        }
        for (x, y) in boundary {
            self.add([x, y, ip]);
        }
    }
}

/// Delaunay triangulation of the sample sites.
pub fn build_delaunay(samples: &SampleSet) -> Triangulation {
    triangulate(samples.sites())
}

/// Triangulates distinct, not-all-collinear points.
pub(crate) fn triangulate(pts: &[Point]) -> Triangulation {
    let (mut i0, mut i1) = (0, 1);
    let i2 = (2..pts.len())
        .find(|&k| orientation_sign(pts[0], pts[1], pts[k]) != Sign::Zero)
        .expect("sites are not all collinear");
    if orientation_sign(pts[i0], pts[i1], pts[i2]) == Sign::Negative {
        std::mem::swap(&mut i0, &mut i1);
    }
    let mut b = Builder {
        pts,
        tris: Vec::new(),
        alive: Vec::new(),
        edges: HashMap::new(),
        last: 0,
    };
    b.add([i1, i0, GHOST]);
    b.add([i2, i1, GHOST]);
    b.add([i0, i2, GHOST]);
    b.add([i0, i1, i2]);
    for ip in 2..pts.len() {
        if ip != i2 {
            b.insert(ip);
        }
    }

    let mut remap = vec![usize::MAX; b.tris.len()];
    let mut triangles = Vec::new();
    for (id, t) in b.tris.iter().enumerate() {
        if b.alive[id] && t[2] != GHOST {
            remap[id] = triangles.len();
            triangles.push(*t);
        }
    }
    let neighbors = triangles
        .iter()
        .map(|t| {
            let mut n = [None; 3];
            for (k, slot) in n.iter_mut().enumerate() {
                *slot = b
                    .edges
                    .get(&(t[(k + 1) % 3], t[k]))
                    .map(|&id| remap[id])
                    .filter(|&r| r != usize::MAX);
            }
            n
        })
        .collect();
    Triangulation {
        sites: pts.to_vec(),
        triangles,
        neighbors,
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::geom::incircle_sign;

    pub(crate) fn samples(pts: &[(f64, f64)]) -> SampleSet {
        let sites: Vec<Point> = pts.iter().map(|&(x, y)| Point::new(x, y)).collect();
        let n = sites.len();
        SampleSet::new(sites, vec![0.0; n]).unwrap()
    }

    /// Empty-circumcircle check against every site, with structural checks.
    pub(crate) fn assert_delaunay(tri: &Triangulation) {
        let pts = tri.sites();
        for t in tri.triangles() {
            let (a, b, c) = (pts[t[0]], pts[t[1]], pts[t[2]]);
            assert_eq!(orientation_sign(a, b, c), Sign::Positive, "{t:?} not CCW");
            for (i, &q) in pts.iter().enumerate() {
                if t.contains(&i) {
                    continue;
                }
                assert_ne!(incircle_sign(a, b, c, q).unwrap(), Sign::Positive, "{t:?} contains {i}");
            }
        }
        for (t, ns) in tri.neighbors().iter().enumerate() {
            for (k, n) in ns.iter().enumerate() {
                if let Some(n) = *n {
                    let back = tri.neighbors()[n].iter().position(|&m| m == Some(t));
                    let kk = back.expect("adjacency is symmetric");
                    let e = (tri.triangles()[t][k], tri.triangles()[t][(k + 1) % 3]);
                    let f = (tri.triangles()[n][(kk + 1) % 3], tri.triangles()[n][kk]);
                    assert_eq!(e, f);
                }
            }
        }
        // Euler: T = 2n - h - 2 with h the number of boundary sites
        let hull = crate::hull::convex_hull(pts).unwrap();
        let h = hull.vertices.len() + hull.on_edge.len();
        assert_eq!(tri.triangles().len(), 2 * pts.len() - h - 2);
        assert_eq!(tri.hull_edges().len(), h);
    }

    #[test]
    fn single_triangle() {
        let t = build_delaunay(&samples(&[(0., 0.), (1., 0.), (0., 1.)]));
        assert_eq!(t.triangles().len(), 1);
        assert_delaunay(&t);
    }

    #[test]
    fn square_is_deterministic() {
        let pts = [(1., 1.), (-1., 1.), (-1., -1.), (1., -1.)];
        let t = build_delaunay(&samples(&pts));
        assert_eq!(t.triangles().len(), 2);
        assert_delaunay(&t);
        assert_eq!(t, build_delaunay(&samples(&pts)));
    }

    #[test]
    fn collinear_start_and_grid() {
        let mut pts = vec![(0., 0.), (1., 0.), (2., 0.), (3., 0.)];
        for i in 0..5 {
            for j in 1..5 {
                pts.push((i as f64 - 0.5, j as f64));
            }
        }
        let t = build_delaunay(&samples(&pts));
        assert_delaunay(&t);
    }

    #[test]
    fn integer_grid() {
        let mut pts = Vec::new();
        for i in 0..8 {
            for j in 0..7 {
                pts.push((i as f64, j as f64));
            }
        }
        assert_delaunay(&build_delaunay(&samples(&pts)));
    }

    #[test]
    fn random_sites_pass_brute_force() {
        use rand::{Rng, SeedableRng};
        for seed in 0..10 {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let pts: Vec<(f64, f64)> = (0..20)
                .map(|_| (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect();
            let t = build_delaunay(&samples(&pts));
            assert_delaunay(&t);
        }
    }

    #[test]
    fn locate_finds_containing_triangle() {
        let t = build_delaunay(&samples(&[(0., 0.), (4., 0.), (0., 4.), (4., 4.), (2., 1.)]));
        let q = Point::new(3.0, 3.5);
        let id = t.locate(q, 0).unwrap();
        let tri = t.triangles()[id];
        assert!((0..3).all(|k| orientation_sign(t.point(tri[k]), t.point(tri[(k + 1) % 3]), q)
            != Sign::Negative));
        assert_eq!(t.locate(Point::new(9., 9.), 0), None);
    }
}
