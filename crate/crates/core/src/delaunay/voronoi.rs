use super::Triangulation;
use crate::geom::{circumcircle, Point};

#[derive(Debug, Clone, PartialEq)]
pub enum VoronoiCell {
    /// Counterclockwise circumcenter polygon of an interior site.
    Bounded { site: usize, vertices: Vec<Point> },
    /// Hull site; `rays` are the unit outward normals of its two hull edges,
    /// incoming edge first.
    Unbounded { site: usize, rays: [Point; 2] },
}

impl VoronoiCell {
    pub fn site(&self) -> usize {
        match self {
            VoronoiCell::Bounded { site, .. } | VoronoiCell::Unbounded { site, .. } => *site,
        }
    }

    pub fn area(&self) -> Option<f64> {
        match self {
            VoronoiCell::Bounded { vertices, .. } => {
                let n = vertices.len();
                Some(0.5 * (0..n).map(|k| vertices[k].cross(vertices[(k + 1) % n])).sum::<f64>())
            }
            VoronoiCell::Unbounded { .. } => None,
        }
    }
}

fn outward_normal(u: Point, v: Point) -> Point {
    let d = v - u;
    Point::new(d.y, -d.x) * (1.0 / d.norm())
}

/// Voronoi cell of site `i`.
///
/// # Panics
///
/// When `i` is not a site index.
pub fn voronoi_cell_polygon(tri: &Triangulation, i: usize) -> VoronoiCell {
    assert!(i < tri.sites().len(), "site index {i} out of range");
    let hull = tri.hull_edges();
    let incoming = hull.iter().find(|e| e.1 == i);
    let outgoing = hull.iter().find(|e| e.0 == i);
    if let (Some(&(w, _)), Some(&(_, v))) = (incoming, outgoing) {
        return VoronoiCell::Unbounded {
            site: i,
            rays: [
                outward_normal(tri.point(w), tri.point(i)),
                outward_normal(tri.point(i), tri.point(v)),
            ],
        };
    }
    let site = tri.point(i);
    let mut vertices: Vec<Point> = tri
        .triangles()
        .iter()
        .filter(|t| t.contains(&i))
        .filter_map(|&[a, b, c]| circumcircle(tri.point(a), tri.point(b), tri.point(c)).ok())
        .map(|c| c.center())
        .collect();
    // the cell is convex and contains its site
    vertices.sort_by(|p, q| {
        let (a, b) = (*p - site, *q - site);
        a.y.atan2(a.x).total_cmp(&b.y.atan2(b.x))
    });
    VoronoiCell::Bounded { site: i, vertices }
}
