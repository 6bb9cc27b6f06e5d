use super::{orientation_sign, Point, Sign};
use crate::error::{Error, Result};

/// A circle with positive, finite radius.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Circle {
    center: Point,
    radius: f64,
}

impl Circle {
    pub fn new(center: Point, radius: f64) -> Result<Self> {
        if !center.is_finite() {
            return Err(Error::NonFinite("circle center".into()));
        }
        if !(radius.is_finite() && radius > 0.0) {
            return Err(Error::DegenerateInput(format!("circle radius {radius}")));
        }
        Ok(Circle { center, radius })
    }

    pub fn unit() -> Self {
        Circle {
            center: Point::ORIGIN,
            radius: 1.0,
        }
    }

    pub fn center(&self) -> Point {
        self.center
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// `| |p - c| - r |` relative to the radius.
    pub fn relative_residual(&self, p: Point) -> f64 {
        ((p - self.center).norm() - self.radius).abs() / self.radius
    }
}

/// Circle through three non-collinear points.
///
/// The center is solved in coordinates relative to `p`, so it is accurate
/// relative to the triangle's size even far from the origin.
pub fn circumcircle(p: Point, q: Point, r: Point) -> Result<Circle> {
    if orientation_sign(p, q, r) == Sign::Zero {
        return Err(Error::DegenerateInput(
            "circumcircle of collinear points".into(),
        ));
    }
    let b = q - p;
    let c = r - p;
    let d = 2.0 * b.cross(c);
    let (bb, cc) = (b.norm_sq(), c.norm_sq());
    let offset = Point::new((c.y * bb - b.y * cc) / d, (b.x * cc - c.x * bb) / d);
    Circle::new(p + offset, offset.norm())
}

/// Angle in `[0, pi]` between the radius vectors of two circles at a shared
/// point. For the two maximal empty circles through a query and one of its
/// neighbors this is the exterior lune angle of that neighbor.
pub fn circle_angle_at_common_point(c1: &Circle, c2: &Circle, p: Point) -> Result<f64> {
    for (k, c) in [c1, c2].into_iter().enumerate() {
        let res = c.relative_residual(p);
        if !(res <= 1e-9) {
            return Err(Error::Precondition(format!(
                "point ({}, {}) is not on circle {} (relative residual {res:e})",
                p.x,
                p.y,
                k + 1
            )));
        }
    }
    let u = p - c1.center;
    let v = p - c2.center;
    Ok(u.cross(v).abs().atan2(u.dot(v)))
}
