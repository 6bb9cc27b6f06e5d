//! Orientation and in-circle predicates.
//!
//! Each predicate first evaluates the determinant in floating point and
//! compares it against a forward error bound (the stage-A bounds of
//! Shewchuk's adaptive predicates). When the float result is too close to
//! zero to certify its sign, the determinant is recomputed exactly over the
//! rationals. Every finite `f64` is a dyadic rational, so the exact stage is
//! never wrong.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::Point;
use crate::error::{Error, Result};

const EPSILON: f64 = f64::EPSILON * 0.5;
const CCW_ERRBOUND: f64 = (3.0 + 16.0 * EPSILON) * EPSILON;
const ICC_ERRBOUND: f64 = (10.0 + 96.0 * EPSILON) * EPSILON;

/// Sign of a determinant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn of_f64(v: f64) -> Sign {
        if v > 0.0 {
            Sign::Positive
        } else if v < 0.0 {
            Sign::Negative
        } else {
            Sign::Zero
        }
    }

    pub fn as_i32(self) -> i32 {
        match self {
            Sign::Negative => -1,
            Sign::Zero => 0,
            Sign::Positive => 1,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Negative => Sign::Positive,
            Sign::Zero => Sign::Zero,
            Sign::Positive => Sign::Negative,
        }
    }

    fn of_rational(v: &BigRational) -> Sign {
        if v.is_zero() {
            Sign::Zero
        } else if v.is_positive() {
            Sign::Positive
        } else {
            Sign::Negative
        }
    }
}

fn exact(v: f64) -> BigRational {
    // Callers only pass finite coordinates.
    BigRational::from_float(v).unwrap_or_else(|| BigRational::from_integer(BigInt::zero()))
}

/// Sign of twice the signed area of `pqr`; positive when counterclockwise.
pub fn orientation_sign(p: Point, q: Point, r: Point) -> Sign {
    let left = (p.x - r.x) * (q.y - r.y);
    let right = (p.y - r.y) * (q.x - r.x);
    let det = left - right;
    let bound = CCW_ERRBOUND * (left.abs() + right.abs());
    if det > bound || -det > bound {
        return Sign::of_f64(det);
    }
    orientation_exact(p, q, r)
}

fn orientation_exact(p: Point, q: Point, r: Point) -> Sign {
    let (rx, ry) = (exact(r.x), exact(r.y));
    let pxr = exact(p.x) - &rx;
    let pyr = exact(p.y) - &ry;
    let qxr = exact(q.x) - &rx;
    let qyr = exact(q.y) - &ry;
    Sign::of_rational(&(pxr * qyr - pyr * qxr))
}

/// Sign of the in-circle determinant of `a, b, c, d`.
///
/// For counterclockwise `abc` this is positive iff `d` is strictly inside
/// the circle through `a, b, c`. The raw determinant is returned by
/// [`incircle_raw_sign`]; this wrapper rejects collinear `abc`.
pub fn incircle_sign(a: Point, b: Point, c: Point, d: Point) -> Result<Sign> {
    match orientation_sign(a, b, c) {
        Sign::Zero => Err(Error::DegenerateInput(
            "in-circle test on collinear points".into(),
        )),
        Sign::Positive => Ok(incircle_raw_sign(a, b, c, d)),
        Sign::Negative => Ok(incircle_raw_sign(a, b, c, d).flip()),
    }
}

/// Sign of the lifted 4x4 determinant; positive iff `d` is inside the
/// circle when `abc` is counterclockwise (and outside when clockwise).
pub(crate) fn incircle_raw_sign(a: Point, b: Point, c: Point, d: Point) -> Sign {
    let adx = a.x - d.x;
    let bdx = b.x - d.x;
    let cdx = c.x - d.x;
    let ady = a.y - d.y;
    let bdy = b.y - d.y;
    let cdy = c.y - d.y;

    let bdxcdy = bdx * cdy;
    let cdxbdy = cdx * bdy;
    let alift = adx * adx + ady * ady;

    let cdxady = cdx * ady;
    let adxcdy = adx * cdy;
    let blift = bdx * bdx + bdy * bdy;

    let adxbdy = adx * bdy;
    let bdxady = bdx * ady;
    let clift = cdx * cdx + cdy * cdy;

    let det = alift * (bdxcdy - cdxbdy) + blift * (cdxady - adxcdy) + clift * (adxbdy - bdxady);
    let permanent = (bdxcdy.abs() + cdxbdy.abs()) * alift
        + (cdxady.abs() + adxcdy.abs()) * blift
        + (adxbdy.abs() + bdxady.abs()) * clift;
    let bound = ICC_ERRBOUND * permanent;
    if det > bound || -det > bound {
        return Sign::of_f64(det);
    }
    incircle_exact(a, b, c, d)
}

fn incircle_exact(a: Point, b: Point, c: Point, d: Point) -> Sign {
    let (dx, dy) = (exact(d.x), exact(d.y));
    let adx = exact(a.x) - &dx;
    let ady = exact(a.y) - &dy;
    let bdx = exact(b.x) - &dx;
    let bdy = exact(b.y) - &dy;
    let cdx = exact(c.x) - &dx;
    let cdy = exact(c.y) - &dy;
    let alift = &adx * &adx + &ady * &ady;
    let blift = &bdx * &bdx + &bdy * &bdy;
    let clift = &cdx * &cdx + &cdy * &cdy;
    let det = alift * (&bdx * &cdy - &cdx * &bdy)
        + blift * (&cdx * &ady - &adx * &cdy)
        + clift * (&adx * &bdy - &bdx * &ady);
    Sign::of_rational(&det)
}

/// In-circle test with symbolic tie-breaking.
///
/// Each point's lift is raised by an infinitesimal that dominates for lower
/// indices, so exactly cocircular quadruples are resolved by the point with
/// the smallest index. Indices must be pairwise distinct and `abc` must not
/// be collinear. Positive means `d` is inside, whatever the orientation of
/// `abc`. Never returns [`Sign::Zero`] for four distinct cocircular points.
pub fn incircle_sign_perturbed(pts: [(Point, usize); 4]) -> Sign {
    let lifted = lifted_sign_perturbed(pts);
    match orientation_sign(pts[0].0, pts[1].0, pts[2].0) {
        Sign::Negative => lifted.flip(),
        _ => lifted,
    }
}

/// Sign of the perturbed lifted determinant; antisymmetric in its arguments.
pub(crate) fn lifted_sign_perturbed(pts: [(Point, usize); 4]) -> Sign {
    let raw = incircle_raw_sign(pts[0].0, pts[1].0, pts[2].0, pts[3].0);
    if raw != Sign::Zero {
        return raw;
    }
    // derivative with respect to the lift of the lowest-index point:
    // (+, -, +, -) times the orientation of the other three
    let k = (0..4).min_by_key(|&k| pts[k].1).unwrap_or(0);
    let p: [Point; 4] = [pts[0].0, pts[1].0, pts[2].0, pts[3].0];
    match k {
        0 => orientation_sign(p[1], p[2], p[3]),
        1 => orientation_sign(p[0], p[2], p[3]).flip(),
        2 => orientation_sign(p[0], p[1], p[3]),
        _ => orientation_sign(p[0], p[1], p[2]).flip(),
    }
}
