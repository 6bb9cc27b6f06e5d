//! Circle inversions and the Möbius group they generate.
//!
//! A [`MoebiusMap`] acts on the extended complex plane as
//! `z -> (a w + b) / (c w + d)` where `w = conj(z)` for orientation-reversing
//! maps and `w = z` otherwise. A single inversion needs the conjugation, so
//! the flag is part of the representation.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Circle, ExtendedPoint, Point};
use crate::error::{Error, Result};

const MAX_ATTEMPTS: usize = 1000;

/// Reflect `p` in `circle`: the image lies on the ray from the center
/// through `p` at distance `r^2 / |cp|`. The center maps to infinity.
pub fn invert_point(circle: &Circle, p: Point) -> ExtendedPoint {
    let d = p - circle.center();
    if d.x == 0.0 && d.y == 0.0 {
        return ExtendedPoint::Infinity;
    }
    let r = circle.radius();
    ExtendedPoint::Finite(circle.center() + d * (r * r / d.norm_sq()))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MoebiusMap {
    a: Complex64,
    b: Complex64,
    c: Complex64,
    d: Complex64,
    conjugating: bool,
}

fn to_complex(p: Point) -> Complex64 {
    Complex64::new(p.x, p.y)
}

fn to_point(z: Complex64) -> Point {
    Point::new(z.re, z.im)
}

impl MoebiusMap {
    pub fn new(
        a: Complex64,
        b: Complex64,
        c: Complex64,
        d: Complex64,
        conjugating: bool,
    ) -> Result<Self> {
        if ![a, b, c, d].iter().all(|z| z.is_finite()) {
            return Err(Error::NonFinite("Moebius coefficient".into()));
        }
        let det = a * d - b * c;
        if !(det.norm() > 0.0) {
            return Err(Error::DegenerateInput("singular Moebius map".into()));
        }
        Ok(MoebiusMap {
            a,
            b,
            c,
            d,
            conjugating,
        })
    }

    pub fn identity() -> Self {
        MoebiusMap {
            a: Complex64::new(1.0, 0.0),
            b: Complex64::new(0.0, 0.0),
            c: Complex64::new(0.0, 0.0),
            d: Complex64::new(1.0, 0.0),
            conjugating: false,
        }
    }

    /// The inversion in `circle`, written as `w -> (c0 w + r^2 - |c0|^2) / (w - conj(c0))`
    /// applied to `w = conj(z)`.
    pub fn from_inversion(circle: &Circle) -> Self {
        let c0 = to_complex(circle.center());
        let r2 = circle.radius() * circle.radius();
        MoebiusMap {
            a: c0,
            b: Complex64::new(r2 - c0.norm_sqr(), 0.0),
            c: Complex64::new(1.0, 0.0),
            d: -c0.conj(),
            conjugating: true,
        }
    }

    pub fn coefficients(&self) -> [Complex64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn is_conjugating(&self) -> bool {
        self.conjugating
    }

    pub fn determinant(&self) -> Complex64 {
        self.a * self.d - self.b * self.c
    }

    pub fn apply(&self, p: ExtendedPoint) -> ExtendedPoint {
        let zero = Complex64::new(0.0, 0.0);
        match p {
            ExtendedPoint::Infinity => {
                if self.c == zero {
                    ExtendedPoint::Infinity
                } else {
                    ExtendedPoint::Finite(to_point(self.a / self.c))
                }
            }
            ExtendedPoint::Finite(p) => {
                let z = to_complex(p);
                let w = if self.conjugating { z.conj() } else { z };
                let den = self.c * w + self.d;
                if den == zero {
                    ExtendedPoint::Infinity
                } else {
                    ExtendedPoint::Finite(to_point((self.a * w + self.b) / den))
                }
            }
        }
    }

    /// Image of a finite point, `None` when it is the pole.
    pub fn apply_point(&self, p: Point) -> Option<Point> {
        self.apply(ExtendedPoint::Finite(p)).finite()
    }

    /// `outer ∘ inner`. When the outer map conjugates its argument, the inner
    /// coefficients pass through the conjugation.
    pub fn compose(outer: &MoebiusMap, inner: &MoebiusMap) -> MoebiusMap {
        let (a2, b2, c2, d2) = if outer.conjugating {
            (inner.a.conj(), inner.b.conj(), inner.c.conj(), inner.d.conj())
        } else {
            (inner.a, inner.b, inner.c, inner.d)
        };
        let m = MoebiusMap {
            a: outer.a * a2 + outer.b * c2,
            b: outer.a * b2 + outer.b * d2,
            c: outer.c * a2 + outer.d * c2,
            d: outer.c * b2 + outer.d * d2,
            conjugating: outer.conjugating ^ inner.conjugating,
        };
        m.normalized()
    }

    pub fn inverse(&self) -> MoebiusMap {
        let inv = MoebiusMap {
            a: self.d,
            b: -self.b,
            c: -self.c,
            d: self.a,
            conjugating: self.conjugating,
        };
        if self.conjugating {
            MoebiusMap {
                a: inv.a.conj(),
                b: inv.b.conj(),
                c: inv.c.conj(),
                d: inv.d.conj(),
                conjugating: true,
            }
        } else {
            inv
        }
    }

    /// Scale the coefficients to unit determinant; the action is unchanged.
    fn normalized(self) -> MoebiusMap {
        let s = self.determinant().sqrt();
        if !(s.norm() > 0.0) || !s.is_finite() {
            return self;
        }
        MoebiusMap {
            a: self.a / s,
            b: self.b / s,
            c: self.c / s,
            d: self.d / s,
            conjugating: self.conjugating,
        }
    }

    /// The finite point sent to infinity, if any.
    pub fn pole(&self) -> Option<Point> {
        if self.c == Complex64::new(0.0, 0.0) {
            return None;
        }
        let w = -self.d / self.c;
        Some(to_point(if self.conjugating { w.conj() } else { w }))
    }
}

/// A seeded random Möbius map whose pole keeps more than `clearance` away
/// from every point of `forbidden`.
///
/// Half of the draws are products of one to three inversions in circles with
/// centers in `[-2, 2]^2` and radii in `[0.5, 2]`; the rest are
/// orientation-preserving maps `z -> beta + alpha / (z - p)` with
/// `|alpha| in [0.5, 2]` and `beta, p in [-2, 2]^2`.
pub fn random_moebius(seed: u64, forbidden: &[Point], clearance: f64) -> Result<MoebiusMap> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..MAX_ATTEMPTS {
        let m = if rng.gen_bool(0.5) {
            let count = rng.gen_range(1..=3);
            let mut m = MoebiusMap::identity();
            for _ in 0..count {
                let center = Point::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
                let circle = Circle::new(center, rng.gen_range(0.5..2.0))?;
                m = MoebiusMap::compose(&MoebiusMap::from_inversion(&circle), &m);
            }
            m
        } else {
            let alpha = Complex64::from_polar(
                rng.gen_range(0.5..2.0),
                rng.gen_range(0.0..std::f64::consts::TAU),
            );
            let beta = Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
            let p = Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
            MoebiusMap::new(beta, alpha - beta * p, Complex64::new(1.0, 0.0), -p, false)?
        };
        let clear = match m.pole() {
            None => true,
            Some(pole) => forbidden.iter().all(|q| q.distance(pole) > clearance),
        };
        if clear {
            return Ok(m);
        }
    }
    Err(Error::GeneratorExhausted(MAX_ATTEMPTS))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn p(x: f64, y: f64) -> Point {
        Point::new(x, y)
    }

    fn close(a: Point, b: Point, tol: f64) -> bool {
        a.distance(b) <= tol * (1.0 + b.norm())
    }

    #[test]
    fn invert_point_examples() {
        let unit = Circle::unit();
        assert_eq!(invert_point(&unit, p(2., 0.)), ExtendedPoint::Finite(p(0.5, 0.)));
        assert_eq!(invert_point(&unit, p(0., 1.)), ExtendedPoint::Finite(p(0., 1.)));
        assert_eq!(invert_point(&unit, p(0., 0.)), ExtendedPoint::Infinity);
    }

    #[test]
    fn inversion_map_examples() {
        let m = MoebiusMap::from_inversion(&Circle::unit());
        assert!(m.is_conjugating());
        assert_eq!(m.apply_point(p(2., 0.)), Some(p(0.5, 0.)));

        let c = Circle::new(p(1., 0.), 2.).unwrap();
        let m = MoebiusMap::from_inversion(&c);
        assert!(close(m.apply_point(p(3., 0.)).unwrap(), p(3., 0.), 1e-15));
        assert!(close(m.apply_point(p(2., 0.)).unwrap(), p(5., 0.), 1e-15));
        assert_eq!(m.apply(ExtendedPoint::Finite(p(1., 0.))), ExtendedPoint::Infinity);
        assert!(close(m.apply(ExtendedPoint::Infinity).finite().unwrap(), p(1., 0.), 0.0));
    }

    #[test]
    fn apply_examples() {
        let id = MoebiusMap::identity();
        assert_eq!(id.apply_point(p(3., 4.)), Some(p(3., 4.)));
        assert_eq!(id.apply(ExtendedPoint::Infinity), ExtendedPoint::Infinity);

        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        let recip = MoebiusMap::new(zero, one, one, zero, false).unwrap();
        let q = recip.apply_point(p(0., 2.)).unwrap();
        assert_abs_diff_eq!(q.x, 0.0, epsilon = 1e-16);
        assert_abs_diff_eq!(q.y, -0.5, epsilon = 1e-16);
        assert_eq!(recip.apply(ExtendedPoint::Finite(Point::ORIGIN)), ExtendedPoint::Infinity);
        assert_eq!(recip.apply(ExtendedPoint::Infinity), ExtendedPoint::Finite(Point::ORIGIN));
    }

    #[test]
    fn compose_examples() {
        let inv = MoebiusMap::from_inversion(&Circle::unit());
        let twice = MoebiusMap::compose(&inv, &inv);
        assert!(!twice.is_conjugating());
        assert!(close(twice.apply_point(p(2., 0.)).unwrap(), p(2., 0.), 1e-15));

        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        let recip = MoebiusMap::new(zero, one, one, zero, false).unwrap();
        let rr = MoebiusMap::compose(&recip, &recip);
        assert!(close(rr.apply_point(p(3., 4.)).unwrap(), p(3., 4.), 1e-15));

        let c = Circle::new(p(0.3, -1.1), 0.7).unwrap();
        let m = MoebiusMap::from_inversion(&c);
        let left = MoebiusMap::compose(&MoebiusMap::identity(), &m);
        let right = MoebiusMap::compose(&m, &MoebiusMap::identity());
        for q in [p(2., 1.), p(-0.4, 0.9), p(7., -3.)] {
            let want = m.apply_point(q).unwrap();
            assert!(close(left.apply_point(q).unwrap(), want, 1e-14));
            assert!(close(right.apply_point(q).unwrap(), want, 1e-14));
        }
    }

    #[test]
    fn compose_mixed_orientation_matches_sequential_application() {
        let inv = MoebiusMap::from_inversion(&Circle::new(p(0.5, 0.5), 1.3).unwrap());
        let frac = MoebiusMap::new(
            Complex64::new(0.2, 1.0),
            Complex64::new(-1.0, 0.5),
            Complex64::new(0.7, -0.3),
            Complex64::new(1.5, 0.1),
            false,
        )
        .unwrap();
        for (outer, inner) in [(inv, frac), (frac, inv), (inv, inv), (frac, frac)] {
            let m = MoebiusMap::compose(&outer, &inner);
            assert_eq!(m.is_conjugating(), outer.is_conjugating() ^ inner.is_conjugating());
            for q in [p(2., 1.), p(-0.4, 0.9), p(3., -3.)] {
                let want = outer.apply_point(inner.apply_point(q).unwrap()).unwrap();
                assert!(close(m.apply_point(q).unwrap(), want, 1e-13));
            }
        }
    }

    #[test]
    fn inverse_undoes_map() {
        let m = random_moebius(11, &[], 0.1).unwrap();
        let inv = m.inverse();
        for q in [p(0.2, 0.1), p(-1., 3.), p(5., 5.)] {
            let back = inv.apply_point(m.apply_point(q).unwrap()).unwrap();
            assert!(close(back, q, 1e-12));
        }
    }

    #[test]
    fn rejects_singular() {
        let one = Complex64::new(1.0, 0.0);
        assert!(MoebiusMap::new(one, one, one, one, false).is_err());
    }

    #[test]
    fn random_maps_are_deterministic_and_clear() {
        let m = random_moebius(1, &[], 0.1).unwrap();
        assert!(m.determinant().norm() > 0.0);
        assert_eq!(m, random_moebius(1, &[], 0.1).unwrap());

        let ring: Vec<Point> = (0..64)
            .map(|k| {
                let t = k as f64 * std::f64::consts::TAU / 64.0;
                p(t.cos(), t.sin())
            })
            .chain(std::iter::once(Point::ORIGIN))
            .collect();
        for seed in 2..40 {
            let m = random_moebius(seed, &ring, 0.1).unwrap();
            if let Some(pole) = m.pole() {
                assert!(ring.iter().all(|q| q.distance(pole) > 0.1));
            }
        }
    }

    #[test]
    fn generator_exhausts_when_nothing_fits() {
        let r = random_moebius(5, &[Point::ORIGIN], f64::MAX);
        assert_eq!(r, Err(Error::GeneratorExhausted(MAX_ATTEMPTS)));
    }
}
