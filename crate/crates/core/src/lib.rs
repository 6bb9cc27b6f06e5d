//! Möbius-invariant natural neighbor interpolation.
//!
//! The interpolant inverts the sites about the query point, takes the convex
//! hull of the images and reads each neighbor's exterior lune angle off the
//! hull's turning angles. Neighbors are weighted by `tan(theta / 2)`, which
//! makes the result invariant under every Möbius transformation of the plane
//! and reproduces harmonic functions in the limit of dense samples on a
//! circle.
//!
//! Classical Sibson interpolation over a Bowyer–Watson Delaunay
//! triangulation lives in [`delaunay`]; the same triangulation provides an
//! independent circumcircle-based computation of the lune angles.

pub mod delaunay;
pub mod error;
pub mod geom;
pub mod harness;
pub mod hull;
pub mod interp;

pub use error::{Error, Result};
pub use geom::{Circle, ExtendedPoint, MoebiusMap, Point, Sign};
pub use interp::{
    interpolate, lune_angles, weights_from_angles, InterpOptions, LuneAngleSet, Policy,
    QueryClass, SampleSet, Value, WeightFunction, WeightVector,
};
