use std::path::Path;
use std::str::FromStr;

use rayon::prelude::*;

use crate::delaunay::{build_delaunay, sibson_interpolate};
use crate::error::{Error, Result};
use crate::geom::Point;
use crate::interp::{classify_query, interpolate, InterpOptions, QueryClass, SampleSet};

/// Regular evaluation grid; sample points include both ends of each range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
    pub nx: usize,
    pub ny: usize,
}

impl GridSpec {
    pub fn new(x_min: f64, x_max: f64, y_min: f64, y_max: f64, nx: usize, ny: usize) -> Result<Self> {
        if ![x_min, x_max, y_min, y_max].iter().all(|v| v.is_finite()) {
            return Err(Error::NonFinite("grid bounds".into()));
        }
        if !(x_min < x_max && y_min < y_max) {
            return Err(Error::Precondition("grid bounds must satisfy min < max".into()));
        }
        if nx < 2 || ny < 2 {
            return Err(Error::Precondition("grid resolution must be at least 2x2".into()));
        }
        Ok(GridSpec {
            x_min,
            x_max,
            y_min,
            y_max,
            nx,
            ny,
        })
    }

    /// Point for column `col` and row `row`, row 0 at `y_max`.
    pub fn point(&self, col: usize, row: usize) -> Point {
        let fx = col as f64 / (self.nx - 1) as f64;
        let fy = row as f64 / (self.ny - 1) as f64;
        Point::new(
            self.x_min + fx * (self.x_max - self.x_min),
            self.y_max - fy * (self.y_max - self.y_min),
        )
    }
}

impl FromStr for GridSpec {
    type Err = Error;

    /// `XMIN,XMAX,YMIN,YMAX,NX,NY`
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        let bad = || Error::Precondition(format!("grid `{s}` is not XMIN,XMAX,YMIN,YMAX,NX,NY"));
        if parts.len() != 6 {
            return Err(bad());
        }
        let f = |k: usize| parts[k].parse::<f64>().map_err(|_| bad());
        let n = |k: usize| parts[k].parse::<usize>().map_err(|_| bad());
        GridSpec::new(f(0)?, f(1)?, f(2)?, f(3)?, n(4)?, n(5)?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Method {
    #[default]
    Moebius,
    Sibson,
}

/// Row-major values, top row first; `None` where evaluation failed. Complex
/// elevations contribute their real part.
pub fn evaluate_grid(
    samples: &SampleSet,
    spec: &GridSpec,
    method: Method,
    opts: &InterpOptions,
) -> Vec<Option<f64>> {
    let tri = match method {
        Method::Sibson => Some(build_delaunay(samples)),
        Method::Moebius => None,
    };
    (0..spec.ny)
        .into_par_iter()
        .flat_map_iter(|row| {
            let tri = tri.as_ref();
            (0..spec.nx).map(move |col| {
                let q = spec.point(col, row);
                match tri {
                    None => interpolate(samples, q, opts).ok().map(|v| v.re()),
                    Some(t) => match classify_query(samples, q, opts.snap_tolerance) {
                        QueryClass::Coincident(i) => Some(samples.elevations().get(i).re()),
                        _ => sibson_interpolate(t, samples.elevations(), q).ok().map(|v| v.re()),
                    },
                }
            })
        })
        .collect()
}

/// ASCII PGM with linear min-max scaling of the valid cells to 0..=255.
/// A constant grid renders as 128; failed cells render as 0.
pub fn render_pgm(values: &[Option<f64>], nx: usize, ny: usize) -> Result<String> {
    if values.len() != nx * ny {
        return Err(Error::Precondition(format!(
            "{} values for a {nx}x{ny} grid",
            values.len()
        )));
    }
    if values.iter().flatten().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("grid value".into()));
    }
    let (lo, hi) = values
        .iter()
        .flatten()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    let level = |v: &Option<f64>| -> u8 {
        match *v {
            None => 0,
            Some(_) if !(hi > lo) => 128,
            Some(v) => ((v - lo) / (hi - lo) * 255.0).round().clamp(0.0, 255.0) as u8,
        }
    };
    let mut out = format!("P2\n{nx} {ny}\n255\n");
    for row in values.chunks(nx) {
        let line: Vec<String> = row.iter().map(|v| level(v).to_string()).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    Ok(out)
}

pub fn write_pgm(values: &[Option<f64>], nx: usize, ny: usize, path: impl AsRef<Path>) -> Result<()> {
    let text = render_pgm(values, nx, ny)?;
    std::fs::write(path.as_ref(), text)
        .map_err(|e| Error::Io(format!("{}: {e}", path.as_ref().display())))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pixels(pgm: &str) -> Vec<u8> {
        pgm.lines()
            .skip(3)
            .flat_map(|l| l.split_whitespace().map(|t| t.parse::<u8>().unwrap()))
            .collect()
    }

    #[test]
    fn linear_scaling() {
        let pgm = render_pgm(&[Some(0.), Some(1.), Some(2.), Some(3.)], 2, 2).unwrap();
        assert!(pgm.starts_with("P2\n2 2\n255\n"));
        assert_eq!(pixels(&pgm), vec![0, 85, 170, 255]);
    }

    #[test]
    fn constant_and_missing() {
        let pgm = render_pgm(&[Some(4.), Some(4.), None, Some(4.)], 2, 2).unwrap();
        assert_eq!(pixels(&pgm), vec![128, 128, 0, 128]);
        assert!(render_pgm(&[Some(f64::NAN), None, None, None], 2, 2).is_err());
        assert!(render_pgm(&[None; 3], 2, 2).is_err());
    }

    #[test]
    fn grid_spec_parsing() {
        let g: GridSpec = "-1,1,-2,2,3,5".parse().unwrap();
        assert_eq!(g.point(0, 0), Point::new(-1., 2.));
        assert_eq!(g.point(2, 4), Point::new(1., -2.));
        assert_eq!(g.point(1, 2), Point::new(0., 0.));
        assert!("1,0,0,1,2,2".parse::<GridSpec>().is_err());
        assert!("0,1,0,1,1,2".parse::<GridSpec>().is_err());
        assert!("0,1,0,1,2".parse::<GridSpec>().is_err());
    }

    #[test]
    fn moebius_and_sibson_agree_at_square_center() {
        let sites = vec![
            Point::new(1., 1.),
            Point::new(-1., 1.),
            Point::new(-1., -1.),
            Point::new(1., -1.),
        ];
        let s = SampleSet::new(sites, vec![10., 20., 30., 40.]).unwrap();
        let spec: GridSpec = "-1,1,-1,1,5,5".parse().unwrap();
        let opts = InterpOptions::default();
        let a = evaluate_grid(&s, &spec, Method::Moebius, &opts);
        let b = evaluate_grid(&s, &spec, Method::Sibson, &opts);
        assert!((a[12].unwrap() - 25.0).abs() < 1e-12);
        assert!((b[12].unwrap() - 25.0).abs() < 1e-12);
        // boundary non-corner cells fail under both methods, corners snap
        assert_eq!(a[1], None);
        assert_eq!(b[1], None);
        assert_eq!(a[0], Some(20.0));
        assert_eq!(b[0], Some(20.0));
        let pa = pixels(&render_pgm(&a, 5, 5).unwrap());
        let pb = pixels(&render_pgm(&b, 5, 5).unwrap());
        assert_eq!(pa[12], pb[12]);
    }
}
