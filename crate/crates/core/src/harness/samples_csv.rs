use std::collections::HashMap;
use std::path::Path;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geom::Point;
use crate::interp::{Elevations, SampleSet};

/// Reads a sample file with header `x,y,z` or `x,y,z_re,z_im`. Lines
/// starting with `#` are comments.
pub fn load_samples_csv(path: impl AsRef<Path>) -> Result<SampleSet> {
    let text = std::fs::read_to_string(path.as_ref())
        .map_err(|e| Error::Io(format!("{}: {e}", path.as_ref().display())))?;
    parse_samples_csv(&text)
}

pub fn parse_samples_csv(text: &str) -> Result<SampleSet> {
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(text.as_bytes());

    let headers = reader
        .headers()
        .map_err(|e| Error::Parse {
            line: 1,
            message: e.to_string(),
        })?
        .clone();
    let fields: Vec<&str> = headers.iter().collect();
    let complex = match fields.as_slice() {
        ["x", "y", "z"] => false,
        ["x", "y", "z_re", "z_im"] => true,
        _ => {
            return Err(Error::Parse {
                line: headers.position().map_or(1, |p| p.line()),
                message: format!(
                    "expected header `x,y,z` or `x,y,z_re,z_im`, found `{}`",
                    fields.join(",")
                ),
            })
        }
    };
    let width = fields.len();

    let mut sites = Vec::new();
    let mut real = Vec::new();
    let mut cplx = Vec::new();
    let mut lines = Vec::new();
    let mut seen: HashMap<(u64, u64), u64> = HashMap::new();
    for record in reader.records() {
        let record = record.map_err(|e| Error::Parse {
            line: e.position().map_or(0, |p| p.line()),
            message: e.to_string(),
        })?;
        let line = record.position().map_or(0, |p| p.line());
        if record.len() == 1 && record[0].is_empty() {
            continue;
        }
        if record.len() != width {
            return Err(Error::Parse {
                line,
                message: format!("expected {width} fields, found {}", record.len()),
            });
        }
        let mut vals = [0.0; 4];
        for (k, field) in record.iter().enumerate() {
            let v: f64 = field.parse().map_err(|_| Error::Parse {
                line,
                message: format!("`{field}` is not a number"),
            })?;
            if !v.is_finite() {
                return Err(Error::Parse {
                    line,
                    message: format!("non-finite value `{field}`"),
                });
            }
            vals[k] = v;
        }
        let p = Point::new(vals[0], vals[1]);
        let key = ((p.x + 0.0).to_bits(), (p.y + 0.0).to_bits());
        if let Some(first) = seen.insert(key, line) {
            return Err(Error::Parse {
                line,
                message: format!("duplicate site ({}, {}) first seen on line {first}", p.x, p.y),
            });
        }
        sites.push(p);
        lines.push(line);
        if complex {
            cplx.push(Complex64::new(vals[2], vals[3]));
        } else {
            real.push(vals[2]);
        }
    }
    if sites.len() < 3 {
        return Err(Error::TooFewSites(sites.len()));
    }
    let elevations = if complex {
        Elevations::Complex(cplx)
    } else {
        Elevations::Real(real)
    };
    SampleSet::new(sites, elevations).map_err(|e| match e {
        Error::DegenerateInput(_) => Error::Parse {
            line: *lines.last().unwrap_or(&0),
            message: "all sites are collinear".into(),
        },
        other => other,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_file() {
        let s = parse_samples_csv("x,y,z\n1,1,10\n-1,1,20\n-1,-1,30\n1,-1,40\n").unwrap();
        assert_eq!(s.len(), 4);
        assert_eq!(s.elevations(), &Elevations::Real(vec![10., 20., 30., 40.]));
    }

    #[test]
    fn comments_and_blank_lines() {
        let text = "# sample file\nx,y,z\n# corner\n0,0,1\n\n1,0,2\n # indented is data? no\n0,1,3\n";
        let r = parse_samples_csv(text);
        // an indented '#' is not a comment marker
        assert!(matches!(r, Err(Error::Parse { line: 7, .. })), "{r:?}");
        let text = "# sample file\nx,y,z\n# corner\n0,0,1\n\n1,0,2\n0,1,3\n";
        assert_eq!(parse_samples_csv(text).unwrap().len(), 3);
    }

    #[test]
    fn complex_header() {
        let s = parse_samples_csv("x,y,z_re,z_im\n0,0,1,2\n1,0,3,4\n0,1,5,6\n").unwrap();
        assert!(matches!(s.elevations(), Elevations::Complex(v) if v[2] == Complex64::new(5., 6.)));
    }

    #[test]
    fn duplicate_names_row() {
        let err = parse_samples_csv("x,y,z\n0,0,1\n1,0,2\n0,1,3\n1,0,9\n").unwrap_err();
        match err {
            Error::Parse { line, message } => {
                assert_eq!(line, 5);
                assert!(message.contains("line 3"), "{message}");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn malformed_rows() {
        assert!(matches!(
            parse_samples_csv("x,y,z\n0,0,1\n1,zz,2\n0,1,3\n"),
            Err(Error::Parse { line: 3, .. })
        ));
        assert!(matches!(
            parse_samples_csv("x,y,z\n0,0,1\n1,0\n0,1,3\n"),
            Err(Error::Parse { line: 3, .. })
        ));
        assert!(matches!(
            parse_samples_csv("x,y,z\n0,0,1\n1,0,NaN\n0,1,3\n"),
            Err(Error::Parse { line: 3, .. })
        ));
        assert!(matches!(parse_samples_csv("a,b,c\n0,0,1\n"), Err(Error::Parse { line: 1, .. })));
        assert_eq!(
            parse_samples_csv("x,y,z\n0,0,1\n1,0,2\n").unwrap_err(),
            Error::TooFewSites(2)
        );
        assert!(matches!(
            parse_samples_csv("x,y,z\n0,0,1\n1,1,2\n2,2,3\n"),
            Err(Error::Parse { .. })
        ));
    }
}
