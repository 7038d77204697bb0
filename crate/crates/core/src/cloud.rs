//! Point samples and the flat-file point format.
//!
//! The file format is a header line `# crofton-points v1 d=<d>` followed by
//! one point per line, coordinates comma-separated in shortest round-trip
//! decimal form.

use std::fmt::Write as _;
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::error::{Error, Result};
use crate::geom::{norm, Point};

/// Where a cloud came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Iid,
    Rbm,
    File,
}

/// A finite sample in `R^d`, stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct PointCloud {
    dim: usize,
    coords: Vec<f64>,
    provenance: Provenance,
}

impl PointCloud {
    pub fn from_flat(dim: usize, coords: Vec<f64>) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidDimension {
                got: dim,
                expected: ">= 2",
            });
        }
        if !coords.len().is_multiple_of(dim) {
            return Err(Error::Degenerate(format!(
                "{} coordinates do not split into points of dimension {dim}",
                coords.len()
            )));
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::Degenerate("non-finite coordinate".into()));
        }
        Ok(PointCloud {
            dim,
            coords,
            provenance: Provenance::File,
        })
    }

    pub fn from_points(dim: usize, points: &[Point]) -> Result<Self> {
        if let Some(p) = points.iter().find(|p| p.len() != dim) {
            return Err(Error::InvalidDimension {
                got: p.len(),
                expected: "all points of the declared dimension",
            });
        }
        Self::from_flat(dim, points.concat())
    }

    pub fn with_provenance(mut self, provenance: Provenance) -> Self {
        self.provenance = provenance;
        self
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    #[inline]
    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.coords.chunks_exact(self.dim)
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    /// Componentwise bounding box `(lo, hi)`; zeros for an empty cloud.
    pub fn bounds(&self) -> (Vec<f64>, Vec<f64>) {
        if self.is_empty() {
            return (vec![0.0; self.dim], vec![0.0; self.dim]);
        }
        let mut lo = vec![f64::INFINITY; self.dim];
        let mut hi = vec![f64::NEG_INFINITY; self.dim];
        for p in self.iter() {
            for k in 0..self.dim {
                lo[k] = lo[k].min(p[k]);
                hi[k] = hi[k].max(p[k]);
            }
        }
        (lo, hi)
    }

    /// `max_j ||X_j||`, the half-width of the line-offset window.
    pub fn max_norm(&self) -> f64 {
        self.iter().map(norm).fold(0.0, f64::max)
    }

    /// Every coordinate multiplied by `s`.
    pub fn scaled(&self, s: f64) -> Self {
        PointCloud {
            dim: self.dim,
            coords: self.coords.iter().map(|c| c * s).collect(),
            provenance: self.provenance,
        }
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "# crofton-points v1 d={}", self.dim)?;
        let mut line = String::new();
        for p in self.iter() {
            line.clear();
            for (k, c) in p.iter().enumerate() {
                if k > 0 {
                    line.push(',');
                }
                write!(line, "{c}").expect("writing to a String");
            }
            writeln!(w, "{line}")?;
        }
        Ok(())
    }

    pub fn read_csv<R: BufRead>(r: R) -> Result<Self, ParseError> {
        let mut lines = r.lines().enumerate();
        let dim = loop {
            let Some((no, line)) = lines.next() else {
                return Err(ParseError::MissingHeader);
            };
            let line = line.map_err(|e| ParseError::Io(no + 1, e.to_string()))?;
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            break parse_header(line).ok_or(ParseError::BadHeader(no + 1))?;
        };
        let mut coords = Vec::new();
        for (no, line) in lines {
            let line = line.map_err(|e| ParseError::Io(no + 1, e.to_string()))?;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let before = coords.len();
            for field in line.split(',') {
                let v: f64 = field
                    .trim()
                    .parse()
                    .map_err(|_| ParseError::BadNumber(no + 1, field.trim().to_string()))?;
                if !v.is_finite() {
                    return Err(ParseError::BadNumber(no + 1, field.trim().to_string()));
                }
                coords.push(v);
            }
            if coords.len() - before != dim {
                return Err(ParseError::WrongArity {
                    line: no + 1,
                    got: coords.len() - before,
                    expected: dim,
                });
            }
        }
        PointCloud::from_flat(dim, coords).map_err(|e| ParseError::Invalid(e.to_string()))
    }
}

fn parse_header(line: &str) -> Option<usize> {
    let rest = line.strip_prefix('#')?.trim();
    let rest = rest.strip_prefix("crofton-points")?.trim();
    let rest = rest.strip_prefix("v1")?.trim();
    rest.strip_prefix("d=")?.trim().parse().ok().filter(|&d| d >= 2)
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ParseError {
    #[error("missing `# crofton-points v1 d=<d>` header")]
    MissingHeader,
    #[error("line {0}: malformed header")]
    BadHeader(usize),
    #[error("line {0}: cannot parse `{1}` as a finite number")]
    BadNumber(usize, String),
    #[error("line {line}: {got} coordinates, expected {expected}")]
    WrongArity {
        line: usize,
        got: usize,
        expected: usize,
    },
    #[error("line {0}: {1}")]
    Io(usize, String),
    #[error("{0}")]
    Invalid(String),
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn reports_line_numbers() {
        let text = "# crofton-points v1 d=2\n0,1\n0.5,abc\n";
        let err = PointCloud::read_csv(text.as_bytes()).unwrap_err();
        assert_eq!(err, ParseError::BadNumber(3, "abc".into()));

        let text = "# crofton-points v1 d=3\n0,1\n";
        let err = PointCloud::read_csv(text.as_bytes()).unwrap_err();
        assert!(matches!(err, ParseError::WrongArity { line: 2, got: 2, expected: 3 }));

        let err = PointCloud::read_csv("0,1\n".as_bytes()).unwrap_err();
        assert_eq!(err, ParseError::BadHeader(1));
    }

    proptest! {
        #[test]
        fn csv_round_trip_is_exact(
            dim in 2usize..5,
            raw in prop::collection::vec(-1e6f64..1e6, 0..60),
        ) {
            let keep = raw.len() / dim * dim;
            let cloud = PointCloud::from_flat(dim, raw[..keep].to_vec()).unwrap();
            let mut buf = Vec::new();
            cloud.write_csv(&mut buf).unwrap();
            let back = PointCloud::read_csv(buf.as_slice()).unwrap();
            prop_assert_eq!(back.coords(), cloud.coords());
            prop_assert_eq!(back.dim(), dim);
        }
    }
}
