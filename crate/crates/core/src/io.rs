//! JSON point files.
//!
//! ```json
//! {"points": [{"x": "1/2", "y": "3/1"}, {"h": ["1", "2", "0"]}], "labels": [1, 2]}
//! ```
//!
//! Rationals are strings `p/q`; points at infinity use the homogeneous form.

use std::fs;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::projective::{ProjPoint, Rational};
use crate::rich_lines::PointSet;

#[derive(Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum PointRepr {
    Affine { x: String, y: String },
    Homogeneous { h: [String; 3] },
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PointsFile {
    points: Vec<PointRepr>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<u8>>,
}

/// Parses `p/q` or `p`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n = BigInt::from_str(n).map_err(|_| bad())?;
    let d = BigInt::from_str(d).map_err(|_| bad())?;
    if d == BigInt::from(0) {
        return Err(bad());
    }
    Ok(Rational::new(n, d))
}

/// `p/q` with `q > 0` and the fraction reduced.
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

fn parse_int(s: &str) -> Result<BigInt> {
    BigInt::from_str(s.trim()).map_err(|_| Error::Parse(format!("not an integer: {s:?}")))
}

fn point_repr(p: &ProjPoint) -> PointRepr {
    match p.to_affine() {
        Some((x, y)) => PointRepr::Affine { x: format_rational(&x), y: format_rational(&y) },
        None => PointRepr::Homogeneous { h: [p.x().to_string(), p.y().to_string(), p.z().to_string()] },
    }
}

fn parse_point(r: &PointRepr) -> Result<ProjPoint> {
    match r {
        PointRepr::Affine { x, y } => Ok(ProjPoint::affine(&parse_rational(x)?, &parse_rational(y)?)),
        PointRepr::Homogeneous { h } => {
            ProjPoint::from_coords([parse_int(&h[0])?, parse_int(&h[1])?, parse_int(&h[2])?])
                .map_err(|_| Error::Parse("homogeneous coordinates are all zero".into()))
        }
    }
}

pub fn points_to_json(set: &PointSet) -> String {
    let file = PointsFile {
        points: set.points().iter().map(point_repr).collect(),
        labels: set.labels().map(|l| l.to_vec()),
    };
    let mut s = serde_json::to_string_pretty(&file).expect("serializable");
    s.push('\n');
    s
}

pub fn points_from_json(text: &str) -> Result<PointSet> {
    let file: PointsFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let points = file.points.iter().map(parse_point).collect::<Result<Vec<_>>>()?;
    match file.labels {
        Some(labels) => PointSet::with_labels(points, labels),
        None => PointSet::new(points),
    }
}

pub fn read_points_file(path: &Path) -> Result<PointSet> {
    let text = fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    points_from_json(&text)
}

pub fn write_points_file(path: &Path, set: &PointSet) -> Result<()> {
    fs::write(path, points_to_json(set)).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}
