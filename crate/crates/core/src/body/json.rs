use serde::{Deserialize, Serialize};

use super::{ConvexBody, Shape};
use crate::error::{Error, Result};

/// JSON form of a body, tagged by `kind`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum BodySpec {
    Point {
        coords: Vec<f64>,
    },
    Ball {
        center: Vec<f64>,
        radius: f64,
    },
    Ellipsoid {
        center: Vec<f64>,
        #[serde(rename = "Q")]
        q: Vec<Vec<f64>>,
    },
    #[serde(rename = "support_series_2d")]
    SupportSeries2d {
        a0: f64,
        #[serde(default)]
        cos: Vec<f64>,
        #[serde(default)]
        sin: Vec<f64>,
    },
    MinkowskiSum {
        parts: Vec<BodySpec>,
    },
}

impl BodySpec {
    /// Parses a single body document; schema errors carry the offending field path.
    pub fn parse(text: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            Error::config(path, e.into_inner().to_string())
        })
    }

    pub fn dim(&self) -> Option<usize> {
        match self {
            BodySpec::Point { coords } => Some(coords.len()),
            BodySpec::Ball { center, .. } | BodySpec::Ellipsoid { center, .. } => {
                Some(center.len())
            }
            BodySpec::SupportSeries2d { .. } => Some(2),
            BodySpec::MinkowskiSum { parts } => parts.first().and_then(BodySpec::dim),
        }
    }

    fn shapes(&self, out: &mut Vec<Shape>) -> Result<()> {
        match self {
            BodySpec::Point { coords } => out.push(Shape::Point(coords.as_slice().into())),
            BodySpec::Ball { center, radius } => out.push(Shape::Ball {
                center: center.as_slice().into(),
                radius: *radius,
            }),
            BodySpec::Ellipsoid { center, q } => {
                let d = center.len();
                if q.len() != d || q.iter().any(|row| row.len() != d) {
                    return Err(Error::InvalidBody(format!(
                        "quadratic form Q must be {d}x{d} to match the center"
                    )));
                }
                out.push(Shape::Ellipsoid {
                    center: center.as_slice().into(),
                    q: q.concat(),
                });
            }
            BodySpec::SupportSeries2d { a0, cos, sin } => out.push(Shape::SupportSeries2d {
                a0: *a0,
                cos: cos.clone(),
                sin: sin.clone(),
            }),
            BodySpec::MinkowskiSum { parts } => {
                for p in parts {
                    p.shapes(out)?;
                }
            }
        }
        Ok(())
    }

    pub fn build(&self) -> Result<ConvexBody> {
        let dim = self
            .dim()
            .ok_or_else(|| Error::InvalidBody("empty Minkowski sum".into()))?;
        let mut parts = Vec::new();
        self.shapes(&mut parts)?;
        ConvexBody::new(dim, parts)
    }
}

fn shape_spec(s: &Shape) -> BodySpec {
    match s {
        Shape::Point(p) => BodySpec::Point { coords: p.to_vec() },
        Shape::Ball { center, radius } => BodySpec::Ball {
            center: center.to_vec(),
            radius: *radius,
        },
        Shape::Ellipsoid { center, q } => BodySpec::Ellipsoid {
            center: center.to_vec(),
            q: q.chunks(center.len()).map(<[f64]>::to_vec).collect(),
        },
        Shape::SupportSeries2d { a0, cos, sin } => BodySpec::SupportSeries2d {
            a0: *a0,
            cos: cos.clone(),
            sin: sin.clone(),
        },
    }
}

impl From<&ConvexBody> for BodySpec {
    fn from(b: &ConvexBody) -> Self {
        match b.parts() {
            [single] => shape_spec(single),
            parts => BodySpec::MinkowskiSum {
                parts: parts.iter().map(shape_spec).collect(),
            },
        }
    }
}
