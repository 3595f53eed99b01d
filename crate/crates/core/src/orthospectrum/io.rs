//! CSV export of length spectra: one `# {json}` metadata line, a header row and
//! one row per orthogeodesic.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;

use super::{LengthSpectrum, OneForm, Orientation, Orthogeodesic};
use crate::body::{BodySpec, Coords};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectrumMetadata {
    pub dim: usize,
    pub bodies: [BodySpec; 2],
    #[serde(rename = "T0")]
    pub t0: f64,
    #[serde(rename = "T")]
    pub t: f64,
    pub orientation: Orientation,
    #[serde(default)]
    pub one_form: Option<OneForm>,
    pub records: usize,
}

fn header(dim: usize) -> Vec<String> {
    let mut cols = Vec::with_capacity(4 * dim + 3);
    cols.extend((0..dim).map(|i| format!("xi{i}")));
    cols.push("length".into());
    cols.extend((0..dim).map(|i| format!("u{i}")));
    cols.extend((0..dim).map(|i| format!("foot1_{i}")));
    cols.extend((0..dim).map(|i| format!("foot2_{i}")));
    cols.push("phase_re".into());
    cols.push("phase_im".into());
    cols
}

fn bad(line: usize, msg: impl Into<String>) -> Error {
    Error::config(format!("line {line}"), msg)
}

impl LengthSpectrum {
    pub fn metadata(&self) -> SpectrumMetadata {
        SpectrumMetadata {
            dim: self.dim,
            bodies: self.bodies.clone(),
            t0: self.t0,
            t: self.t,
            orientation: self.orientation,
            one_form: self.one_form.clone(),
            records: self.records.len(),
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let meta = serde_json::to_string(&self.metadata()).expect("metadata serializes");
        writeln!(out, "# {meta}").unwrap();
        writeln!(out, "{}", header(self.dim).join(",")).unwrap();
        for r in &self.records {
            let mut fields: Vec<String> = r.xi.iter().map(|k| k.to_string()).collect();
            fields.push(r.length.to_string());
            for v in [&r.direction, &r.foot1, &r.foot2] {
                fields.extend(v.iter().map(|x| x.to_string()));
            }
            fields.push(r.holonomy_phase.re.to_string());
            fields.push(r.holonomy_phase.im.to_string());
            writeln!(out, "{}", fields.join(",")).unwrap();
        }
        out
    }

    /// Reads a spectrum written by [`LengthSpectrum::to_csv`], re-checking its invariants.
    pub fn from_csv(text: &str) -> Result<Self> {
        let (first, rest) = text.split_once('\n').unwrap_or((text, ""));
        let json = first
            .strip_prefix("# ")
            .ok_or_else(|| bad(1, "missing `# {json}` metadata line"))?;
        let de = &mut serde_json::Deserializer::from_str(json);
        let meta: SpectrumMetadata = serde_path_to_error::deserialize(de).map_err(|e| {
            Error::config(format!("metadata.{}", e.path()), e.into_inner().to_string())
        })?;
        let dim = meta.dim;
        if !(1..=64).contains(&dim) {
            return Err(bad(1, format!("unsupported dimension {dim}")));
        }
        for b in &meta.bodies {
            if b.dim() != Some(dim) {
                return Err(bad(1, "body dimension does not match `dim`"));
            }
        }
        if let Some(w) = &meta.one_form {
            if w.dim() != dim {
                return Err(bad(1, "one-form dimension does not match `dim`"));
            }
        }
        if !(meta.t0.is_finite() && meta.t.is_finite() && meta.t > meta.t0) {
            return Err(bad(1, "cutoffs must satisfy T > T0"));
        }

        let mut reader = csv::ReaderBuilder::new().from_reader(rest.as_bytes());
        let expected = header(dim);
        let found = reader.headers().map_err(|e| bad(2, e.to_string()))?;
        if found.iter().ne(expected.iter().map(String::as_str)) {
            return Err(bad(2, format!("expected columns {}", expected.join(","))));
        }
        let mut records: Vec<Orthogeodesic> = Vec::with_capacity(meta.records.min(1 << 20));
        for (i, row) in reader.records().enumerate() {
            let line = i + 3;
            let row = row.map_err(|e| bad(line, e.to_string()))?;
            if row.len() != expected.len() {
                return Err(bad(line, format!("expected {} fields", expected.len())));
            }
            let float = |j: usize| -> Result<f64> {
                row[j]
                    .parse::<f64>()
                    .ok()
                    .filter(|x| x.is_finite())
                    .ok_or_else(|| {
                        bad(
                            line,
                            format!("column `{}` is not a finite number", expected[j]),
                        )
                    })
            };
            let xi = (0..dim)
                .map(|j| {
                    row[j]
                        .parse::<i64>()
                        .map_err(|_| bad(line, format!("column `xi{j}` is not an integer")))
                })
                .collect::<Result<_>>()?;
            let length = float(dim)?;
            let vec_at = |start: usize| (start..start + dim).map(float).collect::<Result<Coords>>();
            let direction = vec_at(dim + 1)?;
            let foot1 = vec_at(2 * dim + 1)?;
            let foot2 = vec_at(3 * dim + 1)?;
            let phase = Complex64::new(float(4 * dim + 1)?, float(4 * dim + 2)?);
            if !(length > meta.t0 && length <= meta.t) {
                return Err(bad(line, format!("length {length} outside (T0, T]")));
            }
            let displacement: Coords = foot2.iter().zip(&foot1).map(|(a, b)| a - b).collect();
            let rec = Orthogeodesic {
                xi,
                length,
                direction,
                foot1,
                foot2,
                displacement,
                holonomy_phase: phase,
            };
            if let Some(prev) = records.last() {
                if super::by_length_then_xi(prev, &rec) != std::cmp::Ordering::Less {
                    return Err(bad(
                        line,
                        "records must be sorted by (length, xi) without duplicates",
                    ));
                }
            }
            records.push(rec);
        }
        if records.len() != meta.records {
            return Err(bad(
                1,
                format!(
                    "metadata declares {} records, found {}",
                    meta.records,
                    records.len()
                ),
            ));
        }
        let mut seen: Vec<_> = records.iter().map(|r| r.xi.clone()).collect();
        seen.sort();
        if seen.windows(2).any(|w| w[0] == w[1]) {
            return Err(bad(1, "duplicate lattice vector"));
        }
        Ok(LengthSpectrum {
            dim,
            records,
            t0: meta.t0,
            t: meta.t,
            orientation: meta.orientation,
            one_form: meta.one_form,
            bodies: meta.bodies,
        })
    }
}
