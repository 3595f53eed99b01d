//! Epstein and convex zeta functions, their continuation to the strip
//! `Re s > d - 1`, and contour residues.

mod convex;
mod epstein;

pub use convex::{convex_zeta_continued, convex_zeta_direct, ConvexZeta, ZetaOptions};
pub use epstein::epstein_zeta;

use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::numeric::ordered_par_map;
use crate::numeric::sum::ComplexSum;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Direct,
    Continued,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ZetaValue {
    pub s: Complex64,
    pub value: Complex64,
    pub tail_bound: f64,
    pub method: Method,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ResidueSource {
    /// Contour integral of the continued zeta function.
    Contour,
    /// Contour integral of the closed-form polynomial part only (poles below the strip).
    Formula,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PoleReport {
    pub location: usize,
    pub residue: Complex64,
    pub predicted: Complex64,
    pub relative_gap: f64,
    pub source: ResidueSource,
}

pub const RESIDUE_NODES: usize = 64;

/// `(1 / 2 pi i) * contour integral of f` over `|s - pole| = radius`, trapezoidal rule.
pub fn residue_estimate<F>(f: F, pole: f64, radius: f64) -> Result<Complex64>
where
    F: Fn(Complex64) -> Result<Complex64> + Sync,
{
    if !(radius > 0.0) {
        return Err(Error::Precondition(format!(
            "contour radius must be positive, got {radius}"
        )));
    }
    let vals = ordered_par_map(RESIDUE_NODES, |j| {
        let w = Complex64::from_polar(radius, 2.0 * PI * (j as f64 + 0.5) / RESIDUE_NODES as f64);
        f(pole + w).map(|v| v * w)
    });
    let mut acc = ComplexSum::new();
    for v in vals {
        acc.add(v?);
    }
    Ok(acc.value() / RESIDUE_NODES as f64)
}

/// Relative distance, or the absolute one when the prediction vanishes.
pub(crate) fn relative_gap(got: Complex64, want: Complex64) -> f64 {
    let scale = want.norm();
    if scale == 0.0 {
        got.norm()
    } else {
        (got - want).norm() / scale
    }
}
