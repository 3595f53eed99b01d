//! Length combs as atomic measures on the line, their smoothed Fourier transforms,
//! scale-ladder singularity scans, and the symmetrized Guinand–Meyer measure.

use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::numeric::fit::fit_power_law;
use crate::numeric::lattice::lattice_points_in_ball;
use crate::numeric::ordered_par_map;
use crate::numeric::sum::ComplexSum;
use crate::orthospectrum::LengthSpectrum;

/// Relative tolerance under which atom positions are merged.
pub const MERGE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AtomicMeasure {
    /// `(position, weight)`, sorted by position, positions pairwise distinct.
    atoms: Vec<(f64, Complex64)>,
    /// Exponent `g` with total variation on `[-T, T]` bounded by `C T^g`.
    growth_exponent: f64,
}

impl AtomicMeasure {
    pub fn new(
        atoms: impl IntoIterator<Item = (f64, Complex64)>,
        growth_exponent: f64,
    ) -> Result<Self> {
        let mut raw: Vec<(f64, Complex64)> = atoms.into_iter().collect();
        if raw
            .iter()
            .any(|(x, w)| !x.is_finite() || !w.re.is_finite() || !w.im.is_finite())
        {
            return Err(Error::Precondition(
                "atoms must have finite positions and weights".into(),
            ));
        }
        raw.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut atoms: Vec<(f64, Complex64)> = Vec::with_capacity(raw.len());
        let mut acc = ComplexSum::new();
        let mut anchor = f64::NAN;
        for (x, w) in raw {
            if !atoms.is_empty() && (x - anchor).abs() <= MERGE_TOL * anchor.abs().max(1.0) {
                acc.add(w);
                atoms.last_mut().unwrap().1 = acc.value();
            } else {
                anchor = x;
                acc = ComplexSum::new();
                acc.add(w);
                atoms.push((x, w));
            }
        }
        Ok(AtomicMeasure {
            atoms,
            growth_exponent,
        })
    }

    pub fn empty() -> Self {
        AtomicMeasure {
            atoms: Vec::new(),
            growth_exponent: 0.0,
        }
    }

    pub fn atoms(&self) -> &[(f64, Complex64)] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn growth_exponent(&self) -> f64 {
        self.growth_exponent
    }

    pub fn total_weight(&self) -> Complex64 {
        self.atoms
            .iter()
            .map(|a| a.1)
            .collect::<ComplexSum>()
            .value()
    }

    /// Largest `|position|`.
    pub fn support_radius(&self) -> f64 {
        self.atoms.iter().map(|a| a.0.abs()).fold(0.0, f64::max)
    }
}

/// Unit Dirac masses at the orthogeodesic lengths (holonomy ignored).
pub fn dirac_comb(spec: &LengthSpectrum) -> AtomicMeasure {
    AtomicMeasure::new(
        spec.lengths().map(|l| (l, Complex64::new(1.0, 0.0))),
        spec.dim() as f64,
    )
    .expect("spectrum lengths are finite")
}

/// Smoothed Fourier transform `(1/sigma) sum w e^(-i tau l) e^(-l^2 / (2 sigma^2))`:
/// the transform at `tau` seen through a Gaussian of width `1/sigma` in frequency.
pub fn windowed_fourier(m: &AtomicMeasure, tau: f64, sigma: f64) -> Result<Complex64> {
    if !(sigma > 0.0) {
        return Err(Error::Precondition(format!(
            "scale must be positive, got {sigma}"
        )));
    }
    Ok(windowed_unchecked(m, tau, sigma))
}

fn windowed_unchecked(m: &AtomicMeasure, tau: f64, sigma: f64) -> Complex64 {
    let inv = 1.0 / (2.0 * sigma * sigma);
    let mut acc = ComplexSum::new();
    for &(x, w) in &m.atoms {
        let g = (-x * x * inv).exp();
        if g == 0.0 {
            continue;
        }
        acc.add(w * Complex64::from_polar(g, -tau * x));
    }
    acc.value() / sigma
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScanOptions {
    /// Growth exponent above which a frequency is flagged singular.
    pub threshold: f64,
    /// RMS fit residual above which the estimate is inconclusive.
    pub max_residual: f64,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions {
            threshold: 0.25,
            max_residual: 0.5,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanReport {
    pub taus: Vec<f64>,
    pub scales: Vec<f64>,
    /// `values[i][j]` at `taus[i]`, `scales[j]`.
    pub values: Vec<Vec<Complex64>>,
    pub exponents: Vec<f64>,
    pub residuals: Vec<f64>,
    pub flagged: Vec<bool>,
    pub inconclusive: Vec<bool>,
    /// Gaussian window at the outermost atom and largest scale: the relative weight of
    /// the atoms the truncated comb is missing.
    pub truncation_weight: f64,
}

impl ScanReport {
    pub fn flagged_taus(&self) -> Vec<f64> {
        self.taus
            .iter()
            .zip(&self.flagged)
            .filter(|(_, f)| **f)
            .map(|(t, _)| *t)
            .collect()
    }

    /// Rows `tau, scale, re, im, exponent, flag`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("tau,scale,re,im,exponent,flag\n");
        for (i, tau) in self.taus.iter().enumerate() {
            for (j, sc) in self.scales.iter().enumerate() {
                let v = self.values[i][j];
                let flag = if self.inconclusive[i] {
                    "inconclusive"
                } else if self.flagged[i] {
                    "singular"
                } else {
                    "smooth"
                };
                writeln!(
                    out,
                    "{tau},{sc},{},{},{},{flag}",
                    v.re, v.im, self.exponents[i]
                )
                .unwrap();
            }
        }
        out
    }
}

/// Fits `log|W(tau, sigma)|` against `log sigma` on a scale ladder for each `tau`.
pub fn singularity_scan(
    m: &AtomicMeasure,
    taus: &[f64],
    scales: &[f64],
    opts: ScanOptions,
) -> Result<ScanReport> {
    if scales.len() < 4 {
        return Err(Error::Precondition(format!(
            "need at least 4 scales, got {}",
            scales.len()
        )));
    }
    if scales[0] <= 0.0 || scales.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Precondition(
            "scales must be positive and increasing".into(),
        ));
    }
    if taus.iter().any(|t| !t.is_finite()) {
        return Err(Error::Precondition("non-finite frequency".into()));
    }
    let rows = ordered_par_map(taus.len(), |i| {
        scales
            .iter()
            .map(|&s| windowed_unchecked(m, taus[i], s))
            .collect::<Vec<_>>()
    });
    let mut exponents = Vec::with_capacity(taus.len());
    let mut residuals = Vec::with_capacity(taus.len());
    let mut flagged = Vec::with_capacity(taus.len());
    let mut inconclusive = Vec::with_capacity(taus.len());
    for row in &rows {
        let mags: Vec<f64> = row.iter().map(|v| v.norm()).collect();
        if mags.iter().all(|&x| x == 0.0) {
            exponents.push(0.0);
            residuals.push(0.0);
            flagged.push(false);
            inconclusive.push(false);
            continue;
        }
        let fit = fit_power_law(scales, &mags);
        let bad = fit.residual > opts.max_residual;
        exponents.push(fit.slope);
        residuals.push(fit.residual);
        inconclusive.push(bad);
        flagged.push(!bad && fit.slope > opts.threshold);
    }
    let smax = *scales.last().unwrap();
    let r = m.support_radius();
    Ok(ScanReport {
        taus: taus.to_vec(),
        scales: scales.to_vec(),
        values: rows,
        exponents,
        residuals,
        flagged,
        inconclusive,
        truncation_weight: (-r * r / (2.0 * smax * smax)).exp(),
    })
}

/// Symmetrized, weighted length comb
/// `sum_12 e^(i int beta) l^-(d-1)/2 delta_l + (-i)^(d-1) sum_21 e^(-i int beta) l^-(d-1)/2 delta_-l`.
pub fn guinand_meyer_measure(
    spec12: &LengthSpectrum,
    spec21: &LengthSpectrum,
) -> Result<AtomicMeasure> {
    let d = spec12.dim();
    if spec21.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: spec21.dim(),
        });
    }
    let [a, b] = spec12.bodies();
    let [c, e] = spec21.bodies();
    if a != e || b != c {
        return Err(Error::Precondition(
            "the second spectrum must join the same bodies in the opposite order".into(),
        ));
    }
    let beta = match (spec12.one_form(), spec21.one_form()) {
        (Some(x), Some(y)) if x == y => x,
        (None, None) => return Err(Error::Precondition(
            "a one-form beta with non-integral class is required; beta in Z^d is the excluded case"
                .into(),
        )),
        _ => {
            return Err(Error::Precondition(
                "both spectra must use the same one-form".into(),
            ))
        }
    };
    check_beta(&beta.beta)?;
    let expo = (d as f64 - 1.0) / 2.0;
    let rot = Complex64::new(0.0, -1.0).powu(d as u32 - 1);
    let plus = spec12
        .records()
        .iter()
        .map(|r| (r.length, r.holonomy_phase * r.length.powf(-expo)));
    let minus = spec21.records().iter().map(|r| {
        (
            -r.length,
            rot * r.holonomy_phase.conj() * r.length.powf(-expo),
        )
    });
    AtomicMeasure::new(plus.chain(minus), d as f64 - expo)
}

/// Rejects cohomology classes in `Z^d`, where the transform has an extra singularity at 0.
pub fn check_beta(beta: &[f64]) -> Result<()> {
    if beta.iter().any(|b| !b.is_finite()) {
        return Err(Error::Precondition("beta must be finite".into()));
    }
    if beta.iter().all(|b| (b - b.round()).abs() < 1e-12) {
        return Err(Error::Precondition(format!(
            "beta = {beta:?} lies in Z^d, which is excluded: the transform then has an extra singularity at 0"
        )));
    }
    Ok(())
}

/// Fejér pairing `sum w e^(-i lambda a) (2 pi / sigma)(1 - |a|/sigma)_+`; a unit Dirac atom
/// of the transform at `lambda` returns 1.
pub fn atom_extract(m: &AtomicMeasure, lambda: f64, sigma: f64) -> Result<Complex64> {
    if !(sigma > 0.0) {
        return Err(Error::Precondition(format!(
            "scale must be positive, got {sigma}"
        )));
    }
    let lo = m.atoms.partition_point(|a| a.0 < -sigma);
    let hi = m.atoms.partition_point(|a| a.0 <= sigma);
    let mut acc = ComplexSum::new();
    for &(x, w) in &m.atoms[lo..hi] {
        let tri = 1.0 - x.abs() / sigma;
        acc.add(w * Complex64::from_polar(tri, -lambda * x));
    }
    Ok(acc.value() * (2.0 * PI / sigma))
}

/// Candidate atoms `{ +-|xi + beta| : xi in Z^d }` up to `lambda_max`, sorted and distinct.
pub fn lambda_beta(beta: &[f64], lambda_max: f64) -> Vec<f64> {
    let d = beta.len();
    let shift = beta.iter().map(|b| b.abs()).fold(0.0, f64::max) * (d as f64).sqrt();
    let mut pos: Vec<f64> = lattice_points_in_ball(d, lambda_max + shift)
        .iter()
        .map(|xi| {
            xi.iter()
                .zip(beta)
                .map(|(k, b)| (*k as f64 + b).powi(2))
                .sum::<f64>()
                .sqrt()
        })
        .filter(|&r| r <= lambda_max)
        .collect();
    pos.sort_by(f64::total_cmp);
    pos.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * b.max(1.0));
    let mut out: Vec<f64> = pos.iter().rev().filter(|&&r| r > 0.0).map(|r| -r).collect();
    out.extend(pos);
    out
}
