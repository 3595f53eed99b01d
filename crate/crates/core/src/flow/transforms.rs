//! Laplace and Mellin transforms of correlation functions.
//!
//! `Cor` is integrated numerically up to `t_split`; past it each nonzero mode is
//! replaced by its stationary-phase expansion `t^-a e^(+-i|xi|t) (A + C/t)`, whose
//! transform is an incomplete gamma function. `A` is exact; `C` is fitted by least
//! squares on `[t_split/2, t_split]`. The invariant part is transformed in closed form.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use super::observable::Observable;
use super::oscillatory::CorrelationKernel;
use crate::error::{Error, Result};
use crate::numeric::ordered_par_map;
use crate::numeric::quadrature::composite_gauss;
use crate::numeric::special::upper_gamma;
use crate::numeric::sum::ComplexSum;

/// Distance from a singular point below which transforms refuse to evaluate.
pub const SINGULAR_RADIUS: f64 = 1e-4;
const GL_ORDER: usize = 20;
const FIT_SAMPLES: usize = 400;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TransformOptions {
    /// Switch from quadrature to the asymptotic tail.
    pub t_split: f64,
    /// Largest `|Im s|` the quadrature grid must resolve.
    pub im_max: f64,
    /// The Mellin cutoff `chi` is 1 on `[1, (1 + c)/2]` and 0 past `c`.
    pub chi_cutoff: f64,
}

impl Default for TransformOptions {
    fn default() -> Self {
        TransformOptions {
            t_split: 200.0,
            im_max: 4.0,
            chi_cutoff: 2.0,
        }
    }
}

impl TransformOptions {
    pub fn validate(&self) -> Result<()> {
        if !(self.t_split.is_finite() && self.t_split >= 20.0) {
            return Err(Error::Precondition("t_split must be at least 20".into()));
        }
        if !(self.im_max.is_finite() && self.im_max >= 0.0) {
            return Err(Error::Precondition("im_max must be non-negative".into()));
        }
        if !(self.chi_cutoff > 1.0 && 2.0 * self.chi_cutoff <= self.t_split) {
            return Err(Error::Precondition(
                "chi_cutoff must lie in (1, t_split/2]".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy)]
struct Tail {
    /// Signed frequency: the term is `t^-a e^(i kappa t) (lead + corr/t)`.
    kappa: f64,
    lead: Complex64,
    corr: Complex64,
}

/// Mellin transform split at the cutoff: `value = local + tail`, with `local` entire.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MellinValue {
    pub value: Complex64,
    pub local: Complex64,
    pub tail: Complex64,
}

/// `chi` on `[1, c]`: smooth step from 1 to 0 on the upper half of the interval.
fn chi(t: f64, c: f64) -> f64 {
    let c0 = 0.5 * (1.0 + c);
    if t <= c0 {
        return 1.0;
    }
    if t >= c {
        return 0.0;
    }
    let x = (c - t) / (c - c0);
    let g = |y: f64| if y <= 0.0 { 0.0 } else { (-1.0 / y).exp() };
    g(x) / (g(x) + g(1.0 - x))
}

/// `int_T^inf t^-b e^(-z t) dt = z^(b-1) Gamma(1-b, zT)`, `Re z >= 0`, `z != 0`.
fn power_exp_tail(z: Complex64, b: Complex64, t: f64) -> Complex64 {
    let one = Complex64::new(1.0, 0.0);
    z.powc(b - one) * upper_gamma(one - b, z * t)
}

/// Precomputed correlation samples and tail models for repeated transforms.
#[derive(Debug, Clone)]
pub struct TransformEngine {
    dim: usize,
    opts: TransformOptions,
    invariant: Complex64,
    /// Composite Gauss nodes on `[0, t_split]` with a panel edge at 1.
    nodes: Vec<(f64, f64, Complex64)>,
    /// Nodes on `[1, c]` for the cutoff part, with the full correlation.
    chi_nodes: Vec<(f64, f64, Complex64)>,
    tails: Vec<Tail>,
}

impl TransformEngine {
    pub fn new(phi: &Observable, psi: &Observable, opts: TransformOptions) -> Result<Self> {
        opts.validate()?;
        let ts = opts.t_split;
        let kernel = CorrelationKernel::new(phi, psi, ts)?;
        let d = kernel.dim();
        let a = (d - 1) as f64 / 2.0;
        let omega = kernel.poles().iter().map(|p| p.1).fold(0.0, f64::max);
        let h = (2.0 / (omega + opts.im_max + 1.0)).min(0.5);

        let mut grid: Vec<(f64, f64)> = Vec::new();
        for (lo, hi) in [(0.0, 1.0), (1.0, ts)] {
            let panels = ((hi - lo) / h).ceil() as usize;
            let (x, w) = composite_gauss(lo, hi, panels, GL_ORDER);
            grid.extend(x.into_iter().zip(w));
        }
        let osc = ordered_par_map(grid.len(), |i| kernel.oscillating(grid[i].0));
        let mut nodes = Vec::with_capacity(grid.len());
        for ((t, w), v) in grid.into_iter().zip(osc) {
            nodes.push((t, w, v?));
        }

        let c = opts.chi_cutoff;
        let c0 = 0.5 * (1.0 + c);
        let mut chi_grid: Vec<(f64, f64)> = Vec::new();
        for (lo, hi, per) in [(1.0, c0, h), (c0, c, h.min((c - c0) / 32.0))] {
            let panels = ((hi - lo) / per).ceil() as usize;
            let (x, w) = composite_gauss(lo, hi, panels, GL_ORDER);
            chi_grid.extend(x.into_iter().zip(w));
        }
        let full = ordered_par_map(chi_grid.len(), |i| kernel.eval(chi_grid[i].0));
        let mut chi_nodes = Vec::with_capacity(chi_grid.len());
        for ((t, w), v) in chi_grid.into_iter().zip(full) {
            chi_nodes.push((t, w * chi(t, c), v?));
        }

        // leading amplitudes and fitted first corrections, mode by mode
        let pref = (2.0 * PI).powf(a);
        let rot = Complex64::from_polar(1.0, -PI * a / 2.0);
        let fit_ts: Vec<f64> = (0..FIT_SAMPLES)
            .map(|j| ts * (0.5 + 0.5 * j as f64 / (FIT_SAMPLES - 1) as f64))
            .collect();
        let mut tails = Vec::new();
        let osc_modes: Vec<_> = kernel
            .modes()
            .iter()
            .filter(|k| k.xi().iter().any(|&x| x != 0))
            .collect();
        for (mode, (_, n, fp, fm)) in osc_modes.iter().zip(kernel.poles()) {
            let lead_p = pref * n.powf(-a) * rot * fp;
            let lead_m = pref * n.powf(-a) * rot.conj() * fm;
            let vals = ordered_par_map(fit_ts.len(), |j| mode.eval(fit_ts[j]));
            // normal equations for r(t) ~ C+ b+ + C- b-
            let mut g = [[Complex64::new(0.0, 0.0); 2]; 2];
            let mut rhs = [Complex64::new(0.0, 0.0); 2];
            for (t, v) in fit_ts.iter().zip(vals) {
                let v = v?;
                let e = Complex64::from_polar(1.0, n * t);
                let r = v - t.powf(-a) * (lead_p * e + lead_m * e.conj());
                let b = [t.powf(-a - 1.0) * e, t.powf(-a - 1.0) * e.conj()];
                for i in 0..2 {
                    rhs[i] += b[i].conj() * r;
                    for j in 0..2 {
                        g[i][j] += b[i].conj() * b[j];
                    }
                }
            }
            let det = g[0][0] * g[1][1] - g[0][1] * g[1][0];
            let cp = (g[1][1] * rhs[0] - g[0][1] * rhs[1]) / det;
            let cm = (g[0][0] * rhs[1] - g[1][0] * rhs[0]) / det;
            tails.push(Tail {
                kappa: *n,
                lead: lead_p,
                corr: cp,
            });
            tails.push(Tail {
                kappa: -n,
                lead: lead_m,
                corr: cm,
            });
        }
        Ok(TransformEngine {
            dim: d,
            opts,
            invariant: kernel.invariant(),
            nodes,
            chi_nodes,
            tails,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn options(&self) -> &TransformOptions {
        &self.opts
    }

    pub fn invariant(&self) -> Complex64 {
        self.invariant
    }

    /// Points where the Laplace transform is singular: 0 (if the invariant part is
    /// nonzero) and `+-i|xi|` for the nonzero modes.
    pub fn laplace_singularities(&self) -> Vec<Complex64> {
        let mut out: Vec<Complex64> = self
            .tails
            .iter()
            .map(|t| Complex64::new(0.0, t.kappa))
            .collect();
        if self.invariant != Complex64::new(0.0, 0.0) {
            out.push(Complex64::new(0.0, 0.0));
        }
        out.sort_by(|a, b| a.im.total_cmp(&b.im));
        out.dedup();
        out
    }

    fn check_im(&self, s: Complex64) -> Result<()> {
        if !(s.re.is_finite() && s.im.is_finite()) {
            return Err(Error::Precondition("s must be finite".into()));
        }
        if s.im.abs() > self.opts.im_max {
            return Err(Error::Range(format!(
                "|Im s| = {} exceeds the resolved range {}",
                s.im.abs(),
                self.opts.im_max
            )));
        }
        Ok(())
    }

    /// `int_0^inf e^(-st) Cor(t) dt` for `Re s >= 0` away from the singular set.
    pub fn laplace(&self, s: Complex64) -> Result<Complex64> {
        self.check_im(s)?;
        if s.re < 0.0 {
            return Err(Error::Domain(format!(
                "Laplace transform needs Re s >= 0, got {}",
                s.re
            )));
        }
        for p in self.laplace_singularities() {
            if (s - p).norm() < SINGULAR_RADIUS {
                return Err(Error::Singularity {
                    re: s.re,
                    im: s.im,
                    reason: format!("within {SINGULAR_RADIUS:e} of {}{:+}i", p.re, p.im),
                });
            }
        }
        let a = Complex64::new((self.dim - 1) as f64 / 2.0, 0.0);
        let mut sum: ComplexSum = self
            .nodes
            .iter()
            .map(|(t, w, v)| w * (-s * t).exp() * v)
            .collect();
        let ts = self.opts.t_split;
        for tail in &self.tails {
            let z = s - Complex64::new(0.0, tail.kappa);
            sum.add(tail.lead * power_exp_tail(z, a, ts));
            sum.add(tail.corr * power_exp_tail(z, a + 1.0, ts));
        }
        Ok(sum.value() + self.invariant / s)
    }

    /// `int_1^inf t^-s Cor(t) dt`, continued meromorphically; simple pole at `s = 1`
    /// with residue the invariant part.
    pub fn mellin(&self, s: Complex64) -> Result<MellinValue> {
        self.check_im(s)?;
        let one = Complex64::new(1.0, 0.0);
        if s == one {
            return Err(Error::Pole(1.0));
        }
        let a = Complex64::new((self.dim - 1) as f64 / 2.0, 0.0);
        let ts = self.opts.t_split;
        let mut sum: ComplexSum = self
            .nodes
            .iter()
            .filter(|(t, _, _)| *t >= 1.0)
            .map(|(t, w, v)| w * (-s * t.ln()).exp() * v)
            .collect();
        for tail in &self.tails {
            let z = Complex64::new(0.0, -tail.kappa);
            sum.add(tail.lead * power_exp_tail(z, s + a, ts));
            sum.add(tail.corr * power_exp_tail(z, s + a + 1.0, ts));
        }
        let value = sum.value() + self.invariant / (s - one);
        let local: Complex64 = self
            .chi_nodes
            .iter()
            .map(|(t, w, v)| w * (-s * t.ln()).exp() * v)
            .collect::<ComplexSum>()
            .value();
        if !(value.re.is_finite() && value.im.is_finite()) {
            return Err(Error::Numeric(format!(
                "Mellin transform overflowed at s = {s}"
            )));
        }
        Ok(MellinValue {
            value,
            local,
            tail: value - local,
        })
    }
}

pub fn laplace_transform(
    phi: &Observable,
    psi: &Observable,
    s: Complex64,
    opts: TransformOptions,
) -> Result<Complex64> {
    let opts = TransformOptions {
        im_max: opts.im_max.max(s.im.abs()),
        ..opts
    };
    TransformEngine::new(phi, psi, opts)?.laplace(s)
}

pub fn mellin_transform(
    phi: &Observable,
    psi: &Observable,
    s: Complex64,
    opts: TransformOptions,
) -> Result<MellinValue> {
    let opts = TransformOptions {
        im_max: opts.im_max.max(s.im.abs()),
        ..opts
    };
    TransformEngine::new(phi, psi, opts)?.mellin(s)
}
