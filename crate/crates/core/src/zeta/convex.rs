//! `zeta(s) = sum over orthogeodesics of l^(-s)`, directly for `Re s > d` and continued
//! to `Re s > d - 1` by subtracting the Steiner polynomial of `D = K1 - K2` from the
//! counting function.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use super::{relative_gap, residue_estimate, Method, PoleReport, ResidueSource, ZetaValue};
use crate::body::{minkowski_difference, ConvexBody};
use crate::error::{Error, Result};
use crate::numeric::ordered_par_map;
use crate::numeric::special::unit_ball_volume;
use crate::numeric::sum::ComplexSum;
use crate::orthospectrum::ortholengths;

const CHUNK: usize = 4096;

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ZetaOptions {
    /// Splitting point below which lengths are summed exactly; default `max(T0, 4 pi)`.
    pub t1: Option<f64>,
    /// Largest length enumerated; default depends on the dimension.
    pub t_max: Option<f64>,
}

pub(crate) fn default_t_max(dim: usize) -> f64 {
    match dim {
        2 => 1000.0,
        3 => 150.0,
        _ => 60.0,
    }
}

#[derive(Debug, Clone)]
pub struct ConvexZeta {
    dim: usize,
    t0: f64,
    t1: f64,
    tm: f64,
    lengths: Vec<f64>,
    /// `Vol(D + T B) = sum_l steiner[l] T^l`.
    steiner: Vec<f64>,
}

fn expm1(z: Complex64) -> Complex64 {
    if z.norm() < 1e-3 {
        z * (1.0 + z / 2.0 * (1.0 + z / 3.0 * (1.0 + z / 4.0)))
    } else {
        z.exp() - 1.0
    }
}

fn pow_neg(x: f64, s: Complex64) -> Complex64 {
    (-s * x.ln()).exp()
}

/// Coefficients of `p(T + delta)` from those of `p(T)`.
fn shift_poly(p: &[f64], delta: f64) -> Vec<f64> {
    let n = p.len();
    let mut out = vec![0.0; n];
    for (j, pj) in p.iter().enumerate() {
        let mut binom = 1.0;
        for k in 0..=j {
            // term C(j, k) T^k delta^(j - k)
            out[k] += pj * binom * delta.powi((j - k) as i32);
            binom = binom * (j - k) as f64 / (k + 1) as f64;
        }
    }
    out
}

impl ConvexZeta {
    pub fn new(k1: &ConvexBody, k2: &ConvexBody, opts: ZetaOptions) -> Result<Self> {
        let dim = k1.dim();
        let diff = minkowski_difference(k1, k2)?;
        let steiner = diff.steiner_polynomial()?;
        let t0 = crate::orthospectrum::starting_length(k1, k2);
        let t1 = opts.t1.unwrap_or(t0.max(4.0 * PI));
        if !(t1 >= t0) {
            return Err(Error::Precondition(format!(
                "T1 = {t1} must be at least T0 = {t0}"
            )));
        }
        let tm = opts.t_max.unwrap_or(default_t_max(dim).max(2.0 * t1));
        if !(tm > t1) {
            return Err(Error::Precondition(format!(
                "T_max = {tm} must exceed T1 = {t1}"
            )));
        }
        let (_, lengths) = ortholengths(k1, k2, tm)?;
        Ok(ConvexZeta {
            dim,
            t0,
            t1,
            tm,
            lengths,
            steiner,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn t1(&self) -> f64 {
        self.t1
    }

    pub fn t_max(&self) -> f64 {
        self.tm
    }

    pub fn steiner_coefficients(&self) -> &[f64] {
        &self.steiner
    }

    /// Intrinsic volumes `V_0..V_d` of `K1 - K2`.
    pub fn intrinsic_volumes(&self) -> Vec<f64> {
        let d = self.dim;
        (0..=d)
            .map(|j| self.steiner[d - j] / unit_ball_volume(d - j))
            .collect()
    }

    fn norm_factor(&self) -> f64 {
        (2.0 * PI).powi(-(self.dim as i32))
    }

    /// `N(t) = #{T0 < l <= t}`.
    pub fn count(&self, t: f64) -> usize {
        self.lengths.partition_point(|&l| l <= t)
    }

    /// `sum of l^(-s)` over the first `n` lengths, in fixed chunks for thread independence.
    fn power_sum(&self, s: Complex64, n: usize) -> Complex64 {
        let ls = &self.lengths[..n];
        let chunks = n.div_ceil(CHUNK);
        let parts = ordered_par_map(chunks, |c| {
            let lo = c * CHUNK;
            let hi = (lo + CHUNK).min(n);
            ls[lo..hi]
                .iter()
                .map(|&l| pow_neg(l, s))
                .collect::<ComplexSum>()
                .value()
        });
        parts.into_iter().collect::<ComplexSum>().value()
    }

    pub fn direct(&self, s: Complex64, t_max: f64) -> Result<ZetaValue> {
        let d = self.dim as f64;
        if !(s.re > d) {
            return Err(Error::Domain(format!(
                "direct summation needs Re s > {d}, got {}; use the continued evaluation",
                s.re
            )));
        }
        if t_max > self.tm || t_max <= self.t0 {
            return Err(Error::Range(format!(
                "T_max = {t_max} outside the enumerated range ({}, {}]",
                self.t0, self.tm
            )));
        }
        let n = self.count(t_max);
        let value = self.power_sum(s, n);
        // N(T) <= Vol(D + (T + pi sqrt d) B) / (2 pi)^d by the lattice-cell covering
        let upper = shift_poly(&self.steiner, PI * d.sqrt());
        let sigma = s.re;
        let mut tail = -(n as f64) * t_max.powf(-sigma);
        for (j, pj) in upper.iter().enumerate() {
            tail +=
                self.norm_factor() * sigma * pj * t_max.powf(j as f64 - sigma) / (sigma - j as f64);
        }
        Ok(ZetaValue {
            s,
            value,
            tail_bound: tail.max(0.0) * s.norm() / sigma,
            method: Method::Direct,
        })
    }

    /// Closed-form Steiner part `(2 pi)^-d [a_0 T1^-s + sum_l s a_l T1^(l-s) / (s - l)]`,
    /// carrying every pole `s = 1..d`.
    pub fn polynomial_part(&self, s: Complex64) -> Complex64 {
        let mut acc = ComplexSum::new();
        acc.add(self.steiner[0] * pow_neg(self.t1, s));
        for (l, al) in self.steiner.iter().enumerate().skip(1) {
            let l = l as f64;
            acc.add(s * al * pow_neg(self.t1, s - l) / (s - l));
        }
        acc.value() * self.norm_factor()
    }

    /// Residue of the polynomial part at `s = l`, i.e. `l a_l / (2 pi)^d`.
    pub fn pole_coefficient(&self, l: usize) -> f64 {
        l as f64 * self.steiner[l] * self.norm_factor()
    }

    pub fn continued(&self, s: Complex64) -> Result<ZetaValue> {
        let d = self.dim as f64;
        if (s - d).norm() < 1e-6 {
            return Err(Error::Pole(d));
        }
        if !(s.re > d - 1.0) {
            return Err(Error::Domain(format!(
                "continuation is validated on Re s > {}, got Re s = {}",
                d - 1.0,
                s.re
            )));
        }
        let (t1, tm) = (self.t1, self.tm);
        let n1 = self.count(t1);
        let nm = self.count(tm);
        let below = self.power_sum(s, n1);
        let all = self.power_sum(s, nm);
        let p1 = pow_neg(t1, s);
        let pm = pow_neg(tm, s);
        let entire = below - n1 as f64 * p1;

        // s * int_{T1}^{Tm} N(T) T^(-s-1) dT, exactly for the step function
        let mut rem = ComplexSum::new();
        rem.add(all - below);
        rem.add(-((nm - n1) as f64) * pm);
        rem.add(n1 as f64 * (p1 - pm));
        // minus the same integral of the Steiner polynomial
        let log_ratio = (tm / t1).ln();
        for (l, al) in self.steiner.iter().enumerate() {
            let z = Complex64::new(l as f64, 0.0) - s;
            // (Tm^z - T1^z) / z, written stably near z = 0
            let seg = pow_neg(t1, -z) * expm1(z * log_ratio) / z;
            rem.add(-self.norm_factor() * s * al * seg);
        }
        let value = entire + self.polynomial_part(s) + rem.value();

        // |N - P/(2 pi)^d| <= [P(T + delta) - P(T - delta)]/(2 pi)^d + P(T0 + delta)/(2 pi)^d
        let delta = PI * d.sqrt();
        let up = shift_poly(&self.steiner, delta);
        let lo = shift_poly(&self.steiner, -delta);
        let below_t0: f64 = up
            .iter()
            .enumerate()
            .map(|(j, c)| c * self.t0.powi(j as i32))
            .sum();
        let sigma = s.re;
        let mut tail = 0.0;
        for j in 0..self.steiner.len() {
            let mut bj = (up[j] - lo[j]).abs();
            if j == 0 {
                bj += below_t0;
            }
            if bj == 0.0 {
                continue;
            }
            let j = j as f64;
            tail += if j < sigma {
                self.norm_factor() * bj * tm.powf(j - sigma) / (sigma - j)
            } else {
                f64::INFINITY
            };
        }
        Ok(ZetaValue {
            s,
            value,
            tail_bound: s.norm() * tail,
            method: Method::Continued,
        })
    }

    /// Pole reports at `s = 1..d`: a contour integral of the continuation at `s = d`, and
    /// of the closed-form polynomial part at the lower poles.
    pub fn residues(&self) -> Result<Vec<PoleReport>> {
        let d = self.dim;
        let v = self.intrinsic_volumes();
        let mut out = Vec::with_capacity(d);
        for l in 1..=d {
            let predicted = Complex64::new(
                l as f64 * unit_ball_volume(l) * v[d - l] * self.norm_factor(),
                0.0,
            );
            let (residue, source) = if l == d {
                let r = residue_estimate(|s| self.continued(s).map(|z| z.value), d as f64, 0.5)?;
                (r, ResidueSource::Contour)
            } else {
                let r = residue_estimate(|s| Ok(self.polynomial_part(s)), l as f64, 0.25)?;
                (r, ResidueSource::Formula)
            };
            out.push(PoleReport {
                location: l,
                residue,
                predicted,
                relative_gap: relative_gap(residue, predicted),
                source,
            });
        }
        Ok(out)
    }
}

pub fn convex_zeta_direct(
    k1: &ConvexBody,
    k2: &ConvexBody,
    s: Complex64,
    t_max: f64,
) -> Result<ZetaValue> {
    let d = k1.dim() as f64;
    if !(s.re > d) {
        return Err(Error::Domain(format!(
            "direct summation needs Re s > {d}, got {}",
            s.re
        )));
    }
    let t0 = crate::orthospectrum::starting_length(k1, k2);
    let z = ConvexZeta::new(
        k1,
        k2,
        ZetaOptions {
            t1: Some(t0.max(4.0 * PI).min(t_max * 0.5).max(t0)),
            t_max: Some(t_max),
        },
    )?;
    z.direct(s, t_max)
}

pub fn convex_zeta_continued(k1: &ConvexBody, k2: &ConvexBody, s: Complex64) -> Result<ZetaValue> {
    ConvexZeta::new(k1, k2, ZetaOptions::default())?.continued(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shifted_polynomial() {
        // (T + 2)^2 = T^2 + 4T + 4
        let p = shift_poly(&[0.0, 0.0, 1.0], 2.0);
        assert_eq!(p, vec![4.0, 4.0, 1.0]);
        let p = shift_poly(&[1.0, 1.0, 0.0, 1.0], -1.0);
        // 1 + (T - 1) + (T - 1)^3 = -1 + 4T - 3T^2 + T^3
        assert_eq!(p, vec![-1.0, 4.0, -3.0, 1.0]);
    }

    #[test]
    fn split_point_cancels() {
        let p = ConvexBody::point(&[0.0, 0.0]).unwrap();
        let q = ConvexBody::point(&[1.5, 2.0]).unwrap();
        let a = ConvexZeta::new(
            &p,
            &q,
            ZetaOptions {
                t1: None,
                t_max: Some(300.0),
            },
        )
        .unwrap();
        let b = ConvexZeta::new(
            &p,
            &q,
            ZetaOptions {
                t1: Some(40.0),
                t_max: Some(300.0),
            },
        )
        .unwrap();
        for s in [Complex64::new(1.5, 0.3), Complex64::new(3.0, -2.0)] {
            let (va, vb) = (a.continued(s).unwrap().value, b.continued(s).unwrap().value);
            assert!((va - vb).norm() < 1e-11 * va.norm(), "{va} {vb}");
        }
    }

    #[test]
    fn domain_errors() {
        let p = ConvexBody::point(&[0.0, 0.0]).unwrap();
        let z = ConvexZeta::new(
            &p,
            &p,
            ZetaOptions {
                t1: None,
                t_max: Some(100.0),
            },
        )
        .unwrap();
        assert!(matches!(
            z.continued(Complex64::new(2.0, 1e-7)),
            Err(Error::Pole(_))
        ));
        assert!(matches!(
            z.continued(Complex64::new(0.9, 0.0)),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            z.direct(Complex64::new(2.0, 0.0), 50.0),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            z.direct(Complex64::new(3.0, 0.0), 500.0),
            Err(Error::Range(_))
        ));
    }
}
