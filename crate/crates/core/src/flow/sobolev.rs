//! Anisotropic Sobolev norms `||u||_(M, N)^2 = sum_xi <xi>^(2N) ||c_xi||_(H^M(S))^2`,
//! `<xi> = (1 + |xi|^2)^(1/2)`. The sphere part uses the Fourier series on S^1 and
//! the spherical-harmonic expansion on S^2, with weights `(1 + k^2)^M` and
//! `(1 + l(l+1))^M` respectively.

use num_complex::Complex64;
use rustfft::FftPlanner;
use std::f64::consts::PI;

use super::harmonics::{legendre_index, legendre_table};
use super::observable::{Observable, SphereFn};
use crate::error::{Error, Result};
use crate::numeric::quadrature::gauss_legendre;

/// Relative weighted energy allowed in the top quarter of the computed band.
const TAIL_TOL: f64 = 1e-8;
/// Alternatively, relative change of the norm under doubling the band.
const STEP_TOL: f64 = 1e-8;
const MAX_CIRCLE: usize = 1 << 16;
const MAX_DEGREE: usize = 512;

fn weighted_sum(spectrum: &[(f64, f64)], m: f64) -> f64 {
    spectrum.iter().map(|(w, e)| w.powf(m) * e).sum()
}

/// Squared H^M norm of a function on S^1.
fn circle_norm_sq(f: &SphereFn, m: f64) -> Result<f64> {
    let mut n = 64usize.max(4 * f.degree().next_power_of_two());
    let mut planner = FftPlanner::new();
    let mut prev = f64::NAN;
    loop {
        let mut buf: Vec<Complex64> = (0..n)
            .map(|j| {
                let a = 2.0 * PI * j as f64 / n as f64;
                f.eval(&[a.cos(), a.sin()])
            })
            .collect();
        planner.plan_fft_forward(n).process(&mut buf);
        // (1 + k^2, 2 pi |c_k|^2) with c_k the Fourier coefficients
        let spec: Vec<(f64, f64)> = buf
            .iter()
            .enumerate()
            .map(|(j, c)| {
                let k = if j <= n / 2 {
                    j as f64
                } else {
                    j as f64 - n as f64
                };
                let c = c / n as f64;
                (1.0 + k * k, 2.0 * PI * c.norm_sqr())
            })
            .collect();
        let total = weighted_sum(&spec, m);
        let top: Vec<(f64, f64)> = spec
            .iter()
            .filter(|(w, _)| (w - 1.0).sqrt() > 0.375 * n as f64)
            .copied()
            .collect();
        if weighted_sum(&top, m) <= TAIL_TOL * total
            || total == 0.0
            || (total - prev).abs() <= STEP_TOL * total
        {
            return Ok(total);
        }
        prev = total;
        n *= 2;
        if n > MAX_CIRCLE {
            return Err(Error::Accuracy(format!(
                "coefficient not resolved by {MAX_CIRCLE} Fourier modes for M = {m}"
            )));
        }
    }
}

/// Squared H^M norm of a function on S^2 from its spherical-harmonic coefficients.
fn sphere_norm_sq(f: &SphereFn, m: f64) -> Result<f64> {
    let mut lmax = 16usize.max(2 * f.degree());
    let mut planner = FftPlanner::new();
    let mut prev = f64::NAN;
    loop {
        let n_lat = lmax + 1;
        let n_lon = 2 * lmax + 2;
        let rule = gauss_legendre(n_lat);
        let fft = planner.plan_fft_forward(n_lon);
        // energy[l] = sum_m |f_lm|^2
        let mut energy = vec![0.0; lmax + 1];
        let mut coeffs = vec![Complex64::new(0.0, 0.0); (lmax + 1) * (2 * lmax + 1)];
        for (z, w) in rule.nodes.iter().zip(&rule.weights) {
            let r = (1.0 - z * z).max(0.0).sqrt();
            let mut buf: Vec<Complex64> = (0..n_lon)
                .map(|k| {
                    let p = 2.0 * PI * k as f64 / n_lon as f64;
                    f.eval(&[r * p.cos(), r * p.sin(), *z])
                })
                .collect();
            fft.process(&mut buf);
            let p = legendre_table(lmax, *z);
            let scale = w * 2.0 * PI / n_lon as f64;
            for mm in -(lmax as i64)..=(lmax as i64) {
                let am = mm.unsigned_abs() as usize;
                let j = if mm >= 0 { am } else { n_lon - am };
                let a = buf[j] * scale;
                for l in am..=lmax {
                    coeffs[l * (2 * lmax + 1) + (mm + lmax as i64) as usize] +=
                        a * p[legendre_index(l, am)];
                }
            }
        }
        for (l, e) in energy.iter_mut().enumerate() {
            *e = coeffs[l * (2 * lmax + 1)..(l + 1) * (2 * lmax + 1)]
                .iter()
                .map(Complex64::norm_sqr)
                .sum();
        }
        let spec: Vec<(f64, f64)> = energy
            .iter()
            .enumerate()
            .map(|(l, e)| (1.0 + (l * (l + 1)) as f64, *e))
            .collect();
        let total = weighted_sum(&spec, m);
        let top = weighted_sum(&spec[(3 * lmax) / 4..], m);
        if top <= TAIL_TOL * total || total == 0.0 || (total - prev).abs() <= STEP_TOL * total {
            return Ok(total);
        }
        prev = total;
        lmax *= 2;
        if lmax > MAX_DEGREE {
            return Err(Error::Accuracy(format!(
                "coefficient not resolved by harmonics of degree {MAX_DEGREE} for M = {m}"
            )));
        }
    }
}

/// `||u||_(M, N)`: regularity `M` along the sphere, weight `N` in the frequency.
pub fn anisotropic_norm(u: &Observable, m: f64, n: f64) -> Result<f64> {
    if !(m.is_finite() && n.is_finite()) {
        return Err(Error::Precondition("Sobolev orders must be finite".into()));
    }
    let mut total = 0.0;
    for (xi, f) in u.modes() {
        let x2: f64 = xi.iter().map(|&k| (k * k) as f64).sum();
        let s = if u.dim() == 2 {
            circle_norm_sq(f, m)?
        } else {
            sphere_norm_sq(f, m)?
        };
        total += (1.0 + x2).powf(n) * s;
    }
    Ok(total.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constants_have_area_norm() {
        for d in [2, 3] {
            let o = Observable::constant(d, 1.0).unwrap();
            let area = crate::numeric::special::sphere_area(d);
            for (m, n) in [(0.0, 0.0), (2.0, 3.0), (-1.0, -2.0)] {
                let v = anisotropic_norm(&o, m, n).unwrap();
                assert!((v - area.sqrt()).abs() < 1e-12, "d={d} {m} {n}: {v}");
            }
        }
    }

    #[test]
    fn harmonic_weights() {
        let o = Observable::single_mode(&[1, 2], SphereFn::harmonic(0, 3)).unwrap();
        let v = anisotropic_norm(&o, 1.5, 0.5).unwrap();
        let expect = (6.0_f64.powf(0.5) * 10.0_f64.powf(1.5) * 2.0 * PI).sqrt();
        assert!((v - expect).abs() < 1e-10 * expect);
        let o = Observable::single_mode(&[0, 0, 1], SphereFn::harmonic(3, -2)).unwrap();
        let v = anisotropic_norm(&o, 2.0, 1.0).unwrap();
        let expect = (2.0 * 13.0_f64.powi(2)).sqrt();
        assert!((v - expect).abs() < 1e-10 * expect);
    }

    #[test]
    fn norm_grows_with_regularity() {
        let b = SphereFn::bump(&[0.0, 0.6, 0.8], 0.9);
        let o = Observable::single_mode(&[1, 0, 0], b).unwrap();
        let a = anisotropic_norm(&o, 0.0, 0.0).unwrap();
        let c = anisotropic_norm(&o, 2.0, 0.0).unwrap();
        assert!(c > a);
    }
}
