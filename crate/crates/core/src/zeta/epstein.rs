//! `Z(q, s) = sum over xi in Z^d, xi != -q of |xi + q|^(-s)` by theta splitting at the
//! self-dual point:
//!
//! `pi^(-s/2) Gamma(s/2) Z = 2/(s-d) - 2 delta/s + sum' G(s/2, pi|n+q|^2)
//!                           + sum_{k != 0} e(k.q) G((d-s)/2, pi|k|^2)`
//!
//! with `G(a, x) = x^(-a) Gamma(a, x)` and `delta = 1` when `q` is integral.

use num_complex::Complex64;
use std::f64::consts::PI;

use super::{Method, ZetaValue};
use crate::error::{Error, Result};
use crate::numeric::lattice::lattice_points_in_ball;
use crate::numeric::special::{rgamma, upper_gamma_cf};
use crate::numeric::sum::ComplexSum;

const MAX_IM: f64 = 1000.0;

fn g(a: Complex64, x: f64) -> Complex64 {
    (-x).exp() * upper_gamma_cf(a, Complex64::new(x, 0.0))
}

pub fn epstein_zeta(q: &[f64], s: Complex64) -> Result<ZetaValue> {
    let d = q.len();
    if d == 0 {
        return Err(Error::Precondition("empty shift vector".into()));
    }
    if q.iter().any(|x| !x.is_finite()) || !s.re.is_finite() || !s.im.is_finite() {
        return Err(Error::Precondition("non-finite input".into()));
    }
    let df = d as f64;
    if (s - df).norm() < 1e-12 {
        return Err(Error::Pole(df));
    }
    if s.im.abs() > MAX_IM {
        return Err(Error::Range(format!(
            "|Im s| = {} exceeds {MAX_IM}",
            s.im.abs()
        )));
    }
    // Z is periodic in q; reduce to the unit cell around the origin
    let qr: Vec<f64> = q.iter().map(|x| x - x.round()).collect();
    let integral = qr.iter().all(|x| x.abs() < 1e-15);
    let half = s / 2.0;
    let dual = (df - s) / 2.0;
    let budget = 45.0 + 2.0 * (s.norm() + df);
    let radius = (budget / PI).sqrt();
    let pts = lattice_points_in_ball(d, radius + 0.5 * df.sqrt());

    let mut acc = ComplexSum::new();
    acc.add(2.0 / (s - df));
    for n in &pts {
        let r2: f64 = n
            .iter()
            .zip(&qr)
            .map(|(k, x)| (*k as f64 + x).powi(2))
            .sum();
        if r2 > radius * radius || (integral && r2 == 0.0) {
            continue;
        }
        acc.add(g(half, PI * r2));
        let k2: f64 = n.iter().map(|k| (k * k) as f64).sum();
        if k2 > 0.0 {
            let ph: f64 = n.iter().zip(&qr).map(|(k, x)| *k as f64 * x).sum();
            acc.add(Complex64::from_polar(1.0, 2.0 * PI * ph) * g(dual, PI * k2));
        }
    }
    // 1/Gamma(s/2) = (s/2) / Gamma(s/2 + 1) removes the s = 0 singularity
    let mut lam = half * acc.value();
    if integral {
        lam -= 1.0;
    }
    let value = Complex64::new(PI, 0.0).powc(half) * rgamma(half + 1.0) * lam;
    let x = PI * radius * radius;
    let tail = (-x).exp() * x.powf(s.re.abs() / 2.0 + df) * (1.0 + s.norm());
    Ok(ZetaValue {
        s,
        value,
        tail_bound: tail,
        method: if s.re > df {
            Method::Direct
        } else {
            Method::Continued
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn direct_sum_agreement() {
        // s = 6, q = (0.3, -0.2): brute force converges like R^-4
        let q = [0.3, -0.2];
        let s = Complex64::new(6.0, 0.0);
        let z = epstein_zeta(&q, s).unwrap().value;
        let mut brute = 0.0;
        for a in -400i64..=400 {
            for b in -400i64..=400 {
                let r2 = (a as f64 + q[0]).powi(2) + (b as f64 + q[1]).powi(2);
                brute += r2.powf(-3.0);
            }
        }
        // omitted tail ~ 2 pi R^-4 / 4
        assert!((z.re - brute).abs() < 1e-9, "{} vs {brute}", z.re);
        assert!(z.im.abs() < 1e-14);
    }

    #[test]
    fn periodic_in_shift() {
        let s = Complex64::new(1.3, 0.7);
        let a = epstein_zeta(&[0.25, 0.4, -0.1], s).unwrap().value;
        let b = epstein_zeta(&[1.25, -0.6, 2.9], s).unwrap().value;
        assert!((a - b).norm() < 1e-12);
    }

    #[test]
    fn known_values() {
        // Z_{Z^1}(s) = 2 zeta(s); zeta(0) = -1/2 so Z(0) = -1, and Z(-2) = 0
        let z0 = epstein_zeta(&[0.0], Complex64::new(0.0, 0.0))
            .unwrap()
            .value;
        assert!((z0 + 1.0).norm() < 1e-12);
        let zm2 = epstein_zeta(&[0.0], Complex64::new(-2.0, 0.0))
            .unwrap()
            .value;
        assert!(zm2.norm() < 1e-12);
        // 2 zeta(2) = pi^2 / 3
        let z2 = epstein_zeta(&[0.0], Complex64::new(2.0, 0.0))
            .unwrap()
            .value;
        assert!((z2.re - PI * PI / 3.0).abs() < 1e-12);
        assert!(matches!(
            epstein_zeta(&[0.0, 0.0], Complex64::new(2.0, 0.0)),
            Err(Error::Pole(_))
        ));
    }
}
