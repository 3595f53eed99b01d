//! Orthonormal spherical harmonics on S^2 and circle harmonics on S^1.

use num_complex::Complex64;
use std::f64::consts::PI;

/// Table of `Pbar_l^m(z)` for `0 <= m <= l <= lmax`, normalized so that
/// `Y_lm = Pbar_l^m(cos theta) e^(i m phi)` is orthonormal on S^2 (Condon–Shortley phase).
/// Entry `(l, m)` lives at `l * (l + 1) / 2 + m`.
pub(crate) fn legendre_table(lmax: usize, z: f64) -> Vec<f64> {
    let idx = |l: usize, m: usize| l * (l + 1) / 2 + m;
    let mut p = vec![0.0; idx(lmax, lmax) + 1];
    let s = (1.0 - z * z).max(0.0).sqrt();
    p[0] = 1.0 / (4.0 * PI).sqrt();
    for m in 1..=lmax {
        let mf = m as f64;
        p[idx(m, m)] = -((2.0 * mf + 1.0) / (2.0 * mf)).sqrt() * s * p[idx(m - 1, m - 1)];
    }
    for m in 0..lmax {
        let mf = m as f64;
        p[idx(m + 1, m)] = z * (2.0 * mf + 3.0).sqrt() * p[idx(m, m)];
        for l in (m + 2)..=lmax {
            let lf = l as f64;
            let a = ((4.0 * lf * lf - 1.0) / (lf * lf - mf * mf)).sqrt();
            let lp = lf - 1.0;
            let a_prev = ((4.0 * lp * lp - 1.0) / (lp * lp - mf * mf)).sqrt();
            p[idx(l, m)] = a * (z * p[idx(l - 1, m)] - p[idx(l - 2, m)] / a_prev);
        }
    }
    p
}

pub(crate) fn legendre_index(l: usize, m: usize) -> usize {
    l * (l + 1) / 2 + m
}

/// `Y_l^m` at the unit vector `u` in R^3.
pub fn spherical_harmonic(l: usize, m: i64, u: &[f64]) -> Complex64 {
    let am = m.unsigned_abs() as usize;
    if am > l {
        return Complex64::new(0.0, 0.0);
    }
    let p = legendre_table(l, u[2].clamp(-1.0, 1.0))[legendre_index(l, am)];
    let phi = u[1].atan2(u[0]);
    let y = Complex64::from_polar(p, am as f64 * phi);
    if m < 0 {
        // Y_{l,-m} = (-1)^m conj(Y_lm)
        let sign = if am % 2 == 0 { 1.0 } else { -1.0 };
        sign * y.conj()
    } else {
        y
    }
}

/// `e^(i m phi)` at the unit vector `u` in R^2.
pub fn circle_harmonic(m: i64, u: &[f64]) -> Complex64 {
    Complex64::from_polar(1.0, m as f64 * u[1].atan2(u[0]))
}
