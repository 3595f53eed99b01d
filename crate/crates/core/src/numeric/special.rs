//! Gamma-type special functions on the complex plane.

use num_complex::Complex64;
use std::f64::consts::PI;

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

fn lanczos_series(z: Complex64) -> (Complex64, Complex64) {
    // z here is already shifted by -1
    let mut x = Complex64::new(LANCZOS[0], 0.0);
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        x += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    (x, t)
}

/// Gamma function for complex argument (Lanczos, g = 7).
pub fn gamma(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        let s = (PI * z).sin();
        return PI / (s * gamma(1.0 - z));
    }
    let z = z - 1.0;
    let (x, t) = lanczos_series(z);
    (2.0 * PI).sqrt() * t.powc(z + 0.5) * (-t).exp() * x
}

/// Reciprocal gamma, entire; exactly zero at the non-positive integers.
pub fn rgamma(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        if z.im == 0.0 && z.re == z.re.round() {
            return Complex64::new(0.0, 0.0);
        }
        return (PI * z).sin() * gamma(1.0 - z) / PI;
    }
    1.0 / gamma(z)
}

pub fn gamma_real(x: f64) -> f64 {
    gamma(Complex64::new(x, 0.0)).re
}

/// Volume of the unit ball in R^l, `pi^(l/2) / Gamma(l/2 + 1)`.
pub fn unit_ball_volume(l: usize) -> f64 {
    PI.powf(l as f64 / 2.0) / gamma_real(l as f64 / 2.0 + 1.0)
}

/// Surface measure of the unit sphere S^(d-1).
pub fn sphere_area(d: usize) -> f64 {
    2.0 * PI.powf(d as f64 / 2.0) / gamma_real(d as f64 / 2.0)
}

/// Continued fraction part of the upper incomplete gamma function:
/// returns `h` with `Gamma(a, w) = exp(-w) w^a h`.
///
/// Converges for `w` off the negative real axis; fast once `|w|` is above ~1.
pub fn upper_gamma_cf(a: Complex64, w: Complex64) -> Complex64 {
    const TINY: f64 = 1e-300;
    let mut b = w + 1.0 - a;
    let mut c = Complex64::new(1.0 / TINY, 0.0);
    let mut d = if b.norm() < TINY {
        Complex64::new(1.0 / TINY, 0.0)
    } else {
        1.0 / b
    };
    let mut h = d;
    for i in 1..20_000 {
        let i = i as f64;
        let an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if d.norm() < TINY {
            d = Complex64::new(TINY, 0.0);
        }
        c = b + an / c;
        if c.norm() < TINY {
            c = Complex64::new(TINY, 0.0);
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).norm() < 1e-16 {
            break;
        }
    }
    h
}

/// Exponential integral E1 by its power series, for small |w|.
fn exp_integral_e1_series(w: Complex64) -> Complex64 {
    let mut sum = Complex64::new(0.0, 0.0);
    let mut term = Complex64::new(1.0, 0.0);
    for k in 1..200 {
        term *= -w / k as f64;
        let add = term / k as f64;
        sum += add;
        if add.norm() < 1e-17 * sum.norm().max(1e-300) {
            break;
        }
    }
    -EULER_GAMMA - w.ln() - sum
}

/// Upper incomplete gamma `Gamma(a, w) = int_w^inf t^(a-1) e^(-t) dt`, principal branch.
pub fn upper_gamma(a: Complex64, w: Complex64) -> Complex64 {
    let use_cf = w.norm() > 1.5 && !(w.re < 0.0 && w.im.abs() < 0.5 * w.norm());
    if use_cf {
        return (-w).exp() * w.powc(a) * upper_gamma_cf(a, w);
    }
    // non-positive integer order: E1-based closed form
    if a.im == 0.0 && a.re <= 0.0 && a.re == a.re.round() {
        let n = (-a.re) as usize;
        let e1 = exp_integral_e1_series(w);
        let mut fact = 1.0;
        let mut corr = Complex64::new(0.0, 0.0);
        let mut wpow = w;
        for k in 0..n {
            if k > 0 {
                fact *= k as f64;
                wpow *= w;
            }
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            corr += sign * fact / wpow;
        }
        let nfact: f64 = (1..=n).map(|k| k as f64).product();
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        return sign / nfact * (e1 - (-w).exp() * corr);
    }
    // Gamma(a) - lower incomplete gamma
    let mut sum = Complex64::new(0.0, 0.0);
    let mut term = 1.0 / a;
    for k in 0..500 {
        sum += term;
        term *= w / (a + (k + 1) as f64);
        if term.norm() < 1e-17 * sum.norm() {
            break;
        }
    }
    gamma(a) - w.powc(a) * (-w).exp() * sum
}
