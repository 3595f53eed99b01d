//! Independent reference values used by the integration tests. None of these call
//! into the library's numerics.
#![allow(dead_code)]

use num_complex::Complex64;
use std::f64::consts::PI;

/// `J_0(x)` by Miller's backward recurrence, normalized with
/// `J_0 + 2 (J_2 + J_4 + ...) = 1`.
pub fn bessel_j0(x: f64) -> f64 {
    let x = x.abs();
    if x < 1e-8 {
        return 1.0 - x * x / 4.0;
    }
    let start = 2 * ((x as usize + 40 + (40.0 * x.sqrt()) as usize) / 2);
    let (mut jp1, mut j) = (0.0f64, 1e-300f64);
    let mut norm = 0.0;
    let mut j0 = 0.0;
    for k in (1..=start).rev() {
        let jm1 = 2.0 * k as f64 / x * j - jp1;
        jp1 = j;
        j = jm1;
        if (k - 1) % 2 == 0 && k > 1 {
            norm += 2.0 * j;
        }
        if k == 1 {
            j0 = j;
        }
        if j.abs() > 1e250 {
            j *= 1e-250;
            jp1 *= 1e-250;
            norm *= 1e-250;
        }
    }
    j0 / (norm + j0)
}

const BERNOULLI: [f64; 10] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
];

const EM_CUT: usize = 60;

/// Euler–Maclaurin approximation of `sum_n (n + a)^(-w)` without the
/// `(N + a)^(1 - w) / (w - 1)` term, which carries the pole at `w = 1`.
fn hurwitz_regular(w: Complex64, a: f64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 0..EM_CUT {
        acc += (-w * (k as f64 + a).ln()).exp();
    }
    let lx = (EM_CUT as f64 + a).ln();
    acc += 0.5 * (-w * lx).exp();
    // B_2k / (2k)! * w (w+1) ... (w+2k-2) x^(-w-2k+1)
    let mut rising = w;
    let mut fact = 2.0;
    for (k, b) in BERNOULLI.iter().enumerate() {
        let p = 2 * k + 1;
        acc += b / fact * rising * (-(w + p as f64) * lx).exp();
        rising *= (w + p as f64) * (w + p as f64 + 1.0);
        fact *= ((p + 2) * (p + 3)) as f64;
    }
    acc
}

/// `(x^(1 - w) - y^(1 - w)) / (w - 1)`, continuous at `w = 1`.
fn pole_difference(w: Complex64, x: f64, y: f64) -> Complex64 {
    let z = 1.0 - w;
    if z.norm() < 1e-6 {
        let (lx, ly) = (x.ln(), y.ln());
        -((lx - ly) + z * (lx * lx - ly * ly) / 2.0)
    } else {
        ((z * x.ln()).exp() - (z * y.ln()).exp()) / (w - 1.0)
    }
}

/// Hurwitz zeta `sum_n (n + a)^(-w)`.
pub fn hurwitz_zeta(w: Complex64, a: f64) -> Complex64 {
    let x = EM_CUT as f64 + a;
    hurwitz_regular(w, a) + (-(w - 1.0) * x.ln()).exp() / (w - 1.0)
}

pub fn riemann_zeta(w: Complex64) -> Complex64 {
    hurwitz_zeta(w, 1.0)
}

/// Dirichlet beta `sum_n (-1)^n (2n + 1)^(-w)`.
pub fn dirichlet_beta(w: Complex64) -> Complex64 {
    let n = EM_CUT as f64;
    let diff = hurwitz_regular(w, 0.25) - hurwitz_regular(w, 0.75)
        + pole_difference(w, n + 0.25, n + 0.75);
    (-w * 4f64.ln()).exp() * diff
}

/// Perimeter of the ellipse with semi-axes `a`, `b` by the periodic trapezoid rule.
pub fn ellipse_perimeter(a: f64, b: f64) -> f64 {
    let n = 4096;
    let h = 2.0 * PI / n as f64;
    (0..n)
        .map(|k| {
            let t = k as f64 * h;
            (a * a * t.sin().powi(2) + b * b * t.cos().powi(2)).sqrt()
        })
        .sum::<f64>()
        * h
}

/// Distance from `p` to the solid ellipse `x^2/a^2 + y^2/b^2 <= 1`: a dense scan of the
/// boundary parameter followed by golden-section refinement.
pub fn ellipse_distance(p: [f64; 2], a: f64, b: f64) -> f64 {
    if (p[0] / a).powi(2) + (p[1] / b).powi(2) <= 1.0 {
        return 0.0;
    }
    let dist = |t: f64| ((p[0] - a * t.cos()).powi(2) + (p[1] - b * t.sin()).powi(2)).sqrt();
    let n = 720;
    let h = 2.0 * PI / n as f64;
    let k = grid_argmin(n, |k| dist(k as f64 * h));
    let (mut lo, mut hi) = ((k as f64 - 1.0) * h, (k as f64 + 1.0) * h);
    let g = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..200 {
        let m1 = hi - g * (hi - lo);
        let m2 = lo + g * (hi - lo);
        if dist(m1) < dist(m2) {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    dist(0.5 * (lo + hi))
}

/// Index of the smallest value of `f` on `0..n`.
pub fn grid_argmin(n: usize, f: impl Fn(usize) -> f64) -> usize {
    (0..n)
        .min_by(|&i, &j| f(i).total_cmp(&f(j)))
        .expect("non-empty grid")
}

/// Lattice vectors `xi != 0` with `|xi| <= r`, by brute force over the cube.
pub fn lattice_ball(dim: usize, r: f64) -> Vec<Vec<i64>> {
    let m = r.floor() as i64;
    let mut out = vec![vec![]];
    for _ in 0..dim {
        out = out
            .into_iter()
            .flat_map(|v| {
                (-m..=m).map(move |k| {
                    let mut w = v.clone();
                    w.push(k);
                    w
                })
            })
            .collect();
    }
    out.retain(|v| {
        let n2: i64 = v.iter().map(|k| k * k).sum();
        n2 > 0 && (n2 as f64) <= r * r * (1.0 + 1e-12)
    });
    out
}

/// `(1 / 2 pi i) * contour integral` over `|s - c| = r` with `n` trapezoid nodes.
pub fn contour_residue(
    mut f: impl FnMut(Complex64) -> Complex64,
    c: Complex64,
    r: f64,
    n: usize,
) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for j in 0..n {
        let w = Complex64::from_polar(r, 2.0 * PI * (j as f64 + 0.5) / n as f64);
        acc += f(c + w) * w;
    }
    acc / n as f64
}
