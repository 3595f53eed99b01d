//! Oscillatory sphere integrals `I_F(xi, t) = int_S e^(i t xi.theta) F(theta) dtheta`
//! and the flow correlation `Cor(phi, psi; t) = sum_xi I_(c_xi conj(d_xi))(xi, t)`.
//!
//! The sphere is rotated so that `xi/|xi|` is the pole. In d = 2 the integral is a
//! periodic trapezoid rule in the angle from the pole; in d = 3 the azimuth is
//! integrated first (trapezoid) and the remaining `int_-1^1 e^(i lambda z) G(z) dz`
//! by composite Gauss–Legendre. Both rules carry a nested coarse copy whose
//! disagreement is the error estimate.

use num_complex::Complex64;
use std::f64::consts::PI;

use super::observable::{Observable, SphereFn};
use crate::error::{Error, Result};
use crate::numeric::lattice::tangent_basis;
use crate::numeric::ordered_par_map;
use crate::numeric::quadrature::composite_gauss;
use crate::numeric::sum::ComplexSum;
use crate::orthospectrum::LatticeVec;

/// Largest admissible `t |xi|`.
pub const MAX_PHASE: f64 = 1e5;
/// Relative accuracy target for a single oscillatory integral.
pub const REL_TOL: f64 = 1e-8;
const GL_ORDER: usize = 20;
const MAX_NODES: usize = 1 << 22;
/// Phases checked when a kernel is built.
const PROBES: usize = 256;
/// Kernels are refined until the probes pass with this much headroom.
const BUILD_MARGIN: f64 = 0.01;
/// Headroom on the absolute floor `1e-6 REL_TOL ||F||_1`, which sits near roundoff.
const FLOOR_MARGIN: f64 = 0.3;

#[derive(Debug, Clone)]
enum Rule {
    /// Angles `2 pi j / M` from the pole; the coarse rule is the even-indexed half.
    Circle { cos: Vec<f64>, vals: Vec<Complex64> },
    /// Weighted azimuthal averages `w_k G(z_k)` on fine and coarse composite rules,
    /// plus the azimuthal error bound `sum_k w_k |dG(z_k)|`.
    Polar {
        fine: Vec<(f64, Complex64)>,
        coarse: Vec<(f64, Complex64)>,
        azimuth_err: f64,
        azimuth_nodes: usize,
    },
}

/// Precomputed quadrature for one coefficient and one frequency, valid for
/// `|t| <= t_max`.
#[derive(Debug, Clone)]
pub struct ModeKernel {
    xi: LatticeVec,
    norm_xi: f64,
    t_max: f64,
    l1: f64,
    rule: Rule,
}

fn frame(xi: &[i64]) -> (f64, Vec<f64>, [[f64; 3]; 2]) {
    let d = xi.len();
    let n = xi.iter().map(|&k| (k * k) as f64).sum::<f64>().sqrt();
    let pole: Vec<f64> = if n == 0.0 {
        let mut e = vec![0.0; d];
        e[d - 1] = 1.0;
        e
    } else {
        xi.iter().map(|&k| k as f64 / n).collect()
    };
    let basis = tangent_basis(&pole);
    (n, pole, basis)
}

impl ModeKernel {
    pub fn new(f: &SphereFn, xi: &[i64], t_max: f64) -> Result<Self> {
        let d = xi.len();
        if !(2..=3).contains(&d) {
            return Err(Error::Domain(format!(
                "oscillatory integrals need d = 2, 3, got {d}"
            )));
        }
        f.validate(d)?;
        let (norm_xi, pole, basis) = frame(xi);
        let lam = t_max.abs() * norm_xi;
        if !lam.is_finite() || lam > MAX_PHASE {
            return Err(Error::Scale(format!(
                "t |xi| = {lam:.3e} exceeds {MAX_PHASE:e}"
            )));
        }
        let scale = f.min_scale();
        let deg = f.degree() as f64;
        let mut kernel = if d == 2 {
            let mut m = (2.0 * (2.5 * lam + 64.0))
                .max(256.0)
                .max(4.0 * deg + 16.0)
                .max(if scale.is_finite() {
                    1024.0 / scale
                } else {
                    0.0
                })
                .ceil() as usize;
            m += m % 2;
            Self::circle(f, &pole, &basis, m)
        } else {
            let mut panels = (2.0 * (lam / 4.0).ceil())
                .max(8.0)
                .max(deg / 2.0)
                .max(if scale.is_finite() { 16.0 / scale } else { 0.0 })
                .ceil() as usize;
            panels += panels % 2;
            let mut mb = (2.0 * deg + 16.0)
                .max(32.0)
                .max(if scale.is_finite() { 64.0 / scale } else { 0.0 })
                .ceil() as usize;
            mb += mb % 2;
            Self::polar(f, &pole, &basis, panels, mb)?
        };
        kernel.xi = xi.iter().copied().collect();
        kernel.norm_xi = norm_xi;
        kernel.t_max = t_max.abs();
        // refine until the nested estimate passes across the admissible range
        loop {
            let ok = (0..=PROBES).all(|j| {
                let (v, e) = kernel.raw(lam * j as f64 / PROBES as f64);
                e <= (BUILD_MARGIN * v.norm()).max(FLOOR_MARGIN * 1e-6 * kernel.l1) * REL_TOL
            });
            if ok {
                return Ok(kernel);
            }
            kernel = match &kernel.rule {
                Rule::Circle { cos, .. } => {
                    let m = 2 * cos.len();
                    if m > MAX_NODES {
                        return Err(Error::Accuracy("circle rule exceeded node budget".into()));
                    }
                    Self::circle(f, &pole, &basis, m)
                }
                Rule::Polar {
                    fine,
                    azimuth_nodes,
                    ..
                } => {
                    let panels = 2 * fine.len() / GL_ORDER;
                    if panels * GL_ORDER > MAX_NODES {
                        return Err(Error::Accuracy("sphere rule exceeded node budget".into()));
                    }
                    Self::polar(f, &pole, &basis, panels, *azimuth_nodes)?
                }
            }
            .with_frame(&kernel);
        }
    }

    fn with_frame(mut self, old: &ModeKernel) -> Self {
        self.xi = old.xi.clone();
        self.norm_xi = old.norm_xi;
        self.t_max = old.t_max;
        self
    }

    fn circle(f: &SphereFn, pole: &[f64], basis: &[[f64; 3]; 2], m: usize) -> Self {
        let perp = [basis[0][0], basis[0][1]];
        let (cos, vals): (Vec<f64>, Vec<Complex64>) = (0..m)
            .map(|j| {
                let a = 2.0 * PI * j as f64 / m as f64;
                let (s, c) = a.sin_cos();
                let u = [c * pole[0] + s * perp[0], c * pole[1] + s * perp[1]];
                (c, f.eval(&u))
            })
            .unzip();
        let l1 = vals.iter().map(|v| v.norm()).sum::<f64>() * 2.0 * PI / m as f64;
        ModeKernel {
            xi: LatticeVec::new(),
            norm_xi: 0.0,
            t_max: 0.0,
            l1,
            rule: Rule::Circle { cos, vals },
        }
    }

    fn polar(
        f: &SphereFn,
        pole: &[f64],
        basis: &[[f64; 3]; 2],
        panels: usize,
        mut mb: usize,
    ) -> Result<Self> {
        let (zf, wf) = composite_gauss(-1.0, 1.0, panels, GL_ORDER);
        let (zc, wc) = composite_gauss(-1.0, 1.0, panels / 2, GL_ORDER);
        loop {
            // azimuthal means on the fine rule of mb points and its even half
            let avg = |z: f64| -> (Complex64, f64, f64) {
                let r = (1.0 - z * z).max(0.0).sqrt();
                let mut all = ComplexSum::new();
                let mut even = ComplexSum::new();
                let mut abs = 0.0;
                for j in 0..mb {
                    let b = 2.0 * PI * j as f64 / mb as f64;
                    let (s, c) = b.sin_cos();
                    let u = [
                        z * pole[0] + r * (c * basis[0][0] + s * basis[1][0]),
                        z * pole[1] + r * (c * basis[0][1] + s * basis[1][1]),
                        z * pole[2] + r * (c * basis[0][2] + s * basis[1][2]),
                    ];
                    let v = f.eval(&u);
                    abs += v.norm();
                    all.add(v);
                    if j % 2 == 0 {
                        even.add(v);
                    }
                }
                let g = all.value() * (2.0 * PI / mb as f64);
                let gh = even.value() * (4.0 * PI / mb as f64);
                (g, (g - gh).norm(), abs * 2.0 * PI / mb as f64)
            };
            let fine_vals = ordered_par_map(zf.len(), |k| avg(zf[k]));
            let coarse_vals = ordered_par_map(zc.len(), |k| avg(zc[k]));
            let l1: f64 = fine_vals.iter().zip(&wf).map(|(v, w)| w * v.2).sum();
            let az_err: f64 = fine_vals.iter().zip(&wf).map(|(v, w)| w * v.1).sum();
            let target = 0.1 * REL_TOL * 1e-6 * l1;
            if az_err <= target || mb >= 8192 {
                if az_err > target {
                    return Err(Error::Accuracy("azimuthal rule did not converge".into()));
                }
                let fine = zf
                    .iter()
                    .zip(&wf)
                    .zip(&fine_vals)
                    .map(|((z, w), v)| (*z, *w * v.0))
                    .collect();
                let coarse = zc
                    .iter()
                    .zip(&wc)
                    .zip(&coarse_vals)
                    .map(|((z, w), v)| (*z, *w * v.0))
                    .collect();
                return Ok(ModeKernel {
                    xi: LatticeVec::new(),
                    norm_xi: 0.0,
                    t_max: 0.0,
                    l1,
                    rule: Rule::Polar {
                        fine,
                        coarse,
                        azimuth_err: az_err,
                        azimuth_nodes: mb,
                    },
                });
            }
            mb *= 2;
        }
    }

    /// Integral at phase `lambda = t |xi|` with its error estimate.
    fn raw(&self, lam: f64) -> (Complex64, f64) {
        match &self.rule {
            Rule::Circle { cos, vals } => {
                let m = cos.len();
                let mut all = ComplexSum::new();
                let mut even = ComplexSum::new();
                for (j, (c, v)) in cos.iter().zip(vals).enumerate() {
                    let term = Complex64::from_polar(1.0, lam * c) * v;
                    all.add(term);
                    if j % 2 == 0 {
                        even.add(term);
                    }
                }
                let fine = all.value() * (2.0 * PI / m as f64);
                let half = even.value() * (4.0 * PI / m as f64);
                (fine, (fine - half).norm())
            }
            Rule::Polar {
                fine,
                coarse,
                azimuth_err,
                ..
            } => {
                let sum = |nodes: &[(f64, Complex64)]| {
                    nodes
                        .iter()
                        .map(|(z, wg)| Complex64::from_polar(1.0, lam * z) * wg)
                        .collect::<ComplexSum>()
                        .value()
                };
                let a = sum(fine);
                let b = sum(coarse);
                (a, (a - b).norm() + azimuth_err)
            }
        }
    }

    pub fn xi(&self) -> &[i64] {
        &self.xi
    }

    pub fn t_max(&self) -> f64 {
        self.t_max
    }

    /// `int |F|`, the scale used for the absolute error floor.
    pub fn l1_norm(&self) -> f64 {
        self.l1
    }

    /// Value and error estimate at time `t`.
    pub fn eval_with_error(&self, t: f64) -> Result<(Complex64, f64)> {
        if !t.is_finite() || t.abs() > self.t_max * (1.0 + 1e-12) {
            return Err(Error::Range(format!(
                "t = {t} outside the kernel range |t| <= {}",
                self.t_max
            )));
        }
        let (v, e) = self.raw(t * self.norm_xi);
        if e > REL_TOL * v.norm().max(1e-6 * self.l1) {
            return Err(Error::Accuracy(format!(
                "oscillatory integral at t = {t}: error estimate {e:.2e} for value {:.3e}",
                v.norm()
            )));
        }
        Ok((v, e))
    }

    pub fn eval(&self, t: f64) -> Result<Complex64> {
        self.eval_with_error(t).map(|(v, _)| v)
    }
}

/// `int_S e^(i t xi.theta) F(theta) dtheta` to relative accuracy [`REL_TOL`].
pub fn oscillatory_integral(f: &SphereFn, xi: &[i64], t: f64) -> Result<Complex64> {
    ModeKernel::new(f, xi, t)?.eval(t)
}

/// Per-mode kernels of `c_xi conj(d_xi)` for a pair of observables, valid for `|t| <= t_max`.
#[derive(Debug, Clone)]
pub struct CorrelationKernel {
    dim: usize,
    invariant: Complex64,
    modes: Vec<ModeKernel>,
    /// `(xi, |xi|, F(xi/|xi|), F(-xi/|xi|))` for nonzero modes.
    poles: Vec<(LatticeVec, f64, Complex64, Complex64)>,
    t_max: f64,
}

impl CorrelationKernel {
    pub fn new(phi: &Observable, psi: &Observable, t_max: f64) -> Result<Self> {
        if phi.dim() != psi.dim() {
            return Err(Error::DimensionMismatch {
                expected: phi.dim(),
                found: psi.dim(),
            });
        }
        if !t_max.is_finite() {
            return Err(Error::Precondition("t must be finite".into()));
        }
        let pairs: Vec<(LatticeVec, SphereFn)> = phi
            .modes()
            .iter()
            .filter_map(|(xi, c)| {
                psi.coefficient(xi)
                    .map(|d| (xi.clone(), c.times(&d.conj())))
            })
            .collect();
        let built = ordered_par_map(pairs.len(), |i| {
            ModeKernel::new(&pairs[i].1, &pairs[i].0, t_max)
        });
        let mut modes = Vec::with_capacity(built.len());
        for k in built {
            modes.push(k?);
        }
        let mut invariant = Complex64::new(0.0, 0.0);
        let mut poles = Vec::new();
        for ((xi, f), k) in pairs.iter().zip(&modes) {
            if xi.iter().all(|&c| c == 0) {
                invariant = k.eval(0.0)?;
            } else {
                let (n, pole, _) = frame(xi);
                let neg: Vec<f64> = pole.iter().map(|x| -x).collect();
                poles.push((xi.clone(), n, f.eval(&pole), f.eval(&neg)));
            }
        }
        Ok(CorrelationKernel {
            dim: phi.dim(),
            invariant,
            modes,
            poles,
            t_max: t_max.abs(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn t_max(&self) -> f64 {
        self.t_max
    }

    /// `<P_0 phi, P_0 psi>`, the time-independent part.
    pub fn invariant(&self) -> Complex64 {
        self.invariant
    }

    pub fn modes(&self) -> &[ModeKernel] {
        &self.modes
    }

    /// Nonzero frequencies with the coefficient product at `+-xi/|xi|`.
    pub fn poles(&self) -> &[(LatticeVec, f64, Complex64, Complex64)] {
        &self.poles
    }

    pub fn eval(&self, t: f64) -> Result<Complex64> {
        let mut s = ComplexSum::new();
        for k in &self.modes {
            s.add(k.eval(t)?);
        }
        Ok(s.value())
    }

    /// `Cor(t)` minus the invariant part.
    pub fn oscillating(&self, t: f64) -> Result<Complex64> {
        let mut s = ComplexSum::new();
        for k in self.modes.iter().filter(|k| k.norm_xi > 0.0) {
            s.add(k.eval(t)?);
        }
        Ok(s.value())
    }

    /// Evaluates on a grid in parallel; output order follows `ts`.
    pub fn eval_many(&self, ts: &[f64]) -> Result<Vec<Complex64>> {
        ordered_par_map(ts.len(), |i| self.eval(ts[i]))
            .into_iter()
            .collect()
    }

    /// Leading stationary-phase term of `Cor(t)`, `t >= 1`.
    pub fn leading(&self, t: f64) -> Result<Complex64> {
        if !(t >= 1.0) || !t.is_finite() {
            return Err(Error::Precondition(format!(
                "stationary phase needs t >= 1, got {t}"
            )));
        }
        let a = (self.dim - 1) as f64 / 2.0;
        let pref = (2.0 * PI / t).powf(a);
        let rot = Complex64::from_polar(1.0, -PI * a / 2.0);
        let mut s = ComplexSum::new();
        for (_, n, fp, fm) in &self.poles {
            let ph = Complex64::from_polar(1.0, t * n);
            s.add(n.powf(-a) * (rot * ph * fp + rot.conj() * ph.conj() * fm));
        }
        Ok(self.invariant + pref * s.value())
    }
}

/// `Cor(phi, psi; t) = int phi(g_t(x, theta)) conj(psi(x, theta))` with `dx` normalized
/// to a probability measure and the standard measure on the sphere.
pub fn correlation(phi: &Observable, psi: &Observable, t: f64) -> Result<Complex64> {
    CorrelationKernel::new(phi, psi, t)?.eval(t)
}

/// Leading-order stationary-phase approximation of [`correlation`] for `t >= 1`.
pub fn stationary_phase_leading(phi: &Observable, psi: &Observable, t: f64) -> Result<Complex64> {
    if !(t >= 1.0) || !t.is_finite() {
        return Err(Error::Precondition(format!(
            "stationary phase needs t >= 1, got {t}"
        )));
    }
    CorrelationKernel::new(phi, psi, 0.0)?.leading(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::special::sphere_area;

    #[test]
    fn constant_integrals_match_closed_forms() {
        let one = SphereFn::constant(1.0);
        // 4 pi sin(t)/t on S^2
        for t in [0.0, 0.5, 3.0, 40.0, 333.0] {
            let v = oscillatory_integral(&one, &[0, 0, 1], t).unwrap();
            let expect = if t == 0.0 {
                4.0 * PI
            } else {
                4.0 * PI * t.sin() / t
            };
            assert!((v.re - expect).abs() < 1e-11, "t={t}: {v} vs {expect}");
            assert!(v.im.abs() < 1e-11);
        }
        let v = oscillatory_integral(&one, &[0, 0], 7.0).unwrap();
        assert!((v.re - sphere_area(2)).abs() < 1e-13);
    }

    #[test]
    fn frequency_direction_does_not_matter_for_constants() {
        let one = SphereFn::constant(1.0);
        let a = oscillatory_integral(&one, &[3, 4, 0], 2.0).unwrap();
        let b = oscillatory_integral(&one, &[0, 0, 5], 2.0).unwrap();
        assert!((a - b).norm() < 1e-12);
        let a = oscillatory_integral(&one, &[3, 4], 2.0).unwrap();
        let b = oscillatory_integral(&one, &[5, 0], 2.0).unwrap();
        assert!((a - b).norm() < 1e-12);
    }

    #[test]
    fn harmonic_coefficient_in_the_plane() {
        // int e^(i t cos a) e^(i m a) da = 2 pi i^m J_m(t); at t = 0 only m = 0 survives
        let f = SphereFn::harmonic(0, 3);
        let v = oscillatory_integral(&f, &[1, 0], 0.0).unwrap();
        assert!(v.norm() < 1e-13);
        let v = oscillatory_integral(&SphereFn::harmonic(0, 1), &[1, 0], 1e-3).unwrap();
        // 2 pi i J_1(t) ~ pi i t
        assert!((v - Complex64::new(0.0, PI * 1e-3)).norm() < 1e-9);
    }

    #[test]
    fn scale_and_range_errors() {
        let one = SphereFn::constant(1.0);
        assert!(matches!(
            oscillatory_integral(&one, &[1, 0], 2e5),
            Err(Error::Scale(_))
        ));
        let k = ModeKernel::new(&one, &[1, 0], 10.0).unwrap();
        assert!(matches!(k.eval(11.0), Err(Error::Range(_))));
        assert!(k.eval(-10.0).is_ok());
    }

    #[test]
    fn leading_term_requires_large_time() {
        let o = Observable::single_mode(&[1, 0], SphereFn::constant(1.0)).unwrap();
        assert!(matches!(
            stationary_phase_leading(&o, &o, 0.5),
            Err(Error::Precondition(_))
        ));
        let lead = stationary_phase_leading(&o, &o, 100.0).unwrap();
        let expect = (2.0 * PI / 100.0_f64).sqrt() * 2.0 * (100.0 - PI / 4.0).cos();
        assert!((lead.re - expect).abs() < 1e-14);
    }
}
