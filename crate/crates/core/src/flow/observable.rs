//! Observables on the unit tangent bundle `T^d x S^(d-1)`, stored by their
//! Fourier modes in `x`: `phi(x, theta) = sum_xi c_xi(theta) e^(i xi.x)`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::harmonics::{circle_harmonic, spherical_harmonic};
use crate::error::{Error, Result};
use crate::numeric::norm;
use crate::orthospectrum::LatticeVec;

/// Complex number in JSON: either a bare real or `[re, im]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Amplitude {
    Real(f64),
    Pair([f64; 2]),
}

impl Amplitude {
    pub fn value(&self) -> Complex64 {
        match *self {
            Amplitude::Real(x) => Complex64::new(x, 0.0),
            Amplitude::Pair([re, im]) => Complex64::new(re, im),
        }
    }
}

impl Default for Amplitude {
    fn default() -> Self {
        Amplitude::Real(1.0)
    }
}

impl From<Complex64> for Amplitude {
    fn from(z: Complex64) -> Self {
        if z.im == 0.0 {
            Amplitude::Real(z.re)
        } else {
            Amplitude::Pair([z.re, z.im])
        }
    }
}

/// Closed-form function on the unit sphere.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum SphereFn {
    Constant {
        value: Amplitude,
    },
    /// `e^(i m phi)` on S^1 (`l` is ignored), orthonormal `Y_l^m` on S^2.
    Harmonic {
        #[serde(default)]
        l: usize,
        m: i64,
        #[serde(default)]
        amplitude: Amplitude,
    },
    /// `exp(1 - 1/(1 - (a/radius)^2))` for angular distance `a < radius` from `center`.
    Bump {
        center: Vec<f64>,
        radius: f64,
        #[serde(default)]
        amplitude: Amplitude,
    },
    Sum {
        terms: Vec<SphereFn>,
    },
    Product {
        factors: Vec<SphereFn>,
    },
    Conj {
        of: Box<SphereFn>,
    },
}

impl SphereFn {
    pub fn constant(c: impl Into<Complex64>) -> Self {
        SphereFn::Constant {
            value: c.into().into(),
        }
    }

    pub fn harmonic(l: usize, m: i64) -> Self {
        SphereFn::Harmonic {
            l,
            m,
            amplitude: Amplitude::default(),
        }
    }

    pub fn bump(center: &[f64], radius: f64) -> Self {
        SphereFn::Bump {
            center: center.to_vec(),
            radius,
            amplitude: Amplitude::default(),
        }
    }

    pub fn conj(&self) -> Self {
        SphereFn::Conj {
            of: Box::new(self.clone()),
        }
    }

    pub fn times(&self, other: &SphereFn) -> Self {
        SphereFn::Product {
            factors: vec![self.clone(), other.clone()],
        }
    }

    pub fn validate(&self, dim: usize) -> Result<()> {
        match self {
            SphereFn::Constant { value } => check_amp(value),
            SphereFn::Harmonic { l, m, amplitude } => {
                check_amp(amplitude)?;
                if dim == 3 && m.unsigned_abs() as usize > *l {
                    return Err(Error::Precondition(format!(
                        "harmonic needs |m| <= l, got l={l} m={m}"
                    )));
                }
                if dim == 3 && *l > 512 {
                    return Err(Error::Precondition("harmonic degree above 512".into()));
                }
                Ok(())
            }
            SphereFn::Bump {
                center,
                radius,
                amplitude,
            } => {
                check_amp(amplitude)?;
                if center.len() != dim {
                    return Err(Error::DimensionMismatch {
                        expected: dim,
                        found: center.len(),
                    });
                }
                if center.iter().any(|x| !x.is_finite()) || (norm(center) - 1.0).abs() > 1e-9 {
                    return Err(Error::Precondition(
                        "bump center must be a unit vector".into(),
                    ));
                }
                if !(radius.is_finite() && *radius > 1e-3 && *radius <= std::f64::consts::PI) {
                    return Err(Error::Precondition(format!(
                        "bump radius {radius} outside [1e-3, pi]"
                    )));
                }
                Ok(())
            }
            SphereFn::Sum { terms: fs } | SphereFn::Product { factors: fs } => {
                fs.iter().try_for_each(|f| f.validate(dim))
            }
            SphereFn::Conj { of } => of.validate(dim),
        }
    }

    /// Value at a unit vector of length 2 or 3.
    pub fn eval(&self, u: &[f64]) -> Complex64 {
        match self {
            SphereFn::Constant { value } => value.value(),
            SphereFn::Harmonic { l, m, amplitude } => {
                let y = if u.len() == 2 {
                    circle_harmonic(*m, u)
                } else {
                    spherical_harmonic(*l, *m, u)
                };
                amplitude.value() * y
            }
            SphereFn::Bump {
                center,
                radius,
                amplitude,
            } => {
                let c: f64 = center.iter().zip(u).map(|(a, b)| a * b).sum();
                let a = c.clamp(-1.0, 1.0).acos() / radius;
                if a >= 1.0 {
                    Complex64::new(0.0, 0.0)
                } else {
                    amplitude.value() * (1.0 - 1.0 / (1.0 - a * a)).exp()
                }
            }
            SphereFn::Sum { terms } => terms.iter().map(|f| f.eval(u)).sum(),
            SphereFn::Product { factors } => factors.iter().map(|f| f.eval(u)).product(),
            SphereFn::Conj { of } => of.eval(u).conj(),
        }
    }

    /// Smallest angular scale present (bump radii), used to size quadratures.
    pub(crate) fn min_scale(&self) -> f64 {
        match self {
            SphereFn::Bump { radius, .. } => *radius,
            SphereFn::Sum { terms: fs } | SphereFn::Product { factors: fs } => fs
                .iter()
                .map(SphereFn::min_scale)
                .fold(f64::INFINITY, f64::min),
            SphereFn::Conj { of } => of.min_scale(),
            _ => f64::INFINITY,
        }
    }

    /// Largest harmonic degree present; products add degrees.
    pub(crate) fn degree(&self) -> usize {
        match self {
            SphereFn::Harmonic { l, m, .. } => (*l).max(m.unsigned_abs() as usize),
            SphereFn::Sum { terms } => terms.iter().map(SphereFn::degree).max().unwrap_or(0),
            SphereFn::Product { factors } => factors.iter().map(SphereFn::degree).sum(),
            SphereFn::Conj { of } => of.degree(),
            _ => 0,
        }
    }
}

fn check_amp(a: &Amplitude) -> Result<()> {
    let z = a.value();
    if z.re.is_finite() && z.im.is_finite() {
        Ok(())
    } else {
        Err(Error::Precondition("amplitude must be finite".into()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModeSpec {
    pub xi: Vec<i64>,
    pub coeff: SphereFn,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObservableSpec {
    pub modes: Vec<ModeSpec>,
}

/// Finite Fourier sum in `x` with closed-form angular coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct Observable {
    dim: usize,
    modes: Vec<(LatticeVec, SphereFn)>,
}

impl Observable {
    /// Modes with repeated `xi` are summed; output is sorted by `xi`.
    pub fn new(dim: usize, modes: Vec<(Vec<i64>, SphereFn)>) -> Result<Self> {
        if !(2..=3).contains(&dim) {
            return Err(Error::Domain(format!(
                "observables are supported for d = 2, 3, got {dim}"
            )));
        }
        let mut out: Vec<(LatticeVec, SphereFn)> = Vec::with_capacity(modes.len());
        for (xi, f) in modes {
            if xi.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: xi.len(),
                });
            }
            if xi.iter().any(|k| k.unsigned_abs() > 1 << 20) {
                return Err(Error::Precondition("mode index too large".into()));
            }
            f.validate(dim)?;
            let key: LatticeVec = xi.into_iter().collect();
            match out.iter_mut().find(|(k, _)| *k == key) {
                Some((_, g)) => {
                    *g = SphereFn::Sum {
                        terms: vec![g.clone(), f],
                    }
                }
                None => out.push((key, f)),
            }
        }
        out.sort_by(|a, b| a.0.cmp(&b.0));
        Ok(Observable { dim, modes: out })
    }

    pub fn single_mode(xi: &[i64], coeff: SphereFn) -> Result<Self> {
        Self::new(xi.len(), vec![(xi.to_vec(), coeff)])
    }

    pub fn constant(dim: usize, c: impl Into<Complex64>) -> Result<Self> {
        Self::new(dim, vec![(vec![0; dim], SphereFn::constant(c))])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn modes(&self) -> &[(LatticeVec, SphereFn)] {
        &self.modes
    }

    pub fn coefficient(&self, xi: &[i64]) -> Option<&SphereFn> {
        self.modes
            .iter()
            .find(|(k, _)| k.as_slice() == xi)
            .map(|(_, f)| f)
    }

    /// `phi(x, theta)` at a point of the unit tangent bundle.
    pub fn eval(&self, x: &[f64], theta: &[f64]) -> Complex64 {
        self.modes
            .iter()
            .map(|(xi, f)| {
                let ph: f64 = xi.iter().zip(x).map(|(k, y)| *k as f64 * y).sum();
                Complex64::from_polar(1.0, ph) * f.eval(theta)
            })
            .sum()
    }

    /// Complex conjugate: mode `xi` becomes `conj(c_{-xi})` at `-xi`.
    pub fn conj(&self) -> Self {
        let modes = self
            .modes
            .iter()
            .map(|(xi, f)| (xi.iter().map(|k| -k).collect(), f.conj()))
            .collect();
        Observable::new(self.dim, modes).expect("conjugate of a valid observable")
    }

    /// `a phi + b psi`.
    pub fn combine(a: Complex64, phi: &Observable, b: Complex64, psi: &Observable) -> Result<Self> {
        if phi.dim != psi.dim {
            return Err(Error::DimensionMismatch {
                expected: phi.dim,
                found: psi.dim,
            });
        }
        let mut modes = Vec::with_capacity(phi.modes.len() + psi.modes.len());
        for (c, o) in [(a, phi), (b, psi)] {
            modes.extend(
                o.modes
                    .iter()
                    .map(|(xi, f)| (xi.to_vec(), SphereFn::constant(c).times(f))),
            );
        }
        Observable::new(phi.dim, modes)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let spec: ObservableSpec = serde_path_to_error::deserialize(de)
            .map_err(|e| Error::config(e.path().to_string(), e.into_inner().to_string()))?;
        Self::from_spec(&spec)
    }

    pub fn from_spec(spec: &ObservableSpec) -> Result<Self> {
        let dim = spec
            .modes
            .first()
            .map(|m| m.xi.len())
            .ok_or_else(|| Error::config("modes", "an observable needs at least one mode"))?;
        let modes = spec
            .modes
            .iter()
            .map(|m| (m.xi.clone(), m.coeff.clone()))
            .collect();
        Observable::new(dim, modes)
    }

    pub fn to_spec(&self) -> ObservableSpec {
        ObservableSpec {
            modes: self
                .modes
                .iter()
                .map(|(xi, f)| ModeSpec {
                    xi: xi.to_vec(),
                    coeff: f.clone(),
                })
                .collect(),
        }
    }

    /// Invariant part, stationary-phase projections and the remaining data.
    pub fn projectors(&self) -> Projectors {
        let p0 = self
            .coefficient(&vec![0; self.dim])
            .cloned()
            .unwrap_or(SphereFn::constant(0.0));
        let mut plus = Vec::new();
        let mut minus = Vec::new();
        for (xi, f) in &self.modes {
            if xi.iter().all(|&k| k == 0) {
                continue;
            }
            let n = xi.iter().map(|&k| (k * k) as f64).sum::<f64>().sqrt();
            let u: Vec<f64> = xi.iter().map(|&k| k as f64 / n).collect();
            let v: Vec<f64> = u.iter().map(|x| -x).collect();
            plus.push((xi.clone(), f.eval(&u)));
            minus.push((xi.clone(), f.eval(&v)));
        }
        Projectors { p0, plus, minus }
    }
}

/// `P_0 phi` is the `xi = 0` coefficient; `Pi_pm phi` records `c_xi(+-xi/|xi|)`
/// for each nonzero mode.
#[derive(Debug, Clone, PartialEq)]
pub struct Projectors {
    pub p0: SphereFn,
    pub plus: Vec<(LatticeVec, Complex64)>,
    pub minus: Vec<(LatticeVec, Complex64)>,
}
