//! Orthogeodesics between `K1` and the lattice translates `K2 + 2 pi xi`, length
//! spectra and their counting functions.

mod io;
mod solver;

pub use io::SpectrumMetadata;
pub use solver::KKT_TOL;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;
use std::cmp::Ordering;
use std::f64::consts::PI;

use crate::body::{BodySpec, ConvexBody, Coords};
use crate::error::{Error, Result};
use crate::numeric::lattice::lattice_points_in_ball;
use crate::numeric::ordered_par_map;
use solver::PerpSolver;

pub type LatticeVec = SmallVec<[i64; 3]>;

#[derive(Debug, Clone, PartialEq)]
pub struct Orthogeodesic {
    pub xi: LatticeVec,
    pub length: f64,
    /// Outward normal of `K1` at `foot1`.
    pub direction: Coords,
    pub foot1: Coords,
    /// Lifted foot on `K2 + 2 pi xi`.
    pub foot2: Coords,
    pub displacement: Coords,
    pub holonomy_phase: Complex64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    K1ToK2,
    K2ToK1,
}

/// One term `cos * cos(k.x) + sin * sin(k.x)` of the periodic function `f`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FourierTerm {
    pub k: Vec<i64>,
    #[serde(default)]
    pub cos: f64,
    #[serde(default)]
    pub sin: f64,
}

/// Closed one-form `beta_1 dx_1 + ... + beta_d dx_d + df` on the torus.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OneForm {
    pub beta: Vec<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub f: Vec<FourierTerm>,
}

impl OneForm {
    pub fn constant(beta: &[f64]) -> Self {
        OneForm {
            beta: beta.to_vec(),
            f: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.beta.len()
    }

    pub fn validate(&self) -> Result<()> {
        if self.beta.iter().any(|b| !b.is_finite()) {
            return Err(Error::Precondition(
                "one-form coefficients must be finite".into(),
            ));
        }
        for t in &self.f {
            if t.k.len() != self.dim() {
                return Err(Error::DimensionMismatch {
                    expected: self.dim(),
                    found: t.k.len(),
                });
            }
            if !t.cos.is_finite() || !t.sin.is_finite() {
                return Err(Error::Precondition(
                    "Fourier coefficients must be finite".into(),
                ));
            }
        }
        Ok(())
    }

    /// True when the cohomology class `(beta_1, ..., beta_d)` is integral.
    pub fn is_integral(&self) -> bool {
        self.beta.iter().all(|b| (b - b.round()).abs() < 1e-12)
    }

    pub fn f_at(&self, x: &[f64]) -> f64 {
        self.f
            .iter()
            .map(|t| {
                let ph: f64 = t.k.iter().zip(x).map(|(k, y)| *k as f64 * y).sum();
                t.cos * ph.cos() + t.sin * ph.sin()
            })
            .sum()
    }

    /// `int_gamma beta` along the straight segment from `a` to `b`.
    pub fn integrate(&self, a: &[f64], b: &[f64]) -> f64 {
        let disp: f64 = self
            .beta
            .iter()
            .zip(a.iter().zip(b))
            .map(|(beta, (x, y))| beta * (y - x))
            .sum();
        disp + self.f_at(b) - self.f_at(a)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LengthSpectrum {
    dim: usize,
    records: Vec<Orthogeodesic>,
    t0: f64,
    t: f64,
    orientation: Orientation,
    one_form: Option<OneForm>,
    /// Source bodies in orientation order.
    bodies: [BodySpec; 2],
}

/// The cutoff `T0 = diam(K1) + diam(K2) + 1`; every orthogeodesic longer than it
/// joins disjoint lifts.
pub fn starting_length(k1: &ConvexBody, k2: &ConvexBody) -> f64 {
    k1.diameter() + k2.diameter() + 1.0
}

/// The common perpendicular between `K1` and `K2 + 2 pi xi`, or `None` when they meet.
pub fn common_perpendicular(
    k1: &ConvexBody,
    k2: &ConvexBody,
    xi: &[i64],
) -> Result<Option<Orthogeodesic>> {
    let solver = PerpSolver::new(k1, k2)?;
    Ok(solver.solve(xi)?.map(|p| record(xi, p, None)))
}

fn record(xi: &[i64], p: solver::Perpendicular, beta: Option<&OneForm>) -> Orthogeodesic {
    let displacement: Coords = p.foot2.iter().zip(&p.foot1).map(|(a, b)| a - b).collect();
    let holonomy_phase = match beta {
        Some(w) => Complex64::from_polar(1.0, w.integrate(&p.foot1, &p.foot2)),
        None => Complex64::new(1.0, 0.0),
    };
    Orthogeodesic {
        xi: xi.into(),
        length: p.length,
        direction: p.direction,
        foot1: p.foot1,
        foot2: p.foot2,
        displacement,
        holonomy_phase,
    }
}

fn by_length_then_xi(a: &Orthogeodesic, b: &Orthogeodesic) -> Ordering {
    a.length.total_cmp(&b.length).then_with(|| a.xi.cmp(&b.xi))
}

/// Solves every lattice class that can carry a length in `(T0, t]` and maps the
/// kept perpendiculars through `keep`, in lexicographic `xi` order.
fn enumerate<T, F>(a: &ConvexBody, b: &ConvexBody, t: f64, keep: F) -> Result<(f64, Vec<T>)>
where
    T: Send,
    F: Fn(&[i64], solver::Perpendicular) -> T + Sync,
{
    let dim = a.dim();
    if b.dim() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: b.dim(),
        });
    }
    let t0 = starting_length(a, b);
    if !(t > t0) {
        return Err(Error::Precondition(format!(
            "cutoff T = {t} must exceed T0 = diam(K1) + diam(K2) + 1 = {t0}"
        )));
    }
    let solver = PerpSolver::new(a, b)?;
    let radius = (t + a.max_norm() + b.max_norm()) / (2.0 * PI);
    let lattice = lattice_points_in_ball(dim, radius);
    let solved = ordered_par_map(lattice.len(), |i| {
        let xi = &lattice[i];
        solver.solve(xi).map(|p| match p {
            Some(p) if p.length > t0 && p.length <= t => Some(keep(xi, p)),
            _ => None,
        })
    });
    let mut kept = Vec::new();
    let mut failures = Vec::new();
    for (xi, res) in lattice.iter().zip(solved) {
        match res {
            Ok(Some(v)) => kept.push(v),
            Ok(None) => {}
            Err(_) => failures.push(xi.clone()),
        }
    }
    if !failures.is_empty() {
        return Err(Error::SpectrumFailure(failures));
    }
    Ok((t0, kept))
}

/// Sorted lengths in `(T0, t]` without the per-record geometry; returns `(T0, lengths)`.
pub fn ortholengths(k1: &ConvexBody, k2: &ConvexBody, t: f64) -> Result<(f64, Vec<f64>)> {
    let (t0, mut lengths) = enumerate(k1, k2, t, |_, p| p.length)?;
    lengths.sort_by(f64::total_cmp);
    Ok((t0, lengths))
}

/// Spectrum `K1 -> K2` up to length `T`.
pub fn length_spectrum(
    k1: &ConvexBody,
    k2: &ConvexBody,
    t: f64,
    beta: Option<&OneForm>,
) -> Result<LengthSpectrum> {
    length_spectrum_oriented(k1, k2, t, beta, Orientation::K1ToK2)
}

/// Spectrum with an explicit orientation; `K2ToK1` exchanges the roles of the bodies.
pub fn length_spectrum_oriented(
    k1: &ConvexBody,
    k2: &ConvexBody,
    t: f64,
    beta: Option<&OneForm>,
    orientation: Orientation,
) -> Result<LengthSpectrum> {
    let (a, b) = match orientation {
        Orientation::K1ToK2 => (k1, k2),
        Orientation::K2ToK1 => (k2, k1),
    };
    let dim = a.dim();
    if b.dim() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: b.dim(),
        });
    }
    if let Some(w) = beta {
        w.validate()?;
        if w.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: w.dim(),
            });
        }
    }
    let (t0, mut records) = enumerate(a, b, t, |xi, p| record(xi, p, beta))?;
    records.sort_by(by_length_then_xi);
    Ok(LengthSpectrum {
        dim,
        records,
        t0,
        t,
        orientation,
        one_form: beta.cloned(),
        bodies: [BodySpec::from(a), BodySpec::from(b)],
    })
}

impl LengthSpectrum {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn records(&self) -> &[Orthogeodesic] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn cutoff(&self) -> f64 {
        self.t
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn one_form(&self) -> Option<&OneForm> {
        self.one_form.as_ref()
    }

    pub fn bodies(&self) -> &[BodySpec; 2] {
        &self.bodies
    }

    pub fn lengths(&self) -> impl Iterator<Item = f64> + '_ {
        self.records.iter().map(|r| r.length)
    }

    /// `#{gamma : T0 < l(gamma) <= T}`.
    pub fn counting_function(&self, t: f64) -> Result<usize> {
        counting_function(self, t)
    }
}

pub fn counting_function(spec: &LengthSpectrum, t: f64) -> Result<usize> {
    if t > spec.t {
        return Err(Error::Range(format!(
            "T = {t} exceeds the spectrum cutoff {}",
            spec.t
        )));
    }
    Ok(spec.records.partition_point(|r| r.length <= t))
}

/// Steiner prediction `Vol(K1 - K2 + T B) / (2 pi)^d` for the counting function.
pub fn steiner_count(k1: &ConvexBody, k2: &ConvexBody, t: f64) -> Result<f64> {
    let diff = crate::body::minkowski_difference(k1, k2)?;
    Ok(diff.steiner_volume(t)? / (2.0 * PI).powi(diff.dim() as i32))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::dot;

    fn displacement_check(r: &Orthogeodesic) -> f64 {
        let n: f64 = r
            .displacement
            .iter()
            .zip(&r.direction)
            .map(|(x, u)| (x - r.length * u).powi(2))
            .sum();
        n.sqrt() + (dot(&r.direction, &r.direction) - 1.0).abs()
    }

    fn origin(d: usize) -> ConvexBody {
        ConvexBody::point(&vec![0.0; d]).unwrap()
    }

    #[test]
    fn point_pair_first_shell() {
        let p = origin(2);
        let s = length_spectrum(&p, &p, 1.2 * 2.0 * PI, None).unwrap();
        assert_eq!(s.len(), 4);
        assert!(s.lengths().all(|l| (l - 2.0 * PI).abs() < 1e-14));
        let xis: Vec<_> = s.records().iter().map(|r| r.xi.to_vec()).collect();
        assert_eq!(xis, vec![vec![-1, 0], vec![0, -1], vec![0, 1], vec![1, 0]]);
        assert_eq!(s.counting_function(1.2 * 2.0 * PI).unwrap(), 4);
    }

    #[test]
    fn counting_examples() {
        let p = origin(2);
        let s = length_spectrum(&p, &p, 1.5 * 2.0 * PI, None).unwrap();
        assert_eq!(counting_function(&s, 1.5 * 2.0 * PI).unwrap(), 8);
        assert!(matches!(counting_function(&s, 100.0), Err(Error::Range(_))));
    }

    #[test]
    fn cutoff_must_exceed_t0() {
        let b = ConvexBody::ball(&[0.0, 0.0], 0.3).unwrap();
        assert!(matches!(
            length_spectrum(&b, &b, 2.0, None),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn constant_one_form_phases() {
        let p = origin(2);
        let w = OneForm::constant(&[0.5, 0.0]);
        let s = length_spectrum(&p, &p, 2.5 * 2.0 * PI, Some(&w)).unwrap();
        for r in s.records() {
            let expect = Complex64::from_polar(1.0, PI * r.xi[0] as f64);
            assert!((r.holonomy_phase - expect).norm() < 1e-12);
        }
    }

    #[test]
    fn records_satisfy_foot_relation() {
        let k1 = ConvexBody::ellipsoid_axes(&[0.0, 0.0], &[0.4, 0.25]).unwrap();
        let k2 = ConvexBody::ball(&[0.5, 0.5], 0.3).unwrap();
        let s = length_spectrum(&k1, &k2, 40.0, None).unwrap();
        assert!(!s.is_empty());
        for r in s.records() {
            assert!(displacement_check(r) < 1e-8);
        }
    }
}
