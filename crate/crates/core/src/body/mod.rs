//! Strictly convex bodies described by their support functions.
//!
//! A body is a Minkowski sum of primitive parts (points, balls, ellipsoids and,
//! in the plane, truncated Fourier support series). Every downstream routine only
//! consumes the support function `h`, its gradient (the inverse Gauss map) and the
//! tangential Hessian, never a boundary mesh.

mod json;

pub use json::BodySpec;

use nalgebra::{DMatrix, DVector};
use smallvec::SmallVec;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::numeric::lattice::tangent_basis;
use crate::numeric::quadrature::SphereQuadrature;
use crate::numeric::special::unit_ball_volume;
use crate::numeric::{dot, norm};

pub type Coords = SmallVec<[f64; 3]>;

/// Tolerance on `|u| = 1` for direction arguments.
pub const UNIT_TOL: f64 = 1e-12;
/// Doublings of the default sphere rule tried before a Steiner volume is reported unresolved.
const STEINER_REFINEMENTS: usize = 4;

#[derive(Debug, Clone, PartialEq)]
pub enum Shape {
    Point(Coords),
    Ball {
        center: Coords,
        radius: f64,
    },
    /// `h(u) = c.u + sqrt(u^T Q u)`, `q` row-major and positive definite.
    Ellipsoid {
        center: Coords,
        q: Vec<f64>,
    },
    /// `h(phi) = a0 + sum_k cos[k-1] cos(k phi) + sin[k-1] sin(k phi)`.
    SupportSeries2d {
        a0: f64,
        cos: Vec<f64>,
        sin: Vec<f64>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BodyKind {
    Point,
    Ball,
    Ellipsoid,
    SupportSeries2d,
    MinkowskiSum,
}

/// Support value, gradient and Hessian of the 1-homogeneous extension at a unit vector.
/// Only the leading `dim` entries are meaningful.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct LocalSupport {
    pub h: f64,
    pub grad: [f64; 3],
    pub hess: [[f64; 3]; 3],
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvexBody {
    dim: usize,
    parts: Vec<Shape>,
}

fn series_derivatives(a0: f64, cos: &[f64], sin: &[f64], c1: f64, s1: f64) -> (f64, f64, f64) {
    // cos(k phi), sin(k phi) by complex powers of e^{i phi}
    let (mut ck, mut sk) = (1.0, 0.0);
    let (mut h, mut h1, mut h2) = (a0, 0.0, 0.0);
    let n = cos.len().max(sin.len());
    for k in 1..=n {
        let (c, s) = (ck * c1 - sk * s1, sk * c1 + ck * s1);
        ck = c;
        sk = s;
        let a = cos.get(k - 1).copied().unwrap_or(0.0);
        let b = sin.get(k - 1).copied().unwrap_or(0.0);
        let kf = k as f64;
        h += a * c + b * s;
        h1 += kf * (-a * s + b * c);
        h2 -= kf * kf * (a * c + b * s);
    }
    (h, h1, h2)
}

impl Shape {
    fn check_dim(&self, dim: usize) -> Result<()> {
        let found = match self {
            Shape::Point(p) => p.len(),
            Shape::Ball { center, .. } => center.len(),
            Shape::Ellipsoid { center, q } => {
                if q.len() != center.len() * center.len() {
                    return Err(Error::InvalidBody(format!(
                        "quadratic form has {} entries, expected {}",
                        q.len(),
                        center.len() * center.len()
                    )));
                }
                center.len()
            }
            Shape::SupportSeries2d { .. } => 2,
        };
        if found != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found,
            });
        }
        Ok(())
    }

    fn is_round(&self) -> bool {
        matches!(self, Shape::Point(_) | Shape::Ball { .. })
    }

    fn support(&self, u: &[f64]) -> f64 {
        match self {
            Shape::Point(p) => dot(p, u),
            Shape::Ball { center, radius } => dot(center, u) + radius * norm(u),
            Shape::Ellipsoid { center, q } => {
                let d = center.len();
                let mut quad = 0.0;
                for i in 0..d {
                    for j in 0..d {
                        quad += u[i] * q[i * d + j] * u[j];
                    }
                }
                dot(center, u) + quad.sqrt()
            }
            Shape::SupportSeries2d { a0, cos, sin } => {
                let r = norm(u);
                let (h, _, _) = series_derivatives(*a0, cos, sin, u[0] / r, u[1] / r);
                r * h
            }
        }
    }

    /// Adds this part's local support data at the unit vector `u` into `acc`.
    fn accumulate_local(&self, u: &[f64], acc: &mut LocalSupport) -> Result<()> {
        let d = u.len();
        match self {
            Shape::Point(p) => {
                acc.h += dot(p, u);
                for i in 0..d {
                    acc.grad[i] += p[i];
                }
            }
            Shape::Ball { center, radius } => {
                acc.h += dot(center, u) + radius;
                for i in 0..d {
                    acc.grad[i] += center[i] + radius * u[i];
                    for j in 0..d {
                        let delta = if i == j { 1.0 } else { 0.0 };
                        acc.hess[i][j] += radius * (delta - u[i] * u[j]);
                    }
                }
            }
            Shape::Ellipsoid { center, q } => {
                let mut qu = [0.0; 3];
                for i in 0..d {
                    for j in 0..d {
                        qu[i] += q[i * d + j] * u[j];
                    }
                }
                let s = dot(&qu[..d], u).sqrt();
                acc.h += dot(center, u) + s;
                for i in 0..d {
                    acc.grad[i] += center[i] + qu[i] / s;
                    for j in 0..d {
                        acc.hess[i][j] += q[i * d + j] / s - qu[i] * qu[j] / (s * s * s);
                    }
                }
            }
            Shape::SupportSeries2d { a0, cos, sin } => {
                let (c1, s1) = (u[0], u[1]);
                let (h, h1, h2) = series_derivatives(*a0, cos, sin, c1, s1);
                let rho = h + h2;
                if rho <= 0.0 {
                    return Err(Error::InvalidBody(format!(
                        "radius of curvature h + h'' = {rho:.3e} <= 0 at phi = {:.6}",
                        s1.atan2(c1)
                    )));
                }
                let perp = [-s1, c1];
                acc.h += h;
                for i in 0..2 {
                    acc.grad[i] += h * u[i] + h1 * perp[i];
                    for j in 0..2 {
                        acc.hess[i][j] += rho * perp[i] * perp[j];
                    }
                }
            }
        }
        Ok(())
    }

    fn reflected(&self) -> Shape {
        match self {
            Shape::Point(p) => Shape::Point(p.iter().map(|x| -x).collect()),
            Shape::Ball { center, radius } => Shape::Ball {
                center: center.iter().map(|x| -x).collect(),
                radius: *radius,
            },
            Shape::Ellipsoid { center, q } => Shape::Ellipsoid {
                center: center.iter().map(|x| -x).collect(),
                q: q.clone(),
            },
            Shape::SupportSeries2d { a0, cos, sin } => {
                let flip = |v: &Vec<f64>| -> Vec<f64> {
                    v.iter()
                        .enumerate()
                        .map(|(i, x)| if i % 2 == 0 { -x } else { *x })
                        .collect()
                };
                Shape::SupportSeries2d {
                    a0: *a0,
                    cos: flip(cos),
                    sin: flip(sin),
                }
            }
        }
    }

    fn translated(&self, v: &[f64]) -> Shape {
        let shift = |c: &Coords| -> Coords { c.iter().zip(v).map(|(a, b)| a + b).collect() };
        match self {
            Shape::Point(p) => Shape::Point(shift(p)),
            Shape::Ball { center, radius } => Shape::Ball {
                center: shift(center),
                radius: *radius,
            },
            Shape::Ellipsoid { center, q } => Shape::Ellipsoid {
                center: shift(center),
                q: q.clone(),
            },
            Shape::SupportSeries2d { a0, cos, sin } => {
                let mut cos = cos.clone();
                let mut sin = sin.clone();
                if cos.is_empty() {
                    cos.push(0.0);
                }
                if sin.is_empty() {
                    sin.push(0.0);
                }
                cos[0] += v[0];
                sin[0] += v[1];
                Shape::SupportSeries2d { a0: *a0, cos, sin }
            }
        }
    }

    fn validate(&self, dim: usize) -> Result<()> {
        self.check_dim(dim)?;
        let finite = |xs: &[f64]| xs.iter().all(|x| x.is_finite());
        match self {
            Shape::Point(p) => {
                if !finite(p) {
                    return Err(Error::InvalidBody("non-finite point coordinates".into()));
                }
            }
            Shape::Ball { center, radius } => {
                if !finite(center) || !radius.is_finite() {
                    return Err(Error::InvalidBody("non-finite ball parameters".into()));
                }
                if *radius <= 0.0 {
                    return Err(Error::InvalidBody(format!(
                        "ball radius must be positive, got {radius}"
                    )));
                }
            }
            Shape::Ellipsoid { center, q } => {
                if dim > 3 {
                    return Err(Error::Domain(format!(
                        "ellipsoids are supported for d = 2, 3 only (got d = {dim})"
                    )));
                }
                if !finite(center) || !finite(q) {
                    return Err(Error::InvalidBody("non-finite ellipsoid parameters".into()));
                }
                let m = DMatrix::from_row_slice(dim, dim, q);
                let asym = (&m - m.transpose()).abs().max();
                if asym > 1e-12 * m.abs().max().max(1.0) {
                    return Err(Error::InvalidBody(
                        "quadratic form Q is not symmetric".into(),
                    ));
                }
                if m.cholesky().is_none() {
                    return Err(Error::InvalidBody(
                        "quadratic form Q is not positive definite".into(),
                    ));
                }
            }
            Shape::SupportSeries2d { a0, cos, sin } => {
                if !a0.is_finite() || !finite(cos) || !finite(sin) {
                    return Err(Error::InvalidBody("non-finite support coefficients".into()));
                }
                let n = cos.len().max(sin.len());
                let samples = (64 * (n + 1)).max(4096);
                for j in 0..samples {
                    let phi = 2.0 * PI * j as f64 / samples as f64;
                    let (h, _, h2) = series_derivatives(*a0, cos, sin, phi.cos(), phi.sin());
                    if h + h2 <= 1e-12 {
                        return Err(Error::InvalidBody(format!(
                            "support series is not strictly convex: h + h'' = {:.3e} at phi = {phi:.6}",
                            h + h2
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Merges points into a single translation and balls into a single ball.
fn canonicalize(dim: usize, parts: Vec<Shape>) -> Vec<Shape> {
    let mut shift: Coords = SmallVec::from_elem(0.0, dim);
    let mut ball: Option<(Coords, f64)> = None;
    let mut others = Vec::new();
    for part in parts {
        match part {
            Shape::Point(p) => {
                for i in 0..dim {
                    shift[i] += p[i];
                }
            }
            Shape::Ball { center, radius } => {
                ball = Some(match ball {
                    None => (center, radius),
                    Some((c, r)) => (
                        c.iter().zip(&center).map(|(a, b)| a + b).collect(),
                        r + radius,
                    ),
                });
            }
            other => others.push(other),
        }
    }
    let mut out = Vec::with_capacity(others.len() + 1);
    if let Some((center, radius)) = ball {
        out.push(Shape::Ball { center, radius });
    }
    out.extend(others);
    match out.first_mut() {
        None => vec![Shape::Point(shift)],
        Some(first) => {
            if shift.iter().any(|x| *x != 0.0) {
                *first = first.translated(&shift);
            }
            out
        }
    }
}

impl ConvexBody {
    pub fn new(dim: usize, parts: Vec<Shape>) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidBody(format!(
                "dimension must be at least 2, got {dim}"
            )));
        }
        if parts.is_empty() {
            return Err(Error::InvalidBody("a body needs at least one part".into()));
        }
        for p in &parts {
            p.validate(dim)?;
        }
        Ok(ConvexBody { dim, parts })
    }

    pub fn point(coords: &[f64]) -> Result<Self> {
        Self::new(coords.len(), vec![Shape::Point(coords.into())])
    }

    pub fn ball(center: &[f64], radius: f64) -> Result<Self> {
        Self::new(
            center.len(),
            vec![Shape::Ball {
                center: center.into(),
                radius,
            }],
        )
    }

    /// Ellipsoid `{c + Q^(1/2) x : |x| <= 1}`, `q` given row-major.
    pub fn ellipsoid(center: &[f64], q: &[f64]) -> Result<Self> {
        Self::new(
            center.len(),
            vec![Shape::Ellipsoid {
                center: center.into(),
                q: q.to_vec(),
            }],
        )
    }

    /// Axis-aligned ellipsoid with the given semi-axes.
    pub fn ellipsoid_axes(center: &[f64], semi_axes: &[f64]) -> Result<Self> {
        let d = semi_axes.len();
        let mut q = vec![0.0; d * d];
        for (i, a) in semi_axes.iter().enumerate() {
            q[i * d + i] = a * a;
        }
        Self::ellipsoid(center, &q)
    }

    pub fn support_series_2d(a0: f64, cos: &[f64], sin: &[f64]) -> Result<Self> {
        Self::new(
            2,
            vec![Shape::SupportSeries2d {
                a0,
                cos: cos.to_vec(),
                sin: sin.to_vec(),
            }],
        )
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn parts(&self) -> &[Shape] {
        &self.parts
    }

    pub fn kind(&self) -> BodyKind {
        match self.parts.as_slice() {
            [Shape::Point(_)] => BodyKind::Point,
            [Shape::Ball { .. }] => BodyKind::Ball,
            [Shape::Ellipsoid { .. }] => BodyKind::Ellipsoid,
            [Shape::SupportSeries2d { .. }] => BodyKind::SupportSeries2d,
            _ => BodyKind::MinkowskiSum,
        }
    }

    /// `Some((center, radius))` when the body is a ball or a point (radius 0).
    pub fn as_round(&self) -> Option<(Coords, f64)> {
        if !self.parts.iter().all(Shape::is_round) {
            return None;
        }
        let mut center: Coords = SmallVec::from_elem(0.0, self.dim);
        let mut radius = 0.0;
        for p in &self.parts {
            match p {
                Shape::Point(x) => center.iter_mut().zip(x).for_each(|(c, v)| *c += v),
                Shape::Ball {
                    center: c,
                    radius: r,
                } => {
                    center.iter_mut().zip(c).for_each(|(a, v)| *a += v);
                    radius += r;
                }
                _ => unreachable!(),
            }
        }
        Some((center, radius))
    }

    pub fn is_point(&self) -> bool {
        matches!(self.as_round(), Some((_, r)) if r == 0.0)
    }

    fn check_unit(&self, u: &[f64]) -> Result<()> {
        if u.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: u.len(),
            });
        }
        let n = norm(u);
        if (n - 1.0).abs() > UNIT_TOL {
            return Err(Error::Precondition(format!(
                "direction must be a unit vector, |u| = {n:.15}"
            )));
        }
        Ok(())
    }

    /// Support function `h(u) = max_{k in K} <k, u>` at a unit vector.
    pub fn support(&self, u: &[f64]) -> Result<f64> {
        self.check_unit(u)?;
        Ok(self.support_unchecked(u))
    }

    /// Positively homogeneous extension `|x| h(x / |x|)`, defined for every `x`.
    pub fn support_homogeneous(&self, x: &[f64]) -> f64 {
        self.support_unchecked(x)
    }

    pub(crate) fn support_unchecked(&self, u: &[f64]) -> f64 {
        self.parts.iter().map(|p| p.support(u)).sum()
    }

    /// Unique boundary point with outward normal `u`, i.e. the gradient of `h` at `u`.
    pub fn boundary_point(&self, u: &[f64]) -> Result<Coords> {
        self.check_unit(u)?;
        if let Some((c, r)) = self.as_round() {
            return Ok(c.iter().zip(u).map(|(a, b)| a + r * b).collect());
        }
        let loc = self.local(u)?;
        Ok(loc.grad[..self.dim].iter().copied().collect())
    }

    pub(crate) fn local(&self, u: &[f64]) -> Result<LocalSupport> {
        debug_assert!(self.dim <= 3);
        let mut acc = LocalSupport::default();
        for p in &self.parts {
            p.accumulate_local(u, &mut acc)?;
        }
        Ok(acc)
    }

    pub fn translated(&self, v: &[f64]) -> Result<Self> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: v.len(),
            });
        }
        let mut parts = self.parts.clone();
        parts.push(Shape::Point(v.into()));
        Ok(ConvexBody {
            dim: self.dim,
            parts: canonicalize(self.dim, parts),
        })
    }

    /// The reflected body `-K`, with support `h(-u)`.
    pub fn reflected(&self) -> Self {
        ConvexBody {
            dim: self.dim,
            parts: self.parts.iter().map(Shape::reflected).collect(),
        }
    }

    /// Largest distance from the origin to a point of the body.
    pub fn max_norm(&self) -> f64 {
        if let Some((c, r)) = self.as_round() {
            return norm(&c) + r;
        }
        let quad = SphereQuadrature::default_for(self.dim).expect("generic bodies have d <= 3");
        quad.iter()
            .filter_map(|(u, _)| self.local(u).ok())
            .map(|l| norm(&l.grad[..self.dim]))
            .fold(0.0, f64::max)
    }

    /// Diameter, as the maximal width `h(u) + h(-u)` over sampled directions.
    pub fn diameter(&self) -> f64 {
        if let Some((_, r)) = self.as_round() {
            return 2.0 * r;
        }
        let quad = SphereQuadrature::default_for(self.dim).expect("generic bodies have d <= 3");
        quad.iter()
            .map(|(u, _)| {
                let neg: Coords = u.iter().map(|x| -x).collect();
                self.support_unchecked(u) + self.support_unchecked(&neg)
            })
            .fold(0.0, f64::max)
    }

    /// Volume of the outer parallel body `K + tB` on the given sphere quadrature.
    fn steiner_on(&self, t: f64, quad: &SphereQuadrature) -> Result<f64> {
        let d = self.dim;
        let mut total = 0.0;
        for (u, w) in quad.iter() {
            let loc = self.local(u)?;
            let h = loc.h + t;
            let det = match d {
                2 => {
                    let p = [-u[1], u[0]];
                    let mut q = 0.0;
                    for i in 0..2 {
                        for j in 0..2 {
                            q += p[i] * loc.hess[i][j] * p[j];
                        }
                    }
                    q + t
                }
                3 => {
                    let [e1, e2] = tangent_basis(u);
                    let form = |a: &[f64; 3], b: &[f64; 3]| {
                        let mut s = 0.0;
                        for i in 0..3 {
                            for j in 0..3 {
                                s += a[i] * loc.hess[i][j] * b[j];
                            }
                        }
                        s
                    };
                    let m11 = form(&e1, &e1) + t;
                    let m22 = form(&e2, &e2) + t;
                    let m12 = form(&e1, &e2);
                    m11 * m22 - m12 * m12
                }
                _ => unreachable!("generic bodies have d <= 3"),
            };
            total += w * h * det;
        }
        Ok(total / d as f64)
    }

    /// Volume of the outer parallel body `K + tB`.
    pub fn steiner_volume(&self, t: f64) -> Result<f64> {
        if !(t >= 0.0) {
            return Err(Error::Precondition(format!(
                "parallel distance must be >= 0, got {t}"
            )));
        }
        if let Some((_, r)) = self.as_round() {
            return Ok(unit_ball_volume(self.dim) * (r + t).powi(self.dim as i32));
        }
        let mut quad = SphereQuadrature::default_for(self.dim)?;
        for _ in 0..STEINER_REFINEMENTS {
            match self.steiner_volume_with(t, &quad) {
                Err(Error::Accuracy(_)) => quad = quad.refined(),
                res => return res,
            }
        }
        self.steiner_volume_with(t, &quad)
    }

    /// Steiner volume on a caller-chosen quadrature, checked against the next coarser rule.
    pub fn steiner_volume_with(&self, t: f64, quad: &SphereQuadrature) -> Result<f64> {
        if quad.dim != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: quad.dim,
            });
        }
        let fine = self.steiner_on(t, quad)?;
        let coarse = self.steiner_on(t, &quad.coarsened())?;
        let rel = (fine - coarse).abs() / fine.abs().max(1e-300);
        if rel > 1e-8 {
            return Err(Error::Accuracy(format!(
                "Steiner volume not resolved by the sphere quadrature (relative change {rel:.2e})"
            )));
        }
        Ok(fine)
    }

    /// Coefficients `a_l` of `Vol(K + tB) = sum_l a_l t^l`, recovered from `d + 1`
    /// evaluations at `t = 0, 1/2, 1, ...`.
    pub fn steiner_polynomial(&self) -> Result<Vec<f64>> {
        let d = self.dim;
        let ts: Vec<f64> = (0..=d).map(|j| 0.5 * j as f64).collect();
        let vals = ts
            .iter()
            .map(|&t| self.steiner_volume(t))
            .collect::<Result<Vec<_>>>()?;
        let vander = DMatrix::from_fn(d + 1, d + 1, |i, j| ts[i].powi(j as i32));
        let rhs = DVector::from_vec(vals);
        let lu = vander.lu();
        let coef = lu
            .solve(&rhs)
            .ok_or_else(|| Error::Numeric("singular Steiner interpolation system".into()))?;
        Ok(coef.iter().copied().collect())
    }

    /// Intrinsic volumes `(V_0, ..., V_d)`.
    pub fn intrinsic_volumes(&self) -> Result<Vec<f64>> {
        let d = self.dim;
        let a = self.steiner_polynomial()?;
        let scale = a[0].abs().max(1.0);
        let mut v = vec![0.0; d + 1];
        for (l, al) in a.iter().enumerate() {
            let mut val = al / unit_ball_volume(l);
            if val < 0.0 {
                if val > -1e-9 * scale {
                    val = 0.0;
                } else {
                    return Err(Error::Numeric(format!(
                        "negative intrinsic volume V_{} = {val:.3e}",
                        d - l
                    )));
                }
            }
            v[d - l] = val;
        }
        Ok(v)
    }
}

/// The body `K1 - K2 = {a - b}`, with support `h1(u) + h2(-u)`.
pub fn minkowski_difference(k1: &ConvexBody, k2: &ConvexBody) -> Result<ConvexBody> {
    if k1.dim != k2.dim {
        return Err(Error::DimensionMismatch {
            expected: k1.dim,
            found: k2.dim,
        });
    }
    let mut parts = k1.parts.clone();
    parts.extend(k2.parts.iter().map(Shape::reflected));
    Ok(ConvexBody {
        dim: k1.dim,
        parts: canonicalize(k1.dim, parts),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ellipse() -> ConvexBody {
        ConvexBody::ellipsoid(&[0.0, 0.0], &[0.16, 0.0, 0.0, 0.0625]).unwrap()
    }

    #[test]
    fn support_examples() {
        let b = ConvexBody::ball(&[0.1, 0.0], 0.3).unwrap();
        assert!((b.support(&[1.0, 0.0]).unwrap() - 0.4).abs() < 1e-15);
        let p = ConvexBody::point(&[0.2, 0.7]).unwrap();
        assert!((p.support(&[0.0, 1.0]).unwrap() - 0.7).abs() < 1e-15);
        assert!((ellipse().support(&[0.0, 1.0]).unwrap() - 0.25).abs() < 1e-15);
    }

    #[test]
    fn non_unit_direction_is_rejected() {
        let b = ConvexBody::ball(&[0.0, 0.0], 1.0).unwrap();
        assert!(matches!(
            b.support(&[1.0, 1e-5]),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            b.support(&[2.0, 0.0]),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            b.support(&[1.0, 0.0, 0.0]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn invalid_bodies() {
        assert!(ConvexBody::ball(&[0.0, 0.0], -0.1).is_err());
        assert!(ConvexBody::ellipsoid(&[0.0, 0.0], &[1.0, 0.0, 0.0, -1.0]).is_err());
        assert!(ConvexBody::ellipsoid(&[0.0, 0.0], &[1.0, 0.5, 0.0, 1.0]).is_err());
        // h = 1 + 0.2 cos(3 phi) has h + h'' = 1 - 1.6 cos(3 phi) < 0 somewhere
        assert!(matches!(
            ConvexBody::support_series_2d(1.0, &[0.0, 0.0, 0.2], &[]),
            Err(Error::InvalidBody(_))
        ));
        assert!(ConvexBody::support_series_2d(1.0, &[0.0, 0.0, 0.1], &[]).is_ok());
        assert!(matches!(
            ConvexBody::ellipsoid_axes(&[0.0; 4], &[1.0; 4]),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn boundary_point_matches_finite_difference_gradient() {
        let e = ConvexBody::ellipsoid(&[0.1, -0.2], &[0.16, 0.03, 0.03, 0.0625]).unwrap();
        for k in 0..16 {
            let phi = 0.37 + k as f64 * 0.4;
            let u = [phi.cos(), phi.sin()];
            let x = e.boundary_point(&u).unwrap();
            let h = 1e-6;
            for i in 0..2 {
                let mut up = u;
                let mut dn = u;
                up[i] += h;
                dn[i] -= h;
                let fd = (e.support_homogeneous(&up) - e.support_homogeneous(&dn)) / (2.0 * h);
                assert!((fd - x[i]).abs() < 1e-7, "{fd} vs {}", x[i]);
            }
            assert!((dot(&x, &u) - e.support(&u).unwrap()).abs() < 1e-10);
        }
    }

    #[test]
    fn minkowski_difference_examples() {
        let b1 = ConvexBody::ball(&[0.5, 0.1], 0.3).unwrap();
        let b2 = ConvexBody::ball(&[0.1, 0.2], 0.2).unwrap();
        let d = minkowski_difference(&b1, &b2).unwrap();
        assert_eq!(d.kind(), BodyKind::Ball);
        let (c, r) = d.as_round().unwrap();
        assert!((c[0] - 0.4).abs() < 1e-15 && (c[1] + 0.1).abs() < 1e-15);
        assert!((r - 0.5).abs() < 1e-15);

        let p = ConvexBody::point(&[0.3, -0.4]).unwrap();
        let e = ellipse();
        let t = minkowski_difference(&e, &p).unwrap();
        assert_eq!(t.kind(), BodyKind::Ellipsoid);
        let mixed = minkowski_difference(&e, &b2).unwrap();
        assert_eq!(mixed.kind(), BodyKind::MinkowskiSum);
        let quad = SphereQuadrature::circle(64);
        for (u, _) in quad.iter() {
            let neg = [-u[0], -u[1]];
            let expect = e.support_unchecked(u) + b2.support_unchecked(&neg);
            assert!((mixed.support_unchecked(u) - expect).abs() < 1e-14);
            let shifted = e.support_unchecked(u) - dot(&[0.3, -0.4], u);
            assert!((t.support_unchecked(u) - shifted).abs() < 1e-14);
        }
        let e3 = ConvexBody::ellipsoid_axes(&[0.0; 3], &[0.1, 0.2, 0.3]).unwrap();
        assert!(matches!(
            minkowski_difference(&e, &e3),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn series_reflection_and_translation() {
        let s = ConvexBody::support_series_2d(1.0, &[0.1, 0.05, 0.02], &[0.0, -0.03]).unwrap();
        let r = s.reflected();
        let t = s.translated(&[0.25, -0.5]).unwrap();
        for k in 0..32 {
            let phi = k as f64 * 0.2;
            let u = [phi.cos(), phi.sin()];
            let neg = [-u[0], -u[1]];
            assert!((r.support_unchecked(&u) - s.support_unchecked(&neg)).abs() < 1e-14);
            let shifted = s.support_unchecked(&u) + 0.25 * u[0] - 0.5 * u[1];
            assert!((t.support_unchecked(&u) - shifted).abs() < 1e-14);
        }
    }

    #[test]
    fn steiner_examples() {
        let disk = ConvexBody::ball(&[0.0, 0.0], 0.3).unwrap();
        assert!((disk.steiner_volume(0.2).unwrap() - PI * 0.25).abs() < 1e-14);
        assert!((ellipse().steiner_volume(0.0).unwrap() - PI * 0.4 * 0.25).abs() < 1e-9);
        let ball = ConvexBody::ball(&[0.0; 3], 0.3).unwrap();
        let expect = 4.0 * PI / 3.0 * 0.4f64.powi(3);
        assert!((ball.steiner_volume(0.1).unwrap() - expect).abs() < 1e-14);
        assert!(matches!(
            disk.steiner_volume(-1.0),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn steiner_quadrature_matches_closed_form_for_balls() {
        // a ball written as an ellipsoid exercises the quadrature route
        for d in [2usize, 3] {
            let b = ConvexBody::ellipsoid_axes(&vec![0.1; d], &vec![0.3; d]).unwrap();
            for t in [0.0, 0.4, 1.3] {
                let expect = unit_ball_volume(d) * (0.3f64 + t).powi(d as i32);
                let got = b.steiner_volume(t).unwrap();
                assert!(
                    (got - expect).abs() < 1e-10 * expect,
                    "d={d} t={t}: {got} vs {expect}"
                );
            }
        }
    }

    #[test]
    fn intrinsic_volume_examples() {
        let p = ConvexBody::point(&[0.3, 0.1, -0.2]).unwrap();
        let v = p.intrinsic_volumes().unwrap();
        assert!((v[0] - 1.0).abs() < 1e-12);
        assert!(v[1..].iter().all(|x| x.abs() < 1e-12));
        let r = 0.3;
        let disk = ConvexBody::ball(&[0.0, 0.0], r).unwrap();
        let v = disk.intrinsic_volumes().unwrap();
        assert!((v[0] - 1.0).abs() < 1e-12);
        assert!((v[1] - PI * r).abs() < 1e-12);
        assert!((v[2] - PI * r * r).abs() < 1e-12);
        let ball = ConvexBody::ball(&[0.0; 3], r).unwrap();
        let v = ball.intrinsic_volumes().unwrap();
        assert!((v[2] - 2.0 * PI * r * r).abs() < 1e-12);
        assert!((v[3] - 4.0 * PI / 3.0 * r.powi(3)).abs() < 1e-12);
        // higher dimensions: points and balls only
        let b5 = ConvexBody::ball(&[0.0; 5], 0.5).unwrap();
        let v = b5.intrinsic_volumes().unwrap();
        assert!((v[5] - unit_ball_volume(5) * 0.5f64.powi(5)).abs() < 1e-12);
        assert!((v[0] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn diameter_and_extent() {
        let e = ellipse();
        assert!((e.diameter() - 0.8).abs() < 1e-9);
        assert!((e.max_norm() - 0.4).abs() < 1e-9);
        let b = ConvexBody::ball(&[3.0, 4.0], 0.5).unwrap();
        assert_eq!(b.diameter(), 1.0);
        assert_eq!(b.max_norm(), 5.5);
    }
}
