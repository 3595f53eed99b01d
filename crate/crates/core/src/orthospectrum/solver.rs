//! Common perpendiculars: maximize `F(u) = 2 pi xi.u - h_D(u)` over the unit sphere,
//! `D = K1 - K2`.

use std::f64::consts::PI;

use crate::body::{minkowski_difference, ConvexBody, Coords};
use crate::error::{Error, Result};
use crate::numeric::lattice::tangent_basis;
use crate::numeric::{dot, norm};

/// KKT tolerance on `|foot2 - foot1 - F u|`.
pub const KKT_TOL: f64 = 1e-8;
const MAX_ITER: usize = 200;

#[derive(Debug, Clone)]
pub(crate) struct Perpendicular {
    pub length: f64,
    pub direction: Coords,
    pub foot1: Coords,
    pub foot2: Coords,
}

pub(crate) struct PerpSolver<'a> {
    k1: &'a ConvexBody,
    k2: &'a ConvexBody,
    diff: ConvexBody,
    round: Option<(Coords, f64)>,
    center: Coords,
}

impl<'a> PerpSolver<'a> {
    pub fn new(k1: &'a ConvexBody, k2: &'a ConvexBody) -> Result<Self> {
        let diff = minkowski_difference(k1, k2)?;
        let round = diff.as_round();
        let d = diff.dim();
        let center = match &round {
            Some((c, _)) => c.clone(),
            None => (0..d)
                .map(|i| {
                    let mut e = vec![0.0; d];
                    e[i] = 1.0;
                    let hp = diff.support_unchecked(&e);
                    e[i] = -1.0;
                    0.5 * (hp - diff.support_unchecked(&e))
                })
                .collect(),
        };
        Ok(PerpSolver {
            k1,
            k2,
            diff,
            round,
            center,
        })
    }

    /// `None` when `max F <= 0`, i.e. `K1` meets `K2 + 2 pi xi`.
    pub fn solve(&self, xi: &[i64]) -> Result<Option<Perpendicular>> {
        let d = self.diff.dim();
        if xi.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: xi.len(),
            });
        }
        let target: Coords = xi.iter().map(|&k| 2.0 * PI * k as f64).collect();
        let u = match &self.round {
            Some((c, r)) => {
                let w: Coords = target.iter().zip(c).map(|(a, b)| a - b).collect();
                let n = norm(&w);
                if n <= *r {
                    return Ok(None);
                }
                w.iter().map(|x| x / n).collect()
            }
            None => match self.newton(xi, &target)? {
                Some(u) => u,
                None => return Ok(None),
            },
        };
        self.finish(xi, &target, u)
    }

    fn finish(&self, xi: &[i64], target: &[f64], u: Coords) -> Result<Option<Perpendicular>> {
        let length = dot(target, &u) - self.diff.support_unchecked(&u);
        if length <= 0.0 {
            return Ok(None);
        }
        let foot1 = self.k1.boundary_point(&u)?;
        let neg: Coords = u.iter().map(|x| -x).collect();
        let foot2: Coords = self
            .k2
            .boundary_point(&neg)?
            .iter()
            .zip(target)
            .map(|(a, b)| a + b)
            .collect();
        let resid = (0..u.len())
            .map(|i| {
                let r = foot2[i] - foot1[i] - length * u[i];
                r * r
            })
            .sum::<f64>()
            .sqrt();
        if resid > KKT_TOL {
            return Err(Error::SolverFailure {
                xi: xi.to_vec(),
                reason: format!("KKT residual {resid:.3e} exceeds {KKT_TOL:e}"),
            });
        }
        Ok(Some(Perpendicular {
            length,
            direction: u,
            foot1,
            foot2,
        }))
    }

    fn value(&self, target: &[f64], u: &[f64]) -> f64 {
        dot(target, u) - self.diff.support_unchecked(u)
    }

    /// Riemannian Newton ascent with backtracking; falls back to projected gradient
    /// steps where the model Hessian is not negative definite.
    fn newton(&self, xi: &[i64], target: &[f64]) -> Result<Option<Coords>> {
        let d = target.len();
        let scale = norm(target).max(1.0);
        let tol = 1e-12 * scale;
        let mut u: Coords = target
            .iter()
            .zip(&self.center)
            .map(|(a, b)| a - b)
            .collect();
        let n0 = norm(&u);
        if n0 < 1e-300 {
            u = Coords::from_elem(0.0, d);
            u[0] = 1.0;
        } else {
            u.iter_mut().for_each(|x| *x /= n0);
        }
        let mut best_grad = f64::INFINITY;
        for _ in 0..MAX_ITER {
            let loc = self.diff.local(&u)?;
            let f = dot(target, &u) - loc.h;
            let g: Coords = (0..d).map(|i| target[i] - loc.grad[i]).collect();
            let basis = tangent_basis(&u);
            let m = d - 1;
            let mut r = [0.0; 2];
            let mut a = [[0.0; 2]; 2];
            for i in 0..m {
                r[i] = dot(&basis[i][..d], &g);
                for j in 0..m {
                    let mut s = 0.0;
                    for p in 0..d {
                        for q in 0..d {
                            s += basis[i][p] * loc.hess[p][q] * basis[j][q];
                        }
                    }
                    a[i][j] = s + if i == j { f } else { 0.0 };
                }
            }
            let gnorm = (r[0] * r[0] + r[1] * r[1]).sqrt();
            best_grad = best_grad.min(gnorm);
            if gnorm <= tol {
                return Ok(if f > 0.0 { Some(u) } else { None });
            }
            // Newton step solves A v = r on the tangent plane
            let step = if m == 1 {
                (a[0][0] > 0.0).then(|| [r[0] / a[0][0], 0.0])
            } else {
                let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
                (a[0][0] > 0.0 && det > 0.0).then(|| {
                    [
                        (a[1][1] * r[0] - a[0][1] * r[1]) / det,
                        (a[0][0] * r[1] - a[1][0] * r[0]) / det,
                    ]
                })
            };
            let coeffs = step.unwrap_or_else(|| {
                let curv = (a[0][0].abs() + a[1][1].abs()).max(f.abs()).max(1.0);
                [r[0] / curv, r[1] / curv]
            });
            let mut v: Coords = Coords::from_elem(0.0, d);
            for i in 0..m {
                for p in 0..d {
                    v[p] += coeffs[i] * basis[i][p];
                }
            }
            // keep the step well inside a hemisphere
            let vn = norm(&v);
            if vn > 0.5 {
                v.iter_mut().for_each(|x| *x *= 0.5 / vn);
            }
            let mut alpha = 1.0;
            let mut accepted = false;
            for _ in 0..60 {
                let mut w: Coords = u.iter().zip(&v).map(|(a, b)| a + alpha * b).collect();
                let wn = norm(&w);
                w.iter_mut().for_each(|x| *x /= wn);
                if self.value(target, &w) >= f - 1e-15 * scale {
                    u = w;
                    accepted = true;
                    break;
                }
                alpha *= 0.5;
            }
            if !accepted {
                break;
            }
        }
        // stalled: accept when the first-order condition holds to the KKT tolerance
        let loc = self.diff.local(&u)?;
        let f = dot(target, &u) - loc.h;
        let g: Coords = (0..d).map(|i| target[i] - loc.grad[i]).collect();
        let gu = dot(&g, &u);
        let pg = g
            .iter()
            .zip(&u)
            .map(|(a, b)| (a - gu * b).powi(2))
            .sum::<f64>()
            .sqrt();
        if pg <= KKT_TOL {
            return Ok(if f > 0.0 { Some(u) } else { None });
        }
        if f <= 0.0 {
            // bodies overlap on this translate; the maximizer is not needed
            return Ok(None);
        }
        Err(Error::SolverFailure {
            xi: xi.to_vec(),
            reason: format!("no convergence, projected gradient {best_grad:.3e}"),
        })
    }
}
