//! Gauss–Legendre rules and sphere quadratures.

use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct GaussRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

fn compute_gauss_legendre(n: usize) -> GaussRule {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre_with_derivative(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, dp) = legendre_with_derivative(n, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    GaussRule { nodes, weights }
}

/// Gauss–Legendre rule on [-1, 1], ascending nodes. Rules are cached per order.
pub fn gauss_legendre(n: usize) -> Arc<GaussRule> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<GaussRule>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().expect("quadrature cache poisoned");
    guard
        .entry(n)
        .or_insert_with(|| Arc::new(compute_gauss_legendre(n)))
        .clone()
}

/// Composite Gauss–Legendre nodes and weights on `[a, b]` with `panels` equal panels.
pub fn composite_gauss(a: f64, b: f64, panels: usize, order: usize) -> (Vec<f64>, Vec<f64>) {
    let rule = gauss_legendre(order);
    let h = (b - a) / panels as f64;
    let mut xs = Vec::with_capacity(panels * order);
    let mut ws = Vec::with_capacity(panels * order);
    for p in 0..panels {
        let lo = a + p as f64 * h;
        for (x, w) in rule.nodes.iter().zip(&rule.weights) {
            xs.push(lo + 0.5 * h * (x + 1.0));
            ws.push(0.5 * h * w);
        }
    }
    (xs, ws)
}

/// Quadrature on the unit sphere S^(d-1) for d = 2 (equispaced angles) and
/// d = 3 (Gauss–Legendre in cos(colatitude) times equispaced longitude).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SphereQuadrature {
    pub dim: usize,
    /// Unit vectors, row-major, `dim` entries each.
    nodes: Vec<f64>,
    pub weights: Vec<f64>,
    layout: Layout,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Layout {
    Circle { m: usize },
    LatLon { n_lat: usize, n_lon: usize },
}

pub const DEFAULT_CIRCLE_NODES: usize = 512;
pub const DEFAULT_LAT: usize = 64;
pub const DEFAULT_LON: usize = 128;

impl SphereQuadrature {
    pub fn circle(m: usize) -> Self {
        let mut nodes = Vec::with_capacity(2 * m);
        for j in 0..m {
            let phi = 2.0 * PI * j as f64 / m as f64;
            nodes.push(phi.cos());
            nodes.push(phi.sin());
        }
        SphereQuadrature {
            dim: 2,
            nodes,
            weights: vec![2.0 * PI / m as f64; m],
            layout: Layout::Circle { m },
        }
    }

    pub fn lat_lon(n_lat: usize, n_lon: usize) -> Self {
        let rule = gauss_legendre(n_lat);
        let mut nodes = Vec::with_capacity(3 * n_lat * n_lon);
        let mut weights = Vec::with_capacity(n_lat * n_lon);
        for (z, wz) in rule.nodes.iter().zip(&rule.weights) {
            let rho = (1.0 - z * z).sqrt();
            for k in 0..n_lon {
                let phi = 2.0 * PI * k as f64 / n_lon as f64;
                nodes.extend_from_slice(&[rho * phi.cos(), rho * phi.sin(), *z]);
                weights.push(wz * 2.0 * PI / n_lon as f64);
            }
        }
        SphereQuadrature {
            dim: 3,
            nodes,
            weights,
            layout: Layout::LatLon { n_lat, n_lon },
        }
    }

    pub fn default_for(dim: usize) -> Result<Self> {
        match dim {
            2 => Ok(Self::circle(DEFAULT_CIRCLE_NODES)),
            3 => Ok(Self::lat_lon(DEFAULT_LAT, DEFAULT_LON)),
            _ => Err(Error::Domain(format!(
                "sphere quadrature is available for d = 2, 3 only (got d = {dim})"
            ))),
        }
    }

    pub fn layout(&self) -> Layout {
        self.layout
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn node(&self, i: usize) -> &[f64] {
        &self.nodes[i * self.dim..(i + 1) * self.dim]
    }

    pub fn iter(&self) -> impl Iterator<Item = (&[f64], f64)> + '_ {
        self.nodes
            .chunks_exact(self.dim)
            .zip(self.weights.iter().copied())
    }

    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// A coarser rule of the same family, used for resolution checks.
    pub fn coarsened(&self) -> Self {
        match self.layout {
            Layout::Circle { m } => Self::circle((m / 2).max(8)),
            Layout::LatLon { n_lat, n_lon } => {
                Self::lat_lon((n_lat / 2).max(4), (n_lon / 2).max(8))
            }
        }
    }

    /// The next finer rule of the same family.
    pub fn refined(&self) -> Self {
        match self.layout {
            Layout::Circle { m } => Self::circle(2 * m),
            Layout::LatLon { n_lat, n_lon } => Self::lat_lon(2 * n_lat, 2 * n_lon),
        }
    }

    /// Polynomial degree integrated exactly.
    pub fn exact_degree(&self) -> usize {
        match self.layout {
            Layout::Circle { m } => m - 1,
            Layout::LatLon { n_lat, n_lon } => (2 * n_lat - 1).min(n_lon - 1),
        }
    }
}
