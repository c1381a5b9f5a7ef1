//! Gauss-Legendre rules and semi-infinite quadrature grids.
//!
//! Every integral operator in the crate lives on an interval (t, inf). The
//! grid composes a Gauss-Legendre rule with a smooth change of variables so
//! that integrands with Gaussian or Airy-type decay are handled by a modest
//! fixed node count.

use crate::error::{Error, Result};

/// How the reference interval is mapped onto `(lower, inf)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MapKind {
    /// x = lower + L * u / (1 - u). Heavy algebraic tail; diagnostics only.
    Algebraic,
    /// x = lower - L * ln(1 - u). Suits integrands with (super-)exponential decay.
    Exponential,
}

/// Nodes and weights realizing integrals over `(lower_endpoint, inf)`.
#[derive(Debug, Clone)]
pub struct QuadratureGrid {
    pub lower_endpoint: f64,
    pub map_kind: MapKind,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    /// Map scale L.
    pub scale: f64,
}

/// Gauss-Legendre nodes and weights on [-1, 1], by Newton iteration on P_n.
pub fn gauss_legendre(count: usize) -> (Vec<f64>, Vec<f64>) {
    let n = count;
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Tricomi-style initial guess, then Newton on P_n.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut pp = 0.0;
        for _ in 0..100 {
            let (p, dp) = legendre_pair(n, x);
            pp = dp;
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                let (p2, dp2) = legendre_pair(n, x);
                x -= p2 / dp2;
                pp = dp2;
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * pp * pp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
        let (_, dp) = legendre_pair(n, 0.0);
        weights[n / 2] = 2.0 / (dp * dp);
    }
    (nodes, weights)
}

fn legendre_pair(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Build a grid on `(lower, inf)` with unit map scale.
pub fn make_grid(lower: f64, count: usize, map_kind: MapKind) -> Result<QuadratureGrid> {
    make_grid_scaled(lower, count, map_kind, 1.0)
}

/// Build a grid on `(lower, inf)` with map scale `scale`.
pub fn make_grid_scaled(
    lower: f64,
    count: usize,
    map_kind: MapKind,
    scale: f64,
) -> Result<QuadratureGrid> {
    if count < 4 {
        return Err(Error::Parameter(format!(
            "grid count must be >= 4, got {count}"
        )));
    }
    if !lower.is_finite() || !scale.is_finite() || scale <= 0.0 {
        return Err(Error::Parameter(format!(
            "grid lower/scale must be finite and positive, got ({lower}, {scale})"
        )));
    }
    let (gx, gw) = gauss_legendre(count);
    let mut nodes = Vec::with_capacity(count);
    let mut weights = Vec::with_capacity(count);
    for (&x, &w) in gx.iter().zip(&gw) {
        let u = 0.5 * (x + 1.0); // (0, 1)
        let du = 0.5 * w;
        let (node, jac) = match map_kind {
            MapKind::Exponential => (lower - scale * (1.0 - u).ln(), scale / (1.0 - u)),
            MapKind::Algebraic => (
                lower + scale * u / (1.0 - u),
                scale / ((1.0 - u) * (1.0 - u)),
            ),
        };
        nodes.push(node);
        weights.push(du * jac);
    }
    Ok(QuadratureGrid {
        lower_endpoint: lower,
        map_kind,
        nodes,
        weights,
        scale,
    })
}

impl QuadratureGrid {
    pub fn count(&self) -> usize {
        self.nodes.len()
    }

    /// Apply the rule to `f`.
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }

    /// Weighted dot product of two node tables.
    pub fn dot(&self, f: &[f64], g: &[f64]) -> Result<f64> {
        if f.len() != self.count() || g.len() != self.count() {
            return Err(Error::Parameter(format!(
                "table length mismatch: grid has {} nodes, tables have {} and {}",
                self.count(),
                f.len(),
                g.len()
            )));
        }
        Ok(self
            .weights
            .iter()
            .zip(f.iter().zip(g))
            .map(|(&w, (&a, &b))| w * a * b)
            .sum())
    }
}

/// Composite Gauss-Legendre rule on a finite interval `[lo, hi]`.
///
/// `per_panel` nodes on each of `panels` equal subintervals. Used for the
/// two-sided integrals (epsilon operator, calligraphic left tails) where the
/// integrand oscillates on a known scale.
pub fn composite_gl(lo: f64, hi: f64, panels: usize, per_panel: usize) -> (Vec<f64>, Vec<f64>) {
    let (gx, gw) = gauss_legendre(per_panel);
    let mut nodes = Vec::with_capacity(panels * per_panel);
    let mut weights = Vec::with_capacity(panels * per_panel);
    let h = (hi - lo) / panels as f64;
    for p in 0..panels {
        let a = lo + p as f64 * h;
        let mid = a + 0.5 * h;
        for (&x, &w) in gx.iter().zip(&gw) {
            nodes.push(mid + 0.5 * h * x);
            weights.push(0.5 * h * w);
        }
    }
    (nodes, weights)
}
