//! Nystrom discretization of symmetric integral operators on (t, inf):
//! Fredholm determinants, resolvent application, and L^2 inner products.
//!
//! The kernel matrix carries the symmetric square-root weighting
//! K_ij = sqrt(w_i) k(x_i, x_j) sqrt(w_j), so a symmetric kernel yields a
//! symmetric matrix and (I - K) admits a Cholesky factorization whenever the
//! operator norm is below one.

use std::sync::Arc;

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};

use crate::error::{Error, Result};
use crate::specfun::QuadratureGrid;

type Kernel = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

/// A symmetric kernel discretized on a [`QuadratureGrid`], with the
/// factorization of (I - K) computed at construction.
pub struct DiscretizedOperator {
    grid: QuadratureGrid,
    kernel: Kernel,
    kernel_matrix: DMatrix<f64>,
    factor: Cholesky<f64, Dyn>,
}

impl std::fmt::Debug for DiscretizedOperator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("DiscretizedOperator")
            .field("lower", &self.grid.lower_endpoint)
            .field("count", &self.grid.count())
            .finish()
    }
}

/// Discretize `kernel` on `grid`.
///
/// Fails if the kernel is non-finite at a node pair, or if the spectral
/// radius of the discretized operator reaches one (detected through the
/// definiteness of I -+ K).
pub fn discretize(
    kernel: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
    grid: QuadratureGrid,
) -> Result<DiscretizedOperator> {
    DiscretizedOperator::new(Arc::new(kernel), grid)
}

impl DiscretizedOperator {
    pub fn new(kernel: Kernel, grid: QuadratureGrid) -> Result<Self> {
        let n = grid.count();
        let sw: Vec<f64> = grid.weights.iter().map(|w| w.sqrt()).collect();
        let mut m = DMatrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let v = kernel(grid.nodes[i], grid.nodes[j]);
                if !v.is_finite() {
                    return Err(Error::KernelValue {
                        x: grid.nodes[i],
                        y: grid.nodes[j],
                    });
                }
                let k = sw[i] * v * sw[j];
                m[(i, j)] = k;
                m[(j, i)] = k;
            }
        }
        let id = DMatrix::identity(n, n);
        let i_minus = &id - &m;
        let i_plus = &id + &m;
        let factor = match i_minus.clone().cholesky() {
            Some(c) => c,
            None => {
                let pivot = smallest_pivot(&i_minus);
                return if pivot.abs() < 1e-12 {
                    Err(Error::Singular { pivot })
                } else {
                    Err(Error::SpectralRadius {
                        lower: grid.lower_endpoint,
                    })
                };
            }
        };
        if i_plus.cholesky().is_none() {
            return Err(Error::SpectralRadius {
                lower: grid.lower_endpoint,
            });
        }
        Ok(Self {
            grid,
            kernel,
            kernel_matrix: m,
            factor,
        })
    }

    pub fn grid(&self) -> &QuadratureGrid {
        &self.grid
    }

    /// The weighted kernel matrix sqrt(w_i) k(x_i,x_j) sqrt(w_j).
    pub fn kernel_matrix(&self) -> &DMatrix<f64> {
        &self.kernel_matrix
    }

    pub fn kernel_at(&self, x: f64, y: f64) -> f64 {
        (self.kernel)(x, y)
    }

    /// det(I - K).
    pub fn fredholm_det(&self) -> f64 {
        self.factor.determinant()
    }

    /// Sum of the logs of the Cholesky pivots; equals ln det(I - K).
    pub fn log_det(&self) -> f64 {
        2.0 * self
            .factor
            .l_dirty()
            .diagonal()
            .iter()
            .map(|d| d.ln())
            .sum::<f64>()
    }

    /// (I - K)^{-1} f sampled at the grid nodes, for `f` given at the nodes.
    pub fn resolvent_apply(&self, f: &[f64]) -> Result<Vec<f64>> {
        let n = self.grid.count();
        if f.len() != n {
            return Err(Error::Parameter(format!(
                "resolvent_apply: table has {} entries, grid has {} nodes",
                f.len(),
                n
            )));
        }
        let sw: Vec<f64> = self.grid.weights.iter().map(|w| w.sqrt()).collect();
        let rhs = DVector::from_iterator(n, f.iter().zip(&sw).map(|(&v, &s)| v * s));
        let sol = self.factor.solve(&rhs);
        Ok(sol.iter().zip(&sw).map(|(&v, &s)| v / s).collect())
    }

    /// Nystrom extension of a resolvent solve to an arbitrary point:
    /// (rho f)(x) = f(x) + sum_j w_j k(x, x_j) (rho f)(x_j).
    pub fn extend(&self, x: f64, f_at_x: f64, resolvent_values: &[f64]) -> f64 {
        let s: f64 = self
            .grid
            .nodes
            .iter()
            .zip(self.grid.weights.iter().zip(resolvent_values))
            .map(|(&xj, (&wj, &gj))| wj * (self.kernel)(x, xj) * gj)
            .sum();
        f_at_x + s
    }

    /// L^2(t, inf) inner product of two node tables.
    pub fn inner(&self, f: &[f64], g: &[f64]) -> Result<f64> {
        self.grid.dot(f, g)
    }

    /// Resolvent kernel value R(x, y) = (rho K)(x, y) for arbitrary x
    /// (second argument fixed at y), via R(., y) = rho K(., y).
    pub fn resolvent_kernel(&self, x: f64, y: f64) -> Result<f64> {
        let col: Vec<f64> = self
            .grid
            .nodes
            .iter()
            .map(|&xi| (self.kernel)(xi, y))
            .collect();
        let r = self.resolvent_apply(&col)?;
        Ok(self.extend(x, (self.kernel)(x, y), &r))
    }
}

fn smallest_pivot(m: &DMatrix<f64>) -> f64 {
    let lu = m.clone().lu();
    let mut smallest = f64::INFINITY;
    for i in 0..m.nrows() {
        let d = lu.u()[(i, i)].abs();
        if d < smallest {
            smallest = d;
        }
    }
    smallest
}
