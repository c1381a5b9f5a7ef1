//! The edge rescaling tau(x) = sqrt(2(n+c)) + 2^{-1/2} n^{-1/6} x.

use crate::error::{Error, Result};

/// The free parameters of the edge rescaling: matrix size `n` and shift `c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalingParams {
    pub n: u32,
    pub c: f64,
}

impl ScalingParams {
    pub fn new(n: u32, c: f64) -> Result<Self> {
        if n < 1 {
            return Err(Error::Parameter("scaling requires n >= 1".into()));
        }
        if !c.is_finite() {
            return Err(Error::Parameter(format!(
                "scaling shift c must be finite, got {c}"
            )));
        }
        Ok(Self { n, c })
    }

    /// Center of the edge window, sqrt(2(n+c)).
    pub fn edge(&self) -> f64 {
        (2.0 * (self.n as f64 + self.c)).sqrt()
    }

    /// Width of the edge window, 2^{-1/2} n^{-1/6}; also d tau / dx.
    pub fn width(&self) -> f64 {
        std::f64::consts::FRAC_1_SQRT_2 * (self.n as f64).powf(-1.0 / 6.0)
    }

    pub fn tau(&self, x: f64) -> f64 {
        self.edge() + self.width() * x
    }

    pub fn tau_inverse(&self, y: f64) -> f64 {
        (y - self.edge()) / self.width()
    }
}
