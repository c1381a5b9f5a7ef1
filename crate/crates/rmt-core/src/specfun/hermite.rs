//! Weighted Hermite functions phi_k(x) = (2^k k! sqrt(pi))^{-1/2} H_k(x) e^{-x^2/2}.
//!
//! Evaluation runs the weighted three-term recurrence
//!   phi_{k+1} = x sqrt(2/(k+1)) phi_k - sqrt(k/(k+1)) phi_{k-1}
//! with a tracked power-of-two exponent, so the Gaussian prefactor may
//! underflow f64 (large |x|, large k) without destroying the recurrence.

use crate::error::{ensure_finite, Error, Result};

pub const HERMITE_K_MAX: usize = 10_000;

/// phi_k(x).
pub fn hermite_phi(k: usize, x: f64) -> Result<f64> {
    ensure_finite("x", x)?;
    if k > HERMITE_K_MAX {
        return Err(Error::Capability(format!(
            "hermite_phi supports k <= {HERMITE_K_MAX}, got {k}"
        )));
    }
    let (curr, _prev) = phi_pair_raw(k, x);
    Ok(curr)
}

/// `(phi_n(x), phi_{n-1}(x))` in one recurrence pass; n >= 1.
pub fn hermite_phi_pair(n: usize, x: f64) -> Result<(f64, f64)> {
    ensure_finite("x", x)?;
    if n == 0 {
        return Err(Error::Parameter("pair evaluation needs n >= 1".into()));
    }
    if n > HERMITE_K_MAX {
        return Err(Error::Capability(format!(
            "hermite_phi_pair supports n <= {HERMITE_K_MAX}, got {n}"
        )));
    }
    let (curr, prev) = phi_pair_raw(n, x);
    Ok((curr, prev))
}

/// Recurrence with a shared binary exponent; returns (phi_k, phi_{k-1}).
fn phi_pair_raw(k: usize, x: f64) -> (f64, f64) {
    // log phi_0 = -x^2/2 - ln(pi)/4
    let log0 = -0.5 * x * x - 0.25 * std::f64::consts::PI.ln();
    let mut exp2 = (log0 / std::f64::consts::LN_2).floor();
    let mut curr = (log0 - exp2 * std::f64::consts::LN_2).exp();
    let mut prev = 0.0f64;
    for j in 0..k {
        let jf = j as f64;
        let next = x * (2.0 / (jf + 1.0)).sqrt() * curr - (jf / (jf + 1.0)).sqrt() * prev;
        prev = curr;
        curr = next;
        let mag = curr.abs().max(prev.abs());
        if mag > 1e150 || (mag < 1e-150 && mag > 0.0) {
            let shift = mag.log2().floor();
            let scale = (-shift).exp2();
            curr *= scale;
            prev *= scale;
            exp2 += shift;
        }
    }
    let factor = exp2.exp2();
    if factor == 0.0 || !factor.is_finite() {
        // genuine under/overflow of the final value
        let sign_c = curr.signum();
        let sign_p = prev.signum();
        if exp2 < 0.0 {
            return (0.0 * sign_c, 0.0 * sign_p);
        }
        return (f64::INFINITY * sign_c, f64::INFINITY * sign_p);
    }
    (curr * factor, prev * factor)
}

/// The edge-scaled pair phi = (n/2)^{1/4} phi_n, psi = (n/2)^{1/4} phi_{n-1}.
pub fn scaled_pair(n: usize, x: f64) -> Result<(f64, f64)> {
    let (pn, pn1) = hermite_phi_pair(n, x)?;
    let s = (n as f64 / 2.0).powf(0.25);
    Ok((s * pn, s * pn1))
}
