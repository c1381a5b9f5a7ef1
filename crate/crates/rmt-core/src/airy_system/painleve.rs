//! Hastings-McLeod solution of Painleve II, q'' = s q + 2 q^3, singled out by
//! q(s) ~ Ai(s) as s -> +inf.
//!
//! The solver anchors at s = 8 with (Ai, Ai') data (the asymptotic matching
//! error there is ~1e-22) and marches leftward with adaptive Taylor steps.
//! The ODE is polynomial, so Taylor coefficients come from Cauchy products:
//!   (k+2)(k+1) a_{k+2} = s0 a_k + a_{k-1} + 2 (a*a*a)_k.

use crate::error::{Error, Result};
use crate::specfun::airy;

const ANCHOR: f64 = 8.0;
const ORDER: usize = 22;

pub struct HastingsMcleodTable {
    pub s: Vec<f64>,
    pub q: Vec<f64>,
    pub q_prime: Vec<f64>,
}

/// Solve on the uniform grid s_min, s_min + step, ..., <= s_max.
pub fn hastings_mcleod(s_min: f64, s_max: f64, step: f64) -> Result<HastingsMcleodTable> {
    if !(s_min >= -10.0 && s_max <= ANCHOR && s_min < s_max) {
        return Err(Error::Parameter(format!(
            "hastings_mcleod needs -10 <= s_min < s_max <= {ANCHOR}, got [{s_min}, {s_max}]"
        )));
    }
    if !step.is_finite() || step <= 0.0 {
        return Err(Error::Parameter(format!(
            "step must be positive, got {step}"
        )));
    }
    let count = ((s_max - s_min) / step).floor() as usize + 1;
    let mut points: Vec<f64> = (0..count).map(|i| s_min + i as f64 * step).collect();
    points.reverse(); // descending for the leftward march
    let vals = hm_at_points(&points)?;
    let mut s = points;
    s.reverse();
    let mut q: Vec<f64> = vals.iter().map(|v| v.0).collect();
    let mut qp: Vec<f64> = vals.iter().map(|v| v.1).collect();
    q.reverse();
    qp.reverse();
    Ok(HastingsMcleodTable { s, q, q_prime: qp })
}

/// Evaluate (q, q') at arbitrary points (each >= -10.5); points need not be
/// sorted.
pub fn hm_at_points(points: &[f64]) -> Result<Vec<(f64, f64)>> {
    let mut idx: Vec<usize> = (0..points.len()).collect();
    idx.sort_by(|&a, &b| points[b].partial_cmp(&points[a]).unwrap());
    for &p in points {
        if !(-10.5..=ANCHOR).contains(&p) {
            return Err(Error::Parameter(format!(
                "Hastings-McLeod evaluation restricted to [-10.5, {ANCHOR}], got {p}"
            )));
        }
    }
    let mut out = vec![(0.0, 0.0); points.len()];
    let (ai, aip) = airy(ANCHOR)?;
    let mut x = ANCHOR;
    let mut y = ai;
    let mut yp = aip;
    let mut h: f64 = -0.05;
    let mut next = 0usize;
    // emit any points at the anchor itself
    while next < idx.len() && points[idx[next]] >= x - 1e-14 {
        out[idx[next]] = (y, yp);
        next += 1;
    }
    let lowest = points[*idx.last().unwrap()];
    while next < idx.len() && x > lowest - 1e-14 {
        if y.abs() > 5.0 {
            return Err(Error::Instability(
                "Painleve II solution left the Hastings-McLeod branch; reduce the step".into(),
            ));
        }
        let a = taylor_coeffs(x, y, yp);
        // adapt: keep the last two terms below 1e-16 of scale
        let scale = y.abs().max(1.0);
        let tail = a[ORDER].abs() * h.abs().powi(ORDER as i32)
            + a[ORDER - 1].abs() * h.abs().powi(ORDER as i32 - 1);
        if tail > 1e-16 * scale && h.abs() > 1e-3 {
            h *= 0.5;
            continue;
        }
        let x_next = x + h;
        // dense output inside (x_next, x]
        while next < idx.len() && points[idx[next]] >= x_next - 1e-14 {
            let xi = points[idx[next]] - x;
            out[idx[next]] = eval_taylor(&a, xi);
            next += 1;
        }
        let (ny, nyp) = eval_taylor(&a, h);
        y = ny;
        yp = nyp;
        x = x_next;
        if tail < 1e-19 * scale {
            h = (h * 1.3).max(-0.1);
        }
    }
    Ok(out)
}

fn taylor_coeffs(x0: f64, y: f64, yp: f64) -> [f64; ORDER + 1] {
    let mut a = [0.0; ORDER + 1];
    a[0] = y;
    a[1] = yp;
    for k in 0..ORDER - 1 {
        // cubic Cauchy product coefficient (a*a*a)_k
        let mut b = 0.0;
        for i in 0..=k {
            let mut aa = 0.0;
            for j in 0..=i {
                aa += a[j] * a[i - j];
            }
            b += aa * a[k - i];
        }
        let linear = x0 * a[k] + if k > 0 { a[k - 1] } else { 0.0 };
        a[k + 2] = (linear + 2.0 * b) / (((k + 2) * (k + 1)) as f64);
    }
    a
}

fn eval_taylor(a: &[f64; ORDER + 1], h: f64) -> (f64, f64) {
    let mut v = 0.0;
    let mut d = 0.0;
    for k in (1..=ORDER).rev() {
        v = (v + a[k]) * h;
        d = d * h + a[k] * k as f64;
    }
    (a[0] + v, d)
}
