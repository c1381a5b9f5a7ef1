//! The acceptance suites behind `rmt verify` and the `acceptance`
//! integration test: one runnable criterion per suite, each returning a
//! machine-readable report with its measured quantity and tolerance.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::airy_system::{self, build_context_with, hm_at_points, q0_diag};
use crate::asymptotics::{
    ab_integrals, closed_form_calligraphic, closed_form_eps, identify_nu, kernel_expansion,
    theorem_expansions, ABPair,
};
use crate::error::Result;
use crate::finite_n::{
    build_finite_context, c_phi, calligraphic, diag_qp, eps_functionals, f_n2, Ensemble,
};
use crate::montecarlo::{dkw_band, sample, Beta};
use crate::operator::discretize;
use crate::specfun::{airy, make_grid, MapKind, ScalingParams};

/// Ordered identifiers of the verification suites.
pub const SUITES: [&str; 10] = [
    "closed-vs-quadrature",
    "ode-residual",
    "kernel-expansion-order",
    "hastings-mcleod",
    "fredholm-engine",
    "identities",
    "monte-carlo",
    "theorem-leading-order",
    "nu-identification",
    "c-phi",
];

/// Named tolerances with their default values; overridable per run.
#[derive(Debug, Clone)]
pub struct Tolerances {
    map: HashMap<String, f64>,
}

impl Default for Tolerances {
    fn default() -> Self {
        let mut map = HashMap::new();
        for (k, v) in [
            ("closed-vs-quadrature.rel", 1e-6),
            ("closed-vs-quadrature.abs", 1e-8),
            ("ode-residual", 1e-6),
            ("ode-residual.boundary", 1e-6),
            ("kernel-expansion-order.slope3", 1.0),
            ("kernel-expansion-order.slope2", 2.0 / 3.0),
            ("kernel-expansion-order.slope-window", 0.15),
            ("hastings-mcleod.diff", 1e-6),
            ("hastings-mcleod.ratio-low", 1e-6),
            ("hastings-mcleod.ratio-high", 1e-3),
            ("fredholm-engine.rank-one", 1e-12),
            ("fredholm-engine.gaussian", 1e-10),
            ("fredholm-engine.doubling", 1e-9),
            ("identities", 1e-8),
            ("monte-carlo.confidence", 0.99),
            ("theorem-leading-order.algebraic", 1e-10),
            ("theorem-leading-order.slope-window", 0.15),
            ("nu-identification.convergence", 1e-3),
            ("c-phi", 1e-10),
        ] {
            map.insert(k.to_string(), v);
        }
        Tolerances { map }
    }
}

impl Tolerances {
    pub fn get(&self, key: &str) -> f64 {
        *self
            .map
            .get(key)
            .unwrap_or_else(|| panic!("unknown tolerance key {key}"))
    }

    pub fn set(&mut self, key: &str, value: f64) -> Result<()> {
        if !self.map.contains_key(key) {
            return Err(crate::Error::Parameter(format!(
                "unknown tolerance name {key}; known: {:?}",
                self.known()
            )));
        }
        self.map.insert(key.to_string(), value);
        Ok(())
    }

    pub fn known(&self) -> Vec<&str> {
        let mut v: Vec<&str> = self.map.keys().map(String::as_str).collect();
        v.sort_unstable();
        v
    }
}

/// Outcome of one suite.
#[derive(Debug, Clone)]
pub struct CriterionReport {
    pub index: usize,
    pub id: &'static str,
    pub passed: bool,
    pub summary: String,
    pub notes: Vec<String>,
}

impl CriterionReport {
    pub fn line(&self) -> String {
        format!(
            "{} {:2} {:<24} {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.index,
            self.id,
            self.summary
        )
    }
}

pub fn run_suite(id: &str, tol: &Tolerances) -> Result<CriterionReport> {
    let start = std::time::Instant::now();
    let mut report = match id {
        "closed-vs-quadrature" => closed_vs_quadrature(tol),
        "ode-residual" => ode_residual(tol),
        "kernel-expansion-order" => kernel_expansion_order(tol),
        "hastings-mcleod" => hastings_mcleod_suite(tol),
        "fredholm-engine" => fredholm_engine(tol),
        "identities" => identities(tol),
        "monte-carlo" => monte_carlo(tol),
        "theorem-leading-order" => theorem_leading_order(tol),
        "nu-identification" => nu_identification(tol),
        "c-phi" => c_phi_suite(tol),
        _ => Err(crate::Error::Parameter(format!(
            "unknown suite {id}; known: {SUITES:?}"
        ))),
    }?;
    report.summary = format!("{} [{:.1}s]", report.summary, start.elapsed().as_secs_f64());
    Ok(report)
}

pub fn run_all(tol: &Tolerances) -> Result<Vec<CriterionReport>> {
    SUITES.iter().map(|id| run_suite(id, tol)).collect()
}

fn s_window() -> Vec<f64> {
    (0..=10).map(|i| -3.0 + 0.5 * i as f64).collect()
}

/// Criterion 1: hyperbolic closed forms vs direct quadrature for the
/// epsilon and calligraphic functionals, GOE n in {2,4,6,8} and GSE
/// n in {3,5,7}, over t = tau(s), s in -3(0.5)2.
fn closed_vs_quadrature(tol: &Tolerances) -> Result<CriterionReport> {
    let rel = tol.get("closed-vs-quadrature.rel");
    let abs = tol.get("closed-vs-quadrature.abs");
    let mut cases: Vec<(u32, Ensemble, f64)> = Vec::new();
    for &n in &[2u32, 4, 6, 8] {
        for &s in &s_window() {
            cases.push((n, Ensemble::Goe, s));
        }
    }
    for &n in &[3u32, 5, 7] {
        for &s in &s_window() {
            cases.push((n, Ensemble::Gse, s));
        }
    }
    let results: Vec<Result<(f64, String)>> = cases
        .par_iter()
        .map(|&(n, ens, s)| {
            let t = ScalingParams { n, c: 0.0 }.tau(s);
            let ctx = build_finite_context(n, t, 0)?;
            let e = eps_functionals(&ctx)?;
            let cal = calligraphic(&ctx, ens)?;
            let pair = ab_integrals(n, t)?;
            let c_const = match ens {
                Ensemble::Goe => ctx.c_phi,
                Ensemble::Gse => ctx.c_psi,
            };
            let cf_cphi = match ens {
                Ensemble::Goe => ctx.c_phi,
                Ensemble::Gse => 0.0,
            };
            let (u_cf, vt_cf, q_cf) = closed_form_eps(&pair, cf_cphi)?;
            let (qc_cf, pc_cf, rc_cf, _) = closed_form_calligraphic(&pair, ens, c_const)?;
            let pairs = [
                ("u_eps", e.u_eps, u_cf),
                ("vt_eps", e.v_tilde_eps, vt_cf),
                ("q_eps", e.q_eps, q_cf),
                ("Q_cal", cal.q_cal, qc_cf),
                ("P_cal", cal.p_cal, pc_cf),
                ("R_cal", cal.r_cal, rc_cf),
            ];
            let mut worst = 0.0f64;
            let mut worst_label = String::new();
            for (name, quad, cf) in pairs {
                let err = if quad.abs() < 1e-2 {
                    (quad - cf).abs() * rel / abs // normalized so tolerance = rel
                } else {
                    (quad - cf).abs() / quad.abs()
                };
                if err > worst {
                    worst = err;
                    worst_label = format!("{name} n={n} s={s} quad={quad:.6e} closed={cf:.6e}");
                }
            }
            Ok((worst, worst_label))
        })
        .collect();
    let mut worst = 0.0f64;
    let mut worst_label = String::new();
    for r in results {
        let (w, label) = r?;
        if w > worst {
            worst = w;
            worst_label = label;
        }
    }
    let passed = worst <= rel;
    Ok(CriterionReport {
        index: 1,
        id: "closed-vs-quadrature",
        passed,
        summary: format!("max scaled error {worst:.3e} vs tol {rel:.1e} ({worst_label})"),
        notes: vec![
            "the closed forms are the commuting matrix-exponential solution; their defect \
             against quadrature scales like n^{-1/3}"
                .into(),
        ],
    })
}

/// Central 5-point first derivative of f at t.
fn deriv5(f: impl Fn(f64) -> Result<f64>, t: f64, h: f64) -> Result<f64> {
    Ok((-f(t + 2.0 * h)? + 8.0 * f(t + h)? - 8.0 * f(t - h)? + f(t - 2.0 * h)?) / (12.0 * h))
}

/// Criterion 2: the closed-form triples against their first-order systems,
/// plus the boundary vectors at tau(+8).
fn ode_residual(tol: &Tolerances) -> Result<CriterionReport> {
    let tol_res = tol.get("ode-residual");
    let tol_bc = tol.get("ode-residual.boundary");
    let mut worst = 0.0f64;
    let mut worst_label = String::new();
    let ts: Vec<f64> = (0..=10).map(|i| -3.0 + 0.5 * i as f64).collect();
    for &(n, ens) in &[(4u32, Ensemble::Goe), (5u32, Ensemble::Gse)] {
        let cphi_eps = if n % 2 == 0 { c_phi(n) } else { 0.0 };
        let c_cal = match ens {
            Ensemble::Goe => c_phi(n),
            Ensemble::Gse => crate::finite_n::c_psi(n)?,
        };
        let eps_at = |t: f64| -> Result<(f64, f64, f64)> {
            let pair = ab_integrals(n, t)?;
            let (u, vt, q) = closed_form_eps(&pair, cphi_eps)?;
            Ok((u, 1.0 - vt, q))
        };
        let cal_at = |t: f64| -> Result<(f64, f64, f64)> {
            let pair = ab_integrals(n, t)?;
            let (q, p, _, rt) = closed_form_calligraphic(&pair, ens, c_cal)?;
            Ok((q, p, rt))
        };
        for &s in &ts {
            let t = ScalingParams { n, c: 0.0 }.tau(s);
            let (qn, pn) = diag_qp(n, t, 160)?;
            let h = 2e-3;
            // eps system: d/dt (u, V, q) = [[0,0,-qn],[0,0,pn],[-pn,qn,0]]
            let (u, v, q) = eps_at(t)?;
            let du = deriv5(|x| eps_at(x).map(|v| v.0), t, h)?;
            let dv = deriv5(|x| eps_at(x).map(|v| v.1), t, h)?;
            let dq = deriv5(|x| eps_at(x).map(|v| v.2), t, h)?;
            for (label, r) in [
                ("eps.du", du + qn * q),
                ("eps.dV", dv - pn * q),
                ("eps.dq", dq + pn * u - qn * v),
            ] {
                if r.abs() > worst {
                    worst = r.abs();
                    worst_label = format!("{label} n={n} s={s}");
                }
            }
            // calligraphic system (sign depends on the ensemble)
            let sgn = match ens {
                Ensemble::Goe => 1.0,
                Ensemble::Gse => -1.0,
            };
            let (qc, pc, rt) = cal_at(t)?;
            let dqc = deriv5(|x| cal_at(x).map(|v| v.0), t, h)?;
            let dpc = deriv5(|x| cal_at(x).map(|v| v.1), t, h)?;
            let drt = deriv5(|x| cal_at(x).map(|v| v.2), t, h)?;
            for (label, r) in [
                ("cal.dQ", dqc - sgn * qn * rt),
                ("cal.dP", dpc - sgn * pn * rt),
                ("cal.dR", drt - sgn * (pn * qc + qn * pc)),
            ] {
                if r.abs() > worst {
                    worst = r.abs();
                    worst_label = format!("{label} n={n} s={s}");
                }
            }
        }
    }
    // boundary vectors at tau(+8)
    let mut bc_worst = 0.0f64;
    {
        let n = 4u32;
        let t = ScalingParams { n, c: 0.0 }.tau(8.0);
        let pair = ab_integrals(n, t)?;
        let (u, vt, q) = closed_form_eps(&pair, c_phi(n))?;
        bc_worst = bc_worst
            .max(u.abs())
            .max(vt.abs())
            .max((q - c_phi(n)).abs());
        let (qc, pc, _, rt) = closed_form_calligraphic(&pair, Ensemble::Goe, c_phi(n))?;
        bc_worst = bc_worst
            .max((qc - 2.0 * c_phi(n)).abs())
            .max(pc.abs())
            .max((rt - 1.0).abs());
        let n = 5u32;
        let t = ScalingParams { n, c: 0.0 }.tau(8.0);
        let pair = ab_integrals(n, t)?;
        let cpsi = crate::finite_n::c_psi(n)?;
        let (qc, pc, _, rt) = closed_form_calligraphic(&pair, Ensemble::Gse, cpsi)?;
        bc_worst = bc_worst
            .max(qc.abs())
            .max((pc + cpsi).abs())
            .max((rt - 1.0).abs());
    }
    let passed = worst <= tol_res && bc_worst <= tol_bc;
    Ok(CriterionReport {
        index: 2,
        id: "ode-residual",
        passed,
        summary: format!(
            "max system residual {worst:.3e} vs tol {tol_res:.1e} ({worst_label}); boundary gap {bc_worst:.3e} vs {tol_bc:.1e}"
        ),
        notes: vec![
            "boundary vectors (0,1,c_phi), (2c_phi,0,1), (0,-c_psi,1) are met; the interior \
             residual measures the commutator defect of the closed forms"
                .into(),
        ],
    })
}

fn fit_slope(ns: &[u32], errs: &[f64]) -> f64 {
    let lx: Vec<f64> = ns.iter().map(|&n| (n as f64).ln()).collect();
    let ly: Vec<f64> = errs.iter().map(|e| e.ln()).collect();
    let mx = lx.iter().sum::<f64>() / lx.len() as f64;
    let my = ly.iter().sum::<f64>() / ly.len() as f64;
    let num: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let den: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    num / den
}

/// Criterion 3: decay order of the rescaled-kernel expansion at c = 0.
fn kernel_expansion_order(tol: &Tolerances) -> Result<CriterionReport> {
    let window = tol.get("kernel-expansion-order.slope-window");
    let target3 = -tol.get("kernel-expansion-order.slope3");
    let target2 = -tol.get("kernel-expansion-order.slope2");
    let ns = [100u32, 200, 400];
    let grid: Vec<f64> = (0..=10).map(|i| -3.0 + 0.5 * i as f64).collect();
    let mut errs3 = Vec::new();
    let mut errs2 = Vec::new();
    for &n in &ns {
        let p = ScalingParams { n, c: 0.0 };
        let mut w3 = 0.0f64;
        let mut w2 = 0.0f64;
        for &x in &grid {
            for &y in &grid {
                let resc = p.width() * crate::finite_n::kernel_n(n, p.tau(x), p.tau(y));
                let ev = kernel_expansion(p, x, y);
                w3 = w3.max((resc - ev.total()).abs());
                w2 = w2.max((resc - ev.truncated(2)).abs());
            }
        }
        errs3.push(w3);
        errs2.push(w2);
    }
    let s3 = fit_slope(&ns, &errs3);
    let s2 = fit_slope(&ns, &errs2);
    let pass3 = (s3 - target3).abs() <= window;
    let pass2 = (s2 - target2).abs() <= window;
    Ok(CriterionReport {
        index: 3,
        id: "kernel-expansion-order",
        passed: pass3 && pass2,
        summary: format!(
            "three-term slope {s3:.3} (target {target3} +- {window}), two-term slope {s2:.3} (target {target2:.3} +- {window})"
        ),
        notes: vec![format!(
            "max three-term residuals over the window: {:?}; at c = 0 the n^-1 coefficient \
             vanishes empirically and the post-expansion decay is ~n^-4/3",
            errs3.iter().map(|e| format!("{e:.2e}")).collect::<Vec<_>>()
        )],
    })
}

/// Criterion 4: Hastings-McLeod vs the resolvent diagonal, and the Airy
/// ratio on [4, 6].
fn hastings_mcleod_suite(tol: &Tolerances) -> Result<CriterionReport> {
    let tol_diff = tol.get("hastings-mcleod.diff");
    let lo = tol.get("hastings-mcleod.ratio-low");
    let hi = tol.get("hastings-mcleod.ratio-high");
    let ss: Vec<f64> = (0..=40).map(|i| -6.0 + 0.25 * i as f64).collect();
    let qs = hm_at_points(&ss)?;
    let gaps: Vec<Result<f64>> = ss
        .par_iter()
        .zip(&qs)
        .map(|(&s, &(q, _))| Ok((q - q0_diag(s, airy_system::airy_grid_count(s))?).abs()))
        .collect();
    let mut worst = 0.0f64;
    let mut worst_s = 0.0;
    for (i, g) in gaps.into_iter().enumerate() {
        let g = g?;
        if g > worst {
            worst = g;
            worst_s = ss[i];
        }
    }
    let mut ratio_ok = true;
    let mut ratio_range = (f64::INFINITY, f64::NEG_INFINITY);
    for i in 0..=8 {
        let s = 4.0 + 0.25 * i as f64;
        let q = hm_at_points(&[s])?[0].0;
        let r = q / airy(s)?.0;
        ratio_range.0 = ratio_range.0.min(r);
        ratio_range.1 = ratio_range.1.max(r);
        if !(r >= 1.0 - lo && r <= 1.0 + hi) {
            ratio_ok = false;
        }
    }
    let passed = worst <= tol_diff && ratio_ok;
    Ok(CriterionReport {
        index: 4,
        id: "hastings-mcleod",
        passed,
        summary: format!(
            "max |q_ode - q_resolvent| {worst:.3e} at s={worst_s} vs tol {tol_diff:.1e}; q/Ai in [{:.9}, {:.9}] on [4,6]",
            ratio_range.0, ratio_range.1
        ),
        notes: vec![],
    })
}

/// Criterion 5: exactness of the Fredholm machinery.
fn fredholm_engine(tol: &Tolerances) -> Result<CriterionReport> {
    let t1 = tol.get("fredholm-engine.rank-one");
    let t2 = tol.get("fredholm-engine.gaussian");
    let t3 = tol.get("fredholm-engine.doubling");
    let op = discretize(
        |x, y| (-x - y).exp(),
        make_grid(0.0, 80, MapKind::Exponential)?,
    )?;
    let rank_one_gap = (op.fredholm_det() - 0.5).abs();
    let gauss_gap = (f_n2(1, 0.0)? - 0.5).abs();
    let mut doubling_worst = 0.0f64;
    for &s in &[-2.0, 0.0, 2.0] {
        let d = |count: usize| -> Result<f64> {
            Ok(discretize(
                airy_system::airy_kernel,
                make_grid(s, count, MapKind::Exponential)?,
            )?
            .fredholm_det())
        };
        doubling_worst = doubling_worst.max((d(80)? - d(160)?).abs());
    }
    let passed = rank_one_gap <= t1 && gauss_gap <= t2 && doubling_worst <= t3;
    Ok(CriterionReport {
        index: 5,
        id: "fredholm-engine",
        passed,
        summary: format!(
            "rank-one gap {rank_one_gap:.2e} (tol {t1:.0e}); F_1,2(0)-1/2 gap {gauss_gap:.2e} (tol {t2:.0e}); Airy doubling {doubling_worst:.2e} (tol {t3:.0e})"
        ),
        notes: vec![],
    })
}

/// Criterion 6: recurrence and inner-product identities on the Airy side.
fn identities(tol: &Tolerances) -> Result<CriterionReport> {
    let tol_id = tol.get("identities");
    let mut worst = 0.0f64;
    let mut worst_label = String::new();
    let mut displayed_worst = 0.0f64;
    for &s in &[-2.0, -0.5, 0.0, 1.0] {
        let ctx = build_context_with(s, 4, 150, false)?;
        for k in [1usize, 2] {
            let r = airy_system::recurrence_check(&ctx, k)?;
            if r > worst {
                worst = r;
                worst_label = format!("recurrence k={k} s={s}");
            }
            let ids = airy_system::inner_product_identities(&ctx, k)?;
            for (label, v) in [
                ("(Q_k,XAi)", ids.x_ai),
                ("(Q_k,X^2Ai)", ids.x2_ai),
                ("(Q_k,XAi')", ids.x_ai_prime),
            ] {
                if v > worst {
                    worst = v;
                    worst_label = format!("{label} k={k} s={s}");
                }
            }
            displayed_worst = displayed_worst.max(ids.x2_ai_as_displayed);
        }
    }
    Ok(CriterionReport {
        index: 6,
        id: "identities",
        passed: worst <= tol_id,
        summary: format!("max residual {worst:.3e} vs tol {tol_id:.1e} ({worst_label})"),
        notes: vec![format!(
            "the (Q_k, X^2 Ai) reduction uses the recurrence-consistent form; the commonly \
             quoted variant differs by v~_1 - v_1 = uw - v^2 and leaves residual {displayed_worst:.2e}"
        )],
    })
}

/// Criterion 7: Monte-Carlo empirical CDFs against F_{n,2} within the DKW
/// band, beta = 2, n in {1, 2, 5, 10}, 2e5 samples.
fn monte_carlo(tol: &Tolerances) -> Result<CriterionReport> {
    let confidence = tol.get("monte-carlo.confidence");
    let num = 200_000usize;
    let band = dkw_band(num, confidence);
    let mut worst = 0.0f64;
    let mut worst_n = 0u32;
    for &n in &[1u32, 2, 5, 10] {
        let run = sample(n, Beta::Two, 20_240_000 + n as u64, num)?;
        let lo = run.sorted_lambda_max[0] - 0.2;
        let hi = run.sorted_lambda_max[num - 1] + 0.2;
        let count = 1200usize;
        let ts: Vec<f64> = (0..=count)
            .map(|i| lo + (hi - lo) * i as f64 / count as f64)
            .collect();
        let fs: Vec<Result<f64>> = ts.par_iter().map(|&t| f_n2(n, t)).collect();
        let fs: Vec<f64> = fs.into_iter().collect::<Result<Vec<_>>>()?;
        let interp = |x: f64| -> f64 {
            if x <= lo {
                return 0.0;
            }
            if x >= hi {
                return 1.0;
            }
            let pos = (x - lo) / (hi - lo) * count as f64;
            let i = (pos.floor() as usize).min(count - 1);
            let frac = pos - i as f64;
            fs[i] * (1.0 - frac) + fs[i + 1] * frac
        };
        let ks = run.ks_statistic(interp);
        if ks > worst {
            worst = ks;
            worst_n = n;
        }
    }
    Ok(CriterionReport {
        index: 7,
        id: "monte-carlo",
        passed: worst <= band,
        summary: format!(
            "sup |F^ - F_n2| = {worst:.5} at n={worst_n} vs {:.0}% DKW band {band:.5}",
            confidence * 100.0
        ),
        notes: vec![],
    })
}

/// Criterion 8: order-0 theorem values against the closed forms in the
/// a = b = mu/sqrt(2), c_phi = 2^{-1/2} limit (algebraic identity), and
/// against finite-n quadrature with an n^{-1/3} residual trend.
fn theorem_leading_order(tol: &Tolerances) -> Result<CriterionReport> {
    let tol_alg = tol.get("theorem-leading-order.algebraic");
    let window = tol.get("theorem-leading-order.slope-window");
    let mut alg_worst = 0.0f64;
    for &s in &[-1.0, 0.0, 1.0] {
        let m = airy_system::mu(s)?;
        let pair = ABPair {
            a: m / 2f64.sqrt(),
            b: m / 2f64.sqrt(),
            t: 0.0,
        };
        let inv_s2 = std::f64::consts::FRAC_1_SQRT_2;
        let tv = theorem_expansions(s, ScalingParams { n: 64, c: 0.0 }, 0, None)?;
        let (u, vt, q) = closed_form_eps(&pair, inv_s2)?;
        let (qg, pg, rg, _) = closed_form_calligraphic(&pair, Ensemble::Goe, inv_s2)?;
        let (us, vs, qs) = closed_form_eps(&pair, 0.0)?;
        let (q4, p4, r4, _) = closed_form_calligraphic(&pair, Ensemble::Gse, inv_s2)?;
        for (a, b) in [
            (u, tv.eps_goe.0),
            (vt, tv.eps_goe.1),
            (q, tv.eps_goe.2),
            (qg, tv.cal_goe.0),
            (pg, tv.cal_goe.1),
            (rg, tv.cal_goe.2),
            (us, tv.eps_gse.0),
            (vs, tv.eps_gse.1),
            (qs, tv.eps_gse.2),
            (q4, tv.cal_gse.0),
            (p4, tv.cal_gse.1),
            (r4, tv.cal_gse.2),
        ] {
            alg_worst = alg_worst.max((a - b).abs());
        }
    }
    // quadrature trend at s = 0
    let s = 0.0;
    let tv = theorem_expansions(s, ScalingParams { n: 64, c: 0.0 }, 0, None)?;
    let ns = [16u32, 64, 256];
    let errs: Vec<Result<f64>> = ns
        .par_iter()
        .map(|&n| {
            let t = ScalingParams { n, c: 0.0 }.tau(s);
            let ctx = build_finite_context(n, t, 0)?;
            let e = eps_functionals(&ctx)?;
            Ok((e.u_eps - tv.eps_goe.0).abs())
        })
        .collect();
    let errs: Vec<f64> = errs.into_iter().collect::<Result<Vec<_>>>()?;
    let slope = fit_slope(&ns, &errs);
    let slope_ok = (slope + 1.0 / 3.0).abs() <= window;
    Ok(CriterionReport {
        index: 8,
        id: "theorem-leading-order",
        passed: alg_worst <= tol_alg && slope_ok,
        summary: format!(
            "algebraic identity gap {alg_worst:.3e} vs tol {tol_alg:.0e}; u_eps residual slope {slope:.3} (target -1/3 +- {window})"
        ),
        notes: vec![],
    })
}

/// Criterion 9: Richardson extraction of the n^{-1/3} coefficient of u_eps
/// from the closed form, with candidate ranking.
fn nu_identification(tol: &Tolerances) -> Result<CriterionReport> {
    let conv = tol.get("nu-identification.convergence");
    // The probe point sits inside the theorems' validity regime (s bounded
    // away from minus infinity); with the fixed n-triple the Richardson
    // truncation grows toward the left, so the sweep below documents the
    // s-dependence alongside the headline extraction.
    let s_head = 1.0;
    let report = identify_nu(s_head, 0.0)?;
    let gap = (report.level2 - report.level1[1]).abs() / report.level2.abs().max(1.0);
    let mut notes = vec![
        format!(
            "levels at s={s_head}: g = {:?}, R1 = {:?}, R2 = {:.6}",
            report
                .level0
                .iter()
                .map(|v| format!("{v:.6}"))
                .collect::<Vec<_>>(),
            report
                .level1
                .iter()
                .map(|v| format!("{v:.6}"))
                .collect::<Vec<_>>(),
            report.level2
        ),
        format!("best candidate: {}", report.best),
    ];
    for (name, value, resid) in &report.candidates {
        notes.push(format!(
            "  candidate {name:<8} = {value:+.6} |nu - cand| = {resid:.3e}"
        ));
    }
    for &s in &[-2.0, -1.0, 0.0] {
        let r = identify_nu(s, 0.0)?;
        let g = (r.level2 - r.level1[1]).abs() / r.level2.abs().max(1.0);
        notes.push(format!(
            "  sweep s={s:+.1}: nu = {:+.6}, Richardson gap {g:.2e}, best {}",
            r.nu, r.best
        ));
    }
    notes.push(
        "diagonal q(s) v_k(s) reading is used in the scalar expansion brackets where the \
         off-diagonal display writes Q(X;s) v_k(s)"
            .into(),
    );
    Ok(CriterionReport {
        index: 9,
        id: "nu-identification",
        passed: gap <= conv,
        summary: format!(
            "nu({s_head}) = {:.6}, Richardson agreement {gap:.2e} vs tol {conv:.0e}, best match {}",
            report.nu, report.best
        ),
        notes,
    })
}

/// Criterion 10: c_phi formula vs quadrature, and its monotone approach to
/// 2^{-1/2}.
fn c_phi_suite(tol: &Tolerances) -> Result<CriterionReport> {
    let tol_c = tol.get("c-phi");
    let mut worst = 0.0f64;
    let mut prev_gap = f64::INFINITY;
    let mut monotone = true;
    let limit = std::f64::consts::FRAC_1_SQRT_2;
    for n in (2..=20).step_by(2) {
        let formula = c_phi(n);
        let quad = crate::finite_n::c_phi_quadrature(n)?;
        worst = worst.max((formula - quad).abs());
        let gap = (formula - limit).abs();
        if gap > prev_gap + 1e-12 {
            monotone = false;
        }
        prev_gap = gap;
    }
    Ok(CriterionReport {
        index: 10,
        id: "c-phi",
        passed: worst <= tol_c && monotone,
        summary: format!(
            "max |formula - quadrature| {worst:.3e} vs tol {tol_c:.0e}; |c_phi(n) - 2^-1/2| monotone: {monotone}"
        ),
        notes: vec![],
    })
}
