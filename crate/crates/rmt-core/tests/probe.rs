use rmt_core::asymptotics::*;
use rmt_core::finite_n::{c_phi, c_psi, Ensemble};
use rmt_core::specfun::ScalingParams;

#[test]
fn probe_theorem_orders() {
    let s = 0.0;
    // true nu(s) = int_s^inf p dx via the Airy sweep
    let cc = 0.5; let r = identify_nu(s, cc).unwrap();
    let int_p = r.candidates.iter().find(|c| c.0 == "int_p").unwrap().1;
    println!("nu extracted={:+.6}, int_p={:+.6}", r.nu, int_p);
    let nu = NuResolution { s, value: int_p };
    for label in ["eps_goe", "cal_goe", "eps_gse", "cal_gse"] {
        for comp in 0..3usize {
            let mut lines = String::new();
            for order in 0..=2usize {
                let mut errs = Vec::new();
                for &n in &[16u32, 64, 256] {
                    let p = ScalingParams { n, c: cc };
                    let t = p.tau(s);
                    let pair = ab_integrals(n, t).unwrap();
                    let tv = theorem_expansions(s, p, order, Some(&nu)).unwrap();
                    let (cf, th): (f64, f64) = match label {
                        "eps_goe" => {
                            let v = closed_form_eps(&pair, c_phi(n)).unwrap();
                            ([v.0, v.1, v.2][comp], [tv.eps_goe.0, tv.eps_goe.1, tv.eps_goe.2][comp])
                        }
                        "cal_goe" => {
                            let v = closed_form_calligraphic(&pair, Ensemble::Goe, c_phi(n)).unwrap();
                            ([v.0, v.1, v.2][comp], [tv.cal_goe.0, tv.cal_goe.1, tv.cal_goe.2][comp])
                        }
                        "eps_gse" => {
                            let v = closed_form_eps(&pair, 0.0).unwrap();
                            ([v.0, v.1, v.2][comp], [tv.eps_gse.0, tv.eps_gse.1, tv.eps_gse.2][comp])
                        }
                        _ => {
                            let v = closed_form_calligraphic(&pair, Ensemble::Gse, c_psi(if n % 2 == 0 { n + 1 } else { n }).unwrap()).unwrap();
                            ([v.0, v.1, v.2][comp], [tv.cal_gse.0, tv.cal_gse.1, tv.cal_gse.2][comp])
                        }
                    };
                    errs.push((cf - th).abs());
                }
                let sl = ((errs[2] / errs[0]).ln()) / ((256f64 / 16.0).ln());
                lines += &format!(" o{order}: [{:.1e} {:.1e} {:.1e}] sl={sl:+.2}", errs[0], errs[1], errs[2]);
            }
            println!("{label}[{comp}]:{lines}");
        }
    }
}
