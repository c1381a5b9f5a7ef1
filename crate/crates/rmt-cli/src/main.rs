//! Batch front-end: compute tables, run the verification suites, and emit
//! CSV for external plotting.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage/config error,
//! 3 numeric failure.

use std::fmt::Write as _;
use std::io::Write as _;
use std::process::ExitCode;

use anyhow::Context as _;
use clap::{Args, Parser, Subcommand, ValueEnum};

use rmt_core::acceptance::{run_suite, Tolerances, SUITES};
use rmt_core::airy_system::build_context_with;
use rmt_core::asymptotics::{
    ab_integrals, closed_form_calligraphic, closed_form_eps, identify_nu, kernel_expansion,
    phi_expansion, qn_pn_expansion, qni_pni_expansion, rn_expansion, theorem_expansions,
    HermiteIndex, NuResolution,
};
use rmt_core::finite_n::{
    build_finite_context_with, calligraphic, eps_functionals, f_n2, Ensemble,
};
use rmt_core::montecarlo::{dkw_band, empirical_cdf, sample, Beta};
use rmt_core::specfun::ScalingParams;

#[derive(Parser)]
#[command(
    name = "rmt",
    version,
    about = "Gaussian-ensemble edge statistics: Fredholm determinants, epsilon functionals, \
             hyperbolic closed forms, large-n expansions, Monte-Carlo oracles"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate F_{n,2}, epsilon functionals, or calligraphic integrals as CSV
    Table(TableArgs),
    /// Run the verification suites and report pass/fail per criterion
    Verify(VerifyArgs),
    /// Sample lambda_max and emit the empirical CDF with DKW bands
    Mc(McArgs),
    /// Evaluate the large-n expansions term by term
    Expansion(ExpansionArgs),
}

#[derive(Args)]
struct TableArgs {
    /// Tabulate the Fredholm determinant F_{n,2}(t)
    #[arg(long, conflicts_with_all = ["eps", "calligraphic"])]
    fn2: bool,
    /// Tabulate epsilon functionals: quadrature and closed form side by side
    #[arg(long, conflicts_with = "calligraphic")]
    eps: bool,
    /// Tabulate calligraphic integrals: quadrature and closed form
    #[arg(long)]
    calligraphic: bool,
    /// Matrix sizes, comma separated
    #[arg(long, value_delimiter = ',', required = true)]
    n: Vec<u32>,
    /// Single evaluation point t
    #[arg(long, conflicts_with = "t_grid", allow_negative_numbers = true)]
    t: Option<f64>,
    /// t grid lo:hi:step (inclusive)
    #[arg(long, value_name = "LO:HI:STEP", allow_hyphen_values = true)]
    t_grid: Option<String>,
    /// Ensemble for the calligraphic table
    #[arg(long, value_enum)]
    ensemble: Option<EnsembleArg>,
    /// Operator grid size
    #[arg(long, default_value_t = 160)]
    grid_size: usize,
    /// Output path (stdout when omitted)
    #[arg(long)]
    out: Option<std::path::PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Run only the named suites (repeatable)
    #[arg(long = "only", value_name = "SUITE")]
    only: Vec<String>,
    /// Override a named tolerance, e.g. --tol identities=1e-30 (repeatable)
    #[arg(long = "tol", value_name = "NAME=VALUE")]
    tol: Vec<String>,
}

#[derive(Args)]
struct McArgs {
    /// Matrix size
    #[arg(long)]
    n: u32,
    /// Ensemble beta: 1, 2 or 4
    #[arg(long)]
    beta: u8,
    /// RNG seed
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Number of samples
    #[arg(long, default_value_t = 100_000)]
    samples: usize,
    /// t grid lo:hi:step for the CDF output (defaults to the sample range)
    #[arg(long, value_name = "LO:HI:STEP", allow_hyphen_values = true)]
    t_grid: Option<String>,
    /// DKW confidence level
    #[arg(long, default_value_t = 0.99)]
    confidence: f64,
    /// Output path (stdout when omitted)
    #[arg(long)]
    out: Option<std::path::PathBuf>,
}

#[derive(Args)]
struct ExpansionArgs {
    /// Which expansion to evaluate
    #[arg(long, value_enum)]
    which: Which,
    /// Matrix size entering the n-powers
    #[arg(long, default_value_t = 100)]
    n: u32,
    /// Rescaling shift c
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    c: f64,
    /// Edge coordinate X
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    x: f64,
    /// Second edge coordinate Y (kernel, rn)
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    y: f64,
    /// Left endpoint s (qn, qni, rn, theorem); single value
    #[arg(long, conflicts_with = "s_grid", allow_negative_numbers = true)]
    s: Option<f64>,
    /// s grid lo:hi:step (theorem tables)
    #[arg(long, value_name = "LO:HI:STEP", allow_hyphen_values = true)]
    s_grid: Option<String>,
    /// Power of the variable for qni
    #[arg(long, default_value_t = 0)]
    i: usize,
    /// Theorem order (0, 1 or 2); orders >= 1 resolve nu first
    #[arg(long, default_value_t = 0)]
    order: usize,
    /// Airy-system grid size
    #[arg(long, default_value_t = 140)]
    grid_size: usize,
    /// Output path (stdout when omitted)
    #[arg(long)]
    out: Option<std::path::PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum EnsembleArg {
    Goe,
    Gse,
}

#[derive(Clone, Copy, ValueEnum)]
enum Which {
    Phi,
    Psi,
    Kernel,
    Qn,
    Rn,
    Qni,
    Theorem,
}

fn main() -> ExitCode {
    if let Ok(threads) = std::env::var("RMT_THREADS") {
        match threads.parse::<usize>() {
            Ok(t) if t >= 1 => {
                rayon::ThreadPoolBuilder::new()
                    .num_threads(t)
                    .build_global()
                    .ok();
            }
            _ => {
                eprintln!("error: RMT_THREADS must be a positive integer, got {threads}");
                return ExitCode::from(2);
            }
        }
    }
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Table(args) => cmd_table(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Mc(args) => cmd_mc(args),
        Command::Expansion(args) => cmd_expansion(args),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            match e.downcast_ref::<rmt_core::Error>() {
                Some(rmt_core::Error::Parameter(_))
                | Some(rmt_core::Error::Capability(_))
                | None => ExitCode::from(2),
                Some(_) => ExitCode::from(3),
            }
        }
    }
}

fn parse_grid(spec: &str) -> anyhow::Result<Vec<f64>> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        anyhow::bail!("grid spec must be LO:HI:STEP, got {spec}");
    }
    let lo: f64 = parts[0].parse()?;
    let hi: f64 = parts[1].parse()?;
    let step: f64 = parts[2].parse()?;
    if !step.is_finite() || step <= 0.0 || !lo.is_finite() || !hi.is_finite() || hi < lo {
        anyhow::bail!("grid spec must satisfy lo <= hi, step > 0, got {spec}");
    }
    let count = ((hi - lo) / step + 1e-9).floor() as usize + 1;
    Ok((0..count).map(|k| lo + k as f64 * step).collect())
}

fn points_from(t: Option<f64>, grid: Option<&str>) -> anyhow::Result<Vec<f64>> {
    match (t, grid) {
        (Some(v), None) => Ok(vec![v]),
        (None, Some(g)) => parse_grid(g),
        (None, None) => anyhow::bail!("one of --t or --t-grid is required"),
        _ => unreachable!("clap conflicts"),
    }
}

struct Csv {
    buf: String,
}

impl Csv {
    fn new(command_echo: &str, extra: &[(&str, String)]) -> Self {
        let mut buf = String::new();
        let _ = writeln!(
            buf,
            "# rmt {} -- {}",
            env!("CARGO_PKG_VERSION"),
            command_echo
        );
        for (k, v) in extra {
            let _ = writeln!(buf, "# {k} = {v}");
        }
        Csv { buf }
    }

    fn header(&mut self, cols: &[&str]) {
        let _ = writeln!(self.buf, "{}", cols.join(","));
    }

    fn row(&mut self, vals: &[f64]) {
        let line: Vec<String> = vals.iter().map(|v| format!("{v:.16e}")).collect();
        let _ = writeln!(self.buf, "{}", line.join(","));
    }

    fn row_labeled(&mut self, head: &str, vals: &[f64]) {
        let line: Vec<String> = vals.iter().map(|v| format!("{v:.16e}")).collect();
        let _ = writeln!(self.buf, "{head},{}", line.join(","));
    }

    fn emit(self, out: Option<&std::path::Path>) -> anyhow::Result<()> {
        match out {
            Some(path) => std::fs::write(path, self.buf)?,
            None => std::io::stdout().write_all(self.buf.as_bytes())?,
        }
        Ok(())
    }
}

fn echo_args() -> String {
    std::env::args().skip(1).collect::<Vec<_>>().join(" ")
}

fn cmd_table(args: TableArgs) -> anyhow::Result<ExitCode> {
    let ts = points_from(args.t, args.t_grid.as_deref())?;
    let mut csv = Csv::new(&echo_args(), &[("grid_size", args.grid_size.to_string())]);
    if args.fn2 {
        csv.header(&["n", "t", "f_n2"]);
        for &n in &args.n {
            for &t in &ts {
                let value = f_n2(n, t).with_context(|| format!("f_n2(n={n}, t={t})"))?;
                csv.row(&[n as f64, t, value]);
            }
        }
    } else if args.eps {
        csv.header(&[
            "n",
            "t",
            "u_eps_quad",
            "vt_eps_quad",
            "q_eps_quad",
            "u_eps_closed",
            "vt_eps_closed",
            "q_eps_closed",
            "max_abs_delta",
        ]);
        for &n in &args.n {
            for &t in &ts {
                let ctx = build_finite_context_with(n, t, 0, args.grid_size)
                    .with_context(|| format!("finite context (n={n}, t={t})"))?;
                let e = eps_functionals(&ctx)
                    .with_context(|| format!("eps_functionals(n={n}, t={t})"))?;
                let pair = ab_integrals(n, t)
                    .with_context(|| format!("ab_integrals(n={n}, t={t})"))?;
                let (u, vt, q) = closed_form_eps(&pair, ctx.c_phi)?;
                let delta = (e.u_eps - u)
                    .abs()
                    .max((e.v_tilde_eps - vt).abs())
                    .max((e.q_eps - q).abs());
                csv.row(&[
                    n as f64,
                    t,
                    e.u_eps,
                    e.v_tilde_eps,
                    e.q_eps,
                    u,
                    vt,
                    q,
                    delta,
                ]);
            }
        }
    } else if args.calligraphic {
        let ens = match args.ensemble {
            Some(EnsembleArg::Goe) => Ensemble::Goe,
            Some(EnsembleArg::Gse) => Ensemble::Gse,
            None => anyhow::bail!("--calligraphic requires --ensemble goe|gse"),
        };
        csv.header(&[
            "n",
            "t",
            "q_cal_quad",
            "p_cal_quad",
            "r_cal_quad",
            "q_cal_closed",
            "p_cal_closed",
            "r_cal_closed",
            "max_abs_delta",
        ]);
        for &n in &args.n {
            for &t in &ts {
                let ctx = build_finite_context_with(n, t, 0, args.grid_size)
                    .with_context(|| format!("finite context (n={n}, t={t})"))?;
                let cal = calligraphic(&ctx, ens)
                    .with_context(|| format!("calligraphic(n={n}, t={t})"))?;
                let pair = ab_integrals(n, t)
                    .with_context(|| format!("ab_integrals(n={n}, t={t})"))?;
                let c_const = match ens {
                    Ensemble::Goe => ctx.c_phi,
                    Ensemble::Gse => ctx.c_psi,
                };
                let (qc, pc, rc, _) = closed_form_calligraphic(&pair, ens, c_const)?;
                let delta = (cal.q_cal - qc)
                    .abs()
                    .max((cal.p_cal - pc).abs())
                    .max((cal.r_cal - rc).abs());
                csv.row(&[
                    n as f64, t, cal.q_cal, cal.p_cal, cal.r_cal, qc, pc, rc, delta,
                ]);
            }
        }
    } else {
        anyhow::bail!("table requires one of --fn2, --eps, --calligraphic");
    }
    csv.emit(args.out.as_deref())?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(args: VerifyArgs) -> anyhow::Result<ExitCode> {
    let mut tol = Tolerances::default();
    for spec in &args.tol {
        let (name, value) = spec
            .split_once('=')
            .ok_or_else(|| anyhow::anyhow!("--tol expects NAME=VALUE, got {spec}"))?;
        tol.set(name, value.parse()?)?;
    }
    let suites: Vec<&str> = if args.only.is_empty() {
        SUITES.to_vec()
    } else {
        let mut v = Vec::new();
        for name in &args.only {
            let found = SUITES
                .iter()
                .find(|s| **s == name.as_str())
                .ok_or_else(|| anyhow::anyhow!("unknown suite {name}; known: {SUITES:?}"))?;
            v.push(*found);
        }
        v
    };
    let mut all_passed = true;
    for id in suites {
        let report = run_suite(id, &tol)?;
        println!("{}", report.line());
        for n in &report.notes {
            println!("      note: {n}");
        }
        all_passed &= report.passed;
    }
    Ok(if all_passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn cmd_mc(args: McArgs) -> anyhow::Result<ExitCode> {
    let beta = Beta::from_value(args.beta)?;
    let run = sample(args.n, beta, args.seed, args.samples)?;
    let ts = match args.t_grid.as_deref() {
        Some(g) => parse_grid(g)?,
        None => {
            let lo = run.sorted_lambda_max[0] - 0.25;
            let hi = run.sorted_lambda_max[run.num_samples - 1] + 0.25;
            (0..=160)
                .map(|i| lo + (hi - lo) * i as f64 / 160.0)
                .collect()
        }
    };
    let pts = empirical_cdf(&run, &ts, args.confidence);
    let mut csv = Csv::new(
        &echo_args(),
        &[
            ("n", args.n.to_string()),
            ("beta", args.beta.to_string()),
            ("seed", args.seed.to_string()),
            ("samples", args.samples.to_string()),
            ("confidence", format!("{}", args.confidence)),
            (
                "dkw_band",
                format!("{:.16e}", dkw_band(args.samples, args.confidence)),
            ),
        ],
    );
    csv.header(&["t", "f_hat", "dkw_lo", "dkw_hi"]);
    for p in pts {
        csv.row(&[
            p.t,
            p.f_hat,
            (p.f_hat - p.band).max(0.0),
            (p.f_hat + p.band).min(1.0),
        ]);
    }
    csv.emit(args.out.as_deref())?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_expansion(args: ExpansionArgs) -> anyhow::Result<ExitCode> {
    let params = ScalingParams::new(args.n, args.c)?;
    let mut csv = Csv::new(&echo_args(), &[]);
    match args.which {
        Which::Phi | Which::Psi => {
            let which = match args.which {
                Which::Phi => HermiteIndex::N,
                _ => HermiteIndex::NMinus1,
            };
            let ev = phi_expansion(params, args.x, which);
            csv.header(&["x", "term0", "term1", "term2", "total"]);
            csv.row(&[args.x, ev.term0, ev.term1, ev.term2, ev.total()]);
        }
        Which::Kernel => {
            let ev = kernel_expansion(params, args.x, args.y);
            csv.header(&["x", "y", "term0", "term1", "term2", "total"]);
            csv.row(&[args.x, args.y, ev.term0, ev.term1, ev.term2, ev.total()]);
        }
        Which::Qn => {
            let s = args
                .s
                .ok_or_else(|| anyhow::anyhow!("--which qn needs --s"))?;
            let ctx = build_context_with(s, 2, args.grid_size, false)?;
            let (q, p) = qn_pn_expansion(params, args.x, &ctx)?;
            csv.header(&["family", "x", "s", "term0", "term1", "term2", "total"]);
            csv.row_labeled("Q_n", &[args.x, s, q.term0, q.term1, q.term2, q.total()]);
            csv.row_labeled("P_n", &[args.x, s, p.term0, p.term1, p.term2, p.total()]);
        }
        Which::Rn => {
            let s = args
                .s
                .ok_or_else(|| anyhow::anyhow!("--which rn needs --s"))?;
            let ctx = build_context_with(s, 2, args.grid_size, false)?;
            let ev = rn_expansion(params, args.x, args.y, &ctx)?;
            csv.header(&["x", "y", "s", "term0", "term1", "term2", "total"]);
            csv.row(&[args.x, args.y, s, ev.term0, ev.term1, ev.term2, ev.total()]);
        }
        Which::Qni => {
            let s = args
                .s
                .ok_or_else(|| anyhow::anyhow!("--which qni needs --s"))?;
            let ctx = build_context_with(s, (args.i + 2).max(2), args.grid_size, false)?;
            let (qs, ps) = qni_pni_expansion(params, args.i, args.x, &ctx)?;
            csv.header(&[
                "family",
                "k",
                "prefactor",
                "term0",
                "term1",
                "term2",
                "k_value",
            ]);
            for (k, term) in qs.iter().enumerate() {
                csv.row_labeled(
                    "Q_ni",
                    &[
                        k as f64,
                        term.prefactor,
                        term.bracket.term0,
                        term.bracket.term1,
                        term.bracket.term2,
                        term.value(),
                    ],
                );
            }
            for (k, term) in ps.iter().enumerate() {
                csv.row_labeled(
                    "P_ni",
                    &[
                        k as f64,
                        term.prefactor,
                        term.bracket.term0,
                        term.bracket.term1,
                        term.bracket.term2,
                        term.value(),
                    ],
                );
            }
        }
        Which::Theorem => {
            let ss = match (args.s, args.s_grid.as_deref()) {
                (Some(v), None) => vec![v],
                (None, Some(g)) => parse_grid(g)?,
                _ => anyhow::bail!("--which theorem needs --s or --s-grid"),
            };
            let nu = if args.order >= 1 {
                let report = identify_nu(ss[0], args.c)?;
                Some(NuResolution {
                    s: ss[0],
                    value: report.nu,
                })
            } else {
                None
            };
            csv.header(&[
                "s",
                "order",
                "u_eps_goe",
                "vt_eps_goe",
                "q_eps_goe",
                "q_cal_goe",
                "p_cal_goe",
                "r_cal_goe",
                "u_eps_gse",
                "vt_eps_gse",
                "q_eps_gse",
                "q_cal_gse",
                "p_cal_gse",
                "r_cal_gse",
            ]);
            for &s in &ss {
                let tv = theorem_expansions(s, params, args.order, nu.as_ref())?;
                csv.row(&[
                    s,
                    args.order as f64,
                    tv.eps_goe.0,
                    tv.eps_goe.1,
                    tv.eps_goe.2,
                    tv.cal_goe.0,
                    tv.cal_goe.1,
                    tv.cal_goe.2,
                    tv.eps_gse.0,
                    tv.eps_gse.1,
                    tv.eps_gse.2,
                    tv.cal_gse.0,
                    tv.cal_gse.1,
                    tv.cal_gse.2,
                ]);
            }
        }
    }
    csv.emit(args.out.as_deref())?;
    Ok(ExitCode::SUCCESS)
}
