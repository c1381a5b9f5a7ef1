//! Independent statistical oracle: sample the largest eigenvalue of
//! GOE/GUE/GSE matrices at small n and build empirical CDFs with DKW
//! confidence bands.
//!
//! Scale convention: the eigenvalue weight is exp(-(beta/2) sum x^2), which
//! pins the Gaussian entries as
//!   GOE  diag N(0,1),   off-diag N(0,1/2)
//!   GUE  diag N(0,1/2), off-diag components N(0,1/4)
//!   GSE  diag N(0,1/4), off-diag quaternion components N(0,1/8)
//! so the n = 1, beta = 2 marginal has density pi^{-1/2} e^{-x^2}.
//!
//! Sampling is embarrassingly parallel with one counter-based substream per
//! sample index, so results are independent of the thread count.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Beta {
    One,
    Two,
    Four,
}

impl Beta {
    pub fn value(&self) -> u8 {
        match self {
            Beta::One => 1,
            Beta::Two => 2,
            Beta::Four => 4,
        }
    }

    pub fn from_value(v: u8) -> Result<Self> {
        match v {
            1 => Ok(Beta::One),
            2 => Ok(Beta::Two),
            4 => Ok(Beta::Four),
            _ => Err(Error::Parameter(format!("beta must be 1, 2 or 4, got {v}"))),
        }
    }
}

/// A reproducible batch of largest-eigenvalue samples.
#[derive(Debug, Clone)]
pub struct SampleRun {
    pub n: u32,
    pub beta: Beta,
    pub seed: u64,
    pub num_samples: usize,
    pub sorted_lambda_max: Vec<f64>,
}

pub fn sample(n: u32, beta: Beta, seed: u64, num_samples: usize) -> Result<SampleRun> {
    if !(1..=100).contains(&n) {
        return Err(Error::Parameter(format!(
            "sample supports 1 <= n <= 100, got {n}"
        )));
    }
    if num_samples == 0 || num_samples > 10_000_000 {
        return Err(Error::Parameter(format!(
            "sample supports 1 <= num_samples <= 1e7, got {num_samples}"
        )));
    }
    let mut lambda: Vec<f64> = (0..num_samples)
        .into_par_iter()
        .map(|idx| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(idx as u64 + 1);
            draw_lambda_max(n as usize, beta, &mut rng)
        })
        .collect();
    lambda.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(SampleRun {
        n,
        beta,
        seed,
        num_samples,
        sorted_lambda_max: lambda,
    })
}

fn draw_lambda_max(n: usize, beta: Beta, rng: &mut ChaCha8Rng) -> f64 {
    match beta {
        Beta::One => {
            let mut m = DMatrix::<f64>::zeros(n, n);
            for i in 0..n {
                m[(i, i)] = rng.sample::<f64, _>(StandardNormal);
                for j in (i + 1)..n {
                    let v = rng.sample::<f64, _>(StandardNormal) * std::f64::consts::FRAC_1_SQRT_2;
                    m[(i, j)] = v;
                    m[(j, i)] = v;
                }
            }
            largest_eig(m)
        }
        Beta::Two => {
            // Hermitian n x n as the real-symmetric embedding [[X, -Y], [Y, X]]
            let mut x = DMatrix::<f64>::zeros(n, n);
            let mut y = DMatrix::<f64>::zeros(n, n);
            let sd = 0.5f64.sqrt();
            let so = 0.25f64.sqrt();
            for i in 0..n {
                x[(i, i)] = rng.sample::<f64, _>(StandardNormal) * sd;
                for j in (i + 1)..n {
                    let re = rng.sample::<f64, _>(StandardNormal) * so;
                    let im = rng.sample::<f64, _>(StandardNormal) * so;
                    x[(i, j)] = re;
                    x[(j, i)] = re;
                    y[(i, j)] = im;
                    y[(j, i)] = -im;
                }
            }
            largest_eig(embed(&x, &y))
        }
        Beta::Four => {
            // quaternion self-dual as the 2n x 2n complex matrix
            // [[A, B], [-conj(B), conj(A)]], then real-embedded to 4n x 4n
            let m2 = 2 * n;
            let mut x = DMatrix::<f64>::zeros(m2, m2);
            let mut y = DMatrix::<f64>::zeros(m2, m2);
            let sd = 0.25f64.sqrt();
            let so = 0.125f64.sqrt();
            // A Hermitian: diag real N(0, 1/4), off-diag components N(0, 1/8)
            for i in 0..n {
                let d = rng.sample::<f64, _>(StandardNormal) * sd;
                x[(i, i)] = d;
                x[(n + i, n + i)] = d;
                for j in (i + 1)..n {
                    let re = rng.sample::<f64, _>(StandardNormal) * so;
                    let im = rng.sample::<f64, _>(StandardNormal) * so;
                    // A block
                    x[(i, j)] = re;
                    x[(j, i)] = re;
                    y[(i, j)] = im;
                    y[(j, i)] = -im;
                    // conj(A) block
                    x[(n + i, n + j)] = re;
                    x[(n + j, n + i)] = re;
                    y[(n + i, n + j)] = -im;
                    y[(n + j, n + i)] = im;
                }
            }
            // B complex antisymmetric: components N(0, 1/8)
            for i in 0..n {
                for j in (i + 1)..n {
                    let re = rng.sample::<f64, _>(StandardNormal) * so;
                    let im = rng.sample::<f64, _>(StandardNormal) * so;
                    // B block at (i, n+j)
                    x[(i, n + j)] = re;
                    y[(i, n + j)] = im;
                    x[(j, n + i)] = -re;
                    y[(j, n + i)] = -im;
                    // -conj(B) block at (n+i, j): Hermitian mirror of B
                    x[(n + j, i)] = re;
                    y[(n + j, i)] = -im;
                    x[(n + i, j)] = -re;
                    y[(n + i, j)] = im;
                }
            }
            largest_eig(embed(&x, &y))
        }
    }
}

/// Real-symmetric embedding of the Hermitian matrix X + iY.
fn embed(x: &DMatrix<f64>, y: &DMatrix<f64>) -> DMatrix<f64> {
    let n = x.nrows();
    let mut m = DMatrix::<f64>::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            m[(i, j)] = x[(i, j)];
            m[(n + i, n + j)] = x[(i, j)];
            m[(i, n + j)] = -y[(i, j)];
            m[(n + i, j)] = y[(i, j)];
        }
    }
    m
}

fn largest_eig(m: DMatrix<f64>) -> f64 {
    m.symmetric_eigenvalues()
        .iter()
        .cloned()
        .fold(f64::NEG_INFINITY, f64::max)
}

/// One empirical-CDF point with its two-sided DKW band half-width.
#[derive(Debug, Clone, Copy)]
pub struct CdfPoint {
    pub t: f64,
    pub f_hat: f64,
    pub band: f64,
}

/// Two-sided DKW band half-width at the given confidence level.
pub fn dkw_band(num_samples: usize, confidence: f64) -> f64 {
    let alpha = 1.0 - confidence;
    ((2.0 / alpha).ln() / (2.0 * num_samples as f64)).sqrt()
}

/// Empirical CDF of the run, evaluated at `t_grid`.
pub fn empirical_cdf(run: &SampleRun, t_grid: &[f64], confidence: f64) -> Vec<CdfPoint> {
    let band = dkw_band(run.num_samples, confidence);
    t_grid
        .iter()
        .map(|&t| CdfPoint {
            t,
            f_hat: run.cdf_at(t),
            band,
        })
        .collect()
}

impl SampleRun {
    /// F^(t) = #{samples <= t} / N via binary search on the sorted samples.
    pub fn cdf_at(&self, t: f64) -> f64 {
        let k = self.sorted_lambda_max.partition_point(|&x| x <= t);
        k as f64 / self.num_samples as f64
    }

    /// Kolmogorov-Smirnov statistic against a reference CDF.
    pub fn ks_statistic(&self, reference: impl Fn(f64) -> f64) -> f64 {
        let n = self.num_samples as f64;
        let mut sup: f64 = 0.0;
        for (i, &x) in self.sorted_lambda_max.iter().enumerate() {
            let f = reference(x);
            sup = sup.max((f - i as f64 / n).abs());
            sup = sup.max((f - (i + 1) as f64 / n).abs());
        }
        sup
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn n1_beta2_marginal_moments() {
        let run = sample(1, Beta::Two, 42, 40_000).unwrap();
        let n = run.num_samples as f64;
        let mean: f64 = run.sorted_lambda_max.iter().sum::<f64>() / n;
        let var: f64 = run
            .sorted_lambda_max
            .iter()
            .map(|x| (x - mean) * (x - mean))
            .sum::<f64>()
            / n;
        // variance 1/2, so sd of the mean is sqrt(0.5/N); 4 sigma
        assert!(mean.abs() < 4.0 * (0.5 / n).sqrt(), "mean {mean}");
        assert!((var - 0.5).abs() < 0.02, "var {var}");
    }

    #[test]
    fn n1_beta1_and_beta4_marginals() {
        // beta = 1: variance 1; beta = 4: variance 1/4
        let r1 = sample(1, Beta::One, 7, 40_000).unwrap();
        let v1: f64 =
            r1.sorted_lambda_max.iter().map(|x| x * x).sum::<f64>() / r1.num_samples as f64;
        assert!((v1 - 1.0).abs() < 0.04, "beta1 var {v1}");
        let r4 = sample(1, Beta::Four, 7, 40_000).unwrap();
        let v4: f64 =
            r4.sorted_lambda_max.iter().map(|x| x * x).sum::<f64>() / r4.num_samples as f64;
        assert!((v4 - 0.25).abs() < 0.01, "beta4 var {v4}");
    }

    #[test]
    fn identical_seeds_identical_runs() {
        let a = sample(3, Beta::Two, 1234, 500).unwrap();
        let b = sample(3, Beta::Two, 1234, 500).unwrap();
        assert_eq!(a.sorted_lambda_max, b.sorted_lambda_max);
        let c = sample(3, Beta::Two, 1235, 500).unwrap();
        assert_ne!(a.sorted_lambda_max, c.sorted_lambda_max);
    }

    #[test]
    fn determinism_across_thread_counts() {
        // per-sample substreams: a single-thread pool reproduces the result
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap();
        let a = pool.install(|| sample(2, Beta::Four, 99, 400).unwrap());
        let b = sample(2, Beta::Four, 99, 400).unwrap();
        assert_eq!(a.sorted_lambda_max, b.sorted_lambda_max);
    }

    #[test]
    fn cdf_step_function_ends() {
        let run = sample(2, Beta::One, 5, 200).unwrap();
        let lo = run.sorted_lambda_max[0] - 1.0;
        let hi = run.sorted_lambda_max[199] + 1.0;
        let pts = empirical_cdf(&run, &[lo, hi], 0.99);
        assert_eq!(pts[0].f_hat, 0.0);
        assert_eq!(pts[1].f_hat, 1.0);
    }

    #[test]
    fn dkw_band_formula() {
        assert_abs_diff_eq!(dkw_band(200_000, 0.99), 0.00364, epsilon = 5e-6);
    }

    #[test]
    fn gse_doubles_eigenvalues_harmlessly() {
        // n = 1 GSE: the 4x4 embedding carries one eigenvalue with
        // multiplicity 4; lambda_max picks it once.
        let run = sample(1, Beta::Four, 11, 100).unwrap();
        assert_eq!(run.sorted_lambda_max.len(), 100);
        assert!(run.sorted_lambda_max.iter().all(|x| x.is_finite()));
    }

    #[test]
    fn parameter_validation() {
        assert!(sample(0, Beta::Two, 1, 10).is_err());
        assert!(sample(101, Beta::Two, 1, 10).is_err());
        assert!(sample(2, Beta::Two, 1, 0).is_err());
    }

    #[test]
    fn n2_left_tail_probabilities_all_betas() {
        // P(lambda_max < 0) for n = 2 from direct integration of the
        // eigenvalue density |x-y|^beta exp(-(beta/2)(x^2+y^2)):
        //   beta 1: (1 - 2^{-1/2})/2 = 0.146447, beta 2: 0.090845,
        //   beta 4: 0.037793
        let cases = [
            (Beta::One, 0.1464466094),
            (Beta::Two, 0.0908450569),
            (Beta::Four, 0.0377934092),
        ];
        for (beta, p_exact) in cases {
            let run = sample(2, beta, 2024, 100_000).unwrap();
            let gap = (run.cdf_at(0.0) - p_exact).abs();
            assert!(
                gap < dkw_band(100_000, 0.99),
                "beta {}: gap {gap}",
                beta.value()
            );
        }
    }

    #[test]
    fn beta2_small_n_matches_fredholm_cdf() {
        // P(lambda_max < 0) for n = 2 against the determinant route, within
        // the 99% DKW band.
        let run = sample(2, Beta::Two, 31, 50_000).unwrap();
        let f = crate::finite_n::f_n2(2, 0.0).unwrap();
        let gap = (run.cdf_at(0.0) - f).abs();
        assert!(gap < dkw_band(50_000, 0.99), "gap {gap}");
    }
}
