//! Seeded Monte Carlo sweeps that emit CSV.
//!
//! Every `(m, n, trial)` task draws its samples from
//! [`derive_seed`](crate::sampler::derive_seed)`(master, m, n, trial)`. Cells are
//! evaluated in parallel and collected in ascending `(m, n)` order, and
//! per-cell reductions run in trial order, so output is byte-identical for
//! any thread count (set with `RAYON_NUM_THREADS`).

use std::fmt::Write as _;
use std::path::Path;

use rayon::prelude::*;

use crate::bounds::{cohen_iota, cohen_threshold, witness_lower_bound, WitnessCase};
use crate::conditioning::{condition_number, gram, least_squares_fit, spectral_distance_to_identity};
use crate::error::{Error, Result};
use crate::format::fmt_real;
use crate::jacobi::{JacobiParams, OrthonormalBasis};
use crate::oracle::{b_exact, ORACLE_MAX_DEGREE};
use crate::sampler::{derive_seed, equidistributed, equispaced, orderstat_event, sample_iid, SampleSet};

pub const STABILITY_HEADER: &str = "alpha,beta,m,n,trials,mean_kappa,mean_log10_kappa,clamped_fraction";
pub const CONVERGENCE_HEADER: &str = "alpha,beta,tau,theta,m,n,median_sup_error";
pub const WITNESS_ORACLE_HEADER: &str = "m,n,seed,case,lambda,witness_bound,b_exact,event_holds";

/// Trials per cell when none are configured.
pub const DEFAULT_TRIALS: usize = 100;

/// Points in the equispaced grid used to measure sup-norm errors.
pub const ERROR_GRID_POINTS: usize = 2001;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Sampling {
    #[default]
    Iid,
    Equidistributed,
    Equispaced,
}

impl Sampling {
    pub fn draw(&self, params: &JacobiParams, n: usize, seed: u64) -> Result<SampleSet> {
        match self {
            Sampling::Iid => Ok(sample_iid(params, n, seed)),
            Sampling::Equidistributed => equidistributed(params, n),
            Sampling::Equispaced => equispaced(n),
        }
    }
}

/// How the sample count of each cell is chosen.
#[derive(Debug, Clone, PartialEq)]
pub enum SampleCounts {
    /// Every listed `n` is paired with every degree `m < n`.
    List(Vec<usize>),
    /// `n = round(θ m^{1/τ})`, raised to `m + 1` when smaller.
    Rate { theta: f64, tau: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub params: JacobiParams,
    pub degrees: Vec<usize>,
    pub counts: SampleCounts,
    pub trials: usize,
    pub seed: u64,
    pub sampling: Sampling,
}

impl ExperimentConfig {
    pub fn new(params: JacobiParams, degrees: Vec<usize>, counts: SampleCounts) -> Self {
        Self {
            params,
            degrees,
            counts,
            trials: DEFAULT_TRIALS,
            seed: 1,
            sampling: Sampling::Iid,
        }
    }

    pub fn trials(mut self, trials: usize) -> Self {
        self.trials = trials;
        self
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn sampling(mut self, sampling: Sampling) -> Self {
        self.sampling = sampling;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.degrees.is_empty() {
            return Err(Error::Config("degree range is empty".into()));
        }
        if self.trials == 0 {
            return Err(Error::Config("trials must be at least 1".into()));
        }
        match &self.counts {
            SampleCounts::List(ns) if ns.is_empty() => Err(Error::Config("sample-count range is empty".into())),
            SampleCounts::Rate { theta, tau } if !(*theta > 0.0) || !(*tau > 0.0 && *tau <= 1.0) => {
                Err(Error::Config("rate rule needs theta > 0 and tau in (0, 1]".into()))
            }
            _ => Ok(()),
        }
    }

    /// `(m, n)` cells in ascending order, restricted to `m < n`.
    pub fn cells(&self) -> Vec<(usize, usize)> {
        let mut degrees = self.degrees.clone();
        degrees.sort_unstable();
        degrees.dedup();
        match &self.counts {
            SampleCounts::List(ns) => {
                let mut ns = ns.clone();
                ns.sort_unstable();
                ns.dedup();
                degrees
                    .iter()
                    .flat_map(|&m| ns.iter().filter(move |&&n| m < n).map(move |&n| (m, n)))
                    .collect()
            }
            SampleCounts::Rate { theta, tau } => degrees
                .iter()
                .map(|&m| (m, rate_count(m, *theta, *tau)))
                .collect(),
        }
    }
}

/// `n = max(m + 1, round(θ m^{1/τ}))`.
pub fn rate_count(m: usize, theta: f64, tau: f64) -> usize {
    let n = (theta * (m as f64).powf(1.0 / tau)).round() as usize;
    n.max(m + 1)
}

#[derive(Debug, Clone, PartialEq)]
pub struct StabilityRecord {
    pub alpha: f64,
    pub beta: f64,
    pub m: usize,
    pub n: usize,
    pub trials: usize,
    /// Mean of the (floored) condition numbers.
    pub mean_kappa: f64,
    pub mean_log10_kappa: f64,
    pub clamped_fraction: f64,
}

/// Mean condition number over `trials` independent samplings for every cell.
pub fn stability_map(config: &ExperimentConfig) -> Result<Vec<StabilityRecord>> {
    config.validate()?;
    let cells = config.cells();
    cells
        .par_iter()
        .map(|&(m, n)| stability_cell(config, m, n))
        .collect()
}

fn stability_cell(config: &ExperimentConfig, m: usize, n: usize) -> Result<StabilityRecord> {
    let basis = OrthonormalBasis::new(config.params, m);
    let mut sum = 0.0;
    let mut sum_log = 0.0;
    let mut clamped = 0usize;
    for t in 0..config.trials {
        let seed = derive_seed(config.seed, m as u64, n as u64, t as u64);
        let samples = config.sampling.draw(&config.params, n, seed)?;
        let (kappa, was_clamped) = condition_number(&basis, &samples)?;
        sum += kappa;
        sum_log += kappa.log10();
        clamped += usize::from(was_clamped);
    }
    let trials = config.trials as f64;
    Ok(StabilityRecord {
        alpha: config.params.alpha,
        beta: config.params.beta,
        m,
        n,
        trials: config.trials,
        mean_kappa: sum / trials,
        mean_log10_kappa: sum_log / trials,
        clamped_fraction: clamped as f64 / trials,
    })
}

pub fn stability_csv(records: &[StabilityRecord]) -> String {
    let mut s = String::from(STABILITY_HEADER);
    s.push('\n');
    for r in records {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},{}",
            fmt_real(r.alpha),
            fmt_real(r.beta),
            r.m,
            r.n,
            r.trials,
            fmt_real(r.mean_kappa),
            fmt_real(r.mean_log10_kappa),
            fmt_real(r.clamped_fraction)
        );
    }
    s
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrderStatEstimate {
    pub estimate: f64,
    /// `1 - 2e²c̄₁/C`.
    pub bound: f64,
}

/// Monte Carlo frequency of the order-statistics event, with its lower bound.
/// Requires `C > 2e²c̄₁`.
pub fn orderstat_probability(
    params: &JacobiParams,
    n: usize,
    big_c: f64,
    trials: usize,
    seed: u64,
) -> Result<OrderStatEstimate> {
    let threshold = 2.0 * std::f64::consts::E.powi(2) * params.cbar1;
    if !(big_c > threshold) {
        return Err(Error::domain(format!(
            "C must exceed 2e^2*cbar1 = {}",
            fmt_real(threshold)
        )));
    }
    if trials == 0 {
        return Err(Error::Config("trials must be at least 1".into()));
    }
    let hits = (0..trials)
        .into_par_iter()
        .map(|t| {
            let s = sample_iid(params, n, derive_seed(seed, 0, n as u64, t as u64)).sorted();
            orderstat_event(&s, params, big_c).map(|e| usize::from(e.holds))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .sum::<usize>();
    Ok(OrderStatEstimate {
        estimate: hits as f64 / trials as f64,
        bound: 1.0 - threshold / big_c,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRecord {
    pub alpha: f64,
    pub beta: f64,
    pub tau: f64,
    pub theta: f64,
    pub m: usize,
    pub n: usize,
    pub median_sup_error: f64,
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let k = v.len();
    if k % 2 == 1 {
        v[k / 2]
    } else {
        0.5 * (v[k / 2 - 1] + v[k / 2])
    }
}

/// Least-squares fits at `n = round(θ m^{1/τ})` samples; reports the median
/// (over trials) sup-norm error on a 2001-point equispaced grid.
pub fn convergence_experiment<F>(config: &ExperimentConfig, f: F, tau: f64, theta: f64) -> Result<Vec<ConvergenceRecord>>
where
    F: Fn(f64) -> f64 + Sync,
{
    let config = ExperimentConfig {
        counts: SampleCounts::Rate { theta, tau },
        ..config.clone()
    };
    config.validate()?;
    let grid: Vec<f64> = (0..ERROR_GRID_POINTS)
        .map(|i| -1.0 + 2.0 * i as f64 / (ERROR_GRID_POINTS - 1) as f64)
        .collect();
    let truth: Vec<f64> = grid.iter().map(|&x| f(x)).collect();
    config
        .cells()
        .par_iter()
        .map(|&(m, n)| {
            let basis = OrthonormalBasis::new(config.params, m);
            let mut errors = Vec::with_capacity(config.trials);
            let mut buf = vec![0.0; m + 1];
            for t in 0..config.trials {
                let seed = derive_seed(config.seed, m as u64, n as u64, t as u64);
                let samples = config.sampling.draw(&config.params, n, seed)?;
                let values: Vec<f64> = samples.points().iter().map(|&x| f(x)).collect();
                let u = least_squares_fit(&basis, &samples, &values)?;
                let err = grid
                    .iter()
                    .zip(&truth)
                    .map(|(&x, &fx)| {
                        basis.eval_into(x, &mut buf);
                        let p: f64 = buf.iter().zip(&u).map(|(l, c)| l * c).sum();
                        (p - fx).abs()
                    })
                    .fold(0.0, f64::max);
                errors.push(err);
            }
            Ok(ConvergenceRecord {
                alpha: config.params.alpha,
                beta: config.params.beta,
                tau,
                theta,
                m,
                n,
                median_sup_error: median(errors),
            })
        })
        .collect()
}

pub fn convergence_csv(records: &[ConvergenceRecord]) -> String {
    let mut s = String::from(CONVERGENCE_HEADER);
    s.push('\n');
    for r in records {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{}",
            fmt_real(r.alpha),
            fmt_real(r.beta),
            fmt_real(r.tau),
            fmt_real(r.theta),
            r.m,
            r.n,
            fmt_real(r.median_sup_error)
        );
    }
    s
}

#[derive(Debug, Clone, PartialEq)]
pub struct CohenRecord {
    pub m: usize,
    pub r: f64,
    pub iota: f64,
    pub k: f64,
    pub n_star: usize,
    pub trials: usize,
    pub empirical_prob: f64,
    /// `1 - 2 n*^{-r}`.
    pub target_prob: f64,
}

/// Frequency of `|||G - I||| <= 1/2` at the sufficient sample count `n*`.
pub fn cohen_sufficiency_experiment(
    params: &JacobiParams,
    m: usize,
    r: f64,
    trials: usize,
    seed: u64,
) -> Result<CohenRecord> {
    let basis = OrthonormalBasis::new(*params, m);
    let n_star = cohen_threshold(r, &basis)?;
    let empirical_prob = spectral_success_rate(&basis, n_star, trials, seed)?;
    Ok(CohenRecord {
        m,
        r,
        iota: cohen_iota(r),
        k: basis.christoffel_k(),
        n_star,
        trials,
        empirical_prob,
        target_prob: 1.0 - 2.0 * (n_star as f64).powf(-r),
    })
}

/// Fraction of `trials` i.i.d. samplings of size `n` with `|||G - I||| <= 1/2`.
pub fn spectral_success_rate(basis: &OrthonormalBasis, n: usize, trials: usize, seed: u64) -> Result<f64> {
    if trials == 0 {
        return Err(Error::Config("trials must be at least 1".into()));
    }
    let m = basis.degree() as u64;
    let hits = (0..trials)
        .into_par_iter()
        .map(|t| {
            let s = sample_iid(basis.params(), n, derive_seed(seed, m, n as u64, t as u64));
            gram(basis, &s).map(|g| usize::from(spectral_distance_to_identity(&g) <= 0.5))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .sum::<usize>();
    Ok(hits as f64 / trials as f64)
}

pub fn cohen_csv(rec: &CohenRecord, params: &JacobiParams) -> String {
    format!(
        "alpha,beta,m,r,iota,k,n_star,trials,empirical_prob,target_prob\n{},{},{},{},{},{},{},{},{},{}\n",
        fmt_real(params.alpha),
        fmt_real(params.beta),
        rec.m,
        fmt_real(rec.r),
        fmt_real(rec.iota),
        fmt_real(rec.k),
        rec.n_star,
        rec.trials,
        fmt_real(rec.empirical_prob),
        fmt_real(rec.target_prob)
    )
}

#[derive(Debug, Clone, PartialEq)]
pub struct WitnessOracleRecord {
    pub m: usize,
    pub n: usize,
    pub seed: u64,
    pub case: WitnessCase,
    pub lambda: f64,
    pub witness_bound: f64,
    /// `None` when `m` exceeds the oracle cap.
    pub b_exact: Option<f64>,
    pub event_holds: bool,
}

/// Witness bound next to the LP oracle over every `(m, n, trial)` task.
pub fn witness_vs_oracle(config: &ExperimentConfig, big_c: f64, grid_size: usize) -> Result<Vec<WitnessOracleRecord>> {
    config.validate()?;
    let tasks: Vec<(usize, usize, usize)> = config
        .cells()
        .into_iter()
        .filter(|&(m, _)| m >= 1)
        .flat_map(|(m, n)| (0..config.trials).map(move |t| (m, n, t)))
        .collect();
    tasks
        .par_iter()
        .map(|&(m, n, t)| {
            let seed = derive_seed(config.seed, m as u64, n as u64, t as u64);
            let samples = config.sampling.draw(&config.params, n, seed)?.sorted();
            let w = witness_lower_bound(&samples, m, &config.params, big_c)?;
            let oracle = if m <= ORACLE_MAX_DEGREE {
                Some(b_exact(&samples, m, grid_size.max(8 * m))?)
            } else {
                None
            };
            Ok(WitnessOracleRecord {
                m,
                n,
                seed,
                case: w.case,
                lambda: w.lambda,
                witness_bound: w.bound,
                b_exact: oracle,
                event_holds: w.event_holds,
            })
        })
        .collect()
}

pub fn witness_oracle_csv(records: &[WitnessOracleRecord]) -> String {
    let mut s = String::from(WITNESS_ORACLE_HEADER);
    s.push('\n');
    for r in records {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},{}",
            r.m,
            r.n,
            r.seed,
            r.case.label(),
            fmt_real(r.lambda),
            fmt_real(r.witness_bound),
            r.b_exact.map(fmt_real).unwrap_or_default(),
            r.event_holds
        );
    }
    s
}

/// Writes `text` to `path`, or to stdout when `path` is `None`.
pub fn write_output(text: &str, path: Option<&Path>) -> Result<()> {
    use std::io::Write;
    match path {
        Some(p) => std::fs::write(p, text).map_err(|source| Error::Io {
            path: p.to_path_buf(),
            source,
        }),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|source| Error::Io {
                    path: "<stdout>".into(),
                    source,
                })
        }
    }
}
