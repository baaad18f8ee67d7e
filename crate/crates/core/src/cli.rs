use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use lsq_stability::bounds::default_big_c;
use lsq_stability::experiments::{
    cohen_csv, cohen_sufficiency_experiment, convergence_csv, convergence_experiment, orderstat_probability,
    stability_csv, stability_map, witness_oracle_csv, witness_vs_oracle, write_output, ExperimentConfig, SampleCounts,
    Sampling, DEFAULT_TRIALS,
};
use lsq_stability::format::fmt_real;
use lsq_stability::{
    b_exact, condition_number, witness_lower_bound, Error, JacobiParams, OrthonormalBasis, Result, SampleSet,
};

const DEFAULTS: &str = "\
Defaults:
  --alpha 0 --beta 0          uniform measure; both exponents must exceed -1
  --trials 100                repeated random samplings per cell
  --seed 1                    master seed; every (m, n, trial) gets a derived child seed
  --big-c 2e^2*cbar + 1       order-statistics constant (orderstats uses 2e^2*cbar1 + 1)
  --grid 2048                 LP oracle evaluation points (at least 8m)
  --r 1                       failure exponent of the sufficiency threshold
Eigenvalues of the Gram matrix below 1e-13 are clamped to 1e-13 before
kappa = lambda_min^(-1/2) is formed; clamped_fraction counts those trials.
Logarithms in sample-count thresholds are natural logarithms.
Reals are printed with 17 significant digits. CSV goes to stdout unless --out is given.

Environment:
  RAYON_NUM_THREADS           worker threads (default: available parallelism);
                              output is identical for every setting";

#[derive(Parser, Debug)]
#[command(
    name = "lsq-stability",
    version,
    about = "Conditioning of discrete least-squares polynomial fits on random Jacobi samples",
    after_help = DEFAULTS
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// One condition number kappa_2 = lambda_min(G)^(-1/2) for n i.i.d. samples, degree m.
    #[command(after_help = DEFAULTS)]
    Condition(Flags),
    /// K = sup_x sum_{j<=m} L_j(x)^2 for the degree-m orthonormal basis.
    #[command(after_help = DEFAULTS)]
    Kfun(Flags),
    /// Print n sample points, one per line (i.i.d., equidistributed or equispaced).
    #[command(after_help = DEFAULTS)]
    Sample(Flags),
    /// Mean condition numbers over an (m, n) grid; n from --n-min..--n-max, or n = round(theta*m^(1/tau)) when --tau is set.
    #[command(name = "stability-map", after_help = DEFAULTS)]
    StabilityMap(Flags),
    /// Monte Carlo frequency of the order-statistics event next to its lower bound 1 - 2e^2*cbar1/C.
    #[command(after_help = DEFAULTS)]
    Orderstats(Flags),
    /// Median sup-norm error of least-squares fits at n = round(theta*m^(1/tau)) (defaults: m 5..30, tau 1/2, theta 1, runge).
    #[command(after_help = DEFAULTS)]
    Convergence(Flags),
    /// Smallest n with K <= iota*n/ln(n), iota = (1 - ln 2)/(2 + 2r), and how often |||G - I||| <= 1/2 there.
    #[command(after_help = DEFAULTS)]
    Cohen(Flags),
    /// Lower bound on sup|p|/max_i|p(x_i)| from the explicit witness polynomial.
    #[command(after_help = DEFAULTS)]
    Witness(Flags),
    /// sup|p|/max_i|p(x_i)| over degree-m polynomials by linear programming (m <= 20).
    #[command(name = "b-oracle", after_help = DEFAULTS)]
    BOracle(Flags),
    /// Witness bound and LP oracle side by side over an (m, n, trial) sweep.
    #[command(name = "witness-vs-oracle", after_help = DEFAULTS)]
    WitnessVsOracle(Flags),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
enum SamplingArg {
    Iid,
    Equidistributed,
    Equispaced,
}

impl From<SamplingArg> for Sampling {
    fn from(s: SamplingArg) -> Self {
        match s {
            SamplingArg::Iid => Sampling::Iid,
            SamplingArg::Equidistributed => Sampling::Equidistributed,
            SamplingArg::Equispaced => Sampling::Equispaced,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
enum Target {
    /// 1/(1 + 25x^2)
    Runge,
    /// exp(x)
    Exp,
    /// |x|
    Abs,
}

impl Target {
    fn eval(self, x: f64) -> f64 {
        match self {
            Target::Runge => 1.0 / (1.0 + 25.0 * x * x),
            Target::Exp => x.exp(),
            Target::Abs => x.abs(),
        }
    }

    fn name(self) -> &'static str {
        match self {
            Target::Runge => "runge",
            Target::Exp => "exp",
            Target::Abs => "abs",
        }
    }
}

/// Flags shared by every subcommand. A JSON file given with `--config` may
/// set any of them under the same (long) name; flags on the command line win.
#[derive(Args, Debug, Clone, Default, Deserialize)]
#[serde(default, rename_all = "kebab-case", deny_unknown_fields)]
struct Flags {
    /// JSON file with flag values (keys are long flag names)
    #[arg(long, value_name = "FILE")]
    #[serde(skip)]
    config: Option<PathBuf>,
    /// Exponent on (1 - x); must exceed -1
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<f64>,
    /// Exponent on (1 + x); must exceed -1
    #[arg(long, allow_hyphen_values = true)]
    beta: Option<f64>,
    /// Polynomial degree
    #[arg(long)]
    m: Option<usize>,
    /// Number of sample points
    #[arg(long)]
    n: Option<usize>,
    /// Smallest degree in a sweep [default: 1; convergence 5]
    #[arg(long)]
    m_min: Option<usize>,
    /// Largest degree in a sweep [convergence default: 30]
    #[arg(long)]
    m_max: Option<usize>,
    /// Smallest sample count in a sweep [default: 1; witness-vs-oracle 2]
    #[arg(long)]
    n_min: Option<usize>,
    /// Largest sample count in a sweep
    #[arg(long)]
    n_max: Option<usize>,
    /// Repetitions per cell [default: 100]
    #[arg(long)]
    trials: Option<usize>,
    /// Master seed [default: 1]
    #[arg(long)]
    seed: Option<u64>,
    /// Order-statistics constant C [default: 2e^2*cbar + 1]
    #[arg(long)]
    big_c: Option<f64>,
    /// Output file; stdout when absent
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Rate exponent in n = round(theta*m^(1/tau)), 0 < tau <= 1
    #[arg(long)]
    tau: Option<f64>,
    /// Rate prefactor in n = round(theta*m^(1/tau)) [default: 1]
    #[arg(long)]
    theta: Option<f64>,
    /// Oracle grid size [default: 2048]
    #[arg(long)]
    grid: Option<usize>,
    /// Failure exponent r in the sufficiency threshold [default: 1]
    #[arg(long)]
    r: Option<f64>,
    /// Comma-separated sample points, used instead of drawing samples
    #[arg(long, allow_hyphen_values = true, value_name = "X1,X2,...")]
    points: Option<String>,
    /// File of sample points, one per line
    #[arg(long, value_name = "FILE")]
    points_file: Option<PathBuf>,
    /// Sample generator [default: iid]
    #[arg(long, value_enum)]
    sampling: Option<SamplingArg>,
    /// Target function for the convergence experiment [default: runge]
    #[arg(long, value_enum)]
    function: Option<Target>,
}

macro_rules! overlay {
    ($top:expr, $base:expr, $($field:ident),*) => {
        $( if $top.$field.is_none() { $top.$field = $base.$field.clone(); } )*
    };
}

impl Flags {
    fn resolve(mut self) -> Result<Self> {
        if let Some(path) = self.config.clone() {
            let text = std::fs::read_to_string(&path).map_err(|source| Error::Io {
                path: path.clone(),
                source,
            })?;
            let file: Flags = serde_json::from_str(&text)
                .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
            overlay!(
                self, file, alpha, beta, m, n, m_min, m_max, n_min, n_max, trials, seed, big_c, out, tau, theta,
                grid, r, points, points_file, sampling, function
            );
        }
        Ok(self)
    }

    fn params(&self) -> Result<JacobiParams> {
        JacobiParams::new(self.alpha.unwrap_or(0.0), self.beta.unwrap_or(0.0))
    }

    fn required<T: Copy>(value: Option<T>, name: &str) -> Result<T> {
        value.ok_or_else(|| Error::Config(format!("--{name} is required")))
    }

    fn m(&self) -> Result<usize> {
        Self::required(self.m, "m")
    }

    fn n(&self) -> Result<usize> {
        Self::required(self.n, "n")
    }

    fn trials(&self) -> usize {
        self.trials.unwrap_or(DEFAULT_TRIALS)
    }

    fn seed(&self) -> u64 {
        self.seed.unwrap_or(1)
    }

    fn sampling(&self) -> Sampling {
        self.sampling.unwrap_or(SamplingArg::Iid).into()
    }

    fn out(&self) -> Option<&Path> {
        self.out.as_deref()
    }

    fn range(min: Option<usize>, max: Option<usize>, default_min: usize, name: &str) -> Result<Vec<usize>> {
        let max = Self::required(max, &format!("{name}-max"))?;
        let min = min.unwrap_or(default_min);
        if min > max {
            return Err(Error::Config(format!("--{name}-min {min} exceeds --{name}-max {max}")));
        }
        Ok((min..=max).collect())
    }

    /// Explicit points when given, otherwise `n` points from the chosen generator.
    fn samples(&self, params: &JacobiParams) -> Result<SampleSet> {
        if let Some(list) = &self.points {
            let pts = list
                .split(',')
                .map(|s| s.trim())
                .filter(|s| !s.is_empty())
                .map(|s| {
                    s.parse::<f64>()
                        .map_err(|_| Error::Config(format!("--points: cannot parse {s:?}")))
                })
                .collect::<Result<Vec<_>>>()?;
            return SampleSet::from_points(pts);
        }
        if let Some(path) = &self.points_file {
            let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
                path: path.clone(),
                source,
            })?;
            return SampleSet::from_text(&text);
        }
        self.sampling().draw(params, self.n()?, self.seed())
    }
}

pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = e.print();
                    0
                }
                _ => {
                    let rendered = e.to_string();
                    let first = rendered.lines().next().unwrap_or("invalid arguments");
                    eprintln!("error: usage: {}", first.trim_start_matches("error: "));
                    2
                }
            };
        }
    };
    match dispatch(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            let detail = e.to_string().replace('\n', " ");
            eprintln!("error: {}: {detail}", e.code());
            2
        }
    }
}

fn dispatch(command: Command) -> Result<()> {
    match command {
        Command::Condition(f) => condition(f.resolve()?),
        Command::Kfun(f) => kfun(f.resolve()?),
        Command::Sample(f) => sample(f.resolve()?),
        Command::StabilityMap(f) => stability(f.resolve()?),
        Command::Orderstats(f) => orderstats(f.resolve()?),
        Command::Convergence(f) => convergence(f.resolve()?),
        Command::Cohen(f) => cohen(f.resolve()?),
        Command::Witness(f) => witness(f.resolve()?),
        Command::BOracle(f) => oracle(f.resolve()?),
        Command::WitnessVsOracle(f) => witness_oracle(f.resolve()?),
    }
}

fn condition(f: Flags) -> Result<()> {
    let params = f.params()?;
    let m = f.m()?;
    let samples = f.samples(&params)?;
    let basis = OrthonormalBasis::new(params, m);
    let (kappa, clamped) = condition_number(&basis, &samples)?;
    let text = format!(
        "alpha,beta,m,n,seed,kappa,clamped\n{},{},{},{},{},{},{}\n",
        fmt_real(params.alpha),
        fmt_real(params.beta),
        m,
        samples.n(),
        f.seed(),
        fmt_real(kappa),
        clamped
    );
    write_output(&text, f.out())
}

fn kfun(f: Flags) -> Result<()> {
    let params = f.params()?;
    let m = f.m()?;
    let k = OrthonormalBasis::new(params, m).christoffel_k();
    let text = format!(
        "alpha,beta,m,k\n{},{},{},{}\n",
        fmt_real(params.alpha),
        fmt_real(params.beta),
        m,
        fmt_real(k)
    );
    write_output(&text, f.out())
}

fn sample(f: Flags) -> Result<()> {
    let params = f.params()?;
    let samples = f.sampling().draw(&params, f.n()?, f.seed())?;
    write_output(&samples.to_text(), f.out())
}

fn stability(f: Flags) -> Result<()> {
    let params = f.params()?;
    let degrees = Flags::range(f.m_min, f.m_max, 1, "m")?;
    let counts = match f.tau {
        Some(tau) => SampleCounts::Rate {
            theta: f.theta.unwrap_or(1.0),
            tau,
        },
        None => SampleCounts::List(Flags::range(f.n_min, f.n_max, 1, "n")?),
    };
    let config = ExperimentConfig::new(params, degrees, counts)
        .trials(f.trials())
        .seed(f.seed())
        .sampling(f.sampling());
    write_output(&stability_csv(&stability_map(&config)?), f.out())
}

fn orderstats(f: Flags) -> Result<()> {
    let params = f.params()?;
    let e2 = std::f64::consts::E.powi(2);
    let big_c = f.big_c.unwrap_or(2.0 * e2 * params.cbar1 + 1.0);
    let n = f.n()?;
    let trials = f.trials();
    let est = orderstat_probability(&params, n, big_c, trials, f.seed())?;
    let text = format!(
        "alpha,beta,n,big_c,trials,estimate,bound\n{},{},{},{},{},{},{}\n",
        fmt_real(params.alpha),
        fmt_real(params.beta),
        n,
        fmt_real(big_c),
        trials,
        fmt_real(est.estimate),
        fmt_real(est.bound)
    );
    write_output(&text, f.out())
}

fn convergence(f: Flags) -> Result<()> {
    let params = f.params()?;
    let degrees = Flags::range(f.m_min, Some(f.m_max.unwrap_or(30)), 5, "m")?;
    let tau = f.tau.unwrap_or(0.5);
    let theta = f.theta.unwrap_or(1.0);
    let target = f.function.unwrap_or(Target::Runge);
    let config = ExperimentConfig::new(params, degrees, SampleCounts::Rate { theta, tau })
        .trials(f.trials())
        .seed(f.seed())
        .sampling(f.sampling());
    let rows = convergence_experiment(&config, |x| target.eval(x), tau, theta)?;
    eprintln!("note: target function {}", target.name());
    write_output(&convergence_csv(&rows), f.out())
}

fn cohen(f: Flags) -> Result<()> {
    let params = f.params()?;
    let rec = cohen_sufficiency_experiment(&params, f.m()?, f.r.unwrap_or(1.0), f.trials(), f.seed())?;
    eprintln!("note: n_star uses the natural logarithm in K <= iota*n/ln(n)");
    write_output(&cohen_csv(&rec, &params), f.out())
}

fn witness(f: Flags) -> Result<()> {
    let params = f.params()?;
    let m = f.m()?;
    let big_c = f.big_c.unwrap_or_else(|| default_big_c(&params));
    let samples = f.samples(&params)?.sorted();
    let w = witness_lower_bound(&samples, m, &params, big_c)?;
    let text = format!(
        "alpha,beta,m,n,big_c,case,k,lambda,witness_bound,event_holds,sup_location\n{},{},{},{},{},{},{},{},{},{},{}\n",
        fmt_real(params.alpha),
        fmt_real(params.beta),
        m,
        samples.n(),
        fmt_real(big_c),
        w.case.label(),
        w.k,
        fmt_real(w.lambda),
        fmt_real(w.bound),
        w.event_holds,
        fmt_real(w.sup_location)
    );
    write_output(&text, f.out())
}

fn oracle(f: Flags) -> Result<()> {
    let params = f.params()?;
    let m = f.m()?;
    let samples = f.samples(&params)?;
    let grid = f.grid.unwrap_or(2048);
    let b = b_exact(&samples, m, grid)?;
    write_output(&format!("{}\n", fmt_real(b)), f.out())
}

fn witness_oracle(f: Flags) -> Result<()> {
    let params = f.params()?;
    let degrees = Flags::range(f.m_min, f.m_max, 1, "m")?;
    let counts = SampleCounts::List(Flags::range(f.n_min, f.n_max, 2, "n")?);
    let config = ExperimentConfig::new(params, degrees, counts)
        .trials(f.trials())
        .seed(f.seed())
        .sampling(f.sampling());
    let big_c = f.big_c.unwrap_or_else(|| default_big_c(&params));
    let rows = witness_vs_oracle(&config, big_c, f.grid.unwrap_or(2048))?;
    write_output(&witness_oracle_csv(&rows), f.out())
}
