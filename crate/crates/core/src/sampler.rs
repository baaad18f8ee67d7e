//! Point sets on [-1, 1]: seeded i.i.d. Jacobi samples, deterministic
//! equidistributed and equispaced grids, and the order-statistics event
//! that lower-bounds the smallest sample points.
//!
//! # Generator
//!
//! `sample_iid` is bit-reproducible for a fixed seed. The pinned algorithm:
//!
//! * the stream is `ChaCha8Rng::seed_from_u64(seed)`;
//! * `X ~ Gamma(β+1)` and `Y ~ Gamma(α+1)` are drawn in that order with the
//!   Marsaglia–Tsang squeeze method (standard normals from `rand_distr`'s
//!   ziggurat `StandardNormal`, uniforms as `1 - U[0,1)`); shapes below one
//!   use the boost `Gamma(a) = Gamma(a+1) U^{1/a}` evaluated in log space;
//! * the point is `x = (X - Y)/(X + Y) = tanh((ln X - ln Y)/2)`, the affine
//!   image `2t - 1` of `t = X/(X+Y) ~ Beta(β+1, α+1)`.
//!
//! Parallel sweeps derive per-task seeds with [`derive_seed`], so results do
//! not depend on scheduling.

use std::fmt::Write as _;

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use statrs::function::beta::beta_reg;

use crate::error::{Error, Result};
use crate::format::fmt_real;
use crate::jacobi::JacobiParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Iid { seed: u64 },
    Equidistributed,
    Equispaced,
    /// Supplied by the caller.
    Explicit,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SampleSet {
    points: Vec<f64>,
    provenance: Provenance,
    sorted: bool,
}

impl SampleSet {
    /// Wraps caller-supplied points, checking they lie in [-1, 1].
    pub fn from_points(points: Vec<f64>) -> Result<Self> {
        if let Some(bad) = points.iter().find(|x| !(x.abs() <= 1.0)) {
            return Err(Error::domain(format!("sample point {bad} lies outside [-1, 1]")));
        }
        let sorted = points.windows(2).all(|w| w[0] <= w[1]);
        Ok(Self {
            points,
            provenance: Provenance::Explicit,
            sorted,
        })
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn n(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn is_sorted(&self) -> bool {
        self.sorted
    }

    /// Nondecreasing copy (stable).
    pub fn sorted(&self) -> SampleSet {
        let mut points = self.points.clone();
        points.sort_by(f64::total_cmp);
        SampleSet {
            points,
            provenance: self.provenance,
            sorted: true,
        }
    }

    /// Mirror image `x -> -x`, re-sorted when the input was sorted.
    pub fn reflected(&self) -> SampleSet {
        let mut points: Vec<f64> = self.points.iter().map(|x| -x).collect();
        if self.sorted {
            points.reverse();
        }
        SampleSet {
            points,
            provenance: self.provenance,
            sorted: self.sorted,
        }
    }

    /// Number of distinct values.
    pub fn distinct_count(&self) -> usize {
        let mut p = self.points.clone();
        p.sort_by(f64::total_cmp);
        p.dedup();
        p.len()
    }

    /// One point per line, 17 significant digits.
    pub fn to_text(&self) -> String {
        let mut s = String::with_capacity(self.points.len() * 24);
        for x in &self.points {
            let _ = writeln!(s, "{}", fmt_real(*x));
        }
        s
    }

    /// Parses one point per line; blank lines and `#` comments are skipped.
    pub fn from_text(text: &str) -> Result<Self> {
        let points = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(|l| {
                l.parse::<f64>()
                    .map_err(|_| Error::contract(format!("cannot parse sample point {l:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_points(points)
    }
}

/// `F(x) = ρ([-1, x]) = I_{(1+x)/2}(β+1, α+1)`.
pub fn cdf(params: &JacobiParams, x: f64) -> f64 {
    if x <= -1.0 {
        return 0.0;
    }
    if x >= 1.0 {
        return 1.0;
    }
    let t = (0.5 * (1.0 + x)).clamp(0.0, 1.0);
    beta_reg(params.beta + 1.0, params.alpha + 1.0, t)
}

fn ln_gamma_variate(shape: f64, rng: &mut ChaCha8Rng) -> f64 {
    if shape < 1.0 {
        let boost = ln_gamma_variate(shape + 1.0, rng);
        let u = 1.0 - rng.random::<f64>();
        return boost + u.ln() / shape;
    }
    let d = shape - 1.0 / 3.0;
    let c = 1.0 / (9.0 * d).sqrt();
    loop {
        let z: f64 = StandardNormal.sample(rng);
        let v = 1.0 + c * z;
        if v <= 0.0 {
            continue;
        }
        let v = v * v * v;
        let u = 1.0 - rng.random::<f64>();
        if u.ln() < 0.5 * z * z + d - d * v + d * v.ln() {
            return (d * v).ln();
        }
    }
}

/// `n` i.i.d. draws from the Jacobi measure. See the module docs for the
/// pinned generator.
pub fn sample_iid(params: &JacobiParams, n: usize, seed: u64) -> SampleSet {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points = (0..n)
        .map(|_| {
            let ln_x = ln_gamma_variate(params.beta + 1.0, &mut rng);
            let ln_y = ln_gamma_variate(params.alpha + 1.0, &mut rng);
            (0.5 * (ln_x - ln_y)).tanh().clamp(-1.0, 1.0)
        })
        .collect();
    SampleSet {
        points,
        provenance: Provenance::Iid { seed },
        sorted: false,
    }
}

/// Points with `F(x_i) = (i-1)/(n-1)`, found by bisection to machine precision.
/// The end points are exactly `-1` and `1`.
pub fn equidistributed(params: &JacobiParams, n: usize) -> Result<SampleSet> {
    if n < 2 {
        return Err(Error::contract("equidistributed grid needs n >= 2"));
    }
    let last = (n - 1) as f64;
    let mut points = Vec::with_capacity(n);
    points.push(-1.0);
    for i in 1..n - 1 {
        let target = i as f64 / last;
        let (mut lo, mut hi) = (-1.0_f64, 1.0_f64);
        loop {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if cdf(params, mid) < target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let x = if (cdf(params, lo) - target).abs() <= (cdf(params, hi) - target).abs() {
            lo
        } else {
            hi
        };
        points.push(x);
    }
    points.push(1.0);
    Ok(SampleSet {
        points,
        provenance: Provenance::Equidistributed,
        sorted: true,
    })
}

/// `x_i = -1 + 2(i-1)/(n-1)`.
pub fn equispaced(n: usize) -> Result<SampleSet> {
    if n < 2 {
        return Err(Error::contract("equispaced grid needs n >= 2"));
    }
    let last = (n - 1) as f64;
    let mut points: Vec<f64> = (0..n).map(|i| -1.0 + 2.0 * i as f64 / last).collect();
    points[n - 1] = 1.0;
    Ok(SampleSet {
        points,
        provenance: Provenance::Equispaced,
        sorted: true,
    })
}

/// Outcome of the order-statistics check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OrderStatEvent {
    pub holds: bool,
    /// Smallest one-based `k` with `x_(k) < (k/(Cn))^{1/(1+β)} - 1`.
    pub first_violation: Option<usize>,
}

/// Checks `x_(k) >= (k/(C n))^{1/(1+β)} - 1` for `k = 1..n`.
pub fn orderstat_event(sorted: &SampleSet, params: &JacobiParams, big_c: f64) -> Result<OrderStatEvent> {
    if !sorted.sorted {
        return Err(Error::contract("order statistics need a sorted sample set"));
    }
    if !(big_c > 0.0) {
        return Err(Error::domain("C must be positive"));
    }
    let n = sorted.n() as f64;
    let exponent = 1.0 / (1.0 + params.beta);
    let first_violation = sorted
        .points
        .iter()
        .enumerate()
        .find(|(i, x)| **x < ((*i + 1) as f64 / (big_c * n)).powf(exponent) - 1.0)
        .map(|(i, _)| i + 1);
    Ok(OrderStatEvent {
        holds: first_violation.is_none(),
        first_violation,
    })
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Child seed for task `(m, n, trial)` under `master`: a splitmix64 chain
/// `h = sm(master); h = sm(h ^ m); h = sm(h ^ n); h = sm(h ^ trial)`.
pub fn derive_seed(master: u64, m: u64, n: u64, trial: u64) -> u64 {
    let mut h = splitmix64(master);
    for v in [m, n, trial] {
        h = splitmix64(h ^ v);
    }
    h
}
