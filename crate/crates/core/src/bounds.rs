//! Explicit bound formulas: the critical exponent `λ`, the sufficient sampling
//! threshold for `|||G - I||| <= 1/2`, and the witness polynomial that
//! certifies a lower bound on `B(n, m)` for a concrete sample set.

use std::f64::consts::{LN_2, PI};

use crate::error::{Error, Result};
use crate::jacobi::{JacobiParams, OrthonormalBasis};
use crate::numerics::chebyshev::chebyshev_grid_with_endpoints;
use crate::sampler::{orderstat_event, SampleSet};

/// `λ = (m^{2(1+γ)} / (C n))^{1/(1+2γ)}`, defined for `γ > -1/2`.
pub fn theoretical_exponent(m: usize, n: usize, params: &JacobiParams, big_c: f64) -> Result<f64> {
    if m < 1 || n < 1 {
        return Err(Error::contract("exponent needs m >= 1 and n >= 1"));
    }
    if !(big_c > 0.0) {
        return Err(Error::domain("C must be positive"));
    }
    let g = params.gamma;
    if !(g > -0.5) {
        return Err(Error::domain("max(alpha, beta) must exceed -1/2"));
    }
    let m = m as f64;
    let n = n as f64;
    Ok(((2.0 * (1.0 + g) * m.ln() - (big_c * n).ln()) / (1.0 + 2.0 * g)).exp())
}

/// `ι = (1 - ln 2) / (2 + 2r)`; logarithms are natural throughout.
pub fn cohen_iota(r: f64) -> f64 {
    (1.0 - LN_2) / (2.0 + 2.0 * r)
}

/// Smallest `n >= m + 2` with `K(m+1) <= ι n / ln n`, found by doubling then
/// bisection. `m` is taken from `basis`.
pub fn cohen_threshold(r: f64, basis: &OrthonormalBasis) -> Result<usize> {
    if !(r > 0.0) {
        return Err(Error::domain("r must be positive"));
    }
    let k = basis.christoffel_k();
    let iota = cohen_iota(r);
    let holds = |n: usize| {
        let nf = n as f64;
        k <= iota * nf / nf.ln()
    };
    let start = basis.degree() + 2;
    if holds(start) {
        return Ok(start);
    }
    let mut lo = start;
    let mut hi = start.max(4);
    while !holds(hi) {
        lo = hi;
        hi = hi.checked_mul(2).ok_or_else(|| Error::domain("threshold exceeds usize"))?;
    }
    // invariant: !holds(lo), holds(hi)
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if holds(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WitnessCase {
    /// `λ > ĉ`: the witness polynomial is built.
    I,
    /// `λ <= ĉ`: only the trivial bound `B >= 1` is reported.
    II,
}

impl WitnessCase {
    pub fn label(&self) -> &'static str {
        match self {
            WitnessCase::I => "I",
            WitnessCase::II => "II",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WitnessResult {
    pub case: WitnessCase,
    /// Number of Chebyshev zeros replaced by order statistics (0 in case II).
    pub k: usize,
    pub lambda: f64,
    /// Certified lower bound on `B(n, m)`; at least 1.
    pub bound: f64,
    /// Whether the order-statistics event holds for the (reflected) samples.
    pub event_holds: bool,
    /// Location of the grid maximum of `|p|`, in the caller's coordinates
    /// (NaN in case II).
    pub sup_location: f64,
    /// `max_i |p(x_i)|` (NaN in case II).
    pub sample_max: f64,
}

/// `ĉ = max{(2π²)^{(1+β)/(1+2β)}, 9π²/8}`.
pub fn witness_threshold(beta: f64) -> f64 {
    (2.0 * PI * PI).powf((1.0 + beta) / (1.0 + 2.0 * beta)).max(9.0 * PI * PI / 8.0)
}

/// Witness `p(x) = ½ T_m(x) ∏_{j=0}^{K} (x - x_(j)) / (x - y_j)` with
/// `y_j = -cos(π(2j+1)/(2m))` and `x_(0) = -1`. Since the `y_j` are zeros of
/// `T_m = 2^{m-1} ∏ (x - y_j)`, the quotient cancels exactly and
/// `p(x) = 2^{m-2} ∏_{j>K} (x - y_j) ∏_{j<=K} (x - x_(j))`; evaluation works
/// on this pole-free product in log-magnitude/sign form.
struct Witness {
    roots: Vec<f64>,
    ln_scale: f64,
}

impl Witness {
    fn ln_abs(&self, x: f64) -> f64 {
        self.ln_scale + self.roots.iter().map(|r| (x - r).abs().ln()).sum::<f64>()
    }
}

/// Builds the witness polynomial for the given sorted samples and returns the
/// certified ratio `max(1, sup_grid |p| / max_i |p(x_i)|)`, a lower bound on
/// `B(n, m)` for these samples whether or not the order-statistics event holds.
///
/// When `α > β` the problem is mirrored (`x -> -x`, `α <-> β`) first.
pub fn witness_lower_bound(sorted: &SampleSet, m: usize, params: &JacobiParams, big_c: f64) -> Result<WitnessResult> {
    if !sorted.is_sorted() {
        return Err(Error::contract("witness construction needs a sorted sample set"));
    }
    let n = sorted.n();
    if m < 1 || m >= n {
        return Err(Error::contract(format!("witness needs 1 <= m < n, got m = {m}, n = {n}")));
    }
    let reflect = params.alpha > params.beta;
    let (points, eff) = if reflect {
        (sorted.reflected(), params.reflected())
    } else {
        (sorted.clone(), *params)
    };
    let lambda = theoretical_exponent(m, n, &eff, big_c)?;
    let beta = eff.beta;
    let event_holds = orderstat_event(&points, &eff, big_c)?.holds;
    let c_hat = witness_threshold(beta);

    if lambda <= c_hat || m < 2 {
        return Ok(WitnessResult {
            case: WitnessCase::II,
            k: 0,
            lambda,
            bound: 1.0,
            event_holds,
            sup_location: f64::NAN,
            sample_max: f64::NAN,
        });
    }

    let scale = (2.0 * PI * PI).powf((1.0 + beta) / (1.0 + 2.0 * beta));
    let k = ((lambda / scale).floor() as usize).clamp(1, m - 1);
    let mf = m as f64;
    let mut roots = Vec::with_capacity(m);
    roots.push(-1.0);
    roots.extend_from_slice(&points.points()[..k]);
    roots.extend((k + 1..m).map(|j| -(PI * (2 * j + 1) as f64 / (2.0 * mf)).cos()));
    let witness = Witness {
        roots,
        ln_scale: (mf - 2.0) * LN_2,
    };

    let ln_den = points
        .points()
        .iter()
        .map(|&x| witness.ln_abs(x))
        .fold(f64::NEG_INFINITY, f64::max);

    let x_star = -(PI / mf).cos();
    let grid_size = 8192.max(100 * m);
    let mut best = (witness.ln_abs(x_star), x_star);
    for x in chebyshev_grid_with_endpoints(grid_size) {
        let v = witness.ln_abs(x);
        if v > best.0 {
            best = (v, x);
        }
    }
    let bound = if ln_den == f64::NEG_INFINITY {
        f64::INFINITY
    } else {
        (best.0 - ln_den).exp().max(1.0)
    };
    Ok(WitnessResult {
        case: WitnessCase::I,
        k,
        lambda,
        bound,
        event_holds,
        sup_location: if reflect { -best.1 } else { best.1 },
        sample_max: ln_den.exp(),
    })
}

/// Default `C = 2e²c̄ + 1`.
pub fn default_big_c(params: &JacobiParams) -> f64 {
    2.0 * std::f64::consts::E.powi(2) * params.cbar + 1.0
}
