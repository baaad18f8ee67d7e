//! Brute-force references used to cross-check the analytic machinery.
//!
//! [`b_exact`] computes `B(n, m) = sup_{p ∈ P_m} ||p||_∞ / max_i |p(x_i)|` by
//! solving, for each evaluation point `x*`, the linear program
//! `max p(x*)` subject to `-1 <= p(x_i) <= 1`, with `p` written in the
//! Chebyshev basis. The outer supremum is taken over a Chebyshev grid plus
//! both endpoints, and every grid local maximum within a factor of two of the
//! best is polished with a golden-section search.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use crate::conditioning::{GramMatrix, LAMBDA_FLOOR};
use crate::error::{Error, Result};
use crate::numerics::chebyshev::{chebyshev_grid_with_endpoints, chebyshev_t, chebyshev_t_into};
use crate::numerics::{lp_maximize, symmetric_eigen, LpProblem, LpStatus, DEFAULT_EIGEN_TOL};
use crate::sampler::SampleSet;

/// Largest degree the LP oracle accepts.
pub const ORACLE_MAX_DEGREE: usize = 20;

const GOLDEN_ITERS: usize = 60;

struct LebesgueLp {
    template: LpProblem,
    degree: usize,
}

impl LebesgueLp {
    fn new(samples: &SampleSet, degree: usize) -> Self {
        let mut pts = samples.points().to_vec();
        pts.sort_by(f64::total_cmp);
        pts.dedup();
        let mut template = LpProblem::new(vec![0.0; degree + 1]);
        for &x in &pts {
            let row = chebyshev_t(degree, x);
            let neg: Vec<f64> = row.iter().map(|v| -v).collect();
            template = template.with_constraint(row, 1.0).with_constraint(neg, 1.0);
        }
        Self { template, degree }
    }

    /// `max { p(x) : |p(x_i)| <= 1 }`.
    fn value_at(&self, x: f64) -> Result<f64> {
        let mut problem = self.template.clone();
        chebyshev_t_into(x, &mut problem.objective);
        debug_assert_eq!(problem.objective.len(), self.degree + 1);
        let res = lp_maximize(&problem)?;
        match res.status {
            LpStatus::Optimal => Ok(res.value),
            LpStatus::Infeasible => Err(Error::Lp("unexpectedly infeasible".into())),
            LpStatus::Unbounded => Err(Error::Lp("unexpectedly unbounded".into())),
        }
    }

    fn golden_max(&self, mut a: f64, mut b: f64) -> Result<(f64, f64)> {
        let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
        let mut c = b - inv_phi * (b - a);
        let mut d = a + inv_phi * (b - a);
        let mut fc = self.value_at(c)?;
        let mut fd = self.value_at(d)?;
        for _ in 0..GOLDEN_ITERS {
            if b - a < 1e-13 {
                break;
            }
            if fc >= fd {
                b = d;
                d = c;
                fd = fc;
                c = b - inv_phi * (b - a);
                fc = self.value_at(c)?;
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + inv_phi * (b - a);
                fd = self.value_at(d)?;
            }
        }
        Ok(if fc >= fd { (fc, c) } else { (fd, d) })
    }
}

/// `B(n, m)` for the given samples, by grid search over LP values.
///
/// Requires at least `m + 1` distinct points, `m <= 20` and `grid_size >= 8m`.
pub fn b_exact(samples: &SampleSet, m: usize, grid_size: usize) -> Result<f64> {
    if m > ORACLE_MAX_DEGREE {
        return Err(Error::domain(format!("oracle is capped at m <= {ORACLE_MAX_DEGREE}, got {m}")));
    }
    if grid_size < 8 * m {
        return Err(Error::contract(format!("grid size {grid_size} is below 8m = {}", 8 * m)));
    }
    let distinct = samples.distinct_count();
    if distinct < m + 1 {
        return Err(Error::RankDeficient {
            distinct,
            needed: m + 1,
        });
    }
    if m == 0 {
        return Ok(1.0);
    }
    let lp = LebesgueLp::new(samples, m);
    let grid = chebyshev_grid_with_endpoints(grid_size.max(1));
    let values: Vec<f64> = grid
        .par_iter()
        .map(|&x| lp.value_at(x))
        .collect::<Result<_>>()?;
    let best_grid = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);

    let last = grid.len() - 1;
    let candidates: Vec<usize> = (0..grid.len())
        .filter(|&i| {
            let left = i == 0 || values[i] >= values[i - 1];
            let right = i == last || values[i] >= values[i + 1];
            left && right && values[i] >= 0.5 * best_grid
        })
        .collect();
    let refined: Vec<f64> = candidates
        .par_iter()
        .map(|&i| {
            let a = grid[i.saturating_sub(1)];
            let b = grid[(i + 1).min(last)];
            lp.golden_max(a, b).map(|(v, _)| v)
        })
        .collect::<Result<_>>()?;
    Ok(refined.into_iter().fold(best_grid, f64::max).max(1.0))
}

/// Randomised lower confirmation of `D(n, m) = λ_min(G)^{-1/2}`: the maximum
/// of `sqrt(wᵀw / wᵀGw)` over `trials` Gaussian directions and the
/// eigenvector of the smallest eigenvalue. Rayleigh quotients are floored at
/// `1e-13`, matching the condition-number convention.
pub fn d_random_check(g: &GramMatrix, trials: usize, seed: u64) -> Result<f64> {
    if trials == 0 {
        return Err(Error::contract("at least one trial is required"));
    }
    let matrix = g.matrix();
    let d = matrix.order();
    let ratio = |w: &[f64]| {
        let ww: f64 = w.iter().map(|v| v * v).sum();
        let q = (matrix.quadratic_form(w) / ww).max(LAMBDA_FLOOR);
        q.powf(-0.5)
    };
    let eig = symmetric_eigen(matrix, DEFAULT_EIGEN_TOL)?;
    let mut best = ratio(&eig.vector(0));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut w = vec![0.0; d];
    for _ in 0..trials {
        for v in w.iter_mut() {
            *v = StandardNormal.sample(&mut rng);
        }
        best = best.max(ratio(&w));
    }
    Ok(best)
}
