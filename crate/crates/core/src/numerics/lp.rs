//! Dense two-phase simplex for small problems of the form
//!
//! ```text
//! maximize cᵀz  subject to  aᵢᵀz <= bᵢ,  z free
//! ```
//!
//! Free variables are split as `z = u - v` with `u, v >= 0`. Entering and
//! leaving variables follow Bland's rule, so the method terminates on
//! degenerate problems.

use crate::error::{Error, Result};

const PIVOT_EPS: f64 = 1e-12;
const COST_EPS: f64 = 1e-11;
const FEAS_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub coeffs: Vec<f64>,
    pub bound: f64,
}

impl Constraint {
    pub fn new(coeffs: Vec<f64>, bound: f64) -> Self {
        Self { coeffs, bound }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpProblem {
    pub objective: Vec<f64>,
    pub constraints: Vec<Constraint>,
}

impl LpProblem {
    pub fn new(objective: Vec<f64>) -> Self {
        Self {
            objective,
            constraints: Vec::new(),
        }
    }

    pub fn with_constraint(mut self, coeffs: Vec<f64>, bound: f64) -> Self {
        self.constraints.push(Constraint::new(coeffs, bound));
        self
    }

    pub fn dim(&self) -> usize {
        self.objective.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpResult {
    pub status: LpStatus,
    /// Optimal objective value; NaN unless `status == Optimal`.
    pub value: f64,
    pub argmax: Vec<f64>,
    /// Nonnegative multipliers `y` with `Aᵀy = c` and `bᵀy = value` at the optimum.
    pub dual: Vec<f64>,
}

struct Tableau {
    rows: usize,
    cols: usize,
    // rows x (cols + 1); last column is the right-hand side
    t: Vec<f64>,
    basis: Vec<usize>,
}

impl Tableau {
    #[inline]
    fn at(&self, r: usize, c: usize) -> f64 {
        self.t[r * (self.cols + 1) + c]
    }

    #[inline]
    fn rhs(&self, r: usize) -> f64 {
        self.at(r, self.cols)
    }

    fn pivot(&mut self, pr: usize, pc: usize, red: &mut [f64]) {
        let w = self.cols + 1;
        let p = self.t[pr * w + pc];
        for c in 0..w {
            self.t[pr * w + c] /= p;
        }
        self.t[pr * w + pc] = 1.0;
        let prow: Vec<f64> = self.t[pr * w..(pr + 1) * w].to_vec();
        for r in 0..self.rows {
            if r == pr {
                continue;
            }
            let f = self.t[r * w + pc];
            if f != 0.0 {
                for (t, p) in self.t[r * w..(r + 1) * w].iter_mut().zip(&prow) {
                    *t -= f * p;
                }
                self.t[r * w + pc] = 0.0;
            }
        }
        let f = red[pc];
        if f != 0.0 {
            for (rc, p) in red.iter_mut().zip(&prow) {
                *rc -= f * p;
            }
            red[pc] = 0.0;
        }
        self.basis[pr] = pc;
    }

    /// Reduced-cost row for minimising `cost` with the current basis.
    fn reduced_costs(&self, cost: &[f64]) -> Vec<f64> {
        let mut red: Vec<f64> = cost.to_vec();
        red.push(0.0);
        for r in 0..self.rows {
            let cb = cost[self.basis[r]];
            if cb != 0.0 {
                for (c, rc) in red.iter_mut().enumerate() {
                    *rc -= cb * self.at(r, c);
                }
            }
        }
        red
    }

    /// Runs Bland's-rule simplex minimising the cost encoded in `red`.
    /// Columns with `allowed[c] == false` never enter. Returns false when unbounded.
    fn optimize(&mut self, red: &mut [f64], allowed: &[bool]) -> bool {
        loop {
            let entering = (0..self.cols).find(|&c| allowed[c] && red[c] < -COST_EPS);
            let Some(pc) = entering else {
                return true;
            };
            let mut best: Option<(usize, f64)> = None;
            for r in 0..self.rows {
                let a = self.at(r, pc);
                if a > PIVOT_EPS {
                    let ratio = self.rhs(r) / a;
                    best = match best {
                        None => Some((r, ratio)),
                        Some((br, bv)) => {
                            if ratio < bv - 1e-14 * bv.abs().max(1.0)
                                || ((ratio - bv).abs() <= 1e-14 * bv.abs().max(1.0)
                                    && self.basis[r] < self.basis[br])
                            {
                                Some((r, ratio))
                            } else {
                                Some((br, bv))
                            }
                        }
                    };
                }
            }
            let Some((pr, _)) = best else {
                return false;
            };
            self.pivot(pr, pc, red);
        }
    }
}

/// Maximises `cᵀz` over `{z : Az <= b}` with `z` unrestricted in sign.
pub fn lp_maximize(problem: &LpProblem) -> Result<LpResult> {
    let d = problem.dim();
    if d == 0 {
        return Err(Error::contract("linear program needs at least one variable"));
    }
    if problem.constraints.is_empty() {
        return Err(Error::contract("linear program needs at least one constraint"));
    }
    if let Some(bad) = problem.constraints.iter().position(|c| c.coeffs.len() != d) {
        return Err(Error::contract(format!(
            "constraint {bad} has {} coefficients, expected {d}",
            problem.constraints[bad].coeffs.len()
        )));
    }

    let m = problem.constraints.len();
    // columns: u (d) | v (d) | slack (m) | artificial (one per negative-rhs row)
    let neg_rows: Vec<usize> = (0..m)
        .filter(|&i| problem.constraints[i].bound < 0.0)
        .collect();
    let n_art = neg_rows.len();
    let slack0 = 2 * d;
    let art0 = slack0 + m;
    let cols = art0 + n_art;
    let w = cols + 1;
    let mut t = vec![0.0; m * w];
    let mut basis = vec![0; m];
    let mut art_iter = 0;
    for (i, con) in problem.constraints.iter().enumerate() {
        let sign = if con.bound < 0.0 { -1.0 } else { 1.0 };
        for j in 0..d {
            t[i * w + j] = sign * con.coeffs[j];
            t[i * w + d + j] = -sign * con.coeffs[j];
        }
        t[i * w + slack0 + i] = sign;
        t[i * w + cols] = sign * con.bound;
        if sign < 0.0 {
            t[i * w + art0 + art_iter] = 1.0;
            basis[i] = art0 + art_iter;
            art_iter += 1;
        } else {
            basis[i] = slack0 + i;
        }
    }
    let mut tab = Tableau {
        rows: m,
        cols,
        t,
        basis,
    };

    if n_art > 0 {
        let mut cost = vec![0.0; cols];
        for c in cost.iter_mut().skip(art0) {
            *c = 1.0;
        }
        let mut red = tab.reduced_costs(&cost);
        let allowed = vec![true; cols];
        tab.optimize(&mut red, &allowed);
        let infeas: f64 = (0..m)
            .filter(|&r| tab.basis[r] >= art0)
            .map(|r| tab.rhs(r))
            .sum();
        if infeas > FEAS_TOL {
            return Ok(LpResult {
                status: LpStatus::Infeasible,
                value: f64::NAN,
                argmax: Vec::new(),
                dual: Vec::new(),
            });
        }
        // drive remaining (zero-level) artificials out of the basis
        let mut scratch = vec![0.0; cols + 1];
        for r in 0..m {
            if tab.basis[r] >= art0 {
                if let Some(pc) = (0..art0).find(|&c| tab.at(r, c).abs() > 1e-9) {
                    tab.pivot(r, pc, &mut scratch);
                }
            }
        }
    }

    let mut cost = vec![0.0; cols];
    for j in 0..d {
        cost[j] = -problem.objective[j];
        cost[d + j] = problem.objective[j];
    }
    let mut red = tab.reduced_costs(&cost);
    let allowed: Vec<bool> = (0..cols).map(|c| c < art0).collect();
    if !tab.optimize(&mut red, &allowed) {
        return Ok(LpResult {
            status: LpStatus::Unbounded,
            value: f64::INFINITY,
            argmax: Vec::new(),
            dual: Vec::new(),
        });
    }

    let mut x = vec![0.0; cols];
    for r in 0..m {
        x[tab.basis[r]] = tab.rhs(r);
    }
    let argmax: Vec<f64> = (0..d).map(|j| x[j] - x[d + j]).collect();
    let value = problem
        .objective
        .iter()
        .zip(&argmax)
        .map(|(c, z)| c * z)
        .sum();
    let dual = (0..m).map(|i| red[slack0 + i].max(0.0)).collect();
    Ok(LpResult {
        status: LpStatus::Optimal,
        value,
        argmax,
        dual,
    })
}
