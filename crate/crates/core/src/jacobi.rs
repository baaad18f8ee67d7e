//! Jacobi probability measures on [-1, 1] and their orthonormal polynomials.
//!
//! The measure is `dρ = c (1-x)^α (1+x)^β dx` with `c` chosen so that `ρ` has
//! unit mass. Basis functions are indexed by degree `j = 0..=m`; the
//! one-based `L_1..L_{m+1}` convention common in the literature maps to
//! `j = 0..=m` here.

use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::numerics::chebyshev::chebyshev_grid_with_endpoints;

/// Parameters of a normalised Jacobi weight together with the derived
/// constants used by the probability bounds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobiParams {
    pub alpha: f64,
    pub beta: f64,
    /// Normalisation so that the weight integrates to one.
    pub c: f64,
    /// `max(alpha, beta)`.
    pub gamma: f64,
    /// `c 2^min(α,β) / (1 + γ)`.
    pub cbar: f64,
    /// `c 2^α / (1 + β)`, the constant of the left-endpoint order-statistics bound.
    pub cbar1: f64,
    /// `c 2^β / (1 + α)`, the mirrored constant.
    pub cbar2: f64,
}

fn ln_beta(a: f64, b: f64) -> f64 {
    ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b)
}

impl JacobiParams {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha > -1.0) {
            return Err(Error::domain("alpha must exceed -1"));
        }
        if !(beta > -1.0) {
            return Err(Error::domain("beta must exceed -1"));
        }
        let ln_c = -((alpha + beta + 1.0) * std::f64::consts::LN_2 + ln_beta(alpha + 1.0, beta + 1.0));
        let c = ln_c.exp();
        let gamma = alpha.max(beta);
        Ok(Self {
            alpha,
            beta,
            c,
            gamma,
            cbar: c * 2f64.powf(alpha.min(beta)) / (1.0 + gamma),
            cbar1: c * 2f64.powf(alpha) / (1.0 + beta),
            cbar2: c * 2f64.powf(beta) / (1.0 + alpha),
        })
    }

    pub fn uniform() -> Self {
        Self::new(0.0, 0.0).expect("valid exponents")
    }

    pub fn chebyshev() -> Self {
        Self::new(-0.5, -0.5).expect("valid exponents")
    }

    /// The mirror image `x -> -x`, i.e. `(α, β)` swapped.
    pub fn reflected(&self) -> Self {
        Self::new(self.beta, self.alpha).expect("valid exponents")
    }

    pub fn is_uniform(&self) -> bool {
        self.alpha == 0.0 && self.beta == 0.0
    }

    /// Density `c (1-x)^α (1+x)^β`.
    pub fn weight(&self, x: f64) -> Result<f64> {
        if !(x.abs() <= 1.0) {
            return Err(Error::domain(format!("x = {x} lies outside [-1, 1]")));
        }
        if (x == 1.0 && self.alpha < 0.0) || (x == -1.0 && self.beta < 0.0) {
            return Err(Error::SingularEndpoint { x });
        }
        Ok(self.c * (1.0 - x).powf(self.alpha) * (1.0 + x).powf(self.beta))
    }

    /// `h_j = ∫ P_j² dρ` for the classical (unnormalised) Jacobi polynomial `P_j`
    /// under the probability measure.
    pub fn squared_norm(&self, j: usize) -> f64 {
        if j == 0 {
            return 1.0;
        }
        let (a, b) = (self.alpha, self.beta);
        let jf = j as f64;
        // c·2^{a+b+1} = 1 / B(a+1, b+1)
        let ln_h = ln_gamma(jf + a + 1.0) + ln_gamma(jf + b + 1.0)
            - (2.0 * jf + a + b + 1.0).ln()
            - ln_gamma(jf + 1.0)
            - ln_gamma(jf + a + b + 1.0)
            - ln_beta(a + 1.0, b + 1.0);
        ln_h.exp()
    }

    /// `sup_{[-1,1]} |P_j| = (γ+1)_j / j!`, attained at `x = 1` when `α >= β`
    /// and at `x = -1` otherwise. Valid only for `γ >= -1/2`.
    pub fn endpoint_sup(&self, j: usize) -> Result<f64> {
        if self.gamma < -0.5 {
            return Err(Error::domain(
                "interior-maximum regime: max(alpha, beta) < -1/2, use a grid search",
            ));
        }
        if j == 0 {
            return Ok(1.0);
        }
        let g = self.gamma;
        let jf = j as f64;
        Ok((ln_gamma(g + 1.0 + jf) - ln_gamma(g + 1.0) - ln_gamma(jf + 1.0)).exp())
    }
}

/// Orthonormal polynomial basis `L_0..L_m` for a Jacobi measure.
#[derive(Debug, Clone)]
pub struct OrthonormalBasis {
    params: JacobiParams,
    degree: usize,
    // (A_j, B_j, C_j) with P_{j+1} = (A_j x + B_j) P_j - C_j P_{j-1}, j >= 1
    recurrence: Vec<(f64, f64, f64)>,
    inv_sqrt_norm: Vec<f64>,
}

impl OrthonormalBasis {
    pub fn new(params: JacobiParams, degree: usize) -> Self {
        let (a, b) = (params.alpha, params.beta);
        let mut recurrence = Vec::with_capacity(degree.saturating_sub(1));
        for j in 1..degree {
            let n = j as f64;
            let s = 2.0 * n + a + b;
            let denom = 2.0 * (n + 1.0) * (n + a + b + 1.0) * s;
            let lead = (s + 1.0) * (s + 2.0) * s / denom;
            let shift = (s + 1.0) * (a * a - b * b) / denom;
            let back = 2.0 * (n + a) * (n + b) * (s + 2.0) / denom;
            recurrence.push((lead, shift, back));
        }
        let inv_sqrt_norm = (0..=degree)
            .map(|j| 1.0 / params.squared_norm(j).sqrt())
            .collect();
        Self {
            params,
            degree,
            recurrence,
            inv_sqrt_norm,
        }
    }

    pub fn params(&self) -> &JacobiParams {
        &self.params
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn dim(&self) -> usize {
        self.degree + 1
    }

    /// Writes `L_0(x)..L_m(x)` into `out` (length `m + 1`) without domain checks.
    pub fn eval_into(&self, x: f64, out: &mut [f64]) {
        debug_assert_eq!(out.len(), self.degree + 1);
        let (a, b) = (self.params.alpha, self.params.beta);
        out[0] = 1.0;
        if self.degree >= 1 {
            out[1] = (a + 1.0) + 0.5 * (a + b + 2.0) * (x - 1.0);
        }
        for j in 1..self.degree {
            let (lead, shift, back) = self.recurrence[j - 1];
            out[j + 1] = (lead * x + shift) * out[j] - back * out[j - 1];
        }
        for (v, s) in out.iter_mut().zip(&self.inv_sqrt_norm) {
            *v *= s;
        }
        out[0] = 1.0;
    }

    /// `[L_0(x), ..., L_m(x)]`.
    pub fn eval(&self, x: f64) -> Result<Vec<f64>> {
        if !(x.abs() <= 1.0) {
            return Err(Error::domain(format!("x = {x} lies outside [-1, 1]")));
        }
        let mut out = vec![0.0; self.degree + 1];
        self.eval_into(x, &mut out);
        Ok(out)
    }

    /// `Σ_j u_j L_j(x)`.
    pub fn eval_expansion(&self, coeffs: &[f64], x: f64) -> f64 {
        let mut buf = vec![0.0; self.degree + 1];
        self.eval_into(x, &mut buf);
        buf.iter().zip(coeffs).map(|(l, u)| l * u).sum()
    }

    fn christoffel_sum(&self, x: f64, buf: &mut [f64]) -> f64 {
        self.eval_into(x, buf);
        buf.iter().map(|v| v * v).sum()
    }

    /// `K(m+1) = sup_x Σ_{j=0}^{m} L_j(x)²`.
    ///
    /// When `min(α, β) >= -1/2` the supremum sits at an endpoint; otherwise
    /// the sum is maximised over a Chebyshev grid of `max(4096, 50 m)` points
    /// plus both endpoints.
    pub fn christoffel_k(&self) -> f64 {
        let mut buf = vec![0.0; self.degree + 1];
        if self.params.alpha.min(self.params.beta) >= -0.5 {
            return self
                .christoffel_sum(1.0, &mut buf)
                .max(self.christoffel_sum(-1.0, &mut buf));
        }
        let size = 4096.max(50 * self.degree);
        chebyshev_grid_with_endpoints(size)
            .into_iter()
            .map(|x| self.christoffel_sum(x, &mut buf))
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn normalisation_constants() {
        let u = JacobiParams::new(0.0, 0.0).unwrap();
        assert_relative_eq!(u.c, 0.5, max_relative = 1e-14);
        assert_eq!(u.gamma, 0.0);
        let ch = JacobiParams::new(-0.5, -0.5).unwrap();
        assert_relative_eq!(ch.c, 1.0 / PI, max_relative = 1e-13);
        let p = JacobiParams::new(1.0, 0.0).unwrap();
        assert_relative_eq!(p.c, 0.5, max_relative = 1e-13);
        assert_eq!(p.gamma, 1.0);
        assert_relative_eq!(u.cbar1, 0.5, max_relative = 1e-14);
    }

    #[test]
    fn rejects_exponents_at_or_below_minus_one() {
        let err = JacobiParams::new(-1.0, 0.0).unwrap_err();
        assert_eq!(err.to_string(), "alpha must exceed -1");
        let err = JacobiParams::new(0.0, -1.5).unwrap_err();
        assert_eq!(err.to_string(), "beta must exceed -1");
        assert!(JacobiParams::new(f64::NAN, 0.0).is_err());
    }

    #[test]
    fn weight_values() {
        assert_relative_eq!(JacobiParams::uniform().weight(0.3).unwrap(), 0.5, max_relative = 1e-14);
        assert_relative_eq!(JacobiParams::chebyshev().weight(0.0).unwrap(), 1.0 / PI, max_relative = 1e-13);
        let half = JacobiParams::new(0.5, 0.5).unwrap();
        assert_relative_eq!(half.weight(0.0).unwrap(), 2.0 / PI, max_relative = 1e-13);
    }

    #[test]
    fn weight_singular_endpoints() {
        let ch = JacobiParams::chebyshev();
        assert!(matches!(ch.weight(1.0), Err(Error::SingularEndpoint { .. })));
        assert!(matches!(ch.weight(-1.0), Err(Error::SingularEndpoint { .. })));
        let p = JacobiParams::new(0.5, -0.5).unwrap();
        assert_eq!(p.weight(1.0).unwrap(), 0.0);
        assert!(p.weight(-1.0).is_err());
        assert!(p.weight(1.5).is_err());
    }

    #[test]
    fn basis_values() {
        let b = OrthonormalBasis::new(JacobiParams::uniform(), 1);
        let v = b.eval(1.0).unwrap();
        assert_eq!(v[0], 1.0);
        assert_relative_eq!(v[1], 3f64.sqrt(), max_relative = 1e-14);

        let b = OrthonormalBasis::new(JacobiParams::new(0.7, -0.3).unwrap(), 0);
        assert_eq!(b.eval(0.42).unwrap(), vec![1.0]);

        let b = OrthonormalBasis::new(JacobiParams::chebyshev(), 2);
        let v = b.eval(0.0).unwrap();
        assert_eq!(v[0], 1.0);
        assert!(v[1].abs() < 1e-15);
        assert_relative_eq!(v[2], -(2f64.sqrt()), max_relative = 1e-13);
        assert!(b.eval(1.01).is_err());
    }

    #[test]
    fn squared_norms() {
        let u = JacobiParams::uniform();
        for j in 0..40 {
            assert_relative_eq!(u.squared_norm(j), 1.0 / (2 * j + 1) as f64, max_relative = 1e-12);
        }
        // P_1 = x/2 and E[x^2] = 1/2 under the arcsine law
        assert_relative_eq!(JacobiParams::chebyshev().squared_norm(1), 0.125, max_relative = 1e-13);
        // α + β = -1 at j = 0 uses the Beta form
        assert_eq!(JacobiParams::new(-0.25, -0.75).unwrap().squared_norm(0), 1.0);
        assert!(JacobiParams::new(-0.25, -0.75).unwrap().squared_norm(1).is_finite());
    }

    #[test]
    fn endpoint_sup_values() {
        for j in 0..10 {
            assert_relative_eq!(JacobiParams::uniform().endpoint_sup(j).unwrap(), 1.0, max_relative = 1e-13);
        }
        assert_relative_eq!(JacobiParams::new(1.0, 0.0).unwrap().endpoint_sup(3).unwrap(), 4.0, max_relative = 1e-13);
        assert_eq!(JacobiParams::new(2.0, 0.5).unwrap().endpoint_sup(0).unwrap(), 1.0);
        let err = JacobiParams::new(-0.75, -0.6).unwrap().endpoint_sup(2).unwrap_err();
        assert!(err.to_string().contains("interior-maximum"));
    }

    #[test]
    fn christoffel_closed_forms() {
        for m in [0usize, 1, 5, 20] {
            let k = OrthonormalBasis::new(JacobiParams::uniform(), m).christoffel_k();
            assert_relative_eq!(k, ((m + 1) * (m + 1)) as f64, max_relative = 1e-12);
            let k = OrthonormalBasis::new(JacobiParams::chebyshev(), m).christoffel_k();
            assert_relative_eq!(k, (2 * m + 1) as f64, max_relative = 1e-12);
        }
        let k = OrthonormalBasis::new(JacobiParams::new(-0.9, 0.3).unwrap(), 0).christoffel_k();
        assert_eq!(k, 1.0);
    }

    #[test]
    fn chebyshev_k_agrees_with_grid_oracle() {
        let b = OrthonormalBasis::new(JacobiParams::chebyshev(), 7);
        let grid_max = (0..=20000)
            .map(|i| -1.0 + 2.0 * i as f64 / 20000.0)
            .map(|x| {
                let t = b.eval(x).unwrap();
                t.iter().map(|v| v * v).sum::<f64>()
            })
            .fold(0.0, f64::max);
        assert_relative_eq!(grid_max, b.christoffel_k(), max_relative = 1e-12);
    }
}
