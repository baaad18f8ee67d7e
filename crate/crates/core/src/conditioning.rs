//! Empirical Gram matrices, their smallest eigenvalue, the condition number
//! of discrete least squares, and the least-squares solve itself.

use crate::error::{Error, Result};
use crate::jacobi::OrthonormalBasis;
use crate::numerics::{inverse_iteration, symmetric_eigen, symmetric_eigenvalues, CompensatedSum, SymmetricMatrix, DEFAULT_EIGEN_TOL};
use crate::sampler::SampleSet;

/// Eigenvalues below this are treated as this value.
pub const LAMBDA_FLOOR: f64 = 1e-13;

/// `G_{jk} = (1/n) Σ_i L_j(x_i) L_k(x_i)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GramMatrix {
    degree: usize,
    n: usize,
    matrix: SymmetricMatrix,
}

impl GramMatrix {
    /// Wraps an arbitrary symmetric matrix of order `m + 1` as a Gram matrix
    /// built from `n` samples.
    pub fn from_matrix(matrix: SymmetricMatrix, n: usize) -> Self {
        Self {
            degree: matrix.order() - 1,
            n,
            matrix,
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &SymmetricMatrix {
        &self.matrix
    }

    pub fn get(&self, j: usize, k: usize) -> f64 {
        self.matrix.get(j, k)
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        symmetric_eigenvalues(&self.matrix)
    }
}

/// Assembles the empirical Gram matrix. Samples are accumulated in index
/// order with compensated summation, so the result does not depend on how
/// callers schedule work.
pub fn gram(basis: &OrthonormalBasis, samples: &SampleSet) -> Result<GramMatrix> {
    if samples.is_empty() {
        return Err(Error::contract("Gram matrix needs at least one sample"));
    }
    let d = basis.dim();
    let mut acc = vec![CompensatedSum::new(); d * (d + 1) / 2];
    let mut row = vec![0.0; d];
    for &x in samples.points() {
        basis.eval_into(x, &mut row);
        let mut idx = 0;
        for j in 0..d {
            let lj = row[j];
            for lk in &row[..=j] {
                acc[idx].add(lj * lk);
                idx += 1;
            }
        }
    }
    let n = samples.n() as f64;
    let tri: Vec<f64> = acc.iter().map(|s| s.value() / n).collect();
    let matrix = SymmetricMatrix::from_lower(d, |j, k| tri[j * (j + 1) / 2 + k]);
    Ok(GramMatrix {
        degree: basis.degree(),
        n: samples.n(),
        matrix,
    })
}

/// Smallest eigenvalue of `G`, floored at [`LAMBDA_FLOOR`]. The flag reports
/// whether the floor was applied.
pub fn min_eigenvalue(g: &GramMatrix) -> (f64, bool) {
    let lambda = g.eigenvalues()[0];
    if lambda < LAMBDA_FLOOR {
        (LAMBDA_FLOOR, true)
    } else {
        (lambda, false)
    }
}

/// `λ_min` estimates below this are recomputed from the samples.
pub const REFINE_BELOW: f64 = 1e-8;

/// `κ₂ = λ_min(G)^{-1/2}`, with the eigenvalue floor applied.
///
/// The spectrum of the assembled `G` resolves `λ_min` only to about
/// `ε ||G||` absolute. Below [`REFINE_BELOW`] the smallest eigenvector is
/// sharpened by inverse iteration and `λ_min` is replaced by its Rayleigh
/// quotient `(1/n) Σ_i p(x_i)²`, evaluated directly at the samples.
pub fn condition_number(basis: &OrthonormalBasis, samples: &SampleSet) -> Result<(f64, bool)> {
    let g = gram(basis, samples)?;
    let mut lambda = g.eigenvalues()[0];
    if lambda < REFINE_BELOW {
        lambda = sample_rayleigh_quotient(basis, samples, &inverse_iteration(g.matrix(), lambda, 3));
    }
    let clamped = lambda < LAMBDA_FLOOR;
    Ok((lambda.max(LAMBDA_FLOOR).powf(-0.5), clamped))
}

/// `(1/n) Σ_i p(x_i)² / |u|²` for `p = Σ_j u_j L_j`.
fn sample_rayleigh_quotient(basis: &OrthonormalBasis, samples: &SampleSet, u: &[f64]) -> f64 {
    let mut acc = CompensatedSum::new();
    let mut row = vec![0.0; basis.dim()];
    for &x in samples.points() {
        basis.eval_into(x, &mut row);
        let p: f64 = row.iter().zip(u).map(|(l, c)| l * c).sum();
        acc.add(p * p);
    }
    let uu: f64 = u.iter().map(|c| c * c).sum();
    acc.value() / (samples.n() as f64 * uu)
}

/// Spectral norm `|||G - I||| = max_μ |μ - 1|`.
pub fn spectral_distance_to_identity(g: &GramMatrix) -> f64 {
    g.eigenvalues()
        .into_iter()
        .map(|mu| (mu - 1.0).abs())
        .fold(0.0, f64::max)
}

/// Solves `G u = b`, `b_k = (1/n) Σ_i f(x_i) L_k(x_i)`, through the
/// eigendecomposition of `G` with eigenvalues floored at [`LAMBDA_FLOOR`].
/// The fitted polynomial is `Σ_j u_j L_j`.
pub fn least_squares_fit(basis: &OrthonormalBasis, samples: &SampleSet, values: &[f64]) -> Result<Vec<f64>> {
    if values.len() != samples.n() {
        return Err(Error::contract(format!(
            "{} values supplied for {} samples",
            values.len(),
            samples.n()
        )));
    }
    let needed = basis.dim();
    let distinct = samples.distinct_count();
    if distinct < needed {
        return Err(Error::RankDeficient { distinct, needed });
    }
    let g = gram(basis, samples)?;
    let d = needed;
    let mut acc = vec![CompensatedSum::new(); d];
    let mut row = vec![0.0; d];
    for (&x, &f) in samples.points().iter().zip(values) {
        basis.eval_into(x, &mut row);
        for (a, l) in acc.iter_mut().zip(&row) {
            a.add(f * l);
        }
    }
    let n = samples.n() as f64;
    let b: Vec<f64> = acc.iter().map(|s| s.value() / n).collect();

    let eig = symmetric_eigen(g.matrix(), DEFAULT_EIGEN_TOL)?;
    let mut u = vec![0.0; d];
    for k in 0..d {
        let v = eig.vector(k);
        let proj: f64 = v.iter().zip(&b).map(|(a, c)| a * c).sum();
        let scale = proj / eig.values[k].max(LAMBDA_FLOOR);
        for (ui, vi) in u.iter_mut().zip(&v) {
            *ui += scale * vi;
        }
    }
    Ok(u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jacobi::JacobiParams;
    use approx::assert_relative_eq;

    fn pts(v: &[f64]) -> SampleSet {
        SampleSet::from_points(v.to_vec()).unwrap()
    }

    #[test]
    fn gram_hand_computed() {
        let b = OrthonormalBasis::new(JacobiParams::uniform(), 1);
        let g = gram(&b, &pts(&[-1.0, 1.0])).unwrap();
        assert_eq!(g.get(0, 0), 1.0);
        assert!(g.get(0, 1).abs() < 1e-15);
        assert_relative_eq!(g.get(1, 1), 3.0, max_relative = 1e-14);
        let g = gram(&b, &pts(&[-1.0, 0.0, 1.0])).unwrap();
        assert_relative_eq!(g.get(1, 1), 2.0, max_relative = 1e-14);
        let b0 = OrthonormalBasis::new(JacobiParams::new(0.3, 1.2).unwrap(), 0);
        let g = gram(&b0, &pts(&[0.1, -0.7])).unwrap();
        assert_eq!(g.get(0, 0), 1.0);
        assert!(gram(&b, &pts(&[])).is_err());
    }

    #[test]
    fn min_eigenvalue_and_clamp() {
        let g = GramMatrix::from_matrix(SymmetricMatrix::diagonal(&[1.0, 3.0]), 2);
        assert_eq!(min_eigenvalue(&g), (1.0, false));
        let g = GramMatrix::from_matrix(SymmetricMatrix::diagonal(&[1.0, 0.75]), 2);
        assert_eq!(min_eigenvalue(&g), (0.75, false));
        let b = OrthonormalBasis::new(JacobiParams::uniform(), 4);
        let g = gram(&b, &pts(&[-0.3, 0.2, 0.9])).unwrap();
        assert_eq!(min_eigenvalue(&g), (LAMBDA_FLOOR, true));
    }

    #[test]
    fn condition_numbers() {
        let b = OrthonormalBasis::new(JacobiParams::uniform(), 1);
        let (k, c) = condition_number(&b, &pts(&[-1.0, 1.0])).unwrap();
        assert_relative_eq!(k, 1.0, max_relative = 1e-14);
        assert!(!c);
        let (k, _) = condition_number(&b, &pts(&[-0.5, 0.5])).unwrap();
        assert_relative_eq!(k, 2.0 / 3f64.sqrt(), max_relative = 1e-14);
        let b0 = OrthonormalBasis::new(JacobiParams::chebyshev(), 0);
        assert_eq!(condition_number(&b0, &pts(&[0.3])).unwrap(), (1.0, false));
    }

    #[test]
    fn spectral_distance() {
        let d = |diag: &[f64]| spectral_distance_to_identity(&GramMatrix::from_matrix(SymmetricMatrix::diagonal(diag), 2));
        assert_eq!(d(&[1.0, 1.0]), 0.0);
        assert!((d(&[1.0, 3.0]) - 2.0).abs() < 1e-15);
        assert!((d(&[1.0, 0.75]) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn least_squares_examples() {
        let b = OrthonormalBasis::new(JacobiParams::uniform(), 1);
        let s = pts(&[-1.0, 0.0, 1.0]);
        let u = least_squares_fit(&b, &s, &[5.0, 5.0, 5.0]).unwrap();
        assert_relative_eq!(u[0], 5.0, max_relative = 1e-14);
        assert!(u[1].abs() < 1e-14);
        let r3 = 3f64.sqrt();
        let u = least_squares_fit(&b, &s, &[-r3, 0.0, r3]).unwrap();
        assert!(u[0].abs() < 1e-14);
        assert_relative_eq!(u[1], 1.0, max_relative = 1e-14);
    }

    #[test]
    fn least_squares_reproduces_polynomials() {
        let params = JacobiParams::new(0.5, -0.25).unwrap();
        let b = OrthonormalBasis::new(params, 6);
        let s = crate::sampler::sample_iid(&params, 60, 5);
        let f = |x: f64| 1.0 - 2.0 * x + 0.5 * x.powi(3) - x.powi(6);
        let values: Vec<f64> = s.points().iter().map(|&x| f(x)).collect();
        let u = least_squares_fit(&b, &s, &values).unwrap();
        for &x in s.points() {
            assert!((b.eval_expansion(&u, x) - f(x)).abs() < 1e-9);
        }
    }

    #[test]
    fn least_squares_errors() {
        let b = OrthonormalBasis::new(JacobiParams::uniform(), 2);
        let s = pts(&[0.1, 0.1, 0.5]);
        let err = least_squares_fit(&b, &s, &[1.0, 1.0, 2.0]).unwrap_err();
        assert!(matches!(err, Error::RankDeficient { distinct: 2, needed: 3 }));
        assert_eq!(least_squares_fit(&b, &s, &[1.0]).unwrap_err().code(), "contract");
    }
}
