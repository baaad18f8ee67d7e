use crate::error::Result;
use crate::jacobi::JacobiParams;

use super::eigen::{symmetric_eigen, SymmetricMatrix, DEFAULT_EIGEN_TOL};

/// Gauss rule for a probability measure: `Σ w_i f(x_i) ≈ ∫ f dρ`.
#[derive(Debug, Clone)]
pub struct Quadrature {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Quadrature {
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(x, w)| w * f(*x)).sum()
    }
}

/// Diagonal and squared off-diagonal entries of the Jacobi matrix of the
/// monic Jacobi polynomials.
fn monic_recurrence(params: &JacobiParams, k: usize) -> (Vec<f64>, Vec<f64>) {
    let (a, b) = (params.alpha, params.beta);
    let diag = (0..k)
        .map(|n| {
            let s = 2.0 * n as f64 + a + b;
            if n == 0 {
                (b - a) / (a + b + 2.0)
            } else {
                (b * b - a * a) / (s * (s + 2.0))
            }
        })
        .collect();
    let off = (1..k)
        .map(|n| {
            let nf = n as f64;
            let s = 2.0 * nf + a + b;
            if n == 1 {
                4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + a + b).powi(2) * (3.0 + a + b))
            } else {
                4.0 * nf * (nf + a) * (nf + b) * (nf + a + b) / (s * s * (s + 1.0) * (s - 1.0))
            }
        })
        .collect();
    (diag, off)
}

/// Golub–Welsch: nodes are the eigenvalues of the symmetric tridiagonal
/// recurrence matrix, weights the squared first eigenvector components.
/// Weights sum to one.
pub fn gauss_jacobi_nodes(params: &JacobiParams, k: usize) -> Result<Quadrature> {
    if k == 0 {
        return Err(crate::error::Error::contract("quadrature order must be at least 1"));
    }
    let (diag, off) = monic_recurrence(params, k);
    let jm = SymmetricMatrix::from_lower(k, |i, j| {
        if i == j {
            diag[i]
        } else if i == j + 1 {
            off[j].sqrt()
        } else {
            0.0
        }
    });
    let eig = symmetric_eigen(&jm, DEFAULT_EIGEN_TOL * 1e-2)?;
    let weights: Vec<f64> = (0..k).map(|c| eig.vectors[c].powi(2)).collect();
    let total: f64 = weights.iter().sum();
    Ok(Quadrature {
        nodes: eig.values,
        weights: weights.into_iter().map(|w| w / total).collect(),
    })
}
