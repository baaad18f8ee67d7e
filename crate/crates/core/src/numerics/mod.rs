//! Dense kernels used throughout the crate: symmetric eigensolvers,
//! Gauss–Jacobi quadrature, a small dense simplex solver and Chebyshev helpers.

pub mod chebyshev;
pub mod eigen;
pub mod lp;
pub mod quadrature;

pub use eigen::{inverse_iteration, symmetric_eigen, symmetric_eigenvalues, Eigen, SymmetricMatrix, DEFAULT_EIGEN_TOL};
pub use lp::{lp_maximize, Constraint, LpProblem, LpResult, LpStatus};
pub use quadrature::{gauss_jacobi_nodes, Quadrature};

/// Neumaier compensated accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}
