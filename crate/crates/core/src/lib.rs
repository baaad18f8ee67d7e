//! Stability of discrete least-squares polynomial approximation from random
//! samples drawn from Jacobi measures on [-1, 1].
//!
//! The crate computes the condition number `κ₂ = λ_min(G)^{-1/2}` of the
//! empirical Gram matrix of an orthonormal Jacobi basis, the inverse
//! Christoffel quantity `K(m+1)`, the sampling threshold that guarantees
//! `|||G - I||| <= 1/2` with high probability, an explicit witness polynomial
//! that certifies exponential growth of `B(n, m) = sup ||p||_∞ / ||p||_{n,∞}`,
//! and a linear-programming oracle for `B(n, m)` itself. The `experiments`
//! module drives seeded, parallel Monte Carlo sweeps that emit CSV.

// Negated comparisons are the NaN-rejecting form of argument checks.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
pub mod bounds;
pub mod conditioning;
pub mod error;
pub mod experiments;
pub mod format;
pub mod jacobi;
pub mod numerics;
pub mod oracle;
pub mod sampler;

pub use bounds::{cohen_iota, cohen_threshold, theoretical_exponent, witness_lower_bound, WitnessCase, WitnessResult};
pub use conditioning::{
    condition_number, gram, least_squares_fit, min_eigenvalue, spectral_distance_to_identity, GramMatrix,
    LAMBDA_FLOOR,
};
pub use error::{Error, Result};
pub use jacobi::{JacobiParams, OrthonormalBasis};
pub use oracle::{b_exact, d_random_check};
pub use sampler::{cdf, equidistributed, equispaced, orderstat_event, sample_iid, SampleSet};
