//! Reference computations shared by the integration suites. Each is built
//! from first principles and never calls the routine it checks.
#![allow(dead_code)]

use lsq_stability::numerics::gauss_jacobi_nodes;
use lsq_stability::{JacobiParams, OrthonormalBasis};

/// `max_{j,k} |⟨L_j, L_k⟩ - δ_jk|` by Gauss–Jacobi quadrature with `m + 1` nodes.
pub fn gram_defect(params: JacobiParams, m: usize) -> f64 {
    let basis = OrthonormalBasis::new(params, m);
    let q = gauss_jacobi_nodes(&params, m + 1).unwrap();
    let rows: Vec<Vec<f64>> = q.nodes.iter().map(|&x| basis.eval(x).unwrap()).collect();
    let mut worst: f64 = 0.0;
    for j in 0..=m {
        for k in 0..=j {
            let ip: f64 = rows.iter().zip(&q.weights).map(|(r, w)| w * r[j] * r[k]).sum();
            let target = if j == k { 1.0 } else { 0.0 };
            worst = worst.max((ip - target).abs());
        }
    }
    worst
}

/// `max_x Σ_i |ℓ_i(x)|` for interpolation at `nodes`, maximised by golden
/// section on each gap between consecutive nodes.
pub fn lagrange_lebesgue_constant(nodes: &[f64]) -> f64 {
    let lebesgue = |x: f64| -> f64 {
        (0..nodes.len())
            .map(|i| {
                nodes
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != i)
                    .map(|(_, &xj)| (x - xj) / (nodes[i] - xj))
                    .product::<f64>()
                    .abs()
            })
            .sum()
    };
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut best: f64 = 1.0;
    for w in nodes.windows(2) {
        let (mut a, mut b) = (w[0], w[1]);
        for _ in 0..200 {
            let c = b - phi * (b - a);
            let d = a + phi * (b - a);
            if lebesgue(c) >= lebesgue(d) {
                b = d;
            } else {
                a = c;
            }
        }
        best = best.max(lebesgue(0.5 * (a + b)));
    }
    best
}
