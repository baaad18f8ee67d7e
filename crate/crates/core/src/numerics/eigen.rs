//! Dense symmetric eigensolvers.
//!
//! [`symmetric_eigen`] is a cyclic Jacobi-rotation solver returning a full,
//! orthogonal eigenvector matrix. [`symmetric_eigenvalues`] computes the
//! spectrum only (Householder tridiagonalisation followed by implicit QL) and
//! is the throughput path used for `lambda_min` in large sweeps.

use crate::error::{Error, Result};

/// Relative off-diagonal tolerance used when callers do not supply one.
pub const DEFAULT_EIGEN_TOL: f64 = 1e-12;

const MAX_SWEEPS: usize = 100;

/// A dense symmetric matrix stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricMatrix {
    order: usize,
    entries: Vec<f64>,
}

impl SymmetricMatrix {
    /// Builds a matrix from row-major entries, rejecting asymmetry beyond
    /// `1e-14 * max(1, max |a_ij|)`.
    pub fn new(order: usize, entries: Vec<f64>) -> Result<Self> {
        if order == 0 {
            return Err(Error::contract("matrix order must be at least 1"));
        }
        if entries.len() != order * order {
            return Err(Error::contract(format!(
                "expected {} entries for order {order}, got {}",
                order * order,
                entries.len()
            )));
        }
        let scale = entries.iter().fold(1.0_f64, |acc, v| acc.max(v.abs()));
        for i in 0..order {
            for j in (i + 1)..order {
                let (a, b) = (entries[i * order + j], entries[j * order + i]);
                if !((a - b).abs() <= 1e-14 * scale) {
                    return Err(Error::contract(format!(
                        "matrix is not symmetric at ({i}, {j}): {a} vs {b}"
                    )));
                }
            }
        }
        Ok(Self { order, entries })
    }

    /// Builds a matrix from its lower triangle, mirroring it exactly.
    pub fn from_lower(order: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut entries = vec![0.0; order * order];
        for i in 0..order {
            for j in 0..=i {
                let v = f(i, j);
                entries[i * order + j] = v;
                entries[j * order + i] = v;
            }
        }
        Self { order, entries }
    }

    pub fn identity(order: usize) -> Self {
        Self::from_lower(order, |i, j| if i == j { 1.0 } else { 0.0 })
    }

    pub fn diagonal(diag: &[f64]) -> Self {
        Self::from_lower(diag.len(), |i, j| if i == j { diag[i] } else { 0.0 })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.order + j]
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// `A w`.
    pub fn mul_vec(&self, w: &[f64]) -> Vec<f64> {
        let n = self.order;
        (0..n)
            .map(|i| {
                self.entries[i * n..(i + 1) * n]
                    .iter()
                    .zip(w)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }

    /// `wᵀ A w`.
    pub fn quadratic_form(&self, w: &[f64]) -> f64 {
        self.mul_vec(w).iter().zip(w).map(|(a, b)| a * b).sum()
    }
}

/// Eigen-decomposition `A = V diag(values) Vᵀ`.
#[derive(Debug, Clone)]
pub struct Eigen {
    /// Eigenvalues in ascending order.
    pub values: Vec<f64>,
    /// Row-major `d x d` matrix whose column `k` is the eigenvector of `values[k]`.
    pub vectors: Vec<f64>,
    pub order: usize,
}

impl Eigen {
    pub fn vector(&self, k: usize) -> Vec<f64> {
        (0..self.order).map(|i| self.vectors[i * self.order + k]).collect()
    }
}

/// Cyclic Jacobi iteration, run until the off-diagonal Frobenius mass drops
/// below `tol * ||A||_F`.
pub fn symmetric_eigen(matrix: &SymmetricMatrix, tol: f64) -> Result<Eigen> {
    if !(tol > 0.0) {
        return Err(Error::contract("eigen tolerance must be positive"));
    }
    let n = matrix.order;
    let mut a = matrix.entries.clone();
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let threshold = tol * matrix.frobenius_norm();

    let off = |a: &[f64]| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += a[i * n + j] * a[i * n + j];
                }
            }
        }
        s.sqrt()
    };

    let mut sweeps = 0;
    while off(&a) > threshold && sweeps < MAX_SWEEPS {
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = if theta.abs() > 1e150 {
                    0.5 / theta
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;

                for r in 0..n {
                    let arp = a[r * n + p];
                    let arq = a[r * n + q];
                    a[r * n + p] = c * arp - s * arq;
                    a[r * n + q] = s * arp + c * arq;
                }
                for r in 0..n {
                    let apr = a[p * n + r];
                    let aqr = a[q * n + r];
                    a[p * n + r] = c * apr - s * aqr;
                    a[q * n + r] = s * apr + c * aqr;
                }
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;

                for r in 0..n {
                    let vrp = v[r * n + p];
                    let vrq = v[r * n + q];
                    v[r * n + p] = c * vrp - s * vrq;
                    v[r * n + q] = s * vrp + c * vrq;
                }
            }
        }
    }

    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&i, &j| a[i * n + i].total_cmp(&a[j * n + j]));
    let values = idx.iter().map(|&i| a[i * n + i]).collect();
    let mut vectors = vec![0.0; n * n];
    for (k, &col) in idx.iter().enumerate() {
        for r in 0..n {
            vectors[r * n + k] = v[r * n + col];
        }
    }
    Ok(Eigen {
        values,
        vectors,
        order: n,
    })
}

/// Eigenvalues only, ascending: Householder reduction to tridiagonal form
/// followed by the implicit QL iteration with Wilkinson-type shifts.
pub fn symmetric_eigenvalues(matrix: &SymmetricMatrix) -> Vec<f64> {
    let n = matrix.order;
    let mut a = matrix.entries.clone();
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    tridiagonalize(&mut a, n, &mut d, &mut e);
    tridiagonal_ql(&mut d, &mut e);
    d.sort_by(f64::total_cmp);
    d
}

/// Unit eigenvector for the eigenvalue nearest `shift`, by `iters` steps of
/// inverse iteration with an LU factorisation (partial pivoting) of
/// `A - shift I`. Exactly zero pivots are replaced by `ε ||A||_F`.
pub fn inverse_iteration(matrix: &SymmetricMatrix, shift: f64, iters: usize) -> Vec<f64> {
    let n = matrix.order;
    let mut lu = matrix.entries.clone();
    for i in 0..n {
        lu[i * n + i] -= shift;
    }
    let tiny = f64::EPSILON * matrix.frobenius_norm().max(f64::MIN_POSITIVE);
    let mut perm: Vec<usize> = (0..n).collect();
    for k in 0..n {
        let p = (k..n)
            .max_by(|&i, &j| lu[i * n + k].abs().total_cmp(&lu[j * n + k].abs()))
            .unwrap_or(k);
        if p != k {
            for c in 0..n {
                lu.swap(k * n + c, p * n + c);
            }
            perm.swap(k, p);
        }
        if lu[k * n + k].abs() < tiny {
            lu[k * n + k] = tiny;
        }
        let pivot = lu[k * n + k];
        for i in k + 1..n {
            let f = lu[i * n + k] / pivot;
            lu[i * n + k] = f;
            for c in k + 1..n {
                lu[i * n + c] -= f * lu[k * n + c];
            }
        }
    }
    // Irregular start vector, so it is unlikely to be orthogonal to the target.
    let mut v: Vec<f64> = (0..n).map(|i| 1.0 + (0.618_033_988_749_895 * i as f64).fract()).collect();
    let mut y = vec![0.0; n];
    for _ in 0..iters {
        for i in 0..n {
            y[i] = v[perm[i]] - (0..i).map(|c| lu[i * n + c] * y[c]).sum::<f64>();
        }
        for i in (0..n).rev() {
            y[i] = (y[i] - (i + 1..n).map(|c| lu[i * n + c] * y[c]).sum::<f64>()) / lu[i * n + i];
        }
        let norm = y.iter().map(|x| x * x).sum::<f64>().sqrt();
        if !(norm.is_finite() && norm > 0.0) {
            break;
        }
        for (vi, yi) in v.iter_mut().zip(&y) {
            *vi = yi / norm;
        }
    }
    v
}

// Householder reduction (values only). On exit `d` holds the diagonal and
// `e[1..n]` the subdiagonal of the similar tridiagonal matrix.
fn tridiagonalize(a: &mut [f64], n: usize, d: &mut [f64], e: &mut [f64]) {
    for i in (1..n).rev() {
        let l = i - 1;
        let mut h = 0.0;
        if l > 0 {
            let scale: f64 = (0..=l).map(|k| a[i * n + k].abs()).sum();
            if scale == 0.0 {
                e[i] = a[i * n + l];
            } else {
                for k in 0..=l {
                    a[i * n + k] /= scale;
                    h += a[i * n + k] * a[i * n + k];
                }
                let f = a[i * n + l];
                let g = if f >= 0.0 { -h.sqrt() } else { h.sqrt() };
                e[i] = scale * g;
                h -= f * g;
                a[i * n + l] = f - g;
                let mut f = 0.0;
                for j in 0..=l {
                    let mut g = 0.0;
                    for k in 0..=j {
                        g += a[j * n + k] * a[i * n + k];
                    }
                    for k in (j + 1)..=l {
                        g += a[k * n + j] * a[i * n + k];
                    }
                    e[j] = g / h;
                    f += e[j] * a[i * n + j];
                }
                let hh = f / (h + h);
                for j in 0..=l {
                    let f = a[i * n + j];
                    let g = e[j] - hh * f;
                    e[j] = g;
                    for k in 0..=j {
                        a[j * n + k] -= f * e[k] + g * a[i * n + k];
                    }
                }
            }
        } else {
            e[i] = a[i * n + l];
        }
        d[i] = h;
    }
    e[0] = 0.0;
    for i in 0..n {
        d[i] = a[i * n + i];
    }
}

fn tridiagonal_ql(d: &mut [f64], e: &mut [f64]) {
    let n = d.len();
    if n < 2 {
        return;
    }
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                break;
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut i = m;
            let mut underflow = false;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
}
