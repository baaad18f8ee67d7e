use std::f64::consts::PI;

/// Chebyshev points of the first kind on [-1, 1], in ascending order.
pub fn chebyshev_grid(size: usize) -> Vec<f64> {
    let n = size as f64;
    (0..size)
        .map(|i| -((PI * (i as f64 + 0.5)) / n).cos())
        .collect()
}

/// Chebyshev grid with both endpoints appended, ascending.
pub fn chebyshev_grid_with_endpoints(size: usize) -> Vec<f64> {
    let mut grid = Vec::with_capacity(size + 2);
    grid.push(-1.0);
    grid.extend(chebyshev_grid(size));
    grid.push(1.0);
    grid
}

/// Fills `out` with T_0(x), ..., T_{out.len()-1}(x).
pub fn chebyshev_t_into(x: f64, out: &mut [f64]) {
    if out.is_empty() {
        return;
    }
    out[0] = 1.0;
    if out.len() > 1 {
        out[1] = x;
    }
    for k in 2..out.len() {
        out[k] = 2.0 * x * out[k - 1] - out[k - 2];
    }
}

pub fn chebyshev_t(degree: usize, x: f64) -> Vec<f64> {
    let mut out = vec![0.0; degree + 1];
    chebyshev_t_into(x, &mut out);
    out
}
