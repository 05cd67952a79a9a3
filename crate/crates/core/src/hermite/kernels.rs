use super::{check_degree, fill_table, table, Recurrence};
use crate::error::{NeedletError, Result};

pub(crate) fn check_dim(d: usize) -> Result<()> {
    if d == 1 || d == 2 {
        Ok(())
    } else {
        Err(NeedletError::UnsupportedDimension(d))
    }
}

pub(crate) fn check_same_dim(x: &[f64], y: &[f64]) -> Result<usize> {
    if x.len() != y.len() {
        return Err(NeedletError::DimensionMismatch {
            expected: x.len(),
            found: y.len(),
        });
    }
    check_dim(x.len())?;
    Ok(x.len())
}

/// `H_α(x) = h_{α_1}(x_1)⋯h_{α_d}(x_d)`.
pub fn hermite_tensor(alpha: &[usize], x: &[f64]) -> Result<f64> {
    if alpha.len() != x.len() {
        return Err(NeedletError::DimensionMismatch {
            expected: alpha.len(),
            found: x.len(),
        });
    }
    let mut prod = 1.0;
    for (&a, &t) in alpha.iter().zip(x) {
        prod *= super::hermite_function(a, t)?;
    }
    Ok(prod)
}

/// Products `h_k(x_i)·h_k(y_i)` for `k = 0..=n`, one vector per coordinate.
fn coordinate_products(n: usize, x: &[f64], y: &[f64]) -> Vec<Vec<f64>> {
    x.iter()
        .zip(y)
        .map(|(&a, &b)| {
            let ta = table(n, a);
            let tb = if a == b { ta.clone() } else { table(n, b) };
            ta.iter().zip(&tb).map(|(u, v)| u * v).collect()
        })
        .collect()
}

/// Projector kernel of `W_n`: `Σ_{|α|=n} H_α(x)H_α(y)`, for `d ∈ {1, 2}`.
pub fn projector_kernel(n: usize, x: &[f64], y: &[f64]) -> Result<f64> {
    let d = check_same_dim(x, y)?;
    check_degree(n)?;
    let p = coordinate_products(n, x, y);
    Ok(match d {
        1 => p[0][n],
        _ => (0..=n).map(|k| p[0][k] * p[1][n - k]).sum(),
    })
}

/// Partial-sum kernel `K_n(x,y) = Σ_{j≤n} H_j(x,y)` by direct summation.
pub fn partial_sum_kernel_direct(n: usize, x: &[f64], y: &[f64]) -> Result<f64> {
    let d = check_same_dim(x, y)?;
    check_degree(n)?;
    let p = coordinate_products(n, x, y);
    Ok(match d {
        1 => p[0].iter().sum(),
        _ => {
            // Σ_{a+b≤n} u_a w_b = Σ_a u_a · (w_0 + … + w_{n−a})
            let mut prefix = Vec::with_capacity(n + 1);
            let mut acc = 0.0;
            for &w in &p[1] {
                acc += w;
                prefix.push(acc);
            }
            (0..=n).map(|a| p[0][a] * prefix[n - a]).sum()
        }
    })
}

/// Partial-sum kernel `K_n(x,y)`.
///
/// In one dimension with well-separated arguments the Christoffel–Darboux
/// form `sqrt((n+1)/2)·(h_{n+1}(x)h_n(y) − h_n(x)h_{n+1}(y))/(x − y)` is used;
/// otherwise the direct sum.
pub fn partial_sum_kernel(n: usize, x: &[f64], y: &[f64]) -> Result<f64> {
    let d = check_same_dim(x, y)?;
    check_degree(n)?;
    if d == 1 && (x[0] - y[0]).abs() > 1e-2 {
        let mut rx = Recurrence::new(x[0]);
        let mut ry = Recurrence::new(y[0]);
        rx.advance_to(n);
        ry.advance_to(n);
        let (xn, yn) = (rx.value(), ry.value());
        rx.advance();
        ry.advance();
        let (xn1, yn1) = (rx.value(), ry.value());
        let a = ((n as f64 + 1.0) / 2.0).sqrt();
        return Ok(a * (xn1 * yn - xn * yn1) / (x[0] - y[0]));
    }
    partial_sum_kernel_direct(n, x, y)
}

/// Diagonal `K_n(t,t)` in one dimension.
pub(crate) fn diagonal_1d(n: usize, t: f64) -> f64 {
    let mut buf = vec![0.0; n + 1];
    fill_table(t, &mut buf);
    buf.iter().map(|v| v * v).sum()
}

/// Christoffel function `λ_n(t) = 1/K_n(t,t)` in one dimension.
pub fn christoffel(n: usize, t: f64) -> Result<f64> {
    check_degree(n)?;
    Ok(1.0 / diagonal_1d(n, t))
}

/// Samples of `K_n(x,x)` at a set of points.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct KernelDiagonalReport {
    pub n: usize,
    pub samples: Vec<(Vec<f64>, f64)>,
}

impl KernelDiagonalReport {
    pub fn all_positive(&self) -> bool {
        self.samples.iter().all(|(_, v)| *v > 0.0)
    }

    pub fn max(&self) -> f64 {
        self.samples.iter().map(|s| s.1).fold(0.0, f64::max)
    }
}

pub fn diagonal_report(n: usize, points: &[Vec<f64>]) -> Result<KernelDiagonalReport> {
    let samples = points
        .iter()
        .map(|x| Ok((x.clone(), partial_sum_kernel_direct(n, x, x)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(KernelDiagonalReport { n, samples })
}
