use serde::Serialize;

use super::{level_top_degree, level_weight, NeedletFrame};
use crate::cutoff::SmoothCutoff;
use crate::error::{NeedletError, Result};
use crate::hermite::{check_degree, check_same_dim, derivative_from_table, table};
use crate::par;

/// Which side of the frame a needlet belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Side {
    /// `φ_ξ`, built on `â`.
    Analysis,
    /// `ψ_ξ`, built on `b̂`.
    Synthesis,
}

pub(crate) fn level_weights(cutoff: &SmoothCutoff, j: usize) -> Vec<f64> {
    (0..=level_top_degree(cutoff, j))
        .map(|m| level_weight(cutoff, j, m))
        .collect()
}

fn scaled_weights(cutoff: &SmoothCutoff, n: f64) -> Result<Vec<f64>> {
    if !(n > 0.0) {
        return Err(NeedletError::InvalidParameter(format!("scale n = {n} must be positive")));
    }
    let top = (cutoff.support().1 * n).floor() as usize;
    check_degree(top)?;
    Ok((0..=top).map(|m| cutoff.eval(m as f64 / n)).collect())
}

/// `Σ_ν w_ν H_ν(x, y)`; with `dx` the first coordinate of `x` is differentiated.
fn weighted_kernel(w: &[f64], x: &[f64], y: &[f64], dx: bool) -> Result<f64> {
    let d = check_same_dim(x, y)?;
    if w.is_empty() {
        return Ok(0.0);
    }
    let n = w.len() - 1;
    // h_0..h_{n+1} so that derivatives up to degree n are available
    let per_axis: Vec<Vec<f64>> = (0..d)
        .map(|a| {
            let tx = table(n + 1, x[a]);
            let ty = table(n, y[a]);
            (0..=n)
                .map(|k| {
                    let hx = if dx && a == 0 { derivative_from_table(&tx, k) } else { tx[k] };
                    hx * ty[k]
                })
                .collect()
        })
        .collect();
    Ok(match d {
        1 => w.iter().zip(&per_axis[0]).map(|(a, b)| a * b).sum(),
        _ => {
            let (p, q) = (&per_axis[0], &per_axis[1]);
            let mut s = 0.0;
            for (m, wm) in w.iter().enumerate() {
                if *wm == 0.0 {
                    continue;
                }
                let inner: f64 = (0..=m).map(|a| p[a] * q[m - a]).sum();
                s += wm * inner;
            }
            s
        }
    })
}

/// `Φ_j(x, y)`.
pub fn phi_kernel(frame: &NeedletFrame, j: usize, x: &[f64], y: &[f64]) -> Result<f64> {
    frame.level(j)?;
    weighted_kernel(&level_weights(&frame.pair().a_hat, j), x, y, false)
}

/// `Ψ_j(x, y)`.
pub fn psi_kernel(frame: &NeedletFrame, j: usize, x: &[f64], y: &[f64]) -> Result<f64> {
    frame.level(j)?;
    weighted_kernel(&level_weights(&frame.pair().b_hat, j), x, y, false)
}

/// `Λ_n(x, y) = Σ_ν â(ν/n) H_ν(x, y)`.
pub fn smoothed_kernel(cutoff: &SmoothCutoff, n: f64, x: &[f64], y: &[f64]) -> Result<f64> {
    weighted_kernel(&scaled_weights(cutoff, n)?, x, y, false)
}

/// `∂Λ_n(x, y)/∂x_1`.
pub fn smoothed_kernel_dx(cutoff: &SmoothCutoff, n: f64, x: &[f64], y: &[f64]) -> Result<f64> {
    weighted_kernel(&scaled_weights(cutoff, n)?, x, y, true)
}

/// `∫|Λ_n(x, y)|² dy = Σ_ν â(ν/n)² H_ν(x, x)`.
pub fn smoothed_diagonal(cutoff: &SmoothCutoff, n: f64, x: &[f64]) -> Result<f64> {
    let w: Vec<f64> = scaled_weights(cutoff, n)?.iter().map(|v| v * v).collect();
    weighted_kernel(&w, x, x, false)
}

/// `φ_ξ(x) = λ_ξ^{1/2}Φ_j(x, ξ)` or `ψ_ξ(x) = λ_ξ^{1/2}Ψ_j(x, ξ)`.
pub fn needlet_eval(frame: &NeedletFrame, side: Side, j: usize, node: usize, x: &[f64]) -> Result<f64> {
    let level = frame.level(j)?;
    let xi = level.node(node)?;
    let lambda = level.weight(node)?;
    let k = match side {
        Side::Analysis => phi_kernel(frame, j, x, &xi)?,
        Side::Synthesis => psi_kernel(frame, j, x, &xi)?,
    };
    Ok(lambda.sqrt() * k)
}

/// One point of a decay profile.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecaySample {
    pub x: Vec<f64>,
    /// `|Φ_j(x, ξ)|` or its first derivative.
    pub kernel: f64,
    /// `kernel · (1 + 2^j|x − ξ|)^k`.
    pub weighted: f64,
    pub tail: bool,
}

/// Output of [`localization_profile`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LocalizationReport {
    pub level: usize,
    pub node: usize,
    pub k: u32,
    pub derivative: bool,
    /// `|x|_∞` beyond which a sample counts as tail.
    pub tail_radius: f64,
    /// Max of `weighted` over non-tail samples, divided by `2^{jd}`
    /// (`2^{j(d+1)}` for the derivative).
    pub inner_max: f64,
    /// Max of `kernel` over tail samples.
    pub tail_max: f64,
    pub samples: Vec<DecaySample>,
}

/// Samples `|Φ_j(x, ξ)|(1 + 2^j|x − ξ|)^k` along rays from `ξ`.
///
/// In one dimension the ray grid is the whole line segment `[−1.5ρ, 1.5ρ]`
/// with `ρ = 1.2(4·4^j + 2)^{1/2}`; in two dimensions eight rays leave `ξ`.
/// The step is `2^{−j−1}`.
pub fn localization_profile(
    frame: &NeedletFrame,
    j: usize,
    node: usize,
    k: u32,
    derivative: bool,
) -> Result<LocalizationReport> {
    if k > 10 {
        return Err(NeedletError::InvalidParameter(format!("decay exponent k = {k} exceeds 10")));
    }
    let level = frame.level(j)?;
    let xi = level.node(node)?;
    let d = frame.dim();
    let w = level_weights(&frame.pair().a_hat, j);
    let scale = 2f64.powi(j as i32);
    let tail_radius = 1.2 * (4.0 * 4f64.powi(j as i32) + 2.0).sqrt();
    let step = 0.5 / scale;
    let reach = 1.5 * tail_radius;
    let points: Vec<Vec<f64>> = if d == 1 {
        let m = (reach / step).ceil() as i64;
        (-m..=m).map(|i| vec![i as f64 * step]).collect()
    } else {
        let start = xi.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        let m = ((reach + start) / step).ceil() as usize;
        (0..8)
            .flat_map(|r| {
                let angle = r as f64 * std::f64::consts::FRAC_PI_4;
                let (s, c) = angle.sin_cos();
                let xi = xi.clone();
                (0..=m).map(move |i| vec![xi[0] + i as f64 * step * c, xi[1] + i as f64 * step * s])
            })
            .collect()
    };
    let samples = par::map_range(points.len(), |i| {
        let x = &points[i];
        let kernel = weighted_kernel(&w, x, &xi, derivative).map(f64::abs).unwrap_or(f64::NAN);
        let dist = x.iter().zip(&xi).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
        let tail = x.iter().fold(0.0f64, |a, v| a.max(v.abs())) >= tail_radius;
        DecaySample {
            x: x.clone(),
            kernel,
            weighted: kernel * (1.0 + scale * dist).powi(k as i32),
            tail,
        }
    });
    let norm = scale.powi(d as i32 + derivative as i32);
    let inner_max = samples
        .iter()
        .filter(|s| !s.tail)
        .map(|s| s.weighted)
        .fold(0.0, f64::max)
        / norm;
    let tail_max = samples
        .iter()
        .filter(|s| s.tail)
        .map(|s| s.kernel)
        .fold(0.0, f64::max);
    Ok(LocalizationReport {
        level: j,
        node,
        k,
        derivative,
        tail_radius,
        inner_max,
        tail_max,
        samples,
    })
}
