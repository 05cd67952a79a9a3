//! Multilevel needlet frames.
//!
//! Level `j` uses the `2N_j` zeros of `H_{2N_j}` with
//! `N_j = ⌊(1+11δ)(4/π)²4^j⌋ + 3`, tensorized over `d` coordinates, together
//! with their Christoffel weights and a partition of the cube `Q_j` into
//! boxes `R_ξ`. The level kernels are
//!
//! ```text
//! Φ_0 = H_0,   Φ_j = Σ_ν â(ν/4^{j−1}) H_ν   (j ≥ 1)
//! ```
//!
//! and `Ψ_j` likewise with `b̂`; the needlets are `φ_ξ = λ_ξ^{1/2} Φ_j(·, ξ)`.

mod kernel;
mod transform;

pub use kernel::{
    localization_profile, needlet_eval, phi_kernel, psi_kernel, smoothed_diagonal,
    smoothed_kernel, smoothed_kernel_dx, DecaySample, LocalizationReport, Side,
};
pub use transform::{analyze, synthesize, NeedletCoefficients};

use serde::{Deserialize, Serialize};

use crate::cutoff::{CutoffPair, SmoothCutoff};
use crate::error::{NeedletError, Result};
use crate::hermite::check_dim;
use crate::par;
use crate::quadrature::{check_node_budget, gauss_hermite_rule, DEFAULT_NODE_BUDGET};

/// Default `δ`.
pub const DEFAULT_DELTA: f64 = 0.025;

/// Deepest level that can be built; `2N_7` exceeds the degree cap.
pub const MAX_LEVEL: usize = 6;

/// `N_j = ⌊(1+11δ)(4/π)²4^j⌋ + 3`.
pub fn level_size(j: usize, delta: f64) -> usize {
    let c = (1.0 + 11.0 * delta) * (4.0 / std::f64::consts::PI).powi(2);
    (c * 4f64.powi(j as i32)).floor() as usize + 3
}

pub(crate) fn check_delta(delta: f64) -> Result<()> {
    if delta > 0.0 && delta < 1.0 / 37.0 {
        Ok(())
    } else {
        Err(NeedletError::InvalidParameter(format!(
            "δ = {delta} must lie in (0, 1/37)"
        )))
    }
}

/// `4^{j−1}`, the degree scale of level `j ≥ 1`.
pub fn level_scale(j: usize) -> f64 {
    4f64.powi(j as i32 - 1)
}

/// Coefficient multiplier of degree `m` in the level-`j` kernel built on `cutoff`.
pub fn level_weight(cutoff: &SmoothCutoff, j: usize, m: usize) -> f64 {
    if j == 0 {
        if m == 0 {
            1.0
        } else {
            0.0
        }
    } else {
        cutoff.eval(m as f64 / level_scale(j))
    }
}

/// Largest degree with a nonzero level-`j` weight (at most `4^j`).
pub(crate) fn level_top_degree(cutoff: &SmoothCutoff, j: usize) -> usize {
    if j == 0 {
        return 0;
    }
    let hi = 4usize.pow(j as u32);
    (0..=hi)
        .rev()
        .find(|&m| level_weight(cutoff, j, m) != 0.0)
        .unwrap_or(0)
}

/// One cutoff applied across levels `0..=j_max`, independently of any node set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelFilter {
    pub cutoff: SmoothCutoff,
    pub j_max: usize,
}

impl LevelFilter {
    pub fn new(cutoff: SmoothCutoff, j_max: usize) -> Self {
        Self { cutoff, j_max }
    }

    pub fn weight(&self, j: usize, m: usize) -> f64 {
        level_weight(&self.cutoff, j, m)
    }

    /// Largest degree any level can see.
    pub fn max_degree(&self) -> usize {
        4usize.saturating_pow(self.j_max as u32)
    }
}

/// Node set, weights and tiles of one level.
///
/// Nodes are indexed row-major over `(α_1, …, α_d)` with each `α_ν` running
/// through the `2N_j` one-dimensional zeros in ascending order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FrameLevel {
    j: usize,
    dim: usize,
    n_j: usize,
    zeros: Vec<f64>,
    lambdas: Vec<f64>,
    intervals: Vec<(f64, f64)>,
}

impl FrameLevel {
    pub fn level(&self) -> usize {
        self.j
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `N_j`.
    pub fn n_j(&self) -> usize {
        self.n_j
    }

    /// Zeros of `H_{2N_j}`, ascending.
    pub fn zeros(&self) -> &[f64] {
        &self.zeros
    }

    /// One-dimensional Christoffel weights at [`zeros`](Self::zeros).
    pub fn lambdas(&self) -> &[f64] {
        &self.lambdas
    }

    /// One-dimensional tiles `I_ν`, aligned with [`zeros`](Self::zeros).
    pub fn intervals(&self) -> &[(f64, f64)] {
        &self.intervals
    }

    /// Number of nodes, `(2N_j)^d`.
    pub fn len(&self) -> usize {
        self.zeros.len().pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Position along `axis` of node `i` in the one-dimensional arrays.
    #[inline]
    pub fn axis_index(&self, i: usize, axis: usize) -> usize {
        let m = self.zeros.len();
        match (self.dim, axis) {
            (1, _) => i,
            (_, 0) => i / m,
            _ => i % m,
        }
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i < self.len() {
            Ok(())
        } else {
            Err(NeedletError::InvalidIndex {
                level: self.j,
                node: i,
            })
        }
    }

    pub fn node(&self, i: usize) -> Result<Vec<f64>> {
        self.check_index(i)?;
        Ok((0..self.dim).map(|a| self.zeros[self.axis_index(i, a)]).collect())
    }

    /// `λ_ξ`, the product of the coordinate weights.
    pub fn weight(&self, i: usize) -> Result<f64> {
        self.check_index(i)?;
        Ok((0..self.dim).map(|a| self.lambdas[self.axis_index(i, a)]).product())
    }

    /// `R_ξ` as one interval per coordinate.
    pub fn tile(&self, i: usize) -> Result<Vec<(f64, f64)>> {
        self.check_index(i)?;
        Ok((0..self.dim).map(|a| self.intervals[self.axis_index(i, a)]).collect())
    }

    /// `|R_ξ|`.
    pub fn tile_measure(&self, i: usize) -> Result<f64> {
        Ok(self.tile(i)?.iter().map(|(a, b)| b - a).product())
    }

    /// Half side of `Q_j = [−a, a]^d`: largest zero plus `2^{−j/6}`.
    pub fn cube_half_width(&self) -> f64 {
        self.intervals.last().map(|iv| iv.1).unwrap_or(0.0)
    }

    /// `|Q_j|`.
    pub fn cube_measure(&self) -> f64 {
        (2.0 * self.cube_half_width()).powi(self.dim as i32)
    }
}

/// Tiles of `[−a, a]` around the zeros `ξ_{−N} < … < ξ_N`:
/// `I_1 = [0, (ξ_1+ξ_2)/2]`, midpoint intervals inside, and
/// `I_N = [(ξ_{N−1}+ξ_N)/2, ξ_N + 2^{−j/6}]`, mirrored to negative indices.
fn tile_intervals(zeros: &[f64], j: usize) -> Vec<(f64, f64)> {
    let n = zeros.len() / 2;
    let pos = &zeros[n..];
    let overhang = 2f64.powf(-(j as f64) / 6.0);
    let right: Vec<(f64, f64)> = (0..n)
        .map(|k| {
            let lo = if k == 0 { 0.0 } else { 0.5 * (pos[k - 1] + pos[k]) };
            let hi = if k + 1 == n {
                pos[k] + overhang
            } else {
                0.5 * (pos[k] + pos[k + 1])
            };
            (lo, hi)
        })
        .collect();
    right
        .iter()
        .rev()
        .map(|&(lo, hi)| (-hi, -lo))
        .chain(right.iter().copied())
        .collect()
}

/// Builds level `j` in dimension `d`.
pub fn build_level(j: usize, dim: usize, delta: f64, node_budget: u128) -> Result<FrameLevel> {
    check_dim(dim)?;
    check_delta(delta)?;
    if j > MAX_LEVEL {
        return Err(NeedletError::InvalidParameter(format!(
            "level {j} exceeds the deepest supported level {MAX_LEVEL}"
        )));
    }
    let n_j = level_size(j, delta);
    check_node_budget((2 * n_j as u128).pow(dim as u32), node_budget)?;
    let rule = gauss_hermite_rule(2 * n_j)?;
    let intervals = tile_intervals(&rule.nodes, j);
    Ok(FrameLevel {
        j,
        dim,
        n_j,
        zeros: rule.nodes,
        lambdas: rule.christoffel_weights,
        intervals,
    })
}

/// Identity of a frame; coefficients carry it so that synthesis can refuse
/// coefficients produced by a different frame.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrameSignature {
    pub dim: usize,
    pub delta: f64,
    pub j_max: usize,
    pub cutoff: String,
}

/// Levels `0..=J_max` together with the cutoff pair.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NeedletFrame {
    dim: usize,
    delta: f64,
    pair: CutoffPair,
    levels: Vec<FrameLevel>,
}

fn check_pair_support(pair: &CutoffPair) -> Result<()> {
    for c in [&pair.a_hat, &pair.b_hat] {
        let (lo, hi) = c.support();
        if lo < 0.25 || hi > 4.0 {
            return Err(NeedletError::InvalidCutoff(format!(
                "{} is supported in [{lo}, {hi}], outside [1/4, 4]",
                c.label()
            )));
        }
    }
    Ok(())
}

/// Builds all levels `0..=j_max` with the default node budget.
pub fn build_frame(dim: usize, delta: f64, j_max: usize, pair: CutoffPair) -> Result<NeedletFrame> {
    build_frame_with_budget(dim, delta, j_max, pair, DEFAULT_NODE_BUDGET)
}

/// Builds all levels `0..=j_max`; every level must fit `node_budget`.
pub fn build_frame_with_budget(
    dim: usize,
    delta: f64,
    j_max: usize,
    pair: CutoffPair,
    node_budget: u128,
) -> Result<NeedletFrame> {
    check_dim(dim)?;
    check_delta(delta)?;
    check_pair_support(&pair)?;
    for j in 0..=j_max.min(MAX_LEVEL) {
        check_node_budget((2 * level_size(j, delta) as u128).pow(dim as u32), node_budget)?;
    }
    let levels = par::map_range(j_max + 1, |j| build_level(j, dim, delta, node_budget))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    Ok(NeedletFrame {
        dim,
        delta,
        pair,
        levels,
    })
}

impl NeedletFrame {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn j_max(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn pair(&self) -> &CutoffPair {
        &self.pair
    }

    pub fn levels(&self) -> &[FrameLevel] {
        &self.levels
    }

    pub fn level(&self, j: usize) -> Result<&FrameLevel> {
        self.levels.get(j).ok_or_else(|| {
            NeedletError::InvalidParameter(format!("level {j} exceeds J_max = {}", self.j_max()))
        })
    }

    pub fn total_nodes(&self) -> usize {
        self.levels.iter().map(FrameLevel::len).sum()
    }

    /// Largest degree the frame can analyze, `4^{J_max}`.
    pub fn max_degree(&self) -> usize {
        4usize.pow(self.j_max() as u32)
    }

    /// Largest degree reproduced exactly by synthesis after analysis, `4^{J_max−1}`.
    pub fn exact_degree(&self) -> usize {
        4usize.pow(self.j_max().saturating_sub(1) as u32)
    }

    /// Largest node coordinate over all levels.
    pub fn max_node(&self) -> f64 {
        self.levels
            .iter()
            .filter_map(|l| l.zeros.last().copied())
            .fold(0.0, f64::max)
    }

    pub fn analysis_filter(&self) -> LevelFilter {
        LevelFilter::new(self.pair.a_hat.clone(), self.j_max())
    }

    pub fn synthesis_filter(&self) -> LevelFilter {
        LevelFilter::new(self.pair.b_hat.clone(), self.j_max())
    }

    pub fn signature(&self) -> FrameSignature {
        FrameSignature {
            dim: self.dim,
            delta: self.delta,
            j_max: self.j_max(),
            cutoff: self.pair.label(),
        }
    }
}
