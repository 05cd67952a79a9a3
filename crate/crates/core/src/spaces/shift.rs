use serde::Serialize;

use super::{b_continuous_norm, f_continuous_norm, GridSpec, SpaceParams};
use crate::cutoff::{make_quadratic_cutoff, SmoothCutoff};
use crate::error::{NeedletError, Result};
use crate::frame::LevelFilter;
use crate::hermite::{min_projection_order, project_function};

/// Settings of [`shift_study`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShiftConfig {
    /// Radius of the bump's support.
    pub width: f64,
    pub params: SpaceParams,
    pub cutoff: SmoothCutoff,
    /// Levels `0..=levels` of the Hermite-space norms.
    pub levels: usize,
    /// Degree of the Hermite expansion the shifted bump is projected onto.
    pub degree: usize,
    /// Largest accepted projection tail indicator.
    pub tail_limit: f64,
}

impl Default for ShiftConfig {
    fn default() -> Self {
        Self {
            width: 1.0,
            params: SpaceParams::new(1.0, 2.0, 2.0).expect("valid defaults"),
            cutoff: make_quadratic_cutoff(),
            levels: 8,
            degree: 6144,
            tail_limit: 1e-6,
        }
    }
}

/// One row of the study.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ShiftRow {
    pub y: f64,
    pub l2: f64,
    pub b_h: f64,
    pub f_h: f64,
}

/// `h(x) = e^{1 − 1/(1 − |x/w|²)}` on `|x| < w`, 0 outside; `‖h‖_∞ = h(0) = 1`.
pub fn bump(width: f64) -> impl Fn(&[f64]) -> f64 + Sync + Send + Copy {
    move |x: &[f64]| {
        let r2 = x.iter().map(|v| v * v).sum::<f64>() / (width * width);
        if r2 < 1.0 {
            (1.0 - 1.0 / (1.0 - r2)).exp()
        } else {
            0.0
        }
    }
}

/// Norms of the translates `h(· − y)` of a fixed bump in one dimension.
///
/// The `L²` column is translation invariant; the Hermite–Besov and
/// Hermite–Triebel–Lizorkin columns grow with `|y|`. Each translate is
/// projected onto `V_degree`; a projection whose tail indicator exceeds the
/// limit is rejected.
pub fn shift_study(shifts: &[f64], config: &ShiftConfig) -> Result<Vec<ShiftRow>> {
    let params = config.params;
    let d = 1.0;
    let threshold = d * (params.p.reciprocal() - 1.0).max(0.0);
    if params.alpha <= threshold {
        return Err(NeedletError::InvalidParameter(format!(
            "α = {} must exceed d(1/p − 1)_+ = {threshold}",
            params.alpha
        )));
    }
    if !(config.width > 0.0) {
        return Err(NeedletError::InvalidParameter("bump width must be positive".into()));
    }
    let reach = shifts.iter().fold(0.0f64, |m, y| m.max(y.abs()));
    let grid = GridSpec::new(
        reach + config.width + 6.0,
        GridSpec::required_resolution(config.levels),
    )?;
    let filter = LevelFilter::new(config.cutoff.clone(), config.levels);
    let h = bump(config.width);
    let order = min_projection_order(config.degree);
    shifts
        .iter()
        .map(|&y| {
            let proj = project_function(move |x: &[f64]| h(&[x[0] - y]), 1, config.degree, order)?;
            if proj.tail_indicator > config.tail_limit {
                return Err(NeedletError::IngestionAccuracy {
                    tail: proj.tail_indicator,
                    limit: config.tail_limit,
                });
            }
            let f = proj.expansion;
            Ok(ShiftRow {
                y,
                l2: f.l2_norm(),
                b_h: b_continuous_norm(&f, &params, &filter, &grid)?,
                f_h: f_continuous_norm(&f, &params, &filter, &grid)?,
            })
        })
        .collect()
}
