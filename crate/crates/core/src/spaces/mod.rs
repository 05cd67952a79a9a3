//! Hermite–Triebel–Lizorkin (`F`) and Hermite–Besov (`B`) norms, their
//! needlet sequence counterparts, best approximation and the translation
//! study separating Hermite spaces from classical ones.
//!
//! `L^p` integrals over `ℝ^d` are truncated to `[−R, R]^d`; the kernels
//! `Φ_j∗f` of band-limited `f` and all tiles are negligible or absent outside.

mod approx;
mod continuous;
mod sequence;
mod shift;

pub use approx::{approximation_depth, approximation_norm, best_approx_error, nikolskii_ratio, ApproxError};
pub use continuous::{b_continuous_norm, f_continuous_norm, grid_values, lp_norm};
pub use sequence::{b_sequence_norm, f_sequence_norm, f_sequence_norm_on_grid};
pub use shift::{bump, shift_study, ShiftConfig, ShiftRow};

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{NeedletError, Result};
use crate::frame::NeedletFrame;

/// An exponent in `(0, ∞]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Exponent {
    Finite(f64),
    Infinity,
}

impl Exponent {
    pub fn new(value: f64) -> Result<Self> {
        if value == f64::INFINITY {
            Ok(Exponent::Infinity)
        } else if value > 0.0 && value.is_finite() {
            Ok(Exponent::Finite(value))
        } else {
            Err(NeedletError::InvalidParameter(format!("exponent {value} must lie in (0, ∞]")))
        }
    }

    pub fn value(self) -> f64 {
        match self {
            Exponent::Finite(v) => v,
            Exponent::Infinity => f64::INFINITY,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Exponent::Infinity)
    }

    /// `1/p`, zero for `p = ∞`.
    pub fn reciprocal(self) -> f64 {
        match self {
            Exponent::Finite(v) => 1.0 / v,
            Exponent::Infinity => 0.0,
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(v) => write!(f, "{v}"),
            Exponent::Infinity => write!(f, "inf"),
        }
    }
}

/// Smoothness `α` and integrability `p`, `q`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpaceParams {
    pub alpha: f64,
    pub p: Exponent,
    pub q: Exponent,
}

impl SpaceParams {
    pub fn new(alpha: f64, p: f64, q: f64) -> Result<Self> {
        if !alpha.is_finite() {
            return Err(NeedletError::InvalidParameter(format!("α = {alpha} must be finite")));
        }
        Ok(Self {
            alpha,
            p: Exponent::new(p)?,
            q: Exponent::new(q)?,
        })
    }
}

/// `ℓ^q` accumulation of nonnegative terms, with an explicit sup branch.
#[derive(Debug, Clone, Copy)]
pub(crate) struct LqSum {
    q: Exponent,
    acc: f64,
}

impl LqSum {
    pub(crate) fn new(q: Exponent) -> Self {
        Self { q, acc: 0.0 }
    }

    pub(crate) fn add(&mut self, term: f64) {
        match self.q {
            Exponent::Finite(q) => self.acc += term.powf(q),
            Exponent::Infinity => self.acc = self.acc.max(term),
        }
    }

    pub(crate) fn total(self) -> f64 {
        match self.q {
            Exponent::Finite(q) => self.acc.powf(1.0 / q),
            Exponent::Infinity => self.acc,
        }
    }
}

/// Truncation `[−R, R]^d` and resolution for numerical `L^p` norms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub radius: f64,
    pub points_per_unit: usize,
}

impl GridSpec {
    pub fn new(radius: f64, points_per_unit: usize) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) || points_per_unit == 0 {
            return Err(NeedletError::InvalidParameter(format!(
                "grid needs R > 0 and at least one point per unit, got R = {radius}, {points_per_unit}"
            )));
        }
        Ok(Self {
            radius,
            points_per_unit,
        })
    }

    /// `R` = largest node + 1, resolution as given.
    pub fn covering(frame: &NeedletFrame, points_per_unit: usize) -> Self {
        Self {
            radius: frame.max_node() + 1.0,
            points_per_unit,
        }
    }

    /// Smallest resolution accepted for a frame or filter of depth `j_max`.
    pub fn required_resolution(j_max: usize) -> usize {
        4 << j_max
    }

    pub(crate) fn check_resolution(&self, j_max: usize) -> Result<()> {
        let required = Self::required_resolution(j_max);
        if self.points_per_unit < required {
            return Err(NeedletError::Resolution {
                points_per_unit: self.points_per_unit,
                required,
            });
        }
        Ok(())
    }

    /// Midpoints of the 1-d cells of width `1/points_per_unit` covering `[−R, R]`.
    pub fn midpoints(&self) -> Vec<f64> {
        let h = 1.0 / self.points_per_unit as f64;
        let cells = (2.0 * self.radius * self.points_per_unit as f64).ceil() as usize;
        let start = -(cells as f64) * h / 2.0;
        (0..cells).map(|i| start + (i as f64 + 0.5) * h).collect()
    }

    pub fn step(&self) -> f64 {
        1.0 / self.points_per_unit as f64
    }
}
