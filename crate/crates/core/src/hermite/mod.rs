//! L²-normalized Hermite functions and the kernels built from them.
//!
//! All evaluation goes through the normalized three-term recurrence
//!
//! ```text
//! h_{k+1}(t) = t·sqrt(2/(k+1))·h_k(t) − sqrt(k/(k+1))·h_{k−1}(t),   h_0(t) = π^{−1/4} e^{−t²/2}
//! ```
//!
//! run on a rescaled sequence whose common factor `exp(log_scale)` is tracked
//! separately. The Gaussian seed is folded into `log_scale`, so neither
//! `e^{−t²/2}` underflow for large `|t|` nor growth of the recurrence in the
//! classically forbidden region can destroy the result.

mod expansion;
mod kernels;

pub use expansion::{
    evaluate_expansion, min_projection_order, project_function, HermiteExpansion, MultiIndex,
    Projection,
};
pub use kernels::{
    christoffel, diagonal_report, hermite_tensor, partial_sum_kernel, partial_sum_kernel_direct,
    projector_kernel, KernelDiagonalReport,
};
pub(crate) use kernels::{check_dim, check_same_dim};
pub(crate) use expansion::{degree_offset, graded_len};

use crate::error::{NeedletError, Result};

/// Largest degree accepted by the evaluators.
pub const DEGREE_CAP: usize = 20_000;

/// π^{−1/4}
pub const H0_AT_ZERO: f64 = 0.751_125_544_464_942_5;

const RESCALE_ABOVE: f64 = 1e150;
const RESCALE_BY: f64 = 1e-150;
// ln(1e150)
const LN_RESCALE: f64 = 345.387_763_949_107;

pub(crate) fn check_degree(n: usize) -> Result<()> {
    if n > DEGREE_CAP {
        return Err(NeedletError::InvalidDegree {
            degree: n,
            cap: DEGREE_CAP,
        });
    }
    Ok(())
}

/// Rescaled state of the recurrence at one point.
///
/// The true values are `prev·e^{log_scale}` and `cur·e^{log_scale}`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Recurrence {
    t: f64,
    k: usize,
    prev: f64,
    cur: f64,
    log_scale: f64,
}

impl Recurrence {
    pub(crate) fn new(t: f64) -> Self {
        Self {
            t,
            k: 0,
            prev: 0.0,
            cur: H0_AT_ZERO,
            log_scale: -0.5 * t * t,
        }
    }

    #[inline]
    pub(crate) fn advance(&mut self) {
        let k = self.k as f64;
        let next =
            self.t * (2.0 / (k + 1.0)).sqrt() * self.cur - (k / (k + 1.0)).sqrt() * self.prev;
        self.prev = self.cur;
        self.cur = next;
        self.k += 1;
        if self.cur.abs() > RESCALE_ABOVE {
            self.cur *= RESCALE_BY;
            self.prev *= RESCALE_BY;
            self.log_scale += LN_RESCALE;
        }
    }

    pub(crate) fn advance_to(&mut self, n: usize) {
        while self.k < n {
            self.advance();
        }
    }

    /// True value of `h_k(t)`.
    #[inline]
    pub(crate) fn value(&self) -> f64 {
        unscale(self.cur, self.log_scale)
    }

    /// Rescaled `(h_{k−1}, h_k)`; only their ratio is meaningful.
    pub(crate) fn scaled_pair(&self) -> (f64, f64) {
        (self.prev, self.cur)
    }
}

#[inline]
fn unscale(v: f64, log_scale: f64) -> f64 {
    if v == 0.0 {
        0.0
    } else if log_scale > -700.0 {
        v * log_scale.exp()
    } else {
        v.signum() * (v.abs().ln() + log_scale).exp()
    }
}

/// `h_n(t)`.
pub fn hermite_function(n: usize, t: f64) -> Result<f64> {
    check_degree(n)?;
    let mut rec = Recurrence::new(t);
    rec.advance_to(n);
    Ok(rec.value())
}

/// `h_n′(t) = −sqrt((n+1)/2)·h_{n+1}(t) + sqrt(n/2)·h_{n−1}(t)`.
pub fn hermite_function_derivative(n: usize, t: f64) -> Result<f64> {
    check_degree(n)?;
    let table = table(n + 1, t);
    Ok(derivative_from_table(&table, n))
}

/// `h_k′(t)` from a table holding `h_0..=h_{k+1}` at `t`.
#[inline]
pub(crate) fn derivative_from_table(table: &[f64], k: usize) -> f64 {
    let up = -((k as f64 + 1.0) / 2.0).sqrt() * table[k + 1];
    if k == 0 {
        up
    } else {
        up + (k as f64 / 2.0).sqrt() * table[k - 1]
    }
}

/// `[h_0(t), …, h_n(t)]`.
pub fn hermite_table(n: usize, t: f64) -> Result<Vec<f64>> {
    check_degree(n)?;
    Ok(table(n, t))
}

pub(crate) fn table(n: usize, t: f64) -> Vec<f64> {
    let mut out = vec![0.0; n + 1];
    fill_table(t, &mut out);
    out
}

/// Writes `h_0(t), …, h_{len−1}(t)` into `out`.
pub(crate) fn fill_table(t: f64, out: &mut [f64]) {
    let mut rec = Recurrence::new(t);
    // e^{log_scale} only changes on rescaling; identical to `rec.value()`
    let mut scale_at = f64::NAN;
    let mut factor = 0.0;
    for (k, slot) in out.iter_mut().enumerate() {
        if k > 0 {
            rec.advance();
        }
        if rec.log_scale != scale_at {
            scale_at = rec.log_scale;
            factor = if scale_at > -700.0 { scale_at.exp() } else { f64::NAN };
        }
        *slot = if factor.is_nan() { rec.value() } else { rec.cur * factor };
    }
}
