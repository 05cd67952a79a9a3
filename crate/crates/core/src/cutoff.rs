//! Smooth compactly supported cutoffs `â`, dual pairs `(â, b̂)` satisfying
//! `â(t)b̂(t) + â(4t)b̂(4t) = 1` on `[1/4, 1]`, and the quadratic cutoff with
//! `â(t)² + â(4t)² = 1` that yields a tight frame.

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use crate::error::{NeedletError, Result};

/// Sharpness of the transition used by the quadratic cutoff.
///
/// With the exponent `1/x` of the classical mollifier the quadratic cutoff
/// drops below `10^{-3}` at `t = 1/3`; `1/4` keeps it above `0.05` on `[1/3, 3]`.
pub const QUADRATIC_SHARPNESS: f64 = 0.25;

/// `σ(x) = e^{−γ/x}` for `x > 0`, else 0.
fn sigma(x: f64, gamma: f64) -> f64 {
    if x > 0.0 {
        (-gamma / x).exp()
    } else {
        0.0
    }
}

/// C∞ step: 0 on `(−∞, 0]`, 1 on `[1, ∞)`, `σ(x)/(σ(x)+σ(1−x))` between.
pub fn smooth_step(x: f64, gamma: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else if x >= 1.0 {
        1.0
    } else {
        let a = sigma(x, gamma);
        a / (a + sigma(1.0 - x, gamma))
    }
}

/// Construction behind a [`SmoothCutoff`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum CutoffKind {
    /// ≡ 1 on `[0, 1]`, supported in `[0, 1+v]`.
    TypeA { v: f64 },
    /// Supported in `[u, 1+v]`, ≡ 1 on `[4u/3, 3(1+v)/4]`.
    TypeB { u: f64, v: f64 },
    /// Supported in `[1/4, 4]` with `â(t)² + â(4t)² = 1` on `[1/4, 1]`.
    Quadratic,
    /// `b̂ = â/D` with `D(t) = Σ_ν â(4^ν t)²`.
    Dual { base: Box<SmoothCutoff> },
    Zero,
}

/// A smooth cutoff on `[0, ∞)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SmoothCutoff {
    kind: CutoffKind,
}

impl SmoothCutoff {
    pub fn kind(&self) -> &CutoffKind {
        &self.kind
    }

    pub fn zero() -> Self {
        Self {
            kind: CutoffKind::Zero,
        }
    }

    /// Rebuilds a cutoff from a serialized kind, re-validating parameters.
    pub fn from_kind(kind: CutoffKind) -> Result<Self> {
        match kind {
            CutoffKind::TypeA { v } => make_type_a(v),
            CutoffKind::TypeB { u, v } => make_type_b(u, v),
            CutoffKind::Quadratic => Ok(make_quadratic_cutoff()),
            CutoffKind::Dual { base } => Ok(make_dual_pair(&SmoothCutoff::from_kind(base.kind)?)?.b_hat),
            CutoffKind::Zero => Ok(Self::zero()),
        }
    }

    /// Short human-readable description, e.g. `quadratic` or `type_b(u=0.25,v=3)`.
    pub fn label(&self) -> String {
        match &self.kind {
            CutoffKind::TypeA { v } => format!("type_a(v={v})"),
            CutoffKind::TypeB { u, v } => format!("type_b(u={u},v={v})"),
            CutoffKind::Quadratic => "quadratic".into(),
            CutoffKind::Dual { base } => format!("dual[{}]", base.label()),
            CutoffKind::Zero => "zero".into(),
        }
    }

    /// Closed interval outside of which the cutoff vanishes.
    pub fn support(&self) -> (f64, f64) {
        match &self.kind {
            CutoffKind::TypeA { v } => (0.0, 1.0 + v),
            CutoffKind::TypeB { u, v } => (*u, 1.0 + v),
            CutoffKind::Quadratic => (0.25, 4.0),
            CutoffKind::Dual { base } => base.support(),
            CutoffKind::Zero => (0.0, 0.0),
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        match &self.kind {
            CutoffKind::TypeA { v } => {
                if t <= 1.0 {
                    1.0
                } else {
                    1.0 - smooth_step((t - 1.0) / v, 1.0)
                }
            }
            CutoffKind::TypeB { u, v } => {
                let hi = 1.0 + v;
                if t <= *u || t >= hi {
                    return 0.0;
                }
                let (p_lo, p_hi) = type_b_plateau(*u, *v);
                let rise = smooth_step((t - u) / (p_lo - u), 1.0);
                let fall = 1.0 - smooth_step((t - p_hi) / (hi - p_hi), 1.0);
                rise * fall
            }
            CutoffKind::Quadratic => {
                if t <= 0.25 || t >= 4.0 {
                    0.0
                } else if t <= 1.0 {
                    (FRAC_PI_2 * quadratic_ramp(t)).sin()
                } else {
                    (FRAC_PI_2 * quadratic_ramp(t / 4.0)).cos()
                }
            }
            CutoffKind::Dual { base } => {
                let a = base.eval(t);
                if a == 0.0 {
                    return 0.0;
                }
                a / dyadic_energy(base, t)
            }
            CutoffKind::Zero => 0.0,
        }
    }
}

fn type_b_plateau(u: f64, v: f64) -> (f64, f64) {
    (4.0 * u / 3.0, 0.75 * (1.0 + v))
}

/// θ: 0 on `(−∞, 1/4]`, 1 on `[1, ∞)`.
fn quadratic_ramp(t: f64) -> f64 {
    smooth_step((t - 0.25) / 0.75, QUADRATIC_SHARPNESS)
}

/// `D(t) = Σ_{ν∈ℤ} â(4^ν t)²` for `â` supported in `[1/4, 4]`. Only the two
/// terms with `4^ν t ∈ [1/4, 4)` can be nonzero.
fn dyadic_energy(a: &SmoothCutoff, t: f64) -> f64 {
    if t <= 0.0 {
        return 0.0;
    }
    let mut s = t;
    while s >= 4.0 {
        s /= 4.0;
    }
    while s < 1.0 {
        s *= 4.0;
    }
    let x = a.eval(s);
    let y = a.eval(s / 4.0);
    x * x + y * y
}

/// Admissible cutoff of type (a): ≡ 1 on `[0, 1]`, vanishing on `[1+v, ∞)`,
/// monotone between.
pub fn make_type_a(v: f64) -> Result<SmoothCutoff> {
    if !(v > 0.0 && v <= 1.0) {
        return Err(NeedletError::InvalidParameter(format!(
            "type (a) overhang v = {v} must lie in (0, 1]"
        )));
    }
    Ok(SmoothCutoff {
        kind: CutoffKind::TypeA { v },
    })
}

/// Admissible cutoff of type (b): supported in `[u, 1+v]` with a plateau at 1
/// on `[4u/3, 3(1+v)/4]`. `make_type_b(0.25, 3.0)` is supported in `[1/4, 4]`
/// and ≡ 1 on `[1/3, 3]`.
pub fn make_type_b(u: f64, v: f64) -> Result<SmoothCutoff> {
    if !(u > 0.0 && u < 1.0 && v > 0.0) {
        return Err(NeedletError::InvalidParameter(format!(
            "type (b) needs 0 < u < 1 and v > 0, got u = {u}, v = {v}"
        )));
    }
    let (lo, hi) = type_b_plateau(u, v);
    if lo >= hi {
        return Err(NeedletError::InvalidParameter(format!(
            "type (b) plateau [{lo}, {hi}] is empty"
        )));
    }
    Ok(SmoothCutoff {
        kind: CutoffKind::TypeB { u, v },
    })
}

/// `â(t) = sin(πθ(t)/2)` on `[1/4, 1]`, `cos(πθ(t/4)/2)` on `[1, 4]`.
pub fn make_quadratic_cutoff() -> SmoothCutoff {
    SmoothCutoff {
        kind: CutoffKind::Quadratic,
    }
}

/// Analysis/synthesis cutoff pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CutoffPair {
    pub a_hat: SmoothCutoff,
    pub b_hat: SmoothCutoff,
}

impl CutoffPair {
    /// `(â, â)` for the quadratic cutoff; the needlet systems coincide and form
    /// a tight frame.
    pub fn tight() -> Self {
        let a = make_quadratic_cutoff();
        Self {
            a_hat: a.clone(),
            b_hat: a,
        }
    }

    /// Pair without any validation, for diagnostics.
    pub fn from_parts(a_hat: SmoothCutoff, b_hat: SmoothCutoff) -> Self {
        Self { a_hat, b_hat }
    }

    pub fn is_self_dual(&self) -> bool {
        self.a_hat == self.b_hat
    }

    pub fn label(&self) -> String {
        if self.is_self_dual() {
            format!("self-dual[{}]", self.a_hat.label())
        } else {
            format!("{} / {}", self.a_hat.label(), self.b_hat.label())
        }
    }
}

/// `b̂ = â/D` with `D(t) = Σ_ν â(4^ν t)²`.
///
/// Requires `â` to vanish outside `[1/4, 4]`; fails if `D` drops below
/// `10^{-8}` anywhere, i.e. if `â` is not bounded away from zero on a full
/// dyadic period.
pub fn make_dual_pair(a_hat: &SmoothCutoff) -> Result<CutoffPair> {
    let outside = (0..=200)
        .map(|i| 0.25 * i as f64 / 200.0)
        .chain((0..=200).map(|i| 4.0 + 4.0 * i as f64 / 200.0));
    for t in outside {
        if a_hat.eval(t) != 0.0 {
            return Err(NeedletError::InvalidCutoff(format!(
                "{} does not vanish at t = {t}; support must lie in [1/4, 4]",
                a_hat.label()
            )));
        }
    }
    let min_energy = (0..=4000)
        .map(|i| 1.0 + 3.0 * i as f64 / 4000.0)
        .map(|t| dyadic_energy(a_hat, t))
        .fold(f64::INFINITY, f64::min);
    if min_energy < 1e-8 {
        return Err(NeedletError::InvalidCutoff(format!(
            "Σ â(4^ν t)² falls to {min_energy:.3e} on [1/4, 4]"
        )));
    }
    Ok(CutoffPair {
        a_hat: a_hat.clone(),
        b_hat: SmoothCutoff {
            kind: CutoffKind::Dual {
                base: Box::new(a_hat.clone()),
            },
        },
    })
}

/// `max |Σ_{ν=0}^{J+1} â(4^{−ν}t) b̂(4^{−ν}t) − 1|` over 1000 log-spaced points
/// of `[1, 4^J]`.
pub fn partition_residual(pair: &CutoffPair, levels: u32) -> Result<f64> {
    if levels < 1 {
        return Err(NeedletError::InvalidParameter("J must be ≥ 1".into()));
    }
    let top = 4f64.powi(levels as i32).ln();
    let mut worst: f64 = 0.0;
    for i in 0..1000 {
        let t = (top * i as f64 / 999.0).exp();
        let mut s = 0.0;
        let mut scale = 1.0;
        for _ in 0..=levels + 1 {
            let x = t * scale;
            s += pair.a_hat.eval(x) * pair.b_hat.eval(x);
            scale /= 4.0;
        }
        worst = worst.max((s - 1.0).abs());
    }
    Ok(worst)
}

/// `max_x |Δ_h^k f(x)| / h^k` over a grid of `[lo, hi]` (forward differences).
pub fn difference_quotient_max(f: &SmoothCutoff, k: u32, h: f64, lo: f64, hi: f64) -> f64 {
    let binom = |k: u32, i: u32| -> f64 {
        (0..i).fold(1.0, |acc, j| acc * (k - j) as f64 / (j + 1) as f64)
    };
    let steps = ((hi - lo) / h).ceil() as usize;
    let mut worst: f64 = 0.0;
    for s in 0..steps {
        let x = lo + s as f64 * h;
        let mut diff = 0.0;
        for i in 0..=k {
            let sign = if (k - i).is_multiple_of(2) { 1.0 } else { -1.0 };
            diff += sign * binom(k, i) * f.eval(x + i as f64 * h);
        }
        worst = worst.max(diff.abs());
    }
    worst / h.powi(k as i32)
}
