//! Hermite zeros, Gauss–Hermite rules and the tensor-product cubature.

use serde::Serialize;

use crate::error::{NeedletError, Result};
use crate::hermite::{check_degree, Recurrence};
use crate::par;

/// Default cap on the number of cubature nodes.
pub const DEFAULT_NODE_BUDGET: u128 = 1_000_000;

const NEWTON_MAX_ITER: usize = 100;

pub(crate) fn check_node_budget(requested: u128, budget: u128) -> Result<()> {
    if requested > budget {
        return Err(NeedletError::ResourceLimit {
            what: "cubature nodes",
            requested,
            budget,
        });
    }
    Ok(())
}

/// Eigenvalues of the symmetric tridiagonal matrix with diagonal `diag` and
/// off-diagonal `off` (`off[i]` couples rows `i` and `i+1`), by implicit QL
/// with Wilkinson-type shifts. Returned unsorted.
fn tridiagonal_eigenvalues(mut diag: Vec<f64>, off: &[f64]) -> Result<Vec<f64>> {
    let n = diag.len();
    if n == 0 {
        return Ok(diag);
    }
    let mut e = vec![0.0; n];
    e[..n - 1].copy_from_slice(off);
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = diag[m].abs() + diag[m + 1].abs();
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
                return Err(NeedletError::NumericFailure(format!(
                    "tridiagonal QL did not converge for eigenvalue {l}"
                )));
            }
            let mut g = (diag[l + 1] - diag[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = diag[m] - diag[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut deflated = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    diag[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = diag[i + 1] - p;
                r = (diag[i] - g) * s + 2.0 * c * b;
                p = s * r;
                diag[i + 1] = g + p;
                g = c * r - b;
            }
            if deflated {
                continue;
            }
            diag[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(diag)
}

/// Newton refinement of a zero of `h_n` starting at `t`.
fn polish_zero(n: usize, mut t: f64) -> Result<f64> {
    let root_2n = (2.0 * n as f64).sqrt();
    for _ in 0..NEWTON_MAX_ITER {
        let mut rec = Recurrence::new(t);
        rec.advance_to(n);
        let (prev, cur) = rec.scaled_pair();
        // h_n′ = −t h_n + sqrt(2n) h_{n−1}; the common scale cancels in the ratio
        let deriv = -t * cur + root_2n * prev;
        if deriv == 0.0 || !deriv.is_finite() {
            break;
        }
        let step = cur / deriv;
        t -= step;
        if step.abs() <= 1e-12 * (1.0 + t.abs()) {
            let mut rec = Recurrence::new(t);
            rec.advance_to(n);
            let (prev, cur) = rec.scaled_pair();
            let deriv = -t * cur + root_2n * prev;
            if deriv != 0.0 && deriv.is_finite() {
                t -= cur / deriv;
            }
            return Ok(t);
        }
    }
    Err(NeedletError::NumericFailure(format!(
        "Newton iteration for a zero of H_{n} near {t} did not converge"
    )))
}

/// Zeros of the Hermite polynomial `H_n`, ascending.
///
/// `H_{2m}(t)` and `H_{2m+1}(t)/t` are Laguerre polynomials `L_m^{(∓1/2)}(t²)`,
/// so the squared positive zeros are the eigenvalues of an `m × m` Jacobi
/// matrix. Those eigenvalues bracket every zero; each is then polished by
/// Newton's method on the normalized recurrence. The output is exactly
/// symmetric: `zeros[i] == -zeros[n-1-i]`.
pub fn hermite_zeros(n: usize) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(NeedletError::InvalidParameter(
            "H_0 has no zeros; need n ≥ 1".into(),
        ));
    }
    check_degree(n)?;
    let m = n / 2;
    let alpha = if n.is_multiple_of(2) { -0.5 } else { 0.5 };
    let diag: Vec<f64> = (0..m).map(|k| 2.0 * k as f64 + alpha + 1.0).collect();
    let off: Vec<f64> = (1..m)
        .map(|k| (k as f64 * (k as f64 + alpha)).sqrt())
        .collect();
    let mut squares = tridiagonal_eigenvalues(diag, &off)?;
    squares.sort_by(f64::total_cmp);
    let guesses: Vec<f64> = squares.iter().map(|x| x.max(0.0).sqrt()).collect();
    let polished = par::map_range(m, |i| polish_zero(n, guesses[i]));
    let positive = polished.into_iter().collect::<Result<Vec<f64>>>()?;
    for w in positive.windows(2) {
        if !(w[0] < w[1]) {
            return Err(NeedletError::NumericFailure(format!(
                "zeros of H_{n} not strictly increasing after refinement"
            )));
        }
    }
    let mut out = Vec::with_capacity(n);
    out.extend(positive.iter().rev().map(|t| -t));
    if n % 2 == 1 {
        out.push(0.0);
    }
    out.extend(positive.iter().copied());
    Ok(out)
}

/// One-dimensional Gauss–Hermite rule.
///
/// `gauss_weights` integrate against `e^{−t²}`; `christoffel_weights` are
/// `λ_n(t_ν) = 1/K_n(t_ν, t_ν)` and integrate functions that already carry
/// their Gaussian factor, e.g. products of Hermite functions.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuadratureRule1D {
    pub n: usize,
    pub nodes: Vec<f64>,
    pub gauss_weights: Vec<f64>,
    pub christoffel_weights: Vec<f64>,
}

impl QuadratureRule1D {
    /// `Σ_ν w_ν p(t_ν)`, the rule applied to `∫ p(t) e^{−t²} dt`.
    pub fn integrate_gaussian<F: Fn(f64) -> f64>(&self, p: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.gauss_weights)
            .map(|(t, w)| w * p(*t))
            .sum()
    }
}

/// `λ_n(t) = 1/Σ_{k≤n} h_k(t)²`.
pub(crate) fn christoffel_weight(n: usize, t: f64) -> f64 {
    crate::hermite::christoffel(n, t).unwrap_or(f64::NAN)
}

/// The `n`-point Gauss–Hermite rule, exact for `p(t)e^{−t²}` with `deg p ≤ 2n−1`.
pub fn gauss_hermite_rule(n: usize) -> Result<QuadratureRule1D> {
    let nodes = hermite_zeros(n)?;
    let christoffel_weights = par::map_range(n, |i| christoffel_weight(n, nodes[i]));
    let gauss_weights = nodes
        .iter()
        .zip(&christoffel_weights)
        .map(|(t, l)| l * (-t * t).exp())
        .collect();
    Ok(QuadratureRule1D {
        n,
        nodes,
        gauss_weights,
        christoffel_weights,
    })
}

/// Tensor-product cubature on `ℝ^d` built from an `n`-point rule.
///
/// Nodes are stored flat (`d` coordinates per node) in row-major order over
/// the per-axis node indices.
#[derive(Debug, Clone, PartialEq)]
pub struct CubatureRule {
    pub dim: usize,
    pub base: QuadratureRule1D,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl CubatureRule {
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn node(&self, i: usize) -> &[f64] {
        &self.nodes[i * self.dim..(i + 1) * self.dim]
    }

    /// `λ_ξ`, the product of per-axis Christoffel weights.
    pub fn weight(&self, i: usize) -> f64 {
        self.weights[i]
    }

    /// Product of per-axis Gauss weights (for integrands against `e^{−|x|²}`).
    pub fn gauss_weight(&self, i: usize) -> f64 {
        let n = self.base.n;
        let mut rest = i;
        let mut w = 1.0;
        for _ in 0..self.dim {
            w *= self.base.gauss_weights[rest % n];
            rest /= n;
        }
        w
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
}

/// Product cubature with `n^d` nodes, exact for `fg` when `f ∈ V_ℓ`,
/// `g ∈ V_m`, `ℓ + m ≤ 2n − 1`.
pub fn product_cubature(n: usize, d: usize) -> Result<CubatureRule> {
    product_cubature_with_budget(n, d, DEFAULT_NODE_BUDGET)
}

pub fn product_cubature_with_budget(n: usize, d: usize, budget: u128) -> Result<CubatureRule> {
    crate::hermite::check_dim(d)?;
    check_node_budget((n as u128).saturating_pow(d as u32), budget)?;
    let base = gauss_hermite_rule(n)?;
    let count = n.pow(d as u32);
    let mut nodes = Vec::with_capacity(count * d);
    let mut weights = Vec::with_capacity(count);
    for i in 0..count {
        let mut idx = vec![0; d];
        let mut rest = i;
        for axis in (0..d).rev() {
            idx[axis] = rest % n;
            rest /= n;
        }
        let mut w = 1.0;
        for &k in &idx {
            nodes.push(base.nodes[k]);
            w *= base.christoffel_weights[k];
        }
        weights.push(w);
    }
    Ok(CubatureRule {
        dim: d,
        base,
        nodes,
        weights,
    })
}

/// `Σ_ξ λ_ξ f(ξ)`.
pub fn integrate<F>(rule: &CubatureRule, f: F) -> f64
where
    F: Fn(&[f64]) -> f64 + Sync + Send,
{
    par::sum_chunked(rule.len(), par::CHUNK, |r| {
        r.map(|i| rule.weight(i) * f(rule.node(i))).sum()
    })
}
