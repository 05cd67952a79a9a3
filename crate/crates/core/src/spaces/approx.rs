use serde::Serialize;

use super::{lp_norm, Exponent, GridSpec, LqSum};
use crate::error::{NeedletError, Result};
use crate::hermite::HermiteExpansion;

/// `E_n(f)_p`, or an upper bound for it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ApproxError {
    pub value: f64,
    /// `true` when `value` is the infimum itself; `false` when it is the error
    /// of the orthogonal projection, an upper bound.
    pub exact: bool,
}

/// Best approximation of `f` from `V_n` in `L^p`.
///
/// For `p = 2` the orthogonal projection is optimal and the tail
/// `(Σ_{|α|>n} c_α²)^{1/2}` is returned. For other `p` the `L^p` error of the
/// orthogonal projection is returned as a bound.
pub fn best_approx_error(f: &HermiteExpansion, n: usize, p: Exponent, grid: &GridSpec) -> ApproxError {
    if n >= f.effective_degree() {
        return ApproxError { value: 0.0, exact: true };
    }
    if p == Exponent::Finite(2.0) {
        return ApproxError {
            value: f.tail_norm(n),
            exact: true,
        };
    }
    let residual = f.difference(&f.with_degree(n)).expect("same dimension");
    ApproxError {
        value: lp_norm(&residual, p, grid),
        exact: false,
    }
}

/// Smallest `J` with `2^J ≥ degree`; every `E_{2^j}` with `j ≥ J` vanishes.
pub fn approximation_depth(f: &HermiteExpansion) -> usize {
    let n = f.effective_degree().max(1);
    (0..usize::BITS as usize).find(|&j| 1usize << j >= n).unwrap_or(0)
}

/// `‖f‖_p + (Σ_{j=0}^{J_A} (2^{αj}E_{2^j}(f)_p)^q)^{1/q}`.
///
/// Without `levels` the sum runs to [`approximation_depth`], beyond which all
/// terms vanish, so the value is the untruncated norm.
pub fn approximation_norm(
    f: &HermiteExpansion,
    alpha: f64,
    q: Exponent,
    p: Exponent,
    grid: &GridSpec,
    levels: Option<usize>,
) -> f64 {
    let depth = levels.unwrap_or_else(|| approximation_depth(f));
    let mut series = LqSum::new(q);
    for j in 0..=depth {
        let e = best_approx_error(f, 1usize << j, p, grid).value;
        series.add(2f64.powf(alpha * j as f64) * e);
    }
    lp_norm(f, p, grid) + series.total()
}

/// `‖g‖_p / (n^{(d/2)|1/q−1/p|}‖g‖_q)` for `g ∈ V_n`, `n` the degree of `g`.
pub fn nikolskii_ratio(g: &HermiteExpansion, p: Exponent, q: Exponent, grid: &GridSpec) -> Result<f64> {
    if g.is_zero() {
        return Err(NeedletError::ZeroFunction);
    }
    if p == q {
        return Ok(1.0);
    }
    let n = g.effective_degree().max(1) as f64;
    let d = g.dim() as f64;
    let scale = n.powf(0.5 * d * (q.reciprocal() - p.reciprocal()).abs());
    Ok(lp_norm(g, p, grid) / (scale * lp_norm(g, q, grid)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hermite::graded_len;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_expansion(n: usize, seed: u64) -> HermiteExpansion {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let coeffs = (0..graded_len(1, n)).map(|_| rng.gen_range(-1.0..1.0)).collect();
        HermiteExpansion::from_graded(1, n, coeffs).unwrap()
    }

    #[test]
    fn best_approx_examples() {
        let grid = GridSpec::new(10.0, 32).unwrap();
        let f = HermiteExpansion::from_terms(1, [([0usize], 1.0), ([5], 1.0)]).unwrap();
        let two = Exponent::Finite(2.0);
        assert_eq!(best_approx_error(&f, 4, two, &grid), ApproxError { value: 1.0, exact: true });
        assert_eq!(best_approx_error(&f, 5, two, &grid).value, 0.0);
        let g = random_expansion(20, 2);
        let mut last = f64::INFINITY;
        for n in 0..=25 {
            let e = best_approx_error(&g, n, two, &grid).value;
            assert!(e <= last);
            last = e;
        }
        assert_eq!(last, 0.0);
        let bound = best_approx_error(&f, 4, Exponent::Finite(3.0), &grid);
        assert!(!bound.exact && bound.value > 0.0);
    }

    #[test]
    fn approximation_norm_examples() {
        let grid = GridSpec::new(10.0, 32).unwrap();
        let two = Exponent::Finite(2.0);
        let h0 = HermiteExpansion::basis(&[0]).unwrap();
        assert_eq!(approximation_norm(&h0, 1.0, two, two, &grid, None), 1.0);
        let f = random_expansion(30, 9);
        let a = approximation_norm(&f, 1.0, Exponent::Finite(1.0), two, &grid, None);
        let b = approximation_norm(&f.scaled(2.0), 1.0, Exponent::Finite(1.0), two, &grid, None);
        assert!((b - 2.0 * a).abs() < 1e-12 * b);
        // deeper truncation adds only vanishing terms
        let c = approximation_norm(&f, 1.0, Exponent::Finite(1.0), two, &grid, Some(9));
        assert!((a - c).abs() < 1e-15 * a);
        assert_eq!(approximation_depth(&f), 5);
    }

    #[test]
    fn nikolskii_examples() {
        let grid = GridSpec::new(30.0, 16).unwrap();
        let g = random_expansion(16, 4);
        assert_eq!(nikolskii_ratio(&g, Exponent::Finite(3.0), Exponent::Finite(3.0), &grid).unwrap(), 1.0);
        let zero = HermiteExpansion::zeros(1, 3).unwrap();
        assert!(matches!(
            nikolskii_ratio(&zero, Exponent::Infinity, Exponent::Finite(2.0), &grid),
            Err(NeedletError::ZeroFunction)
        ));
        let mut ratios = Vec::new();
        for n in [16usize, 64, 256] {
            let h = HermiteExpansion::basis(&[n]).unwrap();
            ratios.push(nikolskii_ratio(&h, Exponent::Infinity, Exponent::Finite(2.0), &grid).unwrap());
        }
        assert!(ratios.windows(2).all(|w| w[1] < w[0]), "{ratios:?}");
    }
}
