use std::fmt;

use serde::{Deserialize, Serialize};

use super::kernels::check_dim;
use super::{check_degree, fill_table, table};
use crate::error::{NeedletError, Result};
use crate::par;
use crate::quadrature::hermite_zeros;

/// Multi-index `α ∈ ℕ₀^d`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MultiIndex(pub Vec<usize>);

impl MultiIndex {
    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }
}

impl From<&[usize]> for MultiIndex {
    fn from(a: &[usize]) -> Self {
        MultiIndex(a.to_vec())
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, ")")
    }
}

/// Number of multi-indices with `|α| ≤ n` in dimension `d ∈ {1, 2}`.
pub(crate) fn graded_len(d: usize, n: usize) -> usize {
    match d {
        1 => n + 1,
        _ => (n + 1) * (n + 2) / 2,
    }
}

/// Offset of the first index of total degree `m`.
#[inline]
pub(crate) fn degree_offset(d: usize, m: usize) -> usize {
    match d {
        1 => m,
        _ => m * (m + 1) / 2,
    }
}

/// A function in `V_n`, stored as dense coefficients over the orthonormal
/// basis `{H_α : |α| ≤ n}`.
///
/// Coefficients are kept in graded order: by total degree `|α|`, then by
/// `α_1` ascending. In two dimensions `(a, b)` sits at `m(m+1)/2 + a` with
/// `m = a + b`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HermiteExpansion {
    dim: usize,
    degree: usize,
    coeffs: Vec<f64>,
}

impl HermiteExpansion {
    pub fn zeros(dim: usize, degree: usize) -> Result<Self> {
        check_dim(dim)?;
        check_degree(degree)?;
        Ok(Self {
            dim,
            degree,
            coeffs: vec![0.0; graded_len(dim, degree)],
        })
    }

    /// Wraps coefficients already in graded order.
    pub fn from_graded(dim: usize, degree: usize, coeffs: Vec<f64>) -> Result<Self> {
        check_dim(dim)?;
        check_degree(degree)?;
        let expected = graded_len(dim, degree);
        if coeffs.len() != expected {
            return Err(NeedletError::InvalidParameter(format!(
                "expected {expected} coefficients for d={dim}, n={degree}, got {}",
                coeffs.len()
            )));
        }
        Ok(Self { dim, degree, coeffs })
    }

    /// Builds an expansion from `(α, c_α)` pairs. The degree is the largest `|α|`.
    /// Repeated indices are summed.
    pub fn from_terms<I, A>(dim: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (A, f64)>,
        A: AsRef<[usize]>,
    {
        let terms: Vec<(Vec<usize>, f64)> = terms
            .into_iter()
            .map(|(a, c)| (a.as_ref().to_vec(), c))
            .collect();
        let degree = terms.iter().map(|(a, _)| a.iter().sum()).max().unwrap_or(0);
        let mut out = Self::zeros(dim, degree)?;
        for (a, c) in terms {
            let i = out.index_checked(&a)?;
            out.coeffs[i] += c;
        }
        Ok(out)
    }

    /// The single basis function `H_α`.
    pub fn basis(alpha: &[usize]) -> Result<Self> {
        Self::from_terms(alpha.len(), [(alpha, 1.0)])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Graded coefficient vector.
    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Coefficients of total degree `m` (`α_1` ascending).
    pub fn degree_block(&self, m: usize) -> &[f64] {
        let lo = degree_offset(self.dim, m);
        let hi = degree_offset(self.dim, m + 1);
        &self.coeffs[lo..hi]
    }

    fn index_checked(&self, alpha: &[usize]) -> Result<usize> {
        if alpha.len() != self.dim {
            return Err(NeedletError::DimensionMismatch {
                expected: self.dim,
                found: alpha.len(),
            });
        }
        let m: usize = alpha.iter().sum();
        if m > self.degree {
            return Err(NeedletError::InvalidParameter(format!(
                "index of total degree {m} exceeds expansion degree {}",
                self.degree
            )));
        }
        Ok(degree_offset(self.dim, m) + if self.dim == 1 { 0 } else { alpha[0] })
    }

    /// `c_α`, zero for indices beyond the degree.
    pub fn coeff(&self, alpha: &[usize]) -> f64 {
        self.index_checked(alpha).map(|i| self.coeffs[i]).unwrap_or(0.0)
    }

    pub fn set(&mut self, alpha: &[usize], value: f64) -> Result<()> {
        let i = self.index_checked(alpha)?;
        self.coeffs[i] = value;
        Ok(())
    }

    /// Multi-index at graded position `i`.
    pub fn multi_index(&self, i: usize) -> MultiIndex {
        if self.dim == 1 {
            return MultiIndex(vec![i]);
        }
        let mut m = 0;
        while degree_offset(2, m + 1) <= i {
            m += 1;
        }
        let a = i - degree_offset(2, m);
        MultiIndex(vec![a, m - a])
    }

    /// All `(α, c_α)` pairs with nonzero coefficient.
    pub fn terms(&self) -> Vec<(MultiIndex, f64)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != 0.0)
            .map(|(i, c)| (self.multi_index(i), *c))
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| *c == 0.0)
    }

    /// `‖f‖₂`, by Parseval.
    pub fn l2_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    /// Largest `|α|` carrying a nonzero coefficient (0 for the zero function).
    pub fn effective_degree(&self) -> usize {
        (0..=self.degree)
            .rev()
            .find(|&m| self.degree_block(m).iter().any(|c| *c != 0.0))
            .unwrap_or(0)
    }

    /// `(Σ_{|α|>n} c_α²)^{1/2}`.
    pub fn tail_norm(&self, n: usize) -> f64 {
        if n >= self.degree {
            return 0.0;
        }
        self.coeffs[degree_offset(self.dim, n + 1)..]
            .iter()
            .map(|c| c * c)
            .sum::<f64>()
            .sqrt()
    }

    /// Re-expresses the expansion at degree `n`, truncating or zero-padding.
    pub fn with_degree(&self, n: usize) -> Self {
        let len = graded_len(self.dim, n);
        let mut coeffs = vec![0.0; len];
        let keep = len.min(self.coeffs.len());
        coeffs[..keep].copy_from_slice(&self.coeffs[..keep]);
        Self {
            dim: self.dim,
            degree: n,
            coeffs,
        }
    }

    /// Multiplies each `c_α` by `weight(|α|)`.
    pub fn filtered<F: Fn(usize) -> f64>(&self, weight: F) -> Self {
        let mut out = self.clone();
        for m in 0..=self.degree {
            let w = weight(m);
            let lo = degree_offset(self.dim, m);
            let hi = degree_offset(self.dim, m + 1);
            for c in &mut out.coeffs[lo..hi] {
                *c *= w;
            }
        }
        out
    }

    pub fn scaled(&self, factor: f64) -> Self {
        let mut out = self.clone();
        out.coeffs.iter_mut().for_each(|c| *c *= factor);
        out
    }

    /// `self − other`, at the larger of the two degrees.
    pub fn difference(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(NeedletError::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        let n = self.degree.max(other.degree);
        let mut a = self.with_degree(n);
        let b = other.with_degree(n);
        for (x, y) in a.coeffs.iter_mut().zip(&b.coeffs) {
            *x -= y;
        }
        Ok(a)
    }

    /// Largest coefficientwise deviation, treating missing coefficients as zero.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        Ok(self
            .difference(other)?
            .coeffs
            .iter()
            .fold(0.0, |m, c| m.max(c.abs())))
    }
}

/// `Σ_α c_α H_α(x)`.
pub fn evaluate_expansion(f: &HermiteExpansion, x: &[f64]) -> Result<f64> {
    if x.len() != f.dim {
        return Err(NeedletError::DimensionMismatch {
            expected: f.dim,
            found: x.len(),
        });
    }
    let n = f.degree;
    Ok(match f.dim {
        1 => {
            let t = table(n, x[0]);
            f.coeffs.iter().zip(&t).map(|(c, h)| c * h).sum()
        }
        _ => {
            let t1 = table(n, x[0]);
            let t2 = table(n, x[1]);
            let mut s = 0.0;
            for m in 0..=n {
                let block = f.degree_block(m);
                for (a, c) in block.iter().enumerate() {
                    s += c * t1[a] * t2[m - a];
                }
            }
            s
        }
    })
}

/// Result of [`project_function`].
#[derive(Debug, Clone, PartialEq)]
pub struct Projection {
    pub expansion: HermiteExpansion,
    /// `max_{|α| ∈ {n−1, n}} |c_α|`.
    pub tail_indicator: f64,
}

/// Smallest admissible quadrature order for a projection of degree `n`.
pub fn min_projection_order(n: usize) -> usize {
    2 * n + 16
}

/// Degree-`n` truncation of the Hermite expansion of `f`, with the inner
/// products `∫ f H_α` computed by the order-`m` Gauss–Hermite product rule
/// written with Christoffel weights: `c_α = Σ_ξ λ_ξ f(ξ) H_α(ξ)`.
///
/// Nodes where `f` vanishes are skipped, which keeps compactly supported
/// inputs cheap at large orders.
pub fn project_function<F>(f: F, dim: usize, n: usize, m: usize) -> Result<Projection>
where
    F: Fn(&[f64]) -> f64 + Sync + Send,
{
    check_dim(dim)?;
    check_degree(n)?;
    let required = min_projection_order(n);
    if m < required {
        return Err(NeedletError::InsufficientQuadrature { order: m, required });
    }
    let nodes = hermite_zeros(m)?;
    let expansion = match dim {
        1 => project_1d(&f, &nodes, n, m)?,
        _ => project_2d(&f, &nodes, n, m)?,
    };
    let lo = n.saturating_sub(1);
    let tail_indicator = (lo..=n)
        .flat_map(|k| expansion.degree_block(k).iter())
        .fold(0.0, |acc: f64, c| acc.max(c.abs()));
    Ok(Projection {
        expansion,
        tail_indicator,
    })
}

fn project_1d<F>(f: &F, nodes: &[f64], n: usize, m: usize) -> Result<HermiteExpansion>
where
    F: Fn(&[f64]) -> f64 + Sync + Send,
{
    let values = par::map_range(nodes.len(), |i| f(&[nodes[i]]));
    let coeffs = par::vec_sum_chunked(nodes.len(), par::CHUNK, n + 1, |range, acc| {
        let mut buf = vec![0.0; m + 1];
        for i in range {
            let fv = values[i];
            if fv == 0.0 {
                continue;
            }
            fill_table(nodes[i], &mut buf);
            let lambda = 1.0 / buf.iter().map(|h| h * h).sum::<f64>();
            let w = lambda * fv;
            for (c, h) in acc.iter_mut().zip(&buf) {
                *c += w * h;
            }
        }
    });
    HermiteExpansion::from_graded(1, n, coeffs)
}

fn project_2d<F>(f: &F, nodes: &[f64], n: usize, m: usize) -> Result<HermiteExpansion>
where
    F: Fn(&[f64]) -> f64 + Sync + Send,
{
    let k = nodes.len();
    crate::quadrature::check_node_budget((k as u128).pow(2), crate::quadrature::DEFAULT_NODE_BUDGET)?;
    // per 1-d node: Christoffel weight and h_0..h_n
    let rows: Vec<(f64, Vec<f64>)> = par::map_range(k, |i| {
        let full = table(m, nodes[i]);
        let lambda = 1.0 / full.iter().map(|h| h * h).sum::<f64>();
        (lambda, full[..=n].to_vec())
    });
    // g[i][b] = Σ_j λ_j f(t_i, t_j) h_b(t_j)
    let g: Vec<Vec<f64>> = par::map_range(k, |i| {
        let mut acc = vec![0.0; n + 1];
        for (j, (lj, hj)) in rows.iter().enumerate() {
            let fv = f(&[nodes[i], nodes[j]]);
            if fv == 0.0 {
                continue;
            }
            let w = lj * fv;
            for (a, h) in acc.iter_mut().zip(hj) {
                *a += w * h;
            }
        }
        acc
    });
    let mut out = HermiteExpansion::zeros(2, n)?;
    for total in 0..=n {
        for a in 0..=total {
            let b = total - a;
            let mut s = 0.0;
            for (i, (li, hi)) in rows.iter().enumerate() {
                s += li * hi[a] * g[i][b];
            }
            out.set(&[a, b], s)?;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::super::hermite_function;
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    #[test]
    fn graded_indexing_roundtrip() {
        let f = HermiteExpansion::zeros(2, 6).unwrap();
        for i in 0..f.coeffs().len() {
            let a = f.multi_index(i);
            assert_eq!(f.index_checked(&a.0).unwrap(), i);
            assert!(a.total() <= 6);
        }
    }

    #[test]
    fn evaluate_examples() {
        let f = HermiteExpansion::basis(&[0]).unwrap();
        assert_relative_eq!(evaluate_expansion(&f, &[0.0]).unwrap(), PI.powf(-0.25), epsilon = 1e-15);
        let zero = HermiteExpansion::zeros(1, 0).unwrap();
        assert_eq!(evaluate_expansion(&zero, &[1.3]).unwrap(), 0.0);
        let g = HermiteExpansion::from_terms(1, [([2usize], 3.0), ([5], -1.0)]).unwrap();
        let x = 1.1;
        let expected = 3.0 * hermite_function(2, x).unwrap() - hermite_function(5, x).unwrap();
        assert_relative_eq!(evaluate_expansion(&g, &[x]).unwrap(), expected, epsilon = 1e-15);
        assert!(matches!(
            evaluate_expansion(&g, &[1.0, 2.0]),
            Err(NeedletError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn evaluate_2d_uses_tensor_basis() {
        let g = HermiteExpansion::from_terms(2, [([1usize, 2], 0.5), ([3, 0], -2.0)]).unwrap();
        let x = [0.4, -0.9];
        let expected = 0.5 * hermite_function(1, x[0]).unwrap() * hermite_function(2, x[1]).unwrap()
            - 2.0 * hermite_function(3, x[0]).unwrap() * hermite_function(0, x[1]).unwrap();
        assert_relative_eq!(evaluate_expansion(&g, &x).unwrap(), expected, epsilon = 1e-15);
    }

    #[test]
    fn out_of_range_index_rejected() {
        let mut f = HermiteExpansion::zeros(1, 3).unwrap();
        assert!(f.set(&[4], 1.0).is_err());
        assert!(f.set(&[1, 1], 1.0).is_err());
        assert_eq!(f.coeff(&[7]), 0.0);
    }

    #[test]
    fn projection_of_basis_function() {
        let p = project_function(|x| hermite_function(3, x[0]).unwrap(), 1, 8, 64).unwrap();
        for (k, c) in p.expansion.coeffs().iter().enumerate() {
            let expected = if k == 3 { 1.0 } else { 0.0 };
            assert!((c - expected).abs() < 1e-10, "k={k} c={c}");
        }
    }

    #[test]
    fn projection_of_gaussian_and_zero() {
        let p = project_function(|x| PI.powf(-0.25) * (-x[0] * x[0] / 2.0).exp(), 1, 10, 40).unwrap();
        assert!((p.expansion.coeff(&[0]) - 1.0).abs() < 1e-10);
        assert!(p.expansion.coeffs()[1..].iter().all(|c| c.abs() < 1e-10));
        let z = project_function(|_| 0.0, 1, 5, 30).unwrap();
        assert!(z.expansion.is_zero());
        assert_eq!(z.tail_indicator, 0.0);
    }

    #[test]
    fn projection_2d_recovers_tensor_basis() {
        let p = project_function(
            |x| hermite_function(2, x[0]).unwrap() * hermite_function(1, x[1]).unwrap(),
            2,
            5,
            26,
        )
        .unwrap();
        for (i, c) in p.expansion.coeffs().iter().enumerate() {
            let a = p.expansion.multi_index(i);
            let expected = if a.0 == vec![2, 1] { 1.0 } else { 0.0 };
            assert!((c - expected).abs() < 1e-10);
        }
    }

    #[test]
    fn projection_requires_margin() {
        assert!(matches!(
            project_function(|_| 1.0, 1, 10, 35),
            Err(NeedletError::InsufficientQuadrature { required: 36, .. })
        ));
    }

    proptest! {
        #[test]
        fn parseval_matches_quadrature_norm(coeffs in proptest::collection::vec(-1.0f64..1.0, 1..20)) {
            let n = coeffs.len() - 1;
            let f = HermiteExpansion::from_graded(1, n, coeffs).unwrap();
            // ∫ f² with a rule exact for degree 2n
            let p = project_function(|x| evaluate_expansion(&f, x).unwrap(), 1, n, 2 * n + 16).unwrap();
            prop_assert!((p.expansion.l2_norm() - f.l2_norm()).abs() < 1e-10 * (1.0 + f.l2_norm()));
        }

        #[test]
        fn tail_norm_is_nonincreasing(coeffs in proptest::collection::vec(-1.0f64..1.0, 1..30)) {
            let n = coeffs.len() - 1;
            let f = HermiteExpansion::from_graded(1, n, coeffs).unwrap();
            for k in 0..n {
                prop_assert!(f.tail_norm(k + 1) <= f.tail_norm(k) + 1e-15);
            }
            prop_assert_eq!(f.tail_norm(n), 0.0);
        }
    }
}
