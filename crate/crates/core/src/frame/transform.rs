use serde::{Deserialize, Serialize};

use super::{level_top_degree, level_weight, FrameLevel, FrameSignature, NeedletFrame};
use crate::cutoff::SmoothCutoff;
use crate::error::{NeedletError, Result};
use crate::hermite::{degree_offset, fill_table, graded_len, HermiteExpansion};
use crate::par;

/// Needlet coefficients `s_ξ`, stored densely per level in node order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NeedletCoefficients {
    frame: FrameSignature,
    levels: Vec<Vec<f64>>,
}

impl NeedletCoefficients {
    /// All-zero coefficients for `frame`.
    pub fn zeros(frame: &NeedletFrame) -> Self {
        Self {
            frame: frame.signature(),
            levels: frame.levels().iter().map(|l| vec![0.0; l.len()]).collect(),
        }
    }

    pub fn signature(&self) -> &FrameSignature {
        &self.frame
    }

    pub fn j_max(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn level(&self, j: usize) -> Result<&[f64]> {
        self.levels
            .get(j)
            .map(Vec::as_slice)
            .ok_or(NeedletError::InvalidIndex { level: j, node: 0 })
    }

    pub fn levels(&self) -> &[Vec<f64>] {
        &self.levels
    }

    pub fn get(&self, j: usize, node: usize) -> Result<f64> {
        self.levels
            .get(j)
            .and_then(|l| l.get(node))
            .copied()
            .ok_or(NeedletError::InvalidIndex { level: j, node })
    }

    pub fn set(&mut self, j: usize, node: usize, value: f64) -> Result<()> {
        let slot = self
            .levels
            .get_mut(j)
            .and_then(|l| l.get_mut(node))
            .ok_or(NeedletError::InvalidIndex { level: j, node })?;
        *slot = value;
        Ok(())
    }

    /// `(level, node, s_ξ)` for every node, including zeros.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.levels
            .iter()
            .enumerate()
            .flat_map(|(j, l)| l.iter().enumerate().map(move |(i, v)| (j, i, *v)))
    }

    pub fn len(&self) -> usize {
        self.levels.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `Σ_ξ |s_ξ|²`.
    pub fn sum_squares(&self) -> f64 {
        self.levels.iter().flatten().map(|v| v * v).sum()
    }

    pub fn scaled(&self, factor: f64) -> Self {
        let mut out = self.clone();
        out.levels.iter_mut().flatten().for_each(|v| *v *= factor);
        out
    }
}

/// Filtered coefficients `w(|α|)c_α` up to the highest degree where they are
/// nonzero; `None` when the level sees nothing of `f`.
fn filtered_block(f: &HermiteExpansion, cutoff: &SmoothCutoff, j: usize) -> Option<(usize, Vec<f64>)> {
    let top = level_top_degree(cutoff, j).min(f.degree());
    let mut g = f.with_degree(top).filtered(|m| level_weight(cutoff, j, m));
    let eff = g.effective_degree();
    if g.is_zero() {
        return None;
    }
    g = g.with_degree(eff);
    Some((eff, g.coeffs().to_vec()))
}

/// `h_0..=h_n` at every one-dimensional zero of the level, row per zero.
fn zero_tables(level: &FrameLevel, n: usize) -> Vec<Vec<f64>> {
    par::map_range(level.zeros().len(), |i| {
        let mut t = vec![0.0; n + 1];
        fill_table(level.zeros()[i], &mut t);
        t
    })
}

/// Dense `(n+1)×(n+1)` matrix `G[a][b] = g_{(a,b)}` from graded 2-d coefficients.
fn graded_to_square(n: usize, graded: &[f64]) -> Vec<Vec<f64>> {
    let mut g = vec![vec![0.0; n + 1]; n + 1];
    for m in 0..=n {
        for a in 0..=m {
            g[a][m - a] = graded[degree_offset(2, m) + a];
        }
    }
    g
}

fn analyze_level(level: &FrameLevel, n: usize, g: &[f64]) -> Vec<f64> {
    let z = level.zeros();
    let lam = level.lambdas();
    match level.dim() {
        1 => par::map_chunks(z.len(), par::CHUNK, |r| {
            let mut buf = vec![0.0; n + 1];
            r.map(|i| {
                fill_table(z[i], &mut buf);
                let s: f64 = g.iter().zip(&buf).map(|(c, h)| c * h).sum();
                lam[i].sqrt() * s
            })
            .collect()
        }),
        _ => {
            let t = zero_tables(level, n);
            let gm = graded_to_square(n, g);
            let m = z.len();
            // U = T·G, then S = U·Tᵀ
            let u: Vec<Vec<f64>> = par::map_range(m, |i| {
                let mut row = vec![0.0; n + 1];
                for (a, ta) in t[i].iter().enumerate() {
                    for (r, gb) in row.iter_mut().zip(&gm[a]) {
                        *r += ta * gb;
                    }
                }
                row
            });
            par::map_range(m, |i1| {
                (0..m)
                    .map(|i2| {
                        let s: f64 = u[i1].iter().zip(&t[i2]).map(|(a, b)| a * b).sum();
                        (lam[i1] * lam[i2]).sqrt() * s
                    })
                    .collect::<Vec<f64>>()
            })
            .into_iter()
            .flatten()
            .collect()
        }
    }
}

/// `s_ξ = ⟨f, φ_ξ⟩ = λ_ξ^{1/2} Σ_α â(|α|/4^{j−1}) c_α H_α(ξ)` for every node of
/// every level.
///
/// The inner products are exact: the needlet expansion of a band-limited `f`
/// is evaluated from its filtered Hermite coefficients, no numerical
/// integration is involved.
pub fn analyze(f: &HermiteExpansion, frame: &NeedletFrame) -> Result<NeedletCoefficients> {
    if f.dim() != frame.dim() {
        return Err(NeedletError::DimensionMismatch {
            expected: frame.dim(),
            found: f.dim(),
        });
    }
    let degree = f.effective_degree();
    if degree > frame.max_degree() {
        return Err(NeedletError::FrameDepth {
            degree,
            j_max: frame.j_max(),
            limit: frame.max_degree(),
        });
    }
    let a_hat = &frame.pair().a_hat;
    let levels = frame
        .levels()
        .iter()
        .map(|level| match filtered_block(f, a_hat, level.level()) {
            Some((n, g)) => analyze_level(level, n, &g),
            None => vec![0.0; level.len()],
        })
        .collect();
    Ok(NeedletCoefficients {
        frame: frame.signature(),
        levels,
    })
}

/// `Σ_{ξ∈X_j} σ_ξ H_β(ξ)` for `|β| ≤ n`, in graded order, with `σ_ξ = s_ξλ_ξ^{1/2}`.
fn synthesize_level(level: &FrameLevel, n: usize, s: &[f64]) -> Vec<f64> {
    let z = level.zeros();
    let lam = level.lambdas();
    match level.dim() {
        1 => par::vec_sum_chunked(z.len(), par::CHUNK, n + 1, |r, acc| {
            let mut buf = vec![0.0; n + 1];
            for i in r {
                let sigma = s[i] * lam[i].sqrt();
                if sigma == 0.0 {
                    continue;
                }
                fill_table(z[i], &mut buf);
                for (a, h) in acc.iter_mut().zip(&buf) {
                    *a += sigma * h;
                }
            }
        }),
        _ => {
            let t = zero_tables(level, n);
            let m = z.len();
            // V[i1][b] = Σ_{i2} σ[i1][i2] T[i2][b]
            let v: Vec<Vec<f64>> = par::map_range(m, |i1| {
                let mut row = vec![0.0; n + 1];
                for i2 in 0..m {
                    let sigma = s[i1 * m + i2] * (lam[i1] * lam[i2]).sqrt();
                    if sigma == 0.0 {
                        continue;
                    }
                    for (r, h) in row.iter_mut().zip(&t[i2]) {
                        *r += sigma * h;
                    }
                }
                row
            });
            // acc[a][b] = Σ_{i1} T[i1][a] V[i1][b]
            let acc: Vec<Vec<f64>> = par::map_range(n + 1, |a| {
                let mut row = vec![0.0; n + 1 - a];
                for i1 in 0..m {
                    let ta = t[i1][a];
                    for (r, vb) in row.iter_mut().zip(&v[i1]) {
                        *r += ta * vb;
                    }
                }
                row
            });
            let mut graded = vec![0.0; graded_len(2, n)];
            for (a, row) in acc.iter().enumerate() {
                for (b, val) in row.iter().enumerate() {
                    graded[degree_offset(2, a + b) + a] = *val;
                }
            }
            graded
        }
    }
}

/// `Σ_ξ s_ξ ψ_ξ`, returned through its Hermite coefficients
/// `d_β = Σ_j b̂(|β|/4^{j−1}) Σ_{ξ∈X_j} s_ξ λ_ξ^{1/2} H_β(ξ)`.
pub fn synthesize(s: &NeedletCoefficients, frame: &NeedletFrame) -> Result<HermiteExpansion> {
    if *s.signature() != frame.signature() {
        return Err(NeedletError::FrameMismatch);
    }
    let b_hat = &frame.pair().b_hat;
    let dim = frame.dim();
    let active: Vec<(usize, usize)> = frame
        .levels()
        .iter()
        .filter(|l| s.levels[l.level()].iter().any(|v| *v != 0.0))
        .map(|l| (l.level(), level_top_degree(b_hat, l.level())))
        .collect();
    let degree = active.iter().map(|(_, n)| *n).max().unwrap_or(0);
    let mut out = vec![0.0; graded_len(dim, degree)];
    for &(j, n) in &active {
        let acc = synthesize_level(&frame.levels()[j], n, &s.levels[j]);
        for m in 0..=n {
            let w = level_weight(b_hat, j, m);
            if w == 0.0 {
                continue;
            }
            let lo = degree_offset(dim, m);
            let hi = degree_offset(dim, m + 1);
            for i in lo..hi {
                out[i] += w * acc[i];
            }
        }
    }
    HermiteExpansion::from_graded(dim, degree, out)
}

#[cfg(test)]
mod tests {
    use super::super::{build_frame, needlet_eval, Side};
    use super::*;
    use crate::cutoff::{make_dual_pair, make_type_b, CutoffPair};
    use crate::hermite::hermite_function;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_expansion(dim: usize, n: usize, seed: u64) -> HermiteExpansion {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let coeffs = (0..graded_len(dim, n)).map(|_| rng.gen_range(-1.0..1.0)).collect();
        HermiteExpansion::from_graded(dim, n, coeffs).unwrap()
    }

    #[test]
    fn h0_lives_on_level_zero() {
        let frame = build_frame(1, 0.025, 3, CutoffPair::tight()).unwrap();
        let f = HermiteExpansion::from_terms(1, [([0usize], 2.5)]).unwrap();
        let s = analyze(&f, &frame).unwrap();
        let level = frame.level(0).unwrap();
        for i in 0..level.len() {
            let xi = level.node(i).unwrap()[0];
            let expected = level.weight(i).unwrap().sqrt() * hermite_function(0, xi).unwrap() * 2.5;
            assert!((s.get(0, i).unwrap() - expected).abs() < 1e-15);
        }
        for j in 1..=3 {
            assert!(s.level(j).unwrap().iter().all(|v| *v == 0.0));
        }
    }

    #[test]
    fn level_selectivity() {
        let frame = build_frame(1, 0.025, 3, CutoffPair::tight()).unwrap();
        let s = analyze(&HermiteExpansion::basis(&[2]).unwrap(), &frame).unwrap();
        let active: Vec<usize> = (0..=3)
            .filter(|&j| s.level(j).unwrap().iter().any(|v| *v != 0.0))
            .collect();
        assert_eq!(active, vec![1, 2]);
    }

    #[test]
    fn coefficients_equal_inner_products_with_needlets() {
        // ⟨f, φ_ξ⟩ by Gauss quadrature of high order as an independent oracle
        let frame = build_frame(1, 0.025, 2, CutoffPair::tight()).unwrap();
        let f = random_expansion(1, 12, 5);
        let s = analyze(&f, &frame).unwrap();
        let rule = crate::quadrature::gauss_hermite_rule(60).unwrap();
        for (j, node) in [(1usize, 3usize), (2, 40), (2, 0)] {
            let ip: f64 = rule
                .nodes
                .iter()
                .zip(&rule.christoffel_weights)
                .map(|(x, w)| {
                    w * crate::hermite::evaluate_expansion(&f, &[*x]).unwrap()
                        * needlet_eval(&frame, Side::Analysis, j, node, &[*x]).unwrap()
                })
                .sum();
            assert!((ip - s.get(j, node).unwrap()).abs() < 1e-12, "{ip} {}", s.get(j, node).unwrap());
        }
    }

    #[test]
    fn reconstruction_d1() {
        let frame = build_frame(1, 0.025, 3, make_dual_pair(&make_type_b(0.25, 3.0).unwrap()).unwrap()).unwrap();
        let f = random_expansion(1, frame.exact_degree(), 11);
        let back = synthesize(&analyze(&f, &frame).unwrap(), &frame).unwrap();
        assert!(back.max_abs_diff(&f).unwrap() < 1e-10);
    }

    #[test]
    fn reconstruction_d2() {
        let frame = build_frame(2, 0.025, 2, CutoffPair::tight()).unwrap();
        let f = random_expansion(2, frame.exact_degree(), 3);
        let back = synthesize(&analyze(&f, &frame).unwrap(), &frame).unwrap();
        assert!(back.max_abs_diff(&f).unwrap() < 1e-10);
    }

    #[test]
    fn d2_matches_pointwise_needlets() {
        let frame = build_frame(2, 0.025, 1, CutoffPair::tight()).unwrap();
        let f = random_expansion(2, 3, 9);
        let s = analyze(&f, &frame).unwrap();
        let rule = crate::quadrature::product_cubature(12, 2).unwrap();
        for node in [0usize, 17, 200] {
            let ip = crate::quadrature::integrate(&rule, |x| {
                crate::hermite::evaluate_expansion(&f, x).unwrap()
                    * needlet_eval(&frame, Side::Analysis, 1, node, x).unwrap()
            });
            assert!((ip - s.get(1, node).unwrap()).abs() < 1e-12);
        }
    }

    #[test]
    fn single_coefficient_synthesizes_one_needlet() {
        let frame = build_frame(1, 0.025, 2, make_dual_pair(&make_type_b(0.25, 3.0).unwrap()).unwrap()).unwrap();
        let mut s = NeedletCoefficients::zeros(&frame);
        let (j, node) = (2, 30);
        s.set(j, node, 1.0).unwrap();
        let psi = synthesize(&s, &frame).unwrap();
        let level = frame.level(j).unwrap();
        let xi = level.node(node).unwrap()[0];
        let lam = level.weight(node).unwrap();
        for beta in 0..=psi.degree() {
            let expected = lam.sqrt()
                * level_weight(&frame.pair().b_hat, j, beta)
                * hermite_function(beta, xi).unwrap();
            assert!((psi.coeff(&[beta]) - expected).abs() < 1e-14);
        }
    }

    #[test]
    fn zero_and_mismatch() {
        let frame = build_frame(1, 0.025, 2, CutoffPair::tight()).unwrap();
        let zero = synthesize(&NeedletCoefficients::zeros(&frame), &frame).unwrap();
        assert!(zero.is_zero());
        let other = build_frame(1, 0.02, 2, CutoffPair::tight()).unwrap();
        assert!(matches!(
            synthesize(&NeedletCoefficients::zeros(&other), &frame),
            Err(NeedletError::FrameMismatch)
        ));
        let deep = HermiteExpansion::basis(&[17]).unwrap();
        assert!(matches!(analyze(&deep, &frame), Err(NeedletError::FrameDepth { .. })));
        let mut s = NeedletCoefficients::zeros(&frame);
        assert!(matches!(s.set(1, 22, 1.0), Err(NeedletError::InvalidIndex { .. })));
    }

    #[test]
    fn analysis_is_deterministic() {
        let frame = build_frame(1, 0.025, 4, CutoffPair::tight()).unwrap();
        let f = random_expansion(1, 64, 1);
        let a = analyze(&f, &frame).unwrap();
        let b = analyze(&f, &frame).unwrap();
        assert_eq!(a, b);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]
        #[test]
        fn tight_frame_parseval(seed in any::<u64>(), n in 0usize..=16) {
            let frame = build_frame(1, 0.025, 3, CutoffPair::tight()).unwrap();
            let f = random_expansion(1, n, seed);
            let s = analyze(&f, &frame).unwrap();
            let e = f.l2_norm().powi(2);
            prop_assert!((s.sum_squares() - e).abs() < 1e-9 * e);
        }

        #[test]
        fn analysis_is_linear(seed in any::<u64>(), c in -3.0f64..3.0) {
            let frame = build_frame(1, 0.025, 2, CutoffPair::tight()).unwrap();
            let f = random_expansion(1, 10, seed);
            let a = analyze(&f.scaled(c), &frame).unwrap();
            let b = analyze(&f, &frame).unwrap().scaled(c);
            for ((_, _, x), (_, _, y)) in a.entries().zip(b.entries()) {
                prop_assert!((x - y).abs() < 1e-13);
            }
        }
    }
}
