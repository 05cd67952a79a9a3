use super::{Exponent, GridSpec, LqSum, SpaceParams};
use crate::error::{NeedletError, Result};
use crate::frame::LevelFilter;
use crate::hermite::{fill_table, HermiteExpansion};
use crate::par;

#[derive(Clone, Copy)]
enum Reduce {
    Sum,
    Max,
}

/// Dense `(n+1)×(n+1)` coefficient matrix of a 2-d expansion.
fn square(f: &HermiteExpansion) -> Vec<Vec<f64>> {
    let n = f.degree();
    let mut g = vec![vec![0.0; n + 1]; n + 1];
    for m in 0..=n {
        for (a, c) in f.degree_block(m).iter().enumerate() {
            g[a][m - a] = *c;
        }
    }
    g
}

/// Evaluates every expansion at every midpoint of the grid and reduces
/// `point(values)` by cell-weighted sum or by max.
fn grid_reduce<F>(exps: &[HermiteExpansion], dim: usize, grid: &GridSpec, mode: Reduce, point: F) -> f64
where
    F: Fn(&[f64]) -> f64 + Sync + Send,
{
    let mids = grid.midpoints();
    let cell = grid.step().powi(dim as i32);
    let top = exps.iter().map(HermiteExpansion::degree).max().unwrap_or(0);
    let combine = |parts: Vec<f64>| match mode {
        Reduce::Sum => parts.into_iter().sum::<f64>() * cell,
        Reduce::Max => parts.into_iter().fold(0.0, f64::max),
    };
    let fold = |acc: f64, v: f64| match mode {
        Reduce::Sum => acc + v,
        Reduce::Max => acc.max(v),
    };
    if dim == 1 {
        // first nonzero coefficient of each expansion; level components start high
        let starts: Vec<usize> = exps
            .iter()
            .map(|e| e.coeffs().iter().position(|c| *c != 0.0).unwrap_or(0))
            .collect();
        let parts = par::map_chunks(mids.len(), par::CHUNK, |r| {
            let mut buf = vec![0.0; top + 1];
            let mut vals = vec![0.0; exps.len()];
            let mut acc = 0.0;
            for i in r {
                fill_table(mids[i], &mut buf);
                for ((v, e), &lo) in vals.iter_mut().zip(exps).zip(&starts) {
                    *v = e.coeffs()[lo..].iter().zip(&buf[lo..]).map(|(c, h)| c * h).sum();
                }
                acc = fold(acc, point(&vals));
            }
            vec![acc]
        });
        return combine(parts);
    }
    let tables: Vec<Vec<f64>> = par::map_range(mids.len(), |i| {
        let mut t = vec![0.0; top + 1];
        fill_table(mids[i], &mut t);
        t
    });
    // M_e[x1][b] = Σ_a h_a(x1) c_{(a,b)}
    let partial: Vec<Vec<Vec<f64>>> = exps
        .iter()
        .map(|e| {
            let g = square(e);
            let n = e.degree();
            par::map_range(mids.len(), |i| {
                let mut row = vec![0.0; n + 1];
                for (a, ga) in g.iter().enumerate() {
                    let h = tables[i][a];
                    for (r, c) in row.iter_mut().zip(ga) {
                        *r += h * c;
                    }
                }
                row
            })
        })
        .collect();
    let parts = par::map_range(mids.len(), |i1| {
        let mut vals = vec![0.0; exps.len()];
        let mut acc = 0.0;
        for t2 in &tables {
            for (v, m) in vals.iter_mut().zip(&partial) {
                *v = m[i1].iter().zip(t2).map(|(a, b)| a * b).sum();
            }
            acc = fold(acc, point(&vals));
        }
        acc
    });
    combine(parts)
}

/// Values of `f` at the grid midpoints; row-major in two dimensions.
pub fn grid_values(f: &HermiteExpansion, grid: &GridSpec) -> Vec<f64> {
    let mids = grid.midpoints();
    match f.dim() {
        1 => par::map_chunks(mids.len(), par::CHUNK, |r| {
            let mut buf = vec![0.0; f.degree() + 1];
            r.map(|i| {
                fill_table(mids[i], &mut buf);
                f.coeffs().iter().zip(&buf).map(|(c, h)| c * h).sum()
            })
            .collect()
        }),
        _ => {
            let n = f.degree();
            let tables: Vec<Vec<f64>> = par::map_range(mids.len(), |i| {
                let mut t = vec![0.0; n + 1];
                fill_table(mids[i], &mut t);
                t
            });
            let g = square(f);
            par::map_range(mids.len(), |i1| {
                let mut row = vec![0.0; n + 1];
                for (a, ga) in g.iter().enumerate() {
                    for (r, c) in row.iter_mut().zip(ga) {
                        *r += tables[i1][a] * c;
                    }
                }
                tables
                    .iter()
                    .map(|t2| row.iter().zip(t2).map(|(a, b)| a * b).sum::<f64>())
                    .collect::<Vec<f64>>()
            })
            .into_iter()
            .flatten()
            .collect()
        }
    }
}

/// `‖f‖_p`: exact by Parseval for `p = 2`, composite midpoint rule on the
/// grid otherwise (max over midpoints for `p = ∞`).
pub fn lp_norm(f: &HermiteExpansion, p: Exponent, grid: &GridSpec) -> f64 {
    match p {
        Exponent::Finite(2.0) => f.l2_norm(),
        Exponent::Finite(v) => {
            grid_reduce(std::slice::from_ref(f), f.dim(), grid, Reduce::Sum, |x| x[0].abs().powf(v)).powf(1.0 / v)
        }
        Exponent::Infinity => grid_reduce(std::slice::from_ref(f), f.dim(), grid, Reduce::Max, |x| x[0].abs()),
    }
}

fn check_depth(f: &HermiteExpansion, filter: &LevelFilter) -> Result<()> {
    let degree = f.effective_degree();
    if degree > filter.max_degree() {
        return Err(NeedletError::FrameDepth {
            degree,
            j_max: filter.j_max,
            limit: filter.max_degree(),
        });
    }
    Ok(())
}

/// `Φ_j∗f` for `j = 0..=J`, each truncated to its own top degree.
fn level_components(f: &HermiteExpansion, filter: &LevelFilter) -> Vec<(usize, HermiteExpansion)> {
    (0..=filter.j_max)
        .filter_map(|j| {
            let top = if j == 0 { 0 } else { 4usize.saturating_pow(j as u32).min(f.degree()) };
            let g = f.with_degree(top).filtered(|m| filter.weight(j, m));
            (!g.is_zero()).then(|| (j, g.with_degree(g.effective_degree())))
        })
        .collect()
}

/// `‖(Σ_j (2^{αj}|Φ_j∗f|)^q)^{1/q}‖_p`, with `Φ_j∗f` obtained exactly by
/// filtering coefficients and the `L^p` norm by the midpoint rule.
///
/// `p = ∞` is rejected: the `F` spaces are defined for `p < ∞` only.
pub fn f_continuous_norm(
    f: &HermiteExpansion,
    params: &SpaceParams,
    filter: &LevelFilter,
    grid: &GridSpec,
) -> Result<f64> {
    let Exponent::Finite(p) = params.p else {
        return Err(NeedletError::InvalidParameter("F norms require p < ∞".into()));
    };
    check_depth(f, filter)?;
    grid.check_resolution(filter.j_max)?;
    let comps = level_components(f, filter);
    if comps.is_empty() {
        return Ok(0.0);
    }
    let weights: Vec<f64> = comps
        .iter()
        .map(|(j, _)| 2f64.powf(params.alpha * *j as f64))
        .collect();
    let exps: Vec<HermiteExpansion> = comps.into_iter().map(|(_, g)| g).collect();
    let q = params.q;
    let integral = grid_reduce(&exps, f.dim(), grid, Reduce::Sum, |vals| {
        let mut s = LqSum::new(q);
        for (v, w) in vals.iter().zip(&weights) {
            s.add(w * v.abs());
        }
        s.total().powf(p)
    });
    Ok(integral.powf(1.0 / p))
}

/// `(Σ_j (2^{αj}‖Φ_j∗f‖_p)^q)^{1/q}`; exact by Parseval for `p = 2`.
pub fn b_continuous_norm(
    f: &HermiteExpansion,
    params: &SpaceParams,
    filter: &LevelFilter,
    grid: &GridSpec,
) -> Result<f64> {
    check_depth(f, filter)?;
    if params.p != Exponent::Finite(2.0) {
        grid.check_resolution(filter.j_max)?;
    }
    let mut total = LqSum::new(params.q);
    for (j, g) in level_components(f, filter) {
        total.add(2f64.powf(params.alpha * j as f64) * lp_norm(&g, params.p, grid));
    }
    Ok(total.total())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cutoff::{make_quadratic_cutoff, CutoffPair};
    use crate::frame::build_frame;
    use crate::hermite::{evaluate_expansion, graded_len};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn filter(j: usize) -> LevelFilter {
        LevelFilter::new(make_quadratic_cutoff(), j)
    }

    fn random_expansion(dim: usize, n: usize, seed: u64) -> HermiteExpansion {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let coeffs = (0..graded_len(dim, n)).map(|_| rng.gen_range(-1.0..1.0)).collect();
        HermiteExpansion::from_graded(dim, n, coeffs).unwrap()
    }

    #[test]
    fn grid_values_match_pointwise_evaluation() {
        let grid = GridSpec::new(3.0, 4).unwrap();
        let mids = grid.midpoints();
        let f1 = random_expansion(1, 9, 1);
        let v1 = grid_values(&f1, &grid);
        for (x, v) in mids.iter().zip(&v1) {
            assert!((evaluate_expansion(&f1, &[*x]).unwrap() - v).abs() < 1e-13);
        }
        let f2 = random_expansion(2, 6, 2);
        let v2 = grid_values(&f2, &grid);
        let n = mids.len();
        for (i1, i2) in [(0usize, 0usize), (3, 17), (20, 5)] {
            let e = evaluate_expansion(&f2, &[mids[i1], mids[i2]]).unwrap();
            assert!((e - v2[i1 * n + i2]).abs() < 1e-13);
        }
    }

    #[test]
    fn lp_norms_by_grid() {
        let f = random_expansion(1, 8, 4);
        let grid = GridSpec::new(12.0, 64).unwrap();
        let l2 = lp_norm(&f, Exponent::Finite(2.0), &grid);
        let l2_grid = grid_reduce(std::slice::from_ref(&f), 1, &grid, Reduce::Sum, |x| x[0] * x[0]).sqrt();
        assert!((l2 - l2_grid).abs() < 1e-10 * l2);
        let h0 = HermiteExpansion::basis(&[0]).unwrap();
        let sup = lp_norm(&h0, Exponent::Infinity, &grid);
        assert!((sup - crate::hermite::H0_AT_ZERO).abs() < 1e-4);
        // ‖h_0‖_1 = π^{-1/4}·√(2π)
        let l1 = lp_norm(&h0, Exponent::Finite(1.0), &grid);
        let exact = crate::hermite::H0_AT_ZERO * (2.0 * std::f64::consts::PI).sqrt();
        assert!((l1 - exact).abs() < 1e-8);
        let h00 = HermiteExpansion::basis(&[0, 0]).unwrap();
        let grid2 = GridSpec::new(8.0, 16).unwrap();
        assert!((lp_norm(&h00, Exponent::Finite(1.0), &grid2) - exact * exact).abs() < 1e-6);
    }

    #[test]
    fn h0_has_unit_norms() {
        let f = HermiteExpansion::basis(&[0]).unwrap();
        let grid = GridSpec::new(10.0, 32).unwrap();
        for (alpha, q) in [(0.0, 2.0), (1.5, 1.0), (-1.0, f64::INFINITY)] {
            let p = SpaceParams::new(alpha, 2.0, q).unwrap();
            assert!((f_continuous_norm(&f, &p, &filter(3), &grid).unwrap() - 1.0).abs() < 1e-6);
            assert_eq!(b_continuous_norm(&f, &p, &filter(3), &grid).unwrap(), 1.0);
        }
    }

    #[test]
    fn two_level_besov_oracle() {
        let a = make_quadratic_cutoff();
        let f = HermiteExpansion::basis(&[4]).unwrap();
        let grid = GridSpec::new(10.0, 32).unwrap();
        let p = SpaceParams::new(1.0, 2.0, f64::INFINITY).unwrap();
        let expected = (2.0 * a.eval(4.0 / 1.0)).max(4.0 * a.eval(4.0 / 4.0)).max(8.0 * a.eval(4.0 / 16.0));
        let b = b_continuous_norm(&f, &p, &filter(3), &grid).unwrap();
        assert!((b - expected).abs() < 1e-15);
        let mut last = 0.0;
        for alpha in [0.0, 0.5, 1.0, 2.0] {
            let v = b_continuous_norm(&f, &SpaceParams::new(alpha, 2.0, f64::INFINITY).unwrap(), &filter(3), &grid).unwrap();
            assert!(v >= last);
            last = v;
        }
    }

    #[test]
    fn f_norm_equals_l2_for_tight_filter() {
        // Σ_j |Φ_j∗f|² integrates to Σ_j ‖Φ_j∗f‖² = ‖f‖² when â² + â²(4·) = 1
        let f = random_expansion(1, 16, 8);
        let grid = GridSpec::new(12.0, 64).unwrap();
        let p = SpaceParams::new(0.0, 2.0, 2.0).unwrap();
        let v = f_continuous_norm(&f, &p, &filter(4), &grid).unwrap();
        assert!((v - f.l2_norm()).abs() < 1e-6 * v);
    }

    #[test]
    fn f_norm_d2_and_guards() {
        let f = random_expansion(2, 4, 3);
        let frame = build_frame(2, 0.025, 2, CutoffPair::tight()).unwrap();
        let grid = GridSpec::covering(&frame, 16);
        let p = SpaceParams::new(0.0, 2.0, 2.0).unwrap();
        let v = f_continuous_norm(&f, &p, &frame.analysis_filter(), &grid).unwrap();
        assert!((v - f.l2_norm()).abs() < 1e-6 * v);
        let pinf = SpaceParams::new(0.0, f64::INFINITY, 2.0).unwrap();
        assert!(f_continuous_norm(&f, &pinf, &frame.analysis_filter(), &grid).is_err());
        let coarse = GridSpec::covering(&frame, 8);
        assert!(matches!(
            f_continuous_norm(&f, &p, &frame.analysis_filter(), &coarse),
            Err(NeedletError::Resolution { .. })
        ));
        let deep = HermiteExpansion::basis(&[17, 0]).unwrap();
        assert!(matches!(
            f_continuous_norm(&deep, &p, &frame.analysis_filter(), &grid),
            Err(NeedletError::FrameDepth { .. })
        ));
    }

    #[test]
    fn homogeneity() {
        let f = random_expansion(1, 12, 6);
        let grid = GridSpec::new(10.0, 64).unwrap();
        let p = SpaceParams::new(0.5, 3.0, 2.0).unwrap();
        let a = f_continuous_norm(&f, &p, &filter(3), &grid).unwrap();
        let b = f_continuous_norm(&f.scaled(-3.0), &p, &filter(3), &grid).unwrap();
        assert!((b - 3.0 * a).abs() < 1e-12 * b);
        let c = b_continuous_norm(&f, &p, &filter(3), &grid).unwrap();
        let d = b_continuous_norm(&f.scaled(-3.0), &p, &filter(3), &grid).unwrap();
        assert!((d - 3.0 * c).abs() < 1e-12 * d);
        let zero = HermiteExpansion::zeros(1, 5).unwrap();
        assert_eq!(f_continuous_norm(&zero, &p, &filter(3), &grid).unwrap(), 0.0);
    }
}
