use super::{Exponent, GridSpec, LqSum, SpaceParams};
use crate::error::{NeedletError, Result};
use crate::frame::{FrameLevel, NeedletCoefficients, NeedletFrame};
use crate::par;

fn check_frame(s: &NeedletCoefficients, frame: &NeedletFrame) -> Result<()> {
    if *s.signature() != frame.signature() {
        return Err(NeedletError::FrameMismatch);
    }
    Ok(())
}

/// `|R_ξ|` for every node of the level, in node order.
fn tile_measures(level: &FrameLevel) -> Vec<f64> {
    let len: Vec<f64> = level.intervals().iter().map(|(a, b)| b - a).collect();
    match level.dim() {
        1 => len,
        _ => len.iter().flat_map(|a| len.iter().map(move |b| a * b)).collect(),
    }
}

fn check_grid(grid: &GridSpec, frame: &NeedletFrame) -> Result<()> {
    grid.check_resolution(frame.j_max())?;
    let cube = frame
        .levels()
        .iter()
        .map(FrameLevel::cube_half_width)
        .fold(0.0, f64::max);
    if grid.radius < cube {
        return Err(NeedletError::InvalidParameter(format!(
            "grid radius {} does not cover the tiles (half width {cube})",
            grid.radius
        )));
    }
    Ok(())
}

/// `‖(Σ_j 2^{jαq} Σ_ξ [|s_ξ||R_ξ|^{−1/2} 1_{R_ξ}]^q)^{1/q}‖_p`.
///
/// For `p = q` the closed form `(Σ_j 2^{jαq} Σ_ξ |s_ξ|^q |R_ξ|^{1−q/2})^{1/q}`
/// is used; otherwise [`f_sequence_norm_on_grid`].
pub fn f_sequence_norm(
    s: &NeedletCoefficients,
    params: &SpaceParams,
    frame: &NeedletFrame,
    grid: &GridSpec,
) -> Result<f64> {
    check_frame(s, frame)?;
    check_grid(grid, frame)?;
    if params.p != params.q {
        return f_sequence_norm_on_grid(s, params, frame, grid);
    }
    let mut total = LqSum::new(params.q);
    let e = params.q.reciprocal() - 0.5;
    for (level, values) in frame.levels().iter().zip(s.levels()) {
        let w = 2f64.powf(level.level() as f64 * params.alpha);
        for (v, r) in values.iter().zip(tile_measures(level)) {
            if *v != 0.0 {
                total.add(w * v.abs() * r.powf(e));
            }
        }
    }
    Ok(total.total())
}

/// [`f_sequence_norm`] integrated cell by cell over the common refinement of
/// all tile boundaries and the grid lines; the integrand is constant on each
/// cell, so the result is exact up to rounding.
pub fn f_sequence_norm_on_grid(
    s: &NeedletCoefficients,
    params: &SpaceParams,
    frame: &NeedletFrame,
    grid: &GridSpec,
) -> Result<f64> {
    check_frame(s, frame)?;
    check_grid(grid, frame)?;
    let h = grid.step();
    let mids = grid.midpoints();
    let lo = mids[0] - h / 2.0;
    let mut edges: Vec<f64> = (0..=mids.len()).map(|i| lo + i as f64 * h).collect();
    for level in frame.levels() {
        for (a, b) in level.intervals() {
            edges.push(*a);
            edges.push(*b);
        }
    }
    edges.sort_by(f64::total_cmp);
    edges.dedup();
    let cells: Vec<(f64, f64)> = edges
        .windows(2)
        .map(|w| (0.5 * (w[0] + w[1]), w[1] - w[0]))
        .collect();

    // per level: scaled values 2^{jα}|s_ξ||R_ξ|^{−1/2} and the 1-d tile of each cell
    let levels: Vec<(Vec<f64>, Vec<Option<usize>>, usize)> = frame
        .levels()
        .iter()
        .zip(s.levels())
        .map(|(level, values)| {
            let w = 2f64.powf(level.level() as f64 * params.alpha);
            let scaled = values
                .iter()
                .zip(tile_measures(level))
                .map(|(v, r)| w * v.abs() / r.sqrt())
                .collect();
            let iv = level.intervals();
            let owner = cells
                .iter()
                .map(|(x, _)| {
                    let k = iv.partition_point(|(_, b)| *b <= *x);
                    (k < iv.len() && iv[k].0 <= *x).then_some(k)
                })
                .collect();
            (scaled, owner, level.zeros().len())
        })
        .collect();

    let integrand = |cell: &[usize]| -> f64 {
        let mut g = LqSum::new(params.q);
        for (scaled, owner, m) in &levels {
            let mut node = 0;
            let mut inside = true;
            for &c in cell {
                match owner[c] {
                    Some(k) => node = node * m + k,
                    None => inside = false,
                }
            }
            if inside {
                g.add(scaled[node]);
            }
        }
        g.total()
    };

    let dim = frame.dim();
    let n = cells.len();
    Ok(match params.p {
        Exponent::Infinity => par::max_chunked(n, par::CHUNK, |r| {
            r.map(|c1| {
                if dim == 1 {
                    integrand(&[c1])
                } else {
                    (0..n).map(|c2| integrand(&[c1, c2])).fold(0.0, f64::max)
                }
            })
            .fold(0.0, f64::max)
        }),
        Exponent::Finite(p) => {
            let total = par::sum_chunked(n, par::CHUNK, |r| {
                r.map(|c1| {
                    let w1 = cells[c1].1;
                    if dim == 1 {
                        w1 * integrand(&[c1]).powf(p)
                    } else {
                        (0..n)
                            .map(|c2| w1 * cells[c2].1 * integrand(&[c1, c2]).powf(p))
                            .sum()
                    }
                })
                .sum()
            });
            total.powf(1.0 / p)
        }
    })
}

/// `(Σ_j [2^{jα}(Σ_ξ |R_ξ|^{1−p/2}|s_ξ|^p)^{1/p}]^q)^{1/q}`.
pub fn b_sequence_norm(s: &NeedletCoefficients, params: &SpaceParams, frame: &NeedletFrame) -> Result<f64> {
    check_frame(s, frame)?;
    let mut total = LqSum::new(params.q);
    let e = params.p.reciprocal() - 0.5;
    for (level, values) in frame.levels().iter().zip(s.levels()) {
        let mut inner = LqSum::new(params.p);
        for (v, r) in values.iter().zip(tile_measures(level)) {
            if *v != 0.0 {
                inner.add(v.abs() * r.powf(e));
            }
        }
        total.add(2f64.powf(level.level() as f64 * params.alpha) * inner.total());
    }
    Ok(total.total())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cutoff::CutoffPair;
    use crate::frame::build_frame;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn frame(dim: usize, j_max: usize) -> NeedletFrame {
        build_frame(dim, 0.025, j_max, CutoffPair::tight()).unwrap()
    }

    fn random_coefficients(frame: &NeedletFrame, seed: u64) -> NeedletCoefficients {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut s = NeedletCoefficients::zeros(frame);
        for j in 0..=frame.j_max() {
            for i in 0..frame.level(j).unwrap().len() {
                s.set(j, i, rng.gen_range(-1.0..1.0)).unwrap();
            }
        }
        s
    }

    #[test]
    fn single_coefficient_examples() {
        let f = frame(1, 3);
        let grid = GridSpec::covering(&f, 32);
        let mut s = NeedletCoefficients::zeros(&f);
        s.set(2, 10, 1.0).unwrap();
        let p22 = SpaceParams::new(0.0, 2.0, 2.0).unwrap();
        assert!((f_sequence_norm(&s, &p22, &f, &grid).unwrap() - 1.0).abs() < 1e-14);
        let b = b_sequence_norm(&s, &SpaceParams::new(1.0, 2.0, 1.0).unwrap(), &f).unwrap();
        assert!((b - 4.0).abs() < 1e-14);
    }

    #[test]
    fn p_equals_q_two_is_l2_of_coefficients() {
        let f = frame(1, 3);
        let grid = GridSpec::covering(&f, 32);
        let s = random_coefficients(&f, 1);
        let p = SpaceParams::new(0.0, 2.0, 2.0).unwrap();
        let closed = f_sequence_norm(&s, &p, &f, &grid).unwrap();
        assert!((closed - s.sum_squares().sqrt()).abs() < 1e-12 * closed);
        let on_grid = f_sequence_norm_on_grid(&s, &p, &f, &grid).unwrap();
        assert!((closed - on_grid).abs() < 1e-3 * closed);
    }

    #[test]
    fn grid_matches_closed_form_for_p_equals_q() {
        for (dim, j_max) in [(1usize, 3usize), (2, 2)] {
            let f = frame(dim, j_max);
            let grid = GridSpec::covering(&f, GridSpec::required_resolution(j_max));
            let s = random_coefficients(&f, 7);
            for (alpha, pq) in [(0.0, 2.0), (1.0, 3.0), (0.5, 1.0)] {
                let p = SpaceParams::new(alpha, pq, pq).unwrap();
                let closed = f_sequence_norm(&s, &p, &f, &grid).unwrap();
                let on_grid = f_sequence_norm_on_grid(&s, &p, &f, &grid).unwrap();
                assert!((closed - on_grid).abs() < 1e-3 * closed, "d={dim} {closed} {on_grid}");
            }
        }
    }

    #[test]
    fn sup_branches() {
        let f = frame(1, 2);
        let grid = GridSpec::covering(&f, 16);
        let mut s = NeedletCoefficients::zeros(&f);
        s.set(1, 3, 2.0).unwrap();
        s.set(2, 5, -3.0).unwrap();
        let r1 = f.level(1).unwrap().tile_measure(3).unwrap();
        let r2 = f.level(2).unwrap().tile_measure(5).unwrap();
        let expected = (2.0 * 2.0 / r1.sqrt()).max(4.0 * 3.0 / r2.sqrt());
        let b = b_sequence_norm(&s, &SpaceParams::new(1.0, 2.0, f64::INFINITY).unwrap(), &f).unwrap();
        let l1: f64 = 2.0 * 2.0;
        let l2 = 4.0 * 3.0;
        assert!((b - l1.max(l2)).abs() < 1e-14);
        let finf = f_sequence_norm(&s, &SpaceParams::new(1.0, f64::INFINITY, f64::INFINITY).unwrap(), &f, &grid).unwrap();
        assert!((finf - expected).abs() < 1e-14);
        let grid_inf = f_sequence_norm_on_grid(&s, &SpaceParams::new(1.0, f64::INFINITY, f64::INFINITY).unwrap(), &f, &grid).unwrap();
        assert!((grid_inf - expected).abs() < 1e-14);
    }

    #[test]
    fn homogeneity_and_zero() {
        let f = frame(1, 2);
        let grid = GridSpec::covering(&f, 16);
        let s = random_coefficients(&f, 3);
        let p = SpaceParams::new(0.5, 3.0, 2.0).unwrap();
        let a = f_sequence_norm(&s, &p, &f, &grid).unwrap();
        let b = f_sequence_norm(&s.scaled(2.5), &p, &f, &grid).unwrap();
        assert!((b - 2.5 * a).abs() < 1e-12 * b);
        let zero = NeedletCoefficients::zeros(&f);
        assert_eq!(f_sequence_norm(&zero, &p, &f, &grid).unwrap(), 0.0);
        assert_eq!(b_sequence_norm(&zero, &p, &f).unwrap(), 0.0);
    }

    #[test]
    fn b_norm_permutation_invariance() {
        let f = frame(1, 2);
        let mut s = random_coefficients(&f, 5);
        let p = SpaceParams::new(0.7, 1.5, 2.0).unwrap();
        let before = b_sequence_norm(&s, &p, &f).unwrap();
        // mirror nodes have equal tiles
        let m = f.level(2).unwrap().len();
        let (a, b) = (s.get(2, 4).unwrap(), s.get(2, m - 5).unwrap());
        s.set(2, 4, b).unwrap();
        s.set(2, m - 5, a).unwrap();
        let after = b_sequence_norm(&s, &p, &f).unwrap();
        assert!((before - after).abs() < 1e-13 * before);
    }

    #[test]
    fn guards() {
        let f = frame(1, 3);
        let s = NeedletCoefficients::zeros(&f);
        let p = SpaceParams::new(0.0, 2.0, 1.0).unwrap();
        assert!(matches!(
            f_sequence_norm(&s, &p, &f, &GridSpec::covering(&f, 8)),
            Err(NeedletError::Resolution { .. })
        ));
        assert!(f_sequence_norm(&s, &p, &f, &GridSpec::new(3.0, 64).unwrap()).is_err());
        let other = frame(1, 2);
        assert!(matches!(
            b_sequence_norm(&NeedletCoefficients::zeros(&other), &p, &f),
            Err(NeedletError::FrameMismatch)
        ));
    }
}
