use hermite_needlets::cutoff::{make_dual_pair, make_type_b, CutoffPair};
use hermite_needlets::export::{read_coefficients_csv, write_coefficients_csv};
use hermite_needlets::frame::{analyze, build_frame, synthesize, NeedletFrame};
use hermite_needlets::hermite::HermiteExpansion;
use hermite_needlets::spaces::{b_sequence_norm, f_sequence_norm, GridSpec, SpaceParams};
use hermite_needlets::NeedletError;
use proptest::prelude::*;

fn expansion(dim: usize, degree: usize, coeffs: &[f64]) -> HermiteExpansion {
    let n = HermiteExpansion::zeros(dim, degree).unwrap().coeffs().len();
    let graded: Vec<f64> = coeffs.iter().copied().cycle().take(n).collect();
    HermiteExpansion::from_graded(dim, degree, graded).unwrap()
}

fn dual_frame(dim: usize, j_max: usize) -> NeedletFrame {
    let pair = make_dual_pair(&make_type_b(0.25, 3.0).unwrap()).unwrap();
    build_frame(dim, 0.025, j_max, pair).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn tight_frame_reconstructs_and_preserves_energy(
        coeffs in prop::collection::vec(-1.0f64..1.0, 1..40),
        degree in 0usize..=16,
    ) {
        let frame = build_frame(1, 0.025, 3, CutoffPair::tight()).unwrap();
        let f = expansion(1, degree, &coeffs);
        let s = analyze(&f, &frame).unwrap();
        let back = synthesize(&s, &frame).unwrap();
        prop_assert!(back.max_abs_diff(&f).unwrap() < 1e-12);
        let energy = f.l2_norm().powi(2);
        prop_assert!((s.sum_squares() - energy).abs() <= 1e-12 * (1.0 + energy));
    }

    #[test]
    fn dual_frame_reconstructs_in_two_dimensions(
        coeffs in prop::collection::vec(-1.0f64..1.0, 1..20),
        degree in 0usize..=4,
    ) {
        let frame = dual_frame(2, 2);
        let f = expansion(2, degree, &coeffs);
        let back = synthesize(&analyze(&f, &frame).unwrap(), &frame).unwrap();
        prop_assert!(back.max_abs_diff(&f).unwrap() < 1e-12);
    }

    #[test]
    fn analysis_is_linear(
        a in prop::collection::vec(-1.0f64..1.0, 17),
        b in prop::collection::vec(-1.0f64..1.0, 17),
        c in -3.0f64..3.0,
    ) {
        let frame = dual_frame(1, 3);
        let fa = expansion(1, 16, &a);
        let fb = expansion(1, 16, &b);
        let sum: Vec<f64> = a.iter().zip(&b).map(|(x, y)| c * x + y).collect();
        let s_sum = analyze(&expansion(1, 16, &sum), &frame).unwrap();
        let sa = analyze(&fa, &frame).unwrap();
        let sb = analyze(&fb, &frame).unwrap();
        for ((x, y), z) in sa.entries().zip(sb.entries()).zip(s_sum.entries()) {
            prop_assert!((c * x.2 + y.2 - z.2).abs() < 1e-12);
        }
    }

    #[test]
    fn sequence_norms_are_homogeneous(
        coeffs in prop::collection::vec(-1.0f64..1.0, 1..17),
        c in 0.1f64..10.0,
        alpha in -1.0f64..2.0,
    ) {
        let frame = build_frame(1, 0.025, 2, CutoffPair::tight()).unwrap();
        let f = expansion(1, 4, &coeffs);
        prop_assume!(f.l2_norm() > 1e-6);
        let s = analyze(&f, &frame).unwrap();
        let grid = GridSpec::covering(&frame, GridSpec::required_resolution(2));
        for (p, q) in [(2.0, 2.0), (1.0, 3.0), (4.0, 1.0)] {
            let params = SpaceParams::new(alpha, p, q).unwrap();
            let b = b_sequence_norm(&s, &params, &frame).unwrap();
            let bc = b_sequence_norm(&s.scaled(c), &params, &frame).unwrap();
            prop_assert!((bc - c * b).abs() <= 1e-12 * c * b);
            let fs = f_sequence_norm(&s, &params, &frame, &grid).unwrap();
            let fc = f_sequence_norm(&s.scaled(c), &params, &frame, &grid).unwrap();
            prop_assert!((fc - c * fs).abs() <= 1e-12 * c * fs);
        }
    }
}

#[test]
fn coefficient_table_round_trip() {
    let frame = dual_frame(2, 2);
    let f = HermiteExpansion::from_terms(2, [(vec![0, 1], 1.0), (vec![2, 2], -0.25), (vec![3, 0], 0.5)]).unwrap();
    let s = analyze(&f, &frame).unwrap();
    let mut buf = Vec::new();
    write_coefficients_csv(&s, &frame, &mut buf).unwrap();
    let back = read_coefficients_csv(buf.as_slice(), &frame).unwrap();
    for (x, y) in s.entries().zip(back.entries()) {
        assert_eq!(x, y);
    }
    let other = dual_frame(2, 1);
    assert!(read_coefficients_csv(buf.as_slice(), &other).is_err());
}

#[test]
fn coefficients_from_another_frame_are_refused() {
    let f = HermiteExpansion::basis(&[1]).unwrap();
    let s = analyze(&f, &dual_frame(1, 2)).unwrap();
    let tight = build_frame(1, 0.025, 2, CutoffPair::tight()).unwrap();
    assert!(matches!(synthesize(&s, &tight), Err(NeedletError::FrameMismatch)));
}
