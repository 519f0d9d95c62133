mod common;

use proptest::prelude::*;
use zbsplinet::bspline::design_matrix;
use zbsplinet::inner::{l2_inner, Instrumentation};
use zbsplinet::zb::{eval_zbspline, zb_design_matrix, zb_dimension, ZbConversion};
use zbsplinet::{make_knots, spline_integral, Basis, KnotPlacement, KnotSequence, Spline};

#[test]
fn dimension_is_g_plus_k() {
    for (g, k) in [(7, 2), (19, 2), (29, 1), (0, 1), (3, 0)] {
        let knots = make_knots(0.0, 95.0, g, k, KnotPlacement::Equispaced).unwrap();
        assert_eq!(zb_dimension(&knots).unwrap(), g + k);
    }
}

#[test]
fn piecewise_constant_norm() {
    let knots = KnotSequence::new(0.0, 2.0, 0, vec![1.0]).unwrap();
    assert_eq!(eval_zbspline(&knots, 0, 0.5).unwrap(), 1.0);
    assert_eq!(eval_zbspline(&knots, 0, 1.5).unwrap(), -1.0);
    let z = Spline::zb_unit(&knots, 0).unwrap();
    let mut ctx = Instrumentation::new();
    assert!((l2_inner(&z, &z, 0, &mut ctx).unwrap() - 2.0).abs() < 1e-15);
}

#[test]
fn design_matrix_factorizes_through_bsplines() {
    let knots = KnotSequence::new(0.0, 1.0, 2, vec![0.1, 0.45, 0.5, 0.85]).unwrap();
    let xs: Vec<f64> = (0..=40).map(|i| i as f64 / 40.0).collect();
    let conv = ZbConversion::new(&knots).unwrap();
    for deriv in 0..=2 {
        let direct = zb_design_matrix(&knots, &xs, deriv).unwrap();
        let via_b = design_matrix(&knots, &xs, deriv).unwrap() * conv.matrix();
        assert!((&direct - &via_b).amax() < 1e-12);
    }
}

proptest! {
    #[test]
    fn zero_integral_on_random_knots(seed in any::<u64>(), g in 0usize..12, k in 0usize..4) {
        prop_assume!(g + k > 0);
        let mut rng = common::rng(seed);
        let knots = KnotSequence::new(0.0, 1.0, k, common::random_inner_knots(&mut rng, 0.0, 1.0, g)).unwrap();
        for s in 0..g + k {
            let z = Spline::zb_unit(&knots, s).unwrap();
            prop_assert!(spline_integral(&z).abs() < 1e-12);
        }
    }

    #[test]
    fn conversion_preserves_values(seed in any::<u64>(), g in 1usize..10, k in 1usize..4) {
        let mut rng = common::rng(seed);
        let knots = KnotSequence::new(0.0, 1.0, k, common::random_inner_knots(&mut rng, 0.0, 1.0, g)).unwrap();
        let z: Vec<f64> = (0..g + k).map(|i| ((i * 37 + 11) % 17) as f64 / 17.0 - 0.5).collect();
        let zs = Spline::new(knots.clone(), Basis::ZbSpline, z).unwrap();
        let bs = zs.to_bspline();
        for i in 0..=20 {
            let x = i as f64 / 20.0;
            prop_assert!((zs.eval(x).unwrap() - bs.eval(x).unwrap()).abs() < 1e-12);
        }
        prop_assert!(spline_integral(&bs).abs() < 1e-12);
    }
}
