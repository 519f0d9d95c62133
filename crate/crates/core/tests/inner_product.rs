mod common;

use nalgebra::SymmetricEigen;
use zbsplinet::inner::{bspline_gram, gram, l2_inner, nonzero_count, zb_gram, Instrumentation};
use zbsplinet::{make_knots, Basis, Error, KnotPlacement, KnotSequence, Spline};

#[test]
fn gram_is_symmetric_positive_definite() {
    let knots = make_knots(0.0, 95.0, 7, 2, KnotPlacement::Equispaced).unwrap();
    let g = zb_gram(&knots, 0).unwrap();
    assert!((&g - g.transpose()).amax() < 1e-15);
    let eig = SymmetricEigen::new(g);
    assert!(eig.eigenvalues.iter().all(|&v| v > 0.0));
}

#[test]
fn zb_gram_is_banded() {
    let knots = make_knots(0.0, 95.0, 19, 2, KnotPlacement::Equispaced).unwrap();
    let g = zb_gram(&knots, 0).unwrap();
    for i in 0..21usize {
        for j in 0..21usize {
            if i.abs_diff(j) > 3 {
                assert_eq!(g[(i, j)], 0.0);
            } else {
                assert!(g[(i, j)] != 0.0);
            }
        }
    }
    assert_eq!(nonzero_count(&g, 1e-10), 21 + 2 * (20 + 19 + 18));
}

#[test]
fn counting_skips_disjoint_pairs() {
    let knots = make_knots(0.0, 95.0, 19, 2, KnotPlacement::Equispaced).unwrap();
    let fns: Vec<Spline> = (0..21)
        .map(|s| Spline::zb_unit(&knots, s).unwrap())
        .collect();
    let mut ctx = Instrumentation::new();
    gram(&fns, 0, &mut ctx).unwrap();
    // Overlapping unordered pairs: |i - j| <= 3.
    assert_eq!(ctx.inner_products(), 21 + 20 + 19 + 18);
    ctx.reset();
    assert_eq!(ctx.inner_products(), 0);
}

#[test]
fn derivative_gram_matches_bspline_assembly() {
    let knots = KnotSequence::new(0.0, 1.0, 3, vec![0.3, 0.4, 0.9]).unwrap();
    let conv = zbsplinet::zb::ZbConversion::new(&knots).unwrap().matrix();
    for l in 0..=3 {
        let via_b = conv.transpose() * bspline_gram(&knots, l).unwrap() * &conv;
        let direct = zb_gram(&knots, l).unwrap();
        assert!((&via_b - &direct).amax() < 1e-9 * direct.amax().max(1.0));
    }
}

#[test]
fn knot_mismatch() {
    let a = make_knots(0.0, 1.0, 3, 1, KnotPlacement::Equispaced).unwrap();
    let b = make_knots(0.0, 1.0, 4, 1, KnotPlacement::Equispaced).unwrap();
    let s1 = Spline::zb_unit(&a, 0).unwrap();
    let s2 = Spline::zb_unit(&b, 0).unwrap();
    let mut ctx = Instrumentation::new();
    assert_eq!(l2_inner(&s1, &s2, 0, &mut ctx), Err(Error::KnotMismatch));
    assert!(matches!(
        l2_inner(&s1, &s1, 2, &mut ctx),
        Err(Error::DerivOrderTooHigh { .. })
    ));
}

#[test]
fn mixed_representations() {
    let knots = KnotSequence::new(0.0, 1.0, 2, vec![0.25, 0.6]).unwrap();
    let z = Spline::new(knots.clone(), Basis::ZbSpline, vec![0.3, -0.1, 0.7, 0.2]).unwrap();
    let b = z.to_bspline();
    let mut ctx = Instrumentation::new();
    let zz = l2_inner(&z, &z, 1, &mut ctx).unwrap();
    let zb = l2_inner(&z, &b, 1, &mut ctx).unwrap();
    assert!((zz - zb).abs() < 1e-12 * zz.abs().max(1.0));
}
