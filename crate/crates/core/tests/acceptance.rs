//! Acceptance suite: one line per criterion, nonzero exit if any fails.

mod common;

use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use nalgebra::{DMatrix, DVector};
use rand::RngExt;
use zbsplinet::bayes::{bayes_inner, clr, clr_discrete, trapezoid};
use zbsplinet::ortho::{
    orthogonalize, predicted_ip_count, predicted_support, relative_total_support, OrthoBasis,
    Strategy,
};
use zbsplinet::sfpca::{fpca, sparse_fpca, CoefficientDataset};
use zbsplinet::smoothing::{fit, SmoothingProblem};
use zbsplinet::zb::zb_design_matrix;
use zbsplinet::{
    make_knots, nonzero_count, spline_integral, zb_gram, KnotPlacement, KnotSequence, Spline,
};

type Outcome = (bool, String);
type Criterion = (usize, fn() -> Outcome, u64);

fn dyadic_g(n: usize, k: usize) -> usize {
    ((1 << n) - 1) * (k + 1) - k
}

fn ages() -> Vec<f64> {
    common::age_midpoints()
}

fn knot_configs(k: usize) -> Vec<KnotSequence> {
    let mut rng = common::rng(100 + k as u64);
    let mut out = Vec::new();
    for g in [0usize, 1, 3, 7, 19] {
        out.push(make_knots(0.0, 95.0, g, k, KnotPlacement::Equispaced).unwrap());
    }
    for g in [2usize, 5, 9, 13, 24] {
        let inner = common::random_inner_knots(&mut rng, -1.5, 2.5, g);
        out.push(KnotSequence::new(-1.5, 2.5, k, inner).unwrap());
    }
    out
}

fn zero_integral() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for k in 0..=3 {
        for knots in knot_configs(k) {
            let g = knots.num_inner();
            for s in 0..g + k {
                let z = Spline::zb_unit(&knots, s).unwrap();
                worst = worst.max(spline_integral(&z).abs());
                count += 1;
            }
        }
    }
    (
        worst < 1e-12,
        format!("{count} functions, max |integral| = {worst:.2e}"),
    )
}

fn orthonormality() -> Outcome {
    let mut worst: f64 = 0.0;
    for k in 1..=3 {
        for n in 1..=3 {
            let knots = make_knots(0.0, 1.0, dyadic_g(n, k), k, KnotPlacement::Equispaced).unwrap();
            for st in Strategy::ALL {
                let g = orthogonalize(&knots, st).unwrap().penalty(0).unwrap();
                worst = worst.max((&g - DMatrix::identity(g.nrows(), g.ncols())).amax());
            }
        }
    }
    (worst < 1e-10, format!("max |Gram - I| = {worst:.2e}"))
}

fn support_cases() -> Vec<(usize, usize)> {
    vec![
        (1, 1),
        (1, 5),
        (1, 13),
        (1, 29),
        (2, 7),
        (2, 19),
        (3, 9),
        (3, 25),
    ]
}

fn support_oracle() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut example = Vec::new();
    for (k, g) in support_cases() {
        let knots = make_knots(0.0, 95.0, g, k, KnotPlacement::Equispaced).unwrap();
        for st in Strategy::ALL {
            let measured = relative_total_support(&orthogonalize(&knots, st).unwrap());
            let predicted = predicted_support(st, g, k).unwrap();
            worst = worst.max((measured - predicted).abs());
            if (k, g) == (2, 19) && st != Strategy::GsRightLeft {
                example.push(format!("{measured}"));
            }
        }
    }
    (
        worst < 1e-12,
        format!(
            "max |diff| = {worst:.2e}; k=2 g=19: {}",
            example.join(" / ")
        ),
    )
}

fn count_oracle() -> Outcome {
    let mut mismatches = Vec::new();
    let mut example = Vec::new();
    for (k, g) in support_cases() {
        let knots = make_knots(0.0, 95.0, g, k, KnotPlacement::Equispaced).unwrap();
        let n = (g + k + 1) / (k + 1);
        for st in Strategy::ALL {
            if st == Strategy::GsTwoSided && n < 2 {
                continue;
            }
            let measured = orthogonalize(&knots, st).unwrap().ip_count() as i64;
            let predicted = predicted_ip_count(st, g, k).unwrap();
            if ((k, g) == (2, 19) || (k, g) == (1, 29)) && st != Strategy::GsRightLeft {
                example.push(format!("k={k} g={g} {st}: {measured} vs {predicted}"));
            }
            if measured != predicted {
                mismatches.push(format!("{st} k={k} g={g}"));
            }
        }
    }
    let detail = if mismatches.is_empty() {
        example.join("; ")
    } else {
        format!(
            "{}; mismatched: {}",
            example.join("; "),
            mismatches.join(", ")
        )
    };
    (mismatches.is_empty(), detail)
}

/// Non-zero counts of the penalty and collocation matrices for one basis.
fn table_counts(basis: &OrthoBasis) -> (usize, usize) {
    let pen = basis.penalty(1).unwrap();
    let col = basis.collocation(&ages()).unwrap();
    (nonzero_count(&pen, 1e-10), nonzero_count(&col, 1e-10))
}

fn table_reproduction() -> Outcome {
    let expected: [(Strategy, [usize; 4], usize); 4] = [
        (Strategy::GsLeftRight, [81, 441, 122, 238], 2),
        (Strategy::GsRightLeft, [81, 441, 121, 234], 2),
        (Strategy::GsTwoSided, [63, 297, 100, 174], 2),
        (Strategy::Splinet, [63, 243, 114, 170], 0),
    ];
    let coarse = make_knots(0.0, 95.0, 7, 2, KnotPlacement::Equispaced).unwrap();
    let fine = make_knots(0.0, 95.0, 19, 2, KnotPlacement::Equispaced).unwrap();
    let mut ok = true;
    let mut rows = Vec::new();
    for (st, want, tol) in expected {
        let (n1, c1) = table_counts(&orthogonalize(&coarse, st).unwrap());
        let (n2, c2) = table_counts(&orthogonalize(&fine, st).unwrap());
        let got = [n1, n2, c1, c2];
        let row_ok = got.iter().zip(&want).all(|(g, w)| g.abs_diff(*w) <= tol);
        ok &= row_ok;
        rows.push(format!(
            "{st} {:?}{}",
            got,
            if row_ok {
                String::new()
            } else {
                format!(" expected {want:?}")
            }
        ));
    }
    (ok, rows.join("; "))
}

fn grid500() -> Vec<f64> {
    (0..500).map(|i| 95.0 * i as f64 / 499.0).collect()
}

fn basis_invariance() -> Outcome {
    let mut rng = common::rng(200);
    let hists: Vec<_> = (0..50)
        .map(|_| common::random_histogram(&mut rng))
        .collect();
    let grid = grid500();
    let mut fit_diff: f64 = 0.0;
    let mut eig_diff: f64 = 0.0;
    for g in [7usize, 19] {
        let knots = make_knots(0.0, 95.0, g, 2, KnotPlacement::Equispaced).unwrap();
        let mut curves: Vec<Vec<Vec<f64>>> = Vec::new();
        let mut eigs: Vec<Vec<f64>> = Vec::new();
        for st in Strategy::ALL {
            let basis = Arc::new(orthogonalize(&knots, st).unwrap());
            let mut splines = Vec::new();
            let mut values = Vec::new();
            for d in &hists {
                let p = SmoothingProblem::new(
                    basis.clone(),
                    d.midpoints().to_vec(),
                    clr_discrete(d),
                    0.5,
                    1,
                )
                .unwrap();
                let s = fit(&p).unwrap().spline;
                values.push(s.eval_many(&grid).unwrap());
                splines.push(s);
            }
            let ids = (0..splines.len()).map(|i| i.to_string()).collect();
            let data = CoefficientDataset::from_splines(basis, &splines, ids).unwrap();
            eigs.push(fpca(&data).unwrap().eigenvalues);
            curves.push(values);
        }
        for s in 1..curves.len() {
            for (a, b) in curves[s].iter().zip(&curves[0]) {
                for (x, y) in a.iter().zip(b) {
                    fit_diff = fit_diff.max((x - y).abs());
                }
            }
            let top = eigs[0][0];
            for (x, y) in eigs[s].iter().zip(&eigs[0]) {
                eig_diff = eig_diff.max((x - y).abs() / top);
            }
        }
    }
    (
        fit_diff < 1e-8 && eig_diff < 1e-8,
        format!("max fit diff = {fit_diff:.2e}, max relative eigenvalue diff = {eig_diff:.2e}"),
    )
}

fn smoothing_optimality() -> Outcome {
    let mut rng = common::rng(300);
    let mut worst: f64 = 0.0;
    for trial in 0..20 {
        let k = 2 + trial % 2;
        let st = Strategy::ALL[trial % 4];
        let g = if st == Strategy::Splinet {
            dyadic_g(2, k)
        } else {
            rng.random_range(2..9usize)
        };
        let inner = common::random_inner_knots(&mut rng, 0.0, 1.0, g);
        let knots = KnotSequence::new(0.0, 1.0, k, inner).unwrap();
        let n = rng.random_range(12..30usize);
        let mut xs: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..1.0)).collect();
        xs.sort_by(f64::total_cmp);
        let ys: Vec<f64> = xs
            .iter()
            .map(|x| (6.0 * x).sin() + rng.random_range(-0.1..0.1))
            .collect();
        let alpha = rng.random_range(0.05..0.95);
        let l = 1 + trial % (k - 1);
        let basis = Arc::new(orthogonalize(&knots, st).unwrap());
        let res =
            fit(&SmoothingProblem::new(basis.clone(), xs.clone(), ys.clone(), alpha, l).unwrap())
                .unwrap();
        let via_ortho = DVector::from_vec(basis.to_zb_coeffs(&res.coeffs));
        let z = zb_design_matrix(&knots, &xs, 0).unwrap();
        let h = zb_gram(&knots, l).unwrap() * (1.0 - alpha) + z.transpose() * &z * alpha;
        let rhs = z.transpose() * DVector::from_column_slice(&ys) * alpha;
        let direct = h.lu().solve(&rhs).unwrap();
        worst = worst.max((via_ortho - &direct).amax() / direct.amax().max(1.0));
    }

    let knots = make_knots(0.0, 95.0, 7, 2, KnotPlacement::Equispaced).unwrap();
    let basis = Arc::new(orthogonalize(&knots, Strategy::Splinet).unwrap());
    let d = common::random_histogram(&mut rng);
    let problem = SmoothingProblem::new(basis, ages(), clr_discrete(&d), 0.5, 1).unwrap();
    let res = fit(&problem).unwrap();
    let best = problem.objective(&res.coeffs).unwrap();
    let mut decreased = 0;
    for _ in 0..100 {
        let scale = 10f64.powi(rng.random_range(-6..0));
        let moved: Vec<f64> = res
            .coeffs
            .iter()
            .map(|o| o + scale * rng.random_range(-1.0..1.0))
            .collect();
        if problem.objective(&moved).unwrap() < best {
            decreased += 1;
        }
    }
    (
        worst < 1e-8 && decreased == 0,
        format!("max coefficient diff = {worst:.2e}, perturbations lowering J: {decreased}/100"),
    )
}

fn clr_isometry() -> Outcome {
    let mut rng = common::rng(400);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let f = common::random_grid_density(&mut rng, 0.0, 1.0, 801);
        let g = common::random_grid_density(&mut rng, 0.0, 1.0, 801);
        let (cf, cg) = (clr(&f).unwrap(), clr(&g).unwrap());
        let prod: Vec<f64> = cf
            .values()
            .iter()
            .zip(cg.values())
            .map(|(a, b)| a * b)
            .collect();
        let l2 = trapezoid(cf.xs(), &prod);
        worst = worst.max((bayes_inner(&f, &g).unwrap() - l2).abs());
    }
    (
        worst < 1e-6,
        format!("max |<f,g>_B - <clr f, clr g>| = {worst:.2e}"),
    )
}

fn sparse_monotonicity() -> Outcome {
    let mut rng = common::rng(500);
    let hists: Vec<_> = (0..50)
        .map(|_| common::random_histogram(&mut rng))
        .collect();
    let mut violations = Vec::new();
    let mut shown = String::new();
    for g in [7usize, 19] {
        let knots = make_knots(0.0, 95.0, g, 2, KnotPlacement::Equispaced).unwrap();
        for st in Strategy::ALL {
            let basis = Arc::new(orthogonalize(&knots, st).unwrap());
            let splines: Vec<Spline> = hists
                .iter()
                .map(|d| {
                    let p = SmoothingProblem::new(basis.clone(), ages(), clr_discrete(d), 0.5, 1)
                        .unwrap();
                    fit(&p).unwrap().spline
                })
                .collect();
            let ids = (0..splines.len()).map(|i| i.to_string()).collect();
            let data = CoefficientDataset::from_splines(basis, &splines, ids).unwrap();
            let mut prev = (f64::INFINITY, usize::MAX);
            let mut actives = Vec::new();
            for step in 0..=10 {
                let res = sparse_fpca(&data, step as f64 / 10.0, 1).unwrap();
                let active = res
                    .active_basis(0, 0.1)
                    .unwrap()
                    .iter()
                    .filter(|&&a| a)
                    .count();
                let explained = res.explained[0];
                if explained > prev.0 + 1e-12 || active > prev.1 {
                    violations.push(format!("{st} g={g} s={:.1}", step as f64 / 10.0));
                }
                prev = (explained, active);
                actives.push(active.to_string());
            }
            if g == 19 && st == Strategy::Splinet {
                shown = format!("g=19 splinet active counts {}", actives.join(","));
            }
        }
    }
    let detail = if violations.is_empty() {
        shown
    } else {
        format!("{shown}; increases at {}", violations.join(", "))
    };
    (violations.is_empty(), detail)
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        (1, zero_integral, 1),
        (2, orthonormality, 10),
        (3, support_oracle, 5),
        (4, count_oracle, 5),
        (5, table_reproduction, 10),
        (6, basis_invariance, 30),
        (7, smoothing_optimality, 10),
        (8, clr_isometry, 20),
        (9, sparse_monotonicity, 30),
    ];
    let mut failed = 0;
    for (id, check, limit) in criteria {
        let start = Instant::now();
        let (ok, detail) = check();
        let elapsed = start.elapsed();
        let in_time = elapsed <= Duration::from_secs(limit);
        let pass = ok && in_time;
        if !pass {
            failed += 1;
        }
        println!(
            "criterion {id}: {} [{:.2} s, limit {limit} s] {detail}",
            if pass { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64()
        );
    }
    println!("{} of 9 criteria passed", 9 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
