use std::path::Path;
use std::sync::Arc;

use nalgebra::DMatrix;
use serde_json::json;
use zbsplinet::bayes::{
    clr_discrete, inv_clr, uniform_grid, DiscreteDensity, GridFunction, ZeroPolicy,
};
use zbsplinet::ortho::{
    dyadic_levels, orthogonalize, predicted_ip_count, predicted_support, relative_total_support,
    zb_basis, OrthoBasis,
};
use zbsplinet::sfpca::{active_basis, fpca, sparse_fpca, CoefficientDataset};
use zbsplinet::smoothing::{fit, interlacing_violation, SmoothingProblem};
use zbsplinet::{
    make_knots, nonzero_count, Basis, Error, KnotPlacement, KnotSequence, Spline, Strategy,
};

use crate::args::{BasisArgs, BenchArgs, FpcaArgs, KnotArgs, OrthoArgs, PlotArgs, SmoothArgs};
use crate::error::{CliError, CliResult};
use crate::input::{read_curves, read_histograms, read_knots};
use crate::output::{curve_columns, curve_rows, ensure_dir, num, write_csv, write_text, Manifest};
use crate::svg::line_plot;

const DEFAULT_DEGREE: usize = 2;
const DEFAULT_INNER_KNOTS: usize = 7;
const DEFAULT_DOMAIN: (f64, f64) = (0.0, 95.0);
const DEFAULT_ALPHA: f64 = 0.5;
const DEFAULT_PENALTY_ORDER: usize = 1;
const DEFAULT_STRATEGY: Strategy = Strategy::Splinet;
const DEFAULT_THRESHOLD: f64 = 0.1;
const DEFAULT_GRID: usize = 501;
const DEFAULT_COMPONENTS: usize = 3;
const NONZERO_TOL: f64 = 1e-10;

fn knots_from_args(m: &mut Manifest, a: &KnotArgs) -> CliResult<KnotSequence> {
    let k = m.setting("degree", a.degree, DEFAULT_DEGREE);
    let (lo, hi) = m.setting("domain", a.domain, DEFAULT_DOMAIN);
    match &a.knots_file {
        Some(path) => {
            let inner = read_knots(path)?;
            m.set("knots_file", path);
            m.set("inner_knots", &inner);
            Ok(KnotSequence::new(lo, hi, k, inner)?)
        }
        None => {
            let g = m.setting("inner_knots", a.inner_knots, DEFAULT_INNER_KNOTS);
            Ok(make_knots(lo, hi, g, k, KnotPlacement::Equispaced)?)
        }
    }
}

fn strategy_setting(m: &mut Manifest, given: Option<Strategy>) -> Strategy {
    let name = m.setting(
        "strategy",
        given.map(|s| s.name().to_string()),
        DEFAULT_STRATEGY.name().to_string(),
    );
    name.parse().expect("strategy names round-trip")
}

fn basis_names(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("{prefix}_{i}")).collect()
}

fn zb_names(knots: &KnotSequence, n: usize) -> Vec<String> {
    let k = knots.degree() as isize;
    (0..n).map(|s| format!("Z_{}", s as isize - k)).collect()
}

fn eval_all(fns: &[Spline], xs: &[f64]) -> CliResult<Vec<Vec<f64>>> {
    Ok(fns
        .iter()
        .map(|f| f.eval_many(xs))
        .collect::<Result<Vec<_>, _>>()?)
}

fn svg_file(
    m: &mut Manifest,
    dir: &Path,
    name: &str,
    title: &str,
    xs: &[f64],
    names: &[String],
    ys: &[Vec<f64>],
) -> CliResult<()> {
    let series: Vec<(String, Vec<f64>)> = names.iter().cloned().zip(ys.iter().cloned()).collect();
    let path = dir.join(name);
    write_text(&path, &line_plot(title, xs, &series))?;
    m.file(&path);
    Ok(())
}

fn csv_file(
    m: &mut Manifest,
    dir: &Path,
    name: &str,
    table: (Vec<String>, Vec<Vec<String>>),
) -> CliResult<()> {
    let path = dir.join(name);
    write_csv(&path, &table.0, &table.1)?;
    m.file(&path);
    Ok(())
}

pub fn basis(a: BasisArgs) -> CliResult<()> {
    let mut m = Manifest::new("basis");
    let knots = knots_from_args(&mut m, &a.knots)?;
    let n = m.setting("grid", a.grid, DEFAULT_GRID);
    let xs = uniform_grid(knots.a(), knots.b(), n)?;
    let (names, fns) = match a.ortho {
        None => {
            let zb = zb_basis(&knots)?;
            (zb_names(&knots, zb.len()), zb)
        }
        Some(st) => {
            m.set("ortho", st.name());
            let b = orthogonalize(&knots, st)?;
            (basis_names("O", b.dim()), b.functions())
        }
    };
    let curves = eval_all(&fns, &xs)?;
    ensure_dir(&a.out.out_dir)?;
    csv_file(
        &mut m,
        &a.out.out_dir,
        "basis.csv",
        curve_columns(&xs, &names, &curves),
    )?;
    if a.out.svg {
        let title = match a.ortho {
            Some(st) => format!("{st} basis"),
            None => "ZB-spline basis".to_string(),
        };
        svg_file(
            &mut m,
            &a.out.out_dir,
            "basis.svg",
            &title,
            &xs,
            &names,
            &curves,
        )?;
    }
    m.result("dimension", &fns.len());
    m.write(&a.out.out_dir)?;
    println!("{} basis functions on {} grid points", fns.len(), xs.len());
    Ok(())
}

fn dyadic_formulas(knots: &KnotSequence, st: Strategy) -> Option<(f64, i64)> {
    let (g, k) = (knots.num_inner(), knots.degree());
    let equispaced = make_knots(knots.a(), knots.b(), g, k, KnotPlacement::Equispaced).ok()?;
    if &equispaced != knots {
        return None;
    }
    Some((
        predicted_support(st, g, k).ok()?,
        predicted_ip_count(st, g, k).ok()?,
    ))
}

pub fn ortho(a: OrthoArgs) -> CliResult<()> {
    let mut m = Manifest::new("ortho");
    let knots = knots_from_args(&mut m, &a.knots)?;
    let st = strategy_setting(&mut m, a.strategy);
    let b = orthogonalize(&knots, st)?;
    let breaks = knots.breakpoints();
    let mut header: Vec<String> = ["function", "level", "support_start", "support_end"]
        .map(String::from)
        .into();
    header.extend(zb_names(&knots, b.dim()));
    let rows: Vec<Vec<String>> = (0..b.dim())
        .map(|i| {
            let (lo, hi) = b.supports()[i];
            let mut r = vec![
                format!("O_{}", i + 1),
                b.levels()[i].to_string(),
                num(breaks[lo]),
                num(breaks[hi]),
            ];
            r.extend(b.phi().row(i).iter().map(|&v| num(v)));
            r
        })
        .collect();
    ensure_dir(&a.out.out_dir)?;
    csv_file(&mut m, &a.out.out_dir, "ortho.csv", (header, rows))?;
    let gram = b.penalty(0)?;
    let orth_err = (&gram - DMatrix::identity(b.dim(), b.dim())).amax();
    let support = relative_total_support(&b);
    m.result("dimension", &b.dim());
    m.result("inner_products", &b.ip_count());
    m.result("relative_total_support", &support);
    m.result("orthonormality_error", &orth_err);
    if let Some((ps, pc)) = dyadic_formulas(&knots, st) {
        m.result("predicted_relative_total_support", &ps);
        m.result("predicted_inner_products", &pc);
    }
    if a.out.svg {
        let xs = uniform_grid(knots.a(), knots.b(), DEFAULT_GRID)?;
        let curves = eval_all(&b.functions(), &xs)?;
        svg_file(
            &mut m,
            &a.out.out_dir,
            "ortho.svg",
            &format!("{st} basis"),
            &xs,
            &basis_names("O", b.dim()),
            &curves,
        )?;
    }
    m.write(&a.out.out_dir)?;
    println!(
        "{st}: {} functions, {} inner products, relative total support {support:.6}",
        b.dim(),
        b.ip_count()
    );
    Ok(())
}

struct Smoothed {
    basis: Arc<OrthoBasis>,
    ids: Vec<String>,
    coeffs: Vec<Vec<f64>>,
    grid: Vec<f64>,
    clr: Vec<Vec<f64>>,
    density: Vec<Vec<f64>>,
}

fn smooth_all(a: &SmoothArgs, m: &mut Manifest) -> CliResult<Smoothed> {
    m.set("input", &a.input);
    let hist = read_histograms(&a.input)?;
    let knots = knots_from_args(m, &a.knots)?;
    let alpha = m.setting("alpha", a.alpha, DEFAULT_ALPHA);
    let l = m.setting("penalty_order", a.penalty_order, DEFAULT_PENALTY_ORDER);
    let st = strategy_setting(m, a.strategy);
    let n = m.setting("grid", a.grid, DEFAULT_GRID);
    let policy = match m.setting("zero_epsilon", a.zero_epsilon.map(Some), None) {
        Some(epsilon) => ZeroPolicy::Replace { epsilon },
        None => ZeroPolicy::Reject,
    };
    let basis = Arc::new(orthogonalize(&knots, st)?);

    let mut sorted = hist.midpoints.clone();
    sorted.sort_by(f64::total_cmp);
    let violation = interlacing_violation(&knots, &sorted);
    m.result(
        "rank_check",
        &json!({ "full_rank": violation.is_none(), "violated_index": violation }),
    );
    if let Some(index) = violation {
        if alpha == 1.0 {
            return Err(Error::InfeasibleDesign { index }.into());
        }
        eprintln!(
            "warning: RankDeficientDesign: no bin centre for interlacing index {index}; the roughness penalty keeps the fit unique"
        );
    }

    let grid = uniform_grid(knots.a(), knots.b(), n)?;
    let mut out = Smoothed {
        basis: basis.clone(),
        ids: hist.ids.clone(),
        coeffs: Vec::new(),
        grid,
        clr: Vec::new(),
        density: Vec::new(),
    };
    for freqs in &hist.freqs {
        let d = DiscreteDensity::new(hist.midpoints.clone(), freqs.clone(), policy)?;
        let problem = SmoothingProblem::new(
            basis.clone(),
            d.midpoints().to_vec(),
            clr_discrete(&d),
            alpha,
            l,
        )?;
        let res = fit(&problem)?;
        let clr = res.spline.eval_many(&out.grid)?;
        let density = inv_clr(&GridFunction::new(out.grid.clone(), clr.clone())?)?;
        out.coeffs.push(res.coeffs);
        out.clr.push(clr);
        out.density.push(density.values().to_vec());
    }
    m.result("observations", &out.ids.len());
    m.result("dimension", &basis.dim());
    Ok(out)
}

fn coefficient_table(
    ids: &[String],
    coeffs: &[Vec<f64>],
    dim: usize,
) -> (Vec<String>, Vec<Vec<String>>) {
    let mut header = vec!["id".to_string()];
    header.extend(basis_names("O", dim));
    let rows = ids
        .iter()
        .zip(coeffs)
        .map(|(id, c)| {
            let mut r = vec![id.clone()];
            r.extend(c.iter().map(|&v| num(v)));
            r
        })
        .collect();
    (header, rows)
}

fn write_smoothed(s: &Smoothed, m: &mut Manifest, dir: &Path, svg: bool) -> CliResult<()> {
    csv_file(
        m,
        dir,
        "coefficients.csv",
        coefficient_table(&s.ids, &s.coeffs, s.basis.dim()),
    )?;
    csv_file(m, dir, "clr.csv", curve_rows(&s.grid, &s.ids, &s.clr))?;
    csv_file(
        m,
        dir,
        "density.csv",
        curve_rows(&s.grid, &s.ids, &s.density),
    )?;
    if svg {
        svg_file(m, dir, "clr.svg", "clr curves", &s.grid, &s.ids, &s.clr)?;
        svg_file(
            m,
            dir,
            "density.svg",
            "densities",
            &s.grid,
            &s.ids,
            &s.density,
        )?;
    }
    Ok(())
}

pub fn smooth(a: SmoothArgs) -> CliResult<()> {
    let mut m = Manifest::new("smooth");
    let s = smooth_all(&a, &mut m)?;
    ensure_dir(&a.out.out_dir)?;
    write_smoothed(&s, &mut m, &a.out.out_dir, a.out.svg)?;
    m.write(&a.out.out_dir)?;
    println!(
        "smoothed {} observations in a {}-dimensional basis",
        s.ids.len(),
        s.basis.dim()
    );
    Ok(())
}

pub fn fpca_cmd(a: FpcaArgs) -> CliResult<()> {
    let mut m = Manifest::new("fpca");
    let s = smooth_all(&a.smooth, &mut m)?;
    let threshold = m.setting("threshold", a.threshold, DEFAULT_THRESHOLD);
    if !(threshold >= 0.0) {
        return Err(CliError::Config(format!(
            "threshold {threshold} must be non-negative"
        )));
    }
    let p = s.basis.dim();
    let count = m.setting("components", a.components, DEFAULT_COMPONENTS.min(p));
    if count == 0 || count > p {
        return Err(Error::ComponentOutOfRange {
            component: count,
            count: p,
        }
        .into());
    }
    let n = s.ids.len();
    let matrix = DMatrix::from_fn(n, p, |r, c| s.coeffs[r][c]);
    let data = CoefficientDataset::new(s.basis.clone(), matrix, s.ids.clone())?;
    let res = fpca(&data)?;
    let dir = &a.smooth.out.out_dir;
    ensure_dir(dir)?;
    write_smoothed(&s, &mut m, dir, a.smooth.out.svg)?;

    let mut cumulative = 0.0;
    let eig_rows: Vec<Vec<String>> = res
        .eigenvalues
        .iter()
        .zip(&res.explained)
        .enumerate()
        .map(|(i, (&e, &x))| {
            cumulative += x;
            vec![(i + 1).to_string(), num(e), num(x), num(cumulative)]
        })
        .collect();
    let eig_header = ["component", "eigenvalue", "explained", "cumulative"]
        .map(String::from)
        .into();
    csv_file(&mut m, dir, "eigenvalues.csv", (eig_header, eig_rows))?;

    let pc_names = basis_names("PC", count);
    let mut header = vec!["component".to_string()];
    header.extend(basis_names("O", p));
    let loading_rows = (0..count)
        .map(|c| {
            let mut r = vec![pc_names[c].clone()];
            r.extend(res.loadings.column(c).iter().map(|&v| num(v)));
            r
        })
        .collect();
    csv_file(&mut m, dir, "loadings.csv", (header.clone(), loading_rows))?;

    let mut active_header = vec!["component".to_string(), "active_count".to_string()];
    active_header.extend(basis_names("O", p));
    let mut active_rows = Vec::new();
    let mut active_counts = Vec::new();
    for c in 0..count {
        let mask = active_basis(&res, c, threshold)?;
        let k = mask.iter().filter(|&&b| b).count();
        active_counts.push(k);
        let mut r = vec![pc_names[c].clone(), k.to_string()];
        r.extend(mask.iter().map(|&b| u8::from(b).to_string()));
        active_rows.push(r);
    }
    csv_file(&mut m, dir, "active.csv", (active_header, active_rows))?;

    let mean = Spline::new(
        s.basis.knots().clone(),
        Basis::Ortho(s.basis.clone()),
        res.mean_coeffs.clone(),
    )?;
    let mut curve_names = vec!["mean".to_string()];
    curve_names.extend(pc_names.iter().cloned());
    let mut curves = vec![mean.eval_many(&s.grid)?];
    curves.extend(eval_all(&res.pc_curves[..count], &s.grid)?);
    csv_file(
        &mut m,
        dir,
        "pc_curves.csv",
        curve_columns(&s.grid, &curve_names, &curves),
    )?;
    if a.smooth.out.svg {
        let idx: Vec<f64> = (1..=p).map(|i| i as f64).collect();
        svg_file(
            &mut m,
            dir,
            "scree.svg",
            "explained variability",
            &idx,
            &["explained".into()],
            std::slice::from_ref(&res.explained),
        )?;
        svg_file(
            &mut m,
            dir,
            "pc_curves.svg",
            "principal components",
            &s.grid,
            &curve_names[1..],
            &curves[1..],
        )?;
    }
    m.result("explained", &res.explained[..count]);
    m.result("active_counts", &active_counts);

    if let Some(levels) = &a.sparsity_grid {
        m.set("sparsity_grid", levels);
        let mut header = vec!["sparsity".to_string()];
        header.extend(pc_names.iter().cloned());
        let mut load_header = vec![
            "sparsity".to_string(),
            "component".to_string(),
            "broken_down".to_string(),
        ];
        load_header.extend(basis_names("O", p));
        let (mut act, mut expl, mut loads) = (Vec::new(), Vec::new(), Vec::new());
        for &sp in levels {
            let sr = sparse_fpca(&data, sp, count)?;
            let mut ar = vec![num(sp)];
            let mut er = vec![num(sp)];
            for c in 0..count {
                let k = sr
                    .active_basis(c, threshold)?
                    .iter()
                    .filter(|&&b| b)
                    .count();
                ar.push(k.to_string());
                er.push(num(sr.explained[c]));
                let mut lr = vec![num(sp), pc_names[c].clone(), sr.broken_down[c].to_string()];
                lr.extend(sr.loadings.column(c).iter().map(|&v| num(v)));
                loads.push(lr);
            }
            act.push(ar);
            expl.push(er);
        }
        csv_file(&mut m, dir, "sparse_active.csv", (header.clone(), act))?;
        csv_file(&mut m, dir, "sparse_explained.csv", (header, expl))?;
        csv_file(&mut m, dir, "sparse_loadings.csv", (load_header, loads))?;
    }
    m.write(dir)?;
    let shown: Vec<String> = res.explained[..count]
        .iter()
        .map(|x| format!("{:.4}", x))
        .collect();
    println!(
        "{n} observations; explained variability of the first components: {}",
        shown.join(", ")
    );
    Ok(())
}

fn align(header: &[String], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for r in rows {
        for (w, c) in widths.iter_mut().zip(r) {
            *w = (*w).max(c.len());
        }
    }
    let line = |cells: &[String]| {
        let padded: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:>w$}"))
            .collect();
        padded.join("  ").trim_end().to_string() + "\n"
    };
    let mut out = line(header);
    for r in rows {
        out += &line(r);
    }
    out
}

pub fn bench(a: BenchArgs) -> CliResult<()> {
    let mut m = Manifest::new("bench");
    let k = m.setting("degree", a.degree, DEFAULT_DEGREE);
    let gs = m.setting("inner_knots", a.inner_knots.clone(), vec![7, 19]);
    let (lo, hi) = m.setting("domain", a.domain, DEFAULT_DOMAIN);
    let names = m.setting(
        "strategy",
        a.strategy
            .as_ref()
            .map(|v| v.iter().map(|s| s.name().to_string()).collect()),
        Strategy::ALL
            .iter()
            .map(|s| s.name().to_string())
            .collect::<Vec<_>>(),
    );
    let strategies: Vec<Strategy> = names
        .iter()
        .map(|n| n.parse().expect("strategy names round-trip"))
        .collect();
    let l = m.setting("penalty_order", a.penalty_order, DEFAULT_PENALTY_ORDER);
    if gs.is_empty() || strategies.is_empty() {
        return Err(CliError::Config("nothing to benchmark".into()));
    }
    if strategies.contains(&Strategy::Splinet) {
        if let Some(&g) = gs.iter().find(|&&g| dyadic_levels(g, k).is_none()) {
            return Err(Error::NonDyadicKnots { g, k }.into());
        }
    }

    let mut bases = Vec::new();
    for &g in &gs {
        let knots = make_knots(lo, hi, g, k, KnotPlacement::Equispaced)?;
        for &st in &strategies {
            bases.push((g, st, orthogonalize(&knots, st)?));
        }
    }

    let header: Vec<String> = [
        "degree",
        "inner_knots",
        "strategy",
        "measured_support",
        "predicted_support",
        "measured_inner_products",
        "predicted_inner_products",
    ]
    .map(String::from)
    .into();
    let mut csv_rows = Vec::new();
    let mut text_rows = Vec::new();
    for (g, st, b) in &bases {
        let ms = relative_total_support(b);
        let ps = predicted_support(*st, *g, k)?;
        let pc = predicted_ip_count(*st, *g, k)?;
        csv_rows.push(vec![
            k.to_string(),
            g.to_string(),
            st.to_string(),
            num(ms),
            num(ps),
            b.ip_count().to_string(),
            pc.to_string(),
        ]);
        text_rows.push(vec![
            k.to_string(),
            g.to_string(),
            st.to_string(),
            format!("{ms:.6}"),
            format!("{ps:.6}"),
            b.ip_count().to_string(),
            pc.to_string(),
        ]);
    }
    let dir = &a.out.out_dir;
    ensure_dir(dir)?;
    let text = align(&header, &text_rows);
    csv_file(&mut m, dir, "bench.csv", (header, csv_rows))?;
    let path = dir.join("bench.txt");
    write_text(&path, &text)?;
    m.file(&path);
    print!("{text}");

    if let Some(points) = &a.collocation_points {
        m.set("collocation_points", points);
        let mut header = vec!["strategy".to_string()];
        header.extend(gs.iter().map(|g| format!("penalty_nonzero_g{g}")));
        header.extend(gs.iter().map(|g| format!("collocation_nonzero_g{g}")));
        let mut rows = Vec::new();
        for &st in &strategies {
            let mut pen = Vec::new();
            let mut col = Vec::new();
            for (_, _, b) in bases.iter().filter(|(_, s, _)| *s == st) {
                pen.push(nonzero_count(&b.penalty(l)?, NONZERO_TOL).to_string());
                col.push(nonzero_count(&b.collocation(points)?, NONZERO_TOL).to_string());
            }
            let mut r = vec![st.to_string()];
            r.extend(pen);
            r.extend(col);
            rows.push(r);
        }
        let text = align(&header, &rows);
        csv_file(&mut m, dir, "nonzero.csv", (header, rows))?;
        let path = dir.join("nonzero.txt");
        write_text(&path, &text)?;
        m.file(&path);
        print!("\n{text}");
    }
    m.write(dir)?;
    Ok(())
}

pub fn plot(a: PlotArgs) -> CliResult<()> {
    let curves = read_curves(&a.input)?;
    let stem = a
        .input
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "plot".into());
    let path = match &a.output {
        Some(p) => p.clone(),
        None => {
            ensure_dir(&a.out_dir)?;
            a.out_dir.join(format!("{stem}.svg"))
        }
    };
    let title = a.title.clone().unwrap_or(stem);
    write_text(&path, &line_plot(&title, &curves.xs, &curves.series))?;
    println!("{}", path.display());
    Ok(())
}
