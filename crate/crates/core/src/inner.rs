//! L² inner products of spline derivatives and Gram matrices.

use nalgebra::DMatrix;

use crate::bspline::all_derivatives;
use crate::error::{Error, Result};
use crate::knots::KnotSequence;
use crate::quadrature::{gauss_legendre, mapped, nodes_for_degree};
use crate::spline::{mask_from_b, Spline};
use crate::zb::{zb_dimension, zb_row};

/// Counts inner products that were actually evaluated.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Instrumentation {
    inner_products: u64,
}

impl Instrumentation {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn record(&mut self) {
        self.inner_products += 1;
    }

    pub fn inner_products(&self) -> u64 {
        self.inner_products
    }

    pub fn reset(&mut self) {
        self.inner_products = 0;
    }
}

/// `∫ s1^{(l)} s2^{(l)}` over `[a, b]`.
///
/// Pairs whose supports share no knot interval return zero without being counted.
pub fn l2_inner(s1: &Spline, s2: &Spline, l: usize, ctx: &mut Instrumentation) -> Result<f64> {
    let knots = s1.knots();
    if knots != s2.knots() {
        return Err(Error::KnotMismatch);
    }
    let k = knots.degree();
    if l > k {
        return Err(Error::DerivOrderTooHigh { order: l, max: k });
    }
    let b1 = s1.bspline_coeffs();
    let b2 = s2.bspline_coeffs();
    let m1 = mask_from_b(knots, &b1);
    let m2 = mask_from_b(knots, &b2);
    let shared: Vec<usize> = (0..m1.len()).filter(|&j| m1[j] && m2[j]).collect();
    if shared.is_empty() {
        return Ok(0.0);
    }
    ctx.record();
    let rule = gauss_legendre(nodes_for_degree(2 * (k - l)));
    let breaks = knots.breakpoints();
    let mut total = 0.0;
    for j in shared {
        for (x, w) in mapped(&rule, breaks[j], breaks[j + 1]) {
            let vals = all_derivatives(knots, k + 1, l, x);
            let (mut f, mut g) = (0.0, 0.0);
            for s in j..=j + k {
                f += vals[s] * b1[s];
                g += vals[s] * b2[s];
            }
            total += w * f * g;
        }
    }
    Ok(total)
}

#[derive(Debug, Clone, PartialEq)]
pub struct GramMatrix {
    pub entries: DMatrix<f64>,
    pub deriv_order: usize,
}

/// Gram matrix of `l`-th derivatives; each unordered pair is evaluated once.
pub fn gram(fns: &[Spline], l: usize, ctx: &mut Instrumentation) -> Result<GramMatrix> {
    let n = fns.len();
    let mut entries = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v = l2_inner(&fns[i], &fns[j], l, ctx)?;
            entries[(i, j)] = v;
            entries[(j, i)] = v;
        }
    }
    Ok(GramMatrix {
        entries,
        deriv_order: l,
    })
}

/// Exact Gram matrix of `l`-th derivatives of the ZB basis, assembled interval by interval.
pub fn zb_gram(knots: &KnotSequence, l: usize) -> Result<DMatrix<f64>> {
    let k = knots.degree();
    if l > k {
        return Err(Error::DerivOrderTooHigh { order: l, max: k });
    }
    let dim = zb_dimension(knots)?;
    let rule = gauss_legendre(nodes_for_degree(2 * (k - l)));
    let breaks = knots.breakpoints();
    let mut out = DMatrix::zeros(dim, dim);
    for j in 0..knots.num_intervals() {
        // Z_s lives on intervals s - k ..= s + 1.
        let lo = j.saturating_sub(1);
        let hi = (j + k).min(dim - 1);
        for (x, w) in mapped(&rule, breaks[j], breaks[j + 1]) {
            let row = zb_row(knots, l, x);
            for p in lo..=hi {
                for q in lo..=hi {
                    out[(p, q)] += w * row[p] * row[q];
                }
            }
        }
    }
    Ok(out)
}

/// Exact Gram matrix of `l`-th derivatives of the B-spline basis.
pub fn bspline_gram(knots: &KnotSequence, l: usize) -> Result<DMatrix<f64>> {
    let k = knots.degree();
    if l > k {
        return Err(Error::DerivOrderTooHigh { order: l, max: k });
    }
    let dim = knots.bspline_dim();
    let rule = gauss_legendre(nodes_for_degree(2 * (k - l)));
    let breaks = knots.breakpoints();
    let mut out = DMatrix::zeros(dim, dim);
    for j in 0..knots.num_intervals() {
        for (x, w) in mapped(&rule, breaks[j], breaks[j + 1]) {
            let row = all_derivatives(knots, k + 1, l, x);
            for p in j..=j + k {
                for q in j..=j + k {
                    out[(p, q)] += w * row[p] * row[q];
                }
            }
        }
    }
    Ok(out)
}

/// Number of entries with magnitude above `threshold`.
pub fn nonzero_count(m: &DMatrix<f64>, threshold: f64) -> usize {
    m.iter().filter(|v| v.abs() > threshold).count()
}
