//! B-spline evaluation by the Cox–de Boor recurrence.
//!
//! Functions are indexed either conventionally (`i` from `-k` to `g`, with
//! `B_i` supported on `[λ_i, λ_{i+k+1}]`) or by storage position `s = i + k`.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::knots::KnotSequence;

fn ratio(num: f64, den: f64) -> f64 {
    if den == 0.0 {
        0.0
    } else {
        num / den
    }
}

/// Values of all order-`order` B-splines on the extended sequence of `knots` at `x`.
///
/// The result has `extended.len() - order` entries in storage order. Returns
/// an empty vector when the sequence is too short.
pub(crate) fn all_values(knots: &KnotSequence, order: usize, x: f64) -> Vec<f64> {
    let ext = knots.extended();
    if order == 0 || ext.len() <= order {
        return Vec::new();
    }
    let span = knots.degree() + knots.interval_index(x);
    let mut vals = vec![0.0; ext.len() - 1];
    vals[span] = 1.0;
    for m in 2..=order {
        let count = ext.len() - m;
        for s in 0..count {
            let left = ratio(x - ext[s], ext[s + m - 1] - ext[s]) * vals[s];
            let right = ratio(ext[s + m] - x, ext[s + m] - ext[s + 1]) * vals[s + 1];
            vals[s] = left + right;
        }
        vals.truncate(count);
    }
    vals
}

/// Values of `d^deriv/dx^deriv` of all order-`order` B-splines at `x`.
pub(crate) fn all_derivatives(
    knots: &KnotSequence,
    order: usize,
    deriv: usize,
    x: f64,
) -> Vec<f64> {
    let ext = knots.extended();
    if deriv >= order {
        return vec![0.0; ext.len().saturating_sub(order)];
    }
    let mut vals = all_values(knots, order - deriv, x);
    for m in (order - deriv + 1)..=order {
        let count = ext.len() - m;
        let scale = (m - 1) as f64;
        let next = (0..count)
            .map(|s| {
                scale
                    * (ratio(vals[s], ext[s + m - 1] - ext[s])
                        - ratio(vals[s + 1], ext[s + m] - ext[s + 1]))
            })
            .collect();
        vals = next;
    }
    vals
}

/// Evaluates the B-spline `B_i` of the given order at `x`, with `i` in `-k ..= g`.
pub fn eval_bspline(knots: &KnotSequence, i: isize, order: usize, x: f64) -> Result<f64> {
    knots.check_point(x)?;
    let k = knots.degree() as isize;
    let count = knots.extended().len() as isize - order as isize;
    let min = -k;
    let max = min + count - 1;
    if order == 0 || i < min || i > max {
        return Err(Error::IndexOutOfRange { index: i, min, max });
    }
    Ok(all_values(knots, order, x)[(i + k) as usize])
}

/// Matrix of `d^deriv B_s(x_r)` for the degree-`k` B-spline basis, one row per point.
pub fn design_matrix(knots: &KnotSequence, xs: &[f64], deriv: usize) -> Result<DMatrix<f64>> {
    let k = knots.degree();
    if deriv > k {
        return Err(Error::DerivOrderTooHigh {
            order: deriv,
            max: k,
        });
    }
    let dim = knots.bspline_dim();
    let mut out = DMatrix::zeros(xs.len(), dim);
    for (r, &x) in xs.iter().enumerate() {
        knots.check_point(x)?;
        let row = all_derivatives(knots, k + 1, deriv, x);
        for (c, v) in row.into_iter().enumerate() {
            out[(r, c)] = v;
        }
    }
    Ok(out)
}
