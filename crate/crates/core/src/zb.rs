//! Zero-integral splines built as derivatives of higher-order B-splines.
//!
//! For degree `k` the ZB-spline `Z_i`, `i = -k ..= g - 1`, is the derivative of
//! the order `k + 2` B-spline on the same extended knots. Each integrates to
//! zero over `[a, b]` and together they span the `g + k` dimensional subspace
//! of zero-integral splines.

use nalgebra::{DMatrix, DVector};

use crate::bspline::{all_derivatives, all_values};
use crate::error::{Error, Result};
use crate::knots::KnotSequence;

/// Dimension `g + k` of the zero-integral subspace.
pub fn zb_dimension(knots: &KnotSequence) -> Result<usize> {
    let dim = knots.num_inner() + knots.degree();
    if dim == 0 {
        Err(Error::DegenerateSpace)
    } else {
        Ok(dim)
    }
}

/// Diagonal scale `D_s = (k + 1) / (λ_{s+1} - λ_{s-k})` for each B-spline in storage order.
pub(crate) fn scale_factors(knots: &KnotSequence) -> Vec<f64> {
    let ext = knots.extended();
    let k = knots.degree();
    (0..knots.bspline_dim())
        .map(|s| (k + 1) as f64 / (ext[s + k + 1] - ext[s]))
        .collect()
}

/// Values of `d^deriv Z_s(x)` for every ZB-spline in storage order.
pub(crate) fn zb_row(knots: &KnotSequence, deriv: usize, x: f64) -> Vec<f64> {
    let k = knots.degree();
    let b = if deriv == 0 {
        all_values(knots, k + 1, x)
    } else {
        all_derivatives(knots, k + 1, deriv, x)
    };
    let d = scale_factors(knots);
    (0..knots.num_inner() + k)
        .map(|s| d[s] * b[s] - d[s + 1] * b[s + 1])
        .collect()
}

/// Evaluates `Z_i(x)` with `i` in `-k ..= g - 1`.
pub fn eval_zbspline(knots: &KnotSequence, i: isize, x: f64) -> Result<f64> {
    knots.check_point(x)?;
    let k = knots.degree() as isize;
    let dim = zb_dimension(knots)? as isize;
    let (min, max) = (-k, dim - k - 1);
    if i < min || i > max {
        return Err(Error::IndexOutOfRange { index: i, min, max });
    }
    let s = (i + k) as usize;
    let ext = knots.extended();
    let order = knots.degree() + 1;
    let vals = all_values(knots, order, x);
    let left = vals[s] / (ext[s + order] - ext[s]);
    let right = vals[s + 1] / (ext[s + order + 1] - ext[s + 1]);
    Ok(order as f64 * (left - right))
}

/// Linear map from ZB coefficients to B-spline coefficients, `b = D K z`.
///
/// `K` is the `(g+k+1) × (g+k)` first-difference matrix with ones on the
/// diagonal and minus ones just below it.
#[derive(Debug, Clone, PartialEq)]
pub struct ZbConversion {
    pub d: DVector<f64>,
    pub k: DMatrix<f64>,
}

impl ZbConversion {
    pub fn new(knots: &KnotSequence) -> Result<Self> {
        let dim = zb_dimension(knots)?;
        let d = DVector::from_vec(scale_factors(knots));
        let mut k = DMatrix::zeros(dim + 1, dim);
        for j in 0..dim {
            k[(j, j)] = 1.0;
            k[(j + 1, j)] = -1.0;
        }
        Ok(Self { d, k })
    }

    /// The product `D K`.
    pub fn matrix(&self) -> DMatrix<f64> {
        DMatrix::from_diagonal(&self.d) * &self.k
    }

    pub fn apply(&self, z: &[f64]) -> Result<Vec<f64>> {
        let dim = self.k.ncols();
        if z.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: z.len(),
            });
        }
        Ok((0..=dim)
            .map(|s| {
                let cur = if s < dim { z[s] } else { 0.0 };
                let prev = if s > 0 { z[s - 1] } else { 0.0 };
                self.d[s] * (cur - prev)
            })
            .collect())
    }
}

/// Converts ZB coefficients to B-spline coefficients.
pub fn zb_to_b(knots: &KnotSequence, z: &[f64]) -> Result<Vec<f64>> {
    ZbConversion::new(knots)?.apply(z)
}

/// Matrix of `d^deriv Z_s(x_r)`, one row per point.
pub fn zb_design_matrix(knots: &KnotSequence, xs: &[f64], deriv: usize) -> Result<DMatrix<f64>> {
    let k = knots.degree();
    if deriv > k {
        return Err(Error::DerivOrderTooHigh {
            order: deriv,
            max: k,
        });
    }
    let dim = zb_dimension(knots)?;
    let mut out = DMatrix::zeros(xs.len(), dim);
    for (r, &x) in xs.iter().enumerate() {
        knots.check_point(x)?;
        for (c, v) in zb_row(knots, deriv, x).into_iter().enumerate() {
            out[(r, c)] = v;
        }
    }
    Ok(out)
}
