//! Splines as coefficient vectors tied to a knot sequence and a basis.

use std::sync::Arc;

use crate::bspline::all_derivatives;
use crate::error::{Error, Result};
use crate::knots::KnotSequence;
use crate::ortho::OrthoBasis;
use crate::quadrature::{gauss_legendre, mapped, nodes_for_degree};
use crate::zb::{zb_dimension, zb_to_b};

#[derive(Debug, Clone, PartialEq)]
pub enum Basis {
    BSpline,
    ZbSpline,
    Ortho(Arc<OrthoBasis>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Spline {
    knots: KnotSequence,
    basis: Basis,
    coeffs: Vec<f64>,
}

impl Spline {
    pub fn new(knots: KnotSequence, basis: Basis, coeffs: Vec<f64>) -> Result<Self> {
        let expected = match &basis {
            Basis::BSpline => knots.bspline_dim(),
            Basis::ZbSpline => zb_dimension(&knots)?,
            Basis::Ortho(ob) => {
                if ob.knots() != &knots {
                    return Err(Error::KnotMismatch);
                }
                ob.dim()
            }
        };
        if coeffs.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                got: coeffs.len(),
            });
        }
        Ok(Self {
            knots,
            basis,
            coeffs,
        })
    }

    /// The `i`-th ZB-spline (storage index `0 ..< g + k`) as a spline.
    pub fn zb_unit(knots: &KnotSequence, s: usize) -> Result<Self> {
        let dim = zb_dimension(knots)?;
        if s >= dim {
            return Err(Error::IndexOutOfRange {
                index: s as isize,
                min: 0,
                max: dim as isize - 1,
            });
        }
        let mut coeffs = vec![0.0; dim];
        coeffs[s] = 1.0;
        Self::new(knots.clone(), Basis::ZbSpline, coeffs)
    }

    pub fn knots(&self) -> &KnotSequence {
        &self.knots
    }

    pub fn basis(&self) -> &Basis {
        &self.basis
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Coefficients in the ZB basis, or `None` for a B-spline representation.
    pub fn zb_coeffs(&self) -> Option<Vec<f64>> {
        match &self.basis {
            Basis::BSpline => None,
            Basis::ZbSpline => Some(self.coeffs.clone()),
            Basis::Ortho(ob) => Some(ob.to_zb_coeffs(&self.coeffs)),
        }
    }

    pub fn bspline_coeffs(&self) -> Vec<f64> {
        match self.zb_coeffs() {
            None => self.coeffs.clone(),
            Some(z) => zb_to_b(&self.knots, &z).expect("dimension checked at construction"),
        }
    }

    pub fn to_bspline(&self) -> Spline {
        Spline {
            knots: self.knots.clone(),
            basis: Basis::BSpline,
            coeffs: self.bspline_coeffs(),
        }
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        self.eval_deriv(x, 0)
    }

    pub fn eval_deriv(&self, x: f64, deriv: usize) -> Result<f64> {
        self.knots.check_point(x)?;
        if deriv > self.knots.degree() {
            return Err(Error::DerivOrderTooHigh {
                order: deriv,
                max: self.knots.degree(),
            });
        }
        let b = self.bspline_coeffs();
        Ok(eval_b(&self.knots, &b, deriv, x))
    }

    /// Evaluates at many points, converting coefficients only once.
    pub fn eval_many(&self, xs: &[f64]) -> Result<Vec<f64>> {
        let b = self.bspline_coeffs();
        xs.iter()
            .map(|&x| {
                self.knots.check_point(x)?;
                Ok(eval_b(&self.knots, &b, 0, x))
            })
            .collect()
    }

    /// Flags the knot intervals on which some B-spline coefficient touching it is nonzero.
    pub fn interval_mask(&self) -> Vec<bool> {
        mask_from_b(&self.knots, &self.bspline_coeffs())
    }
}

pub(crate) fn eval_b(knots: &KnotSequence, b: &[f64], deriv: usize, x: f64) -> f64 {
    let vals = all_derivatives(knots, knots.degree() + 1, deriv, x);
    let j = knots.interval_index(x);
    (j..=j + knots.degree()).map(|s| vals[s] * b[s]).sum()
}

pub(crate) fn mask_from_b(knots: &KnotSequence, b: &[f64]) -> Vec<bool> {
    let k = knots.degree();
    (0..knots.num_intervals())
        .map(|j| b[j..=j + k].iter().any(|&c| c != 0.0))
        .collect()
}

/// Integral of the spline over `[a, b]`.
pub fn spline_integral(s: &Spline) -> f64 {
    let knots = s.knots();
    let b = s.bspline_coeffs();
    let rule = gauss_legendre(nodes_for_degree(knots.degree()));
    knots
        .breakpoints()
        .windows(2)
        .map(|w| {
            mapped(&rule, w[0], w[1])
                .map(|(x, wt)| wt * eval_b(knots, &b, 0, x))
                .sum::<f64>()
        })
        .sum()
}
