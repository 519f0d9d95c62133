//! Penalized least-squares fitting of zero-integral splines.
//!
//! The fit minimizes
//! `J(o) = (1 - α) oᵀ N o + α Σ_j w_j (y_j - s(x_j))²`
//! over coefficients `o` in an orthonormal basis, where `N` is the Gram matrix
//! of `l`-th derivatives. The minimizer solves
//! `[(1 - α) N + α Oᵀ W O] o = α Oᵀ W y`.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use crate::bayes::{clr_discrete, inv_clr, uniform_grid, DiscreteDensity, GridFunction};
use crate::error::{Error, Result};
use crate::knots::KnotSequence;
use crate::ortho::{orthogonalize, OrthoBasis, Strategy};
use crate::spline::{Basis, Spline};

#[derive(Debug, Clone)]
pub struct SmoothingProblem {
    xs: Vec<f64>,
    ys: Vec<f64>,
    weights: Vec<f64>,
    alpha: f64,
    l: usize,
    basis: Arc<OrthoBasis>,
}

impl SmoothingProblem {
    /// A problem with unit weights.
    pub fn new(
        basis: Arc<OrthoBasis>,
        xs: Vec<f64>,
        ys: Vec<f64>,
        alpha: f64,
        l: usize,
    ) -> Result<Self> {
        let weights = vec![1.0; xs.len()];
        Self::with_weights(basis, xs, ys, weights, alpha, l)
    }

    pub fn with_weights(
        basis: Arc<OrthoBasis>,
        xs: Vec<f64>,
        ys: Vec<f64>,
        weights: Vec<f64>,
        alpha: f64,
        l: usize,
    ) -> Result<Self> {
        if ys.len() != xs.len() {
            return Err(Error::DimensionMismatch {
                expected: xs.len(),
                got: ys.len(),
            });
        }
        if weights.len() != xs.len() {
            return Err(Error::DimensionMismatch {
                expected: xs.len(),
                got: weights.len(),
            });
        }
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(Error::InvalidParameter {
                name: "alpha",
                reason: format!("{alpha} is outside (0, 1]"),
            });
        }
        let k = basis.knots().degree();
        if l == 0 || l + 1 > k {
            return Err(Error::InvalidParameter {
                name: "l",
                reason: format!(
                    "penalty order {l} is outside 1..={} for degree {k}",
                    k as isize - 1
                ),
            });
        }
        if let Some(&w) = weights.iter().find(|&&w| !(w > 0.0 && w.is_finite())) {
            return Err(Error::InvalidParameter {
                name: "weights",
                reason: format!("weight {w} is not positive"),
            });
        }
        for &x in &xs {
            basis.knots().check_point(x)?;
        }
        Ok(Self {
            xs,
            ys,
            weights,
            alpha,
            l,
            basis,
        })
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn ys(&self) -> &[f64] {
        &self.ys
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn penalty_order(&self) -> usize {
        self.l
    }

    pub fn basis(&self) -> &Arc<OrthoBasis> {
        &self.basis
    }

    /// Value of the objective at coefficients `o`.
    pub fn objective(&self, o: &[f64]) -> Result<f64> {
        let (design, pen) = self.matrices()?;
        let o = DVector::from_column_slice(o);
        let fitted = &design * &o;
        let rss: f64 = (0..self.xs.len())
            .map(|j| self.weights[j] * (self.ys[j] - fitted[j]).powi(2))
            .sum();
        Ok((1.0 - self.alpha) * o.dot(&(&pen * &o)) + self.alpha * rss)
    }

    fn matrices(&self) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
        Ok((
            self.basis.collocation(&self.xs)?,
            self.basis.penalty(self.l)?,
        ))
    }
}

#[derive(Debug, Clone)]
pub struct FitResult {
    pub coeffs: Vec<f64>,
    pub spline: Spline,
    pub residual_ss: f64,
    pub penalty: f64,
}

/// First index `i` (from `-k`) at which no interlacing point can be chosen, if any.
///
/// Duplicated abscissae count once; `xs` must be sorted ascending.
pub fn interlacing_violation(knots: &KnotSequence, xs: &[f64]) -> Option<isize> {
    let k = knots.degree() as isize;
    let g = knots.num_inner() as isize;
    let mut uniq = xs.to_vec();
    uniq.dedup();
    let lam = |i: isize| knots.knot(i.clamp(-k, g + k + 1));
    let mut p = 0;
    for i in -k..g {
        let (lo, hi) = (lam(i), lam(i + k + 1));
        while p < uniq.len() && uniq[p] <= lo {
            p += 1;
        }
        if p == uniq.len() || uniq[p] >= hi {
            return Some(i);
        }
        p += 1;
    }
    None
}

/// Whether the collocation matrix at `xs` has full column rank by the interlacing criterion.
pub fn check_rank(basis: &OrthoBasis, xs: &[f64]) -> bool {
    interlacing_violation(basis.knots(), xs).is_none()
}

pub fn fit(problem: &SmoothingProblem) -> Result<FitResult> {
    let alpha = problem.alpha;
    if alpha == 1.0 {
        if let Some(index) = interlacing_violation(problem.basis.knots(), &problem.xs) {
            return Err(Error::InfeasibleDesign { index });
        }
    }
    let (design, pen) = problem.matrices()?;
    let w = DVector::from_column_slice(&problem.weights);
    let y = DVector::from_column_slice(&problem.ys);
    let weighted = DMatrix::from_fn(design.nrows(), design.ncols(), |r, c| w[r] * design[(r, c)]);
    let hessian = &pen * (1.0 - alpha) + design.transpose() * &weighted * alpha;
    let rhs = weighted.transpose() * &y * alpha;
    let chol = hessian.cholesky().ok_or(Error::SingularSystem)?;
    let o = chol.solve(&rhs);
    let fitted = &design * &o;
    let residual_ss = (0..y.len())
        .map(|j| w[j] * (y[j] - fitted[j]).powi(2))
        .sum();
    let penalty = o.dot(&(&pen * &o));
    let coeffs: Vec<f64> = o.iter().copied().collect();
    let spline = Spline::new(
        problem.basis.knots().clone(),
        Basis::Ortho(problem.basis.clone()),
        coeffs.clone(),
    )?;
    Ok(FitResult {
        coeffs,
        spline,
        residual_ss,
        penalty,
    })
}

/// Histogram to smoothed density: discrete clr, spline fit at the bin centres, inverse clr on a
/// `grid`-point uniform grid over the knot interval.
pub fn fit_density(
    d: &DiscreteDensity,
    knots: &KnotSequence,
    alpha: f64,
    l: usize,
    strategy: Strategy,
    grid: usize,
) -> Result<(FitResult, GridFunction)> {
    let basis = Arc::new(orthogonalize(knots, strategy)?);
    let ys = clr_discrete(d);
    let problem = SmoothingProblem::new(basis, d.midpoints().to_vec(), ys, alpha, l)?;
    let result = fit(&problem)?;
    let xs = uniform_grid(knots.a(), knots.b(), grid)?;
    let values = result.spline.eval_many(&xs)?;
    let density = inv_clr(&GridFunction::new(xs, values)?)?;
    Ok((result, density))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::knots::{make_knots, KnotPlacement};

    fn ages() -> Vec<f64> {
        (0..19).map(|i| 2.0 + 5.0 * i as f64).collect()
    }

    #[test]
    fn interlacing_on_age_bins() {
        let coarse = make_knots(0.0, 95.0, 7, 2, KnotPlacement::Equispaced).unwrap();
        assert_eq!(interlacing_violation(&coarse, &ages()), None);
        let fine = make_knots(0.0, 95.0, 19, 2, KnotPlacement::Equispaced).unwrap();
        assert!(interlacing_violation(&fine, &ages()).is_some());
    }

    #[test]
    fn clustered_points_fail() {
        let knots = make_knots(0.0, 1.0, 3, 2, KnotPlacement::Equispaced).unwrap();
        let xs: Vec<f64> = (0..20).map(|i| 0.01 + 0.01 * i as f64).collect();
        assert_eq!(interlacing_violation(&knots, &xs), Some(1));
        assert!(interlacing_violation(&knots, &[0.1, 0.3]).is_some());
    }

    #[test]
    fn duplicates_do_not_count_twice() {
        let knots = make_knots(0.0, 1.0, 1, 1, KnotPlacement::Equispaced).unwrap();
        assert_eq!(interlacing_violation(&knots, &[0.25, 0.25]), Some(0));
        assert_eq!(interlacing_violation(&knots, &[0.25, 0.75]), None);
    }

    #[test]
    fn parameter_validation() {
        let knots = make_knots(0.0, 95.0, 7, 2, KnotPlacement::Equispaced).unwrap();
        let basis = Arc::new(orthogonalize(&knots, Strategy::Splinet).unwrap());
        let xs = ages();
        let ys = vec![0.0; 19];
        assert!(SmoothingProblem::new(basis.clone(), xs.clone(), ys.clone(), 0.0, 1).is_err());
        assert!(SmoothingProblem::new(basis.clone(), xs.clone(), ys.clone(), 0.5, 0).is_err());
        assert!(SmoothingProblem::new(basis.clone(), xs.clone(), ys.clone(), 0.5, 2).is_err());
        assert!(SmoothingProblem::new(basis.clone(), xs, ys[..3].to_vec(), 0.5, 1).is_err());
        assert!(matches!(
            SmoothingProblem::new(basis, vec![100.0], vec![0.0], 0.5, 1),
            Err(Error::PointOutsideDomain { .. })
        ));
    }

    #[test]
    fn infeasible_interpolation() {
        let knots = make_knots(0.0, 95.0, 19, 2, KnotPlacement::Equispaced).unwrap();
        let basis = Arc::new(orthogonalize(&knots, Strategy::GsLeftRight).unwrap());
        let problem = SmoothingProblem::new(basis, ages(), vec![0.1; 19], 1.0, 1).unwrap();
        assert!(matches!(fit(&problem), Err(Error::InfeasibleDesign { .. })));
    }
}
