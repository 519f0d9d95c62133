//! Functional PCA on coefficients in an orthonormal basis.
//!
//! Since the basis is orthonormal, the L² geometry of the functions equals the
//! Euclidean geometry of their coefficient vectors and ordinary PCA applies.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};
use crate::ortho::OrthoBasis;
use crate::spline::{Basis, Spline};

const SPARSE_TOL: f64 = 1e-10;
const SPARSE_MAX_ITER: usize = 500;
const DEGENERATE_VARIANCE: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct CoefficientDataset {
    basis: Arc<OrthoBasis>,
    coeffs: DMatrix<f64>,
    ids: Vec<String>,
}

impl CoefficientDataset {
    /// `coeffs` has one row per observation and one column per basis function.
    pub fn new(basis: Arc<OrthoBasis>, coeffs: DMatrix<f64>, ids: Vec<String>) -> Result<Self> {
        if coeffs.ncols() != basis.dim() {
            return Err(Error::DimensionMismatch {
                expected: basis.dim(),
                got: coeffs.ncols(),
            });
        }
        if ids.len() != coeffs.nrows() {
            return Err(Error::DimensionMismatch {
                expected: coeffs.nrows(),
                got: ids.len(),
            });
        }
        Ok(Self { basis, coeffs, ids })
    }

    /// Builds a dataset from splines, re-expressing each in `basis`.
    pub fn from_splines(
        basis: Arc<OrthoBasis>,
        splines: &[Spline],
        ids: Vec<String>,
    ) -> Result<Self> {
        let p = basis.dim();
        let mut coeffs = DMatrix::zeros(splines.len(), p);
        for (r, s) in splines.iter().enumerate() {
            if s.knots() != basis.knots() {
                return Err(Error::KnotMismatch);
            }
            let z = s.zb_coeffs().ok_or_else(|| Error::InvalidParameter {
                name: "splines",
                reason: "observations must be zero-integral splines".into(),
            })?;
            let o = basis.from_zb_coeffs(&z)?;
            for c in 0..p {
                coeffs[(r, c)] = o[c];
            }
        }
        Self::new(basis, coeffs, ids)
    }

    pub fn basis(&self) -> &Arc<OrthoBasis> {
        &self.basis
    }

    pub fn coeffs(&self) -> &DMatrix<f64> {
        &self.coeffs
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    fn centered(&self) -> Result<(DMatrix<f64>, DVector<f64>)> {
        let n = self.coeffs.nrows();
        if n < 2 {
            return Err(Error::TooFewObservations { n });
        }
        let mean = self.coeffs.row_mean().transpose();
        let mut x = self.coeffs.clone();
        for mut row in x.row_iter_mut() {
            row -= mean.transpose();
        }
        Ok((x, mean))
    }
}

#[derive(Debug, Clone)]
pub struct FpcaResult {
    pub eigenvalues: Vec<f64>,
    /// Columns are the principal directions.
    pub loadings: DMatrix<f64>,
    pub explained: Vec<f64>,
    pub mean_coeffs: Vec<f64>,
    pub pc_curves: Vec<Spline>,
}

fn covariance(x: &DMatrix<f64>) -> DMatrix<f64> {
    x.transpose() * x / (x.nrows() - 1) as f64
}

fn fix_sign(mut v: DVector<f64>) -> DVector<f64> {
    let idx = v.iamax();
    if v[idx] < 0.0 {
        v.neg_mut();
    }
    v
}

fn curves(basis: &Arc<OrthoBasis>, loadings: &DMatrix<f64>) -> Result<Vec<Spline>> {
    loadings
        .column_iter()
        .map(|col| {
            Spline::new(
                basis.knots().clone(),
                Basis::Ortho(basis.clone()),
                col.iter().copied().collect(),
            )
        })
        .collect()
}

/// Eigenvalues in descending order with matching unit eigenvectors.
fn sorted_eigen(c: DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let p = c.nrows();
    let eig = SymmetricEigen::new(c);
    let mut order: Vec<usize> = (0..p).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = DMatrix::zeros(p, p);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &fix_sign(eig.eigenvectors.column(src).into_owned()));
    }
    (values, vectors)
}

pub fn fpca(data: &CoefficientDataset) -> Result<FpcaResult> {
    let (x, mean) = data.centered()?;
    let (eigenvalues, loadings) = sorted_eigen(covariance(&x));
    let total: f64 = eigenvalues.iter().sum();
    let explained = eigenvalues
        .iter()
        .map(|&v| if total > 0.0 { v / total } else { 0.0 })
        .collect();
    let pc_curves = curves(&data.basis, &loadings)?;
    Ok(FpcaResult {
        eigenvalues,
        loadings,
        explained,
        mean_coeffs: mean.iter().copied().collect(),
        pc_curves,
    })
}

fn active_mask(loadings: &DMatrix<f64>, component: usize, threshold: f64) -> Result<Vec<bool>> {
    if component >= loadings.ncols() {
        return Err(Error::ComponentOutOfRange {
            component,
            count: loadings.ncols(),
        });
    }
    Ok(loadings
        .column(component)
        .iter()
        .map(|v| v.abs() > threshold)
        .collect())
}

/// Basis functions whose loading in `component` exceeds `threshold` in magnitude.
///
/// A component with negligible variance has an arbitrary direction and an empty mask.
pub fn active_basis(result: &FpcaResult, component: usize, threshold: f64) -> Result<Vec<bool>> {
    let mut mask = active_mask(&result.loadings, component, threshold)?;
    let mean_sq: f64 = result.mean_coeffs.iter().map(|m| m * m).sum();
    let scale = result
        .eigenvalues
        .first()
        .copied()
        .unwrap_or(0.0)
        .max(mean_sq);
    if result.eigenvalues[component] <= DEGENERATE_VARIANCE * scale {
        mask.iter_mut().for_each(|m| *m = false);
    }
    Ok(mask)
}

#[derive(Debug, Clone)]
pub struct SparseFpcaResult {
    pub sparsity: f64,
    /// Columns are the sparse loadings; a broken-down component has a zero column.
    pub loadings: DMatrix<f64>,
    pub explained: Vec<f64>,
    pub broken_down: Vec<bool>,
    pub iterations: Vec<usize>,
    pub pc_curves: Vec<Spline>,
}

impl SparseFpcaResult {
    pub fn active_basis(&self, component: usize, threshold: f64) -> Result<Vec<bool>> {
        active_mask(&self.loadings, component, threshold)
    }
}

fn soft_threshold(w: &DVector<f64>, level: f64) -> DVector<f64> {
    w.map(|v| v.signum() * (v.abs() - level).max(0.0))
}

/// Sparse loadings by thresholded power iteration with deflation.
///
/// Each iteration forms `w = C v`, soft-thresholds it at `sparsity · max|w|` and
/// renormalizes. Explained variability is `vᵀ C v` over the total variance, with
/// `C` the covariance of the deflated data.
pub fn sparse_fpca(
    data: &CoefficientDataset,
    sparsity: f64,
    component_count: usize,
) -> Result<SparseFpcaResult> {
    if !(0.0..=1.0).contains(&sparsity) {
        return Err(Error::InvalidParameter {
            name: "sparsity",
            reason: format!("{sparsity} is outside [0, 1]"),
        });
    }
    let (mut x, _) = data.centered()?;
    let p = x.ncols();
    if component_count > p {
        return Err(Error::ComponentOutOfRange {
            component: component_count,
            count: p,
        });
    }
    let total = covariance(&x).trace();
    let mut loadings = DMatrix::zeros(p, component_count);
    let mut explained = Vec::with_capacity(component_count);
    let mut broken_down = Vec::with_capacity(component_count);
    let mut iterations = Vec::with_capacity(component_count);
    for m in 0..component_count {
        let c = covariance(&x);
        let (_, vectors) = sorted_eigen(c.clone());
        let mut v = vectors.column(0).into_owned();
        let mut broken = false;
        let mut iter = 0;
        while iter < SPARSE_MAX_ITER {
            iter += 1;
            let w = &c * &v;
            let level = sparsity * w.amax();
            let t = soft_threshold(&w, level);
            let norm = t.norm();
            if norm == 0.0 {
                broken = true;
                break;
            }
            let next = fix_sign(t / norm);
            let change = (&next - &v).amax();
            v = next;
            if change < SPARSE_TOL {
                break;
            }
        }
        if broken {
            explained.push(0.0);
        } else {
            let var = v.dot(&(&c * &v));
            explained.push(if total > 0.0 { var / total } else { 0.0 });
            loadings.set_column(m, &v);
            let scores = &x * &v;
            x -= scores * v.transpose();
        }
        broken_down.push(broken);
        iterations.push(iter);
    }
    let pc_curves = curves(&data.basis, &loadings)?;
    Ok(SparseFpcaResult {
        sparsity,
        loadings,
        explained,
        broken_down,
        iterations,
        pc_curves,
    })
}
