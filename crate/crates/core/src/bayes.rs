//! Bayes-space operations on densities sampled on a grid.
//!
//! Integrals over grids use the trapezoid rule; `η` is the grid span.

use crate::error::{Error, Result};

pub const MAX_BAYES_GRID: usize = 5000;
const MAX_EXP_ARG: f64 = 700.0;

/// A function sampled on a strictly increasing grid.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    xs: Vec<f64>,
    values: Vec<f64>,
}

impl GridFunction {
    pub fn new(xs: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if xs.len() != values.len() {
            return Err(Error::DimensionMismatch {
                expected: xs.len(),
                got: values.len(),
            });
        }
        if xs.len() < 2 {
            return Err(Error::InvalidGrid(format!(
                "{} points, need at least 2",
                xs.len()
            )));
        }
        if let Some(pos) = xs.windows(2).position(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidGrid(format!(
                "abscissae not strictly increasing at position {}",
                pos + 1
            )));
        }
        Ok(Self { xs, values })
    }

    /// Samples `f` on `n` equispaced points of `[a, b]`.
    pub fn sample<F: Fn(f64) -> f64>(a: f64, b: f64, n: usize, f: F) -> Result<Self> {
        let xs = uniform_grid(a, b, n)?;
        let values = xs.iter().map(|&x| f(x)).collect();
        Self::new(xs, values)
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn eta(&self) -> f64 {
        self.xs[self.xs.len() - 1] - self.xs[0]
    }

    pub fn integral(&self) -> f64 {
        trapezoid(&self.xs, &self.values)
    }

    fn with_values(&self, values: Vec<f64>) -> Self {
        Self {
            xs: self.xs.clone(),
            values,
        }
    }

    fn check_positive(&self) -> Result<()> {
        match self.values.iter().position(|&v| !(v > 0.0)) {
            Some(position) => Err(Error::NonpositiveDensity {
                position,
                value: self.values[position],
            }),
            None => Ok(()),
        }
    }

    fn check_same_grid(&self, other: &Self) -> Result<()> {
        if self.xs == other.xs {
            Ok(())
        } else {
            Err(Error::GridMismatch)
        }
    }
}

/// `n` equispaced points from `a` to `b` inclusive.
pub fn uniform_grid(a: f64, b: f64, n: usize) -> Result<Vec<f64>> {
    if n < 2 {
        return Err(Error::InvalidGrid(format!("{n} points, need at least 2")));
    }
    if !(a < b) {
        return Err(Error::EmptyInterval { a, b });
    }
    let step = (b - a) / (n - 1) as f64;
    Ok((0..n)
        .map(|i| if i + 1 == n { b } else { a + step * i as f64 })
        .collect())
}

/// Trapezoid weights of the grid.
pub fn trapezoid_weights(xs: &[f64]) -> Vec<f64> {
    let n = xs.len();
    let mut w = vec![0.0; n];
    for i in 0..n.saturating_sub(1) {
        let h = 0.5 * (xs[i + 1] - xs[i]);
        w[i] += h;
        w[i + 1] += h;
    }
    w
}

pub fn trapezoid(xs: &[f64], ys: &[f64]) -> f64 {
    trapezoid_weights(xs)
        .iter()
        .zip(ys)
        .map(|(w, y)| w * y)
        .sum()
}

/// Centred log-ratio transform.
pub fn clr(f: &GridFunction) -> Result<GridFunction> {
    f.check_positive()?;
    let logs: Vec<f64> = f.values.iter().map(|v| v.ln()).collect();
    let mean = trapezoid(&f.xs, &logs) / f.eta();
    Ok(f.with_values(logs.into_iter().map(|v| v - mean).collect()))
}

/// Inverse clr: `exp` followed by normalization to unit integral.
pub fn inv_clr(fc: &GridFunction) -> Result<GridFunction> {
    if let Some(&value) = fc.values.iter().find(|&&v| !(v <= MAX_EXP_ARG)) {
        return Err(Error::OverflowRisk { value });
    }
    let exps: Vec<f64> = fc.values.iter().map(|v| v.exp()).collect();
    normalized(fc.with_values(exps))
}

fn normalized(f: GridFunction) -> Result<GridFunction> {
    let total = f.integral();
    if !(total > 0.0 && total.is_finite()) {
        return Err(Error::NonpositiveDensity {
            position: 0,
            value: total,
        });
    }
    let values = f.values.iter().map(|v| v / total).collect();
    Ok(f.with_values(values))
}

/// Perturbation `f ⊕ g`.
pub fn perturb(f: &GridFunction, g: &GridFunction) -> Result<GridFunction> {
    f.check_same_grid(g)?;
    f.check_positive()?;
    g.check_positive()?;
    normalized(f.with_values(f.values.iter().zip(&g.values).map(|(a, b)| a * b).collect()))
}

/// Powering `alpha ⊙ f`.
pub fn power(alpha: f64, f: &GridFunction) -> Result<GridFunction> {
    f.check_positive()?;
    normalized(f.with_values(f.values.iter().map(|v| v.powf(alpha)).collect()))
}

/// Bayes inner product as a double trapezoid sum over the grid.
pub fn bayes_inner(f: &GridFunction, g: &GridFunction) -> Result<f64> {
    f.check_same_grid(g)?;
    f.check_positive()?;
    g.check_positive()?;
    let n = f.xs.len();
    if n > MAX_BAYES_GRID {
        return Err(Error::GridTooLarge {
            len: n,
            max: MAX_BAYES_GRID,
        });
    }
    let w = trapezoid_weights(&f.xs);
    let lf: Vec<f64> = f.values.iter().map(|v| v.ln()).collect();
    let lg: Vec<f64> = g.values.iter().map(|v| v.ln()).collect();
    let mut total = 0.0;
    for i in 0..n {
        let mut row = 0.0;
        for j in 0..n {
            row += w[j] * (lf[i] - lf[j]) * (lg[i] - lg[j]);
        }
        total += w[i] * row;
    }
    Ok(total / (2.0 * f.eta()))
}

/// How zero relative frequencies are treated.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum ZeroPolicy {
    #[default]
    Reject,
    /// Zeros become `epsilon` times the smallest positive frequency, then all are renormalized.
    Replace { epsilon: f64 },
}

/// Histogram data: bin centres and relative frequencies summing to one.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteDensity {
    midpoints: Vec<f64>,
    freqs: Vec<f64>,
}

impl DiscreteDensity {
    pub fn new(midpoints: Vec<f64>, freqs: Vec<f64>, policy: ZeroPolicy) -> Result<Self> {
        if midpoints.len() != freqs.len() {
            return Err(Error::DimensionMismatch {
                expected: midpoints.len(),
                got: freqs.len(),
            });
        }
        if midpoints.is_empty() {
            return Err(Error::InvalidGrid("no bins".into()));
        }
        if let Some(pos) = midpoints.windows(2).position(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidGrid(format!(
                "bin centres not strictly increasing at position {}",
                pos + 1
            )));
        }
        if let Some(position) = freqs.iter().position(|&f| !(f >= 0.0) || !f.is_finite()) {
            return Err(Error::NonpositiveDensity {
                position,
                value: freqs[position],
            });
        }
        let mut freqs = freqs;
        if let Some(position) = freqs.iter().position(|&f| f == 0.0) {
            match policy {
                ZeroPolicy::Reject => return Err(Error::ZeroFrequency { position }),
                ZeroPolicy::Replace { epsilon } => {
                    if !(epsilon > 0.0) {
                        return Err(Error::InvalidParameter {
                            name: "epsilon",
                            reason: "must be positive".into(),
                        });
                    }
                    let smallest = freqs
                        .iter()
                        .copied()
                        .filter(|&f| f > 0.0)
                        .fold(f64::INFINITY, f64::min);
                    if !smallest.is_finite() {
                        return Err(Error::ZeroFrequency { position });
                    }
                    for f in freqs.iter_mut().filter(|f| **f == 0.0) {
                        *f = epsilon * smallest;
                    }
                }
            }
        }
        let total: f64 = freqs.iter().sum();
        for f in &mut freqs {
            *f /= total;
        }
        Ok(Self { midpoints, freqs })
    }

    pub fn midpoints(&self) -> &[f64] {
        &self.midpoints
    }

    pub fn freqs(&self) -> &[f64] {
        &self.freqs
    }
}

/// Discrete clr: `ln f_i` minus the plain mean of the logs.
pub fn clr_discrete(d: &DiscreteDensity) -> Vec<f64> {
    let logs: Vec<f64> = d.freqs.iter().map(|f| f.ln()).collect();
    let mean = logs.iter().sum::<f64>() / logs.len() as f64;
    logs.into_iter().map(|v| v - mean).collect()
}
