//! Knot sequences with coincident boundary knots.
//!
//! A sequence is described by the interval `[a, b]`, the spline degree `k` and
//! `g` strictly increasing inner knots. The extended sequence repeats each
//! endpoint `k + 1` times.

use crate::error::{Error, Result};

/// Where to put the inner knots.
#[derive(Debug, Clone, PartialEq)]
pub enum KnotPlacement {
    /// `λ_i = a + i (b - a) / (g + 1)`.
    Equispaced,
    /// Caller-supplied inner knots, strictly increasing inside `(a, b)`.
    Explicit(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct KnotSequence {
    a: f64,
    b: f64,
    degree: usize,
    inner: Vec<f64>,
    extended: Vec<f64>,
}

/// Builds a knot sequence on `[a, b]` with `g` inner knots for splines of degree `k`.
pub fn make_knots(
    a: f64,
    b: f64,
    g: usize,
    k: usize,
    placement: KnotPlacement,
) -> Result<KnotSequence> {
    match placement {
        KnotPlacement::Equispaced => KnotSequence::equispaced(a, b, g, k),
        KnotPlacement::Explicit(inner) => {
            if inner.len() != g {
                return Err(Error::DimensionMismatch {
                    expected: g,
                    got: inner.len(),
                });
            }
            KnotSequence::new(a, b, k, inner)
        }
    }
}

impl KnotSequence {
    pub fn new(a: f64, b: f64, degree: usize, inner: Vec<f64>) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(Error::EmptyInterval { a, b });
        }
        for (pos, &value) in inner.iter().enumerate() {
            if !(value > a && value < b) {
                return Err(Error::KnotOutsideInterval { value, a, b });
            }
            if pos > 0 && inner[pos - 1] >= value {
                return Err(Error::NonIncreasingKnots { position: pos });
            }
        }
        let mut extended = Vec::with_capacity(inner.len() + 2 * (degree + 1));
        extended.extend(std::iter::repeat_n(a, degree + 1));
        extended.extend_from_slice(&inner);
        extended.extend(std::iter::repeat_n(b, degree + 1));
        Ok(Self {
            a,
            b,
            degree,
            inner,
            extended,
        })
    }

    pub fn equispaced(a: f64, b: f64, g: usize, degree: usize) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(Error::EmptyInterval { a, b });
        }
        let width = b - a;
        let inner = (1..=g)
            .map(|i| a + i as f64 * width / (g + 1) as f64)
            .collect();
        Self::new(a, b, degree, inner)
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    /// Interval length `η = b - a`.
    pub fn eta(&self) -> f64 {
        self.b - self.a
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Number of inner knots `g`.
    pub fn num_inner(&self) -> usize {
        self.inner.len()
    }

    pub fn inner(&self) -> &[f64] {
        &self.inner
    }

    /// Extended sequence with `k + 1` copies of each endpoint, stored from index 0.
    pub fn extended(&self) -> &[f64] {
        &self.extended
    }

    /// Dimension `g + k + 1` of the full spline space.
    pub fn bspline_dim(&self) -> usize {
        self.inner.len() + self.degree + 1
    }

    /// The breakpoints `λ_0 = a, λ_1, …, λ_g, λ_{g+1} = b`.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.inner.len() + 2);
        out.push(self.a);
        out.extend_from_slice(&self.inner);
        out.push(self.b);
        out
    }

    /// Number of knot intervals, `g + 1`.
    pub fn num_intervals(&self) -> usize {
        self.inner.len() + 1
    }

    /// Knot `λ_i` with the conventional index range `-k ..= g + k + 1`.
    pub fn knot(&self, i: isize) -> f64 {
        self.extended[(i + self.degree as isize) as usize]
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.a && x <= self.b
    }

    pub(crate) fn check_point(&self, x: f64) -> Result<()> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(Error::PointOutsideDomain {
                x,
                a: self.a,
                b: self.b,
            })
        }
    }

    /// Index `j` of the knot interval `[λ_j, λ_{j+1})` holding `x`; `b` maps to the last interval.
    pub fn interval_index(&self, x: f64) -> usize {
        let count = self.inner.partition_point(|&t| t <= x);
        count.min(self.inner.len())
    }
}
