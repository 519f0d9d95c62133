//! Orthonormal bases of the zero-integral spline space.

mod gram_schmidt;
mod oracle;
mod splinet;
mod work;

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};

pub use gram_schmidt::Direction;
pub use oracle::{predicted_ip_count, predicted_support, relative_total_support, support_lengths};
pub use splinet::{dyadic_levels, DyadicNet};

use crate::error::{Error, Result};
use crate::inner::{zb_gram, Instrumentation};
use crate::knots::KnotSequence;
use crate::spline::{Basis, Spline};
use crate::zb::{zb_design_matrix, zb_dimension};
use work::{Fun, Work};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Strategy {
    GsLeftRight,
    GsRightLeft,
    GsTwoSided,
    Splinet,
}

impl Strategy {
    pub const ALL: [Strategy; 4] = [
        Strategy::GsLeftRight,
        Strategy::GsRightLeft,
        Strategy::GsTwoSided,
        Strategy::Splinet,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Strategy::GsLeftRight => "gs-lr",
            Strategy::GsRightLeft => "gs-rl",
            Strategy::GsTwoSided => "gs-two-sided",
            Strategy::Splinet => "splinet",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Strategy::ALL
            .into_iter()
            .find(|st| st.name() == s)
            .ok_or_else(|| Error::InvalidParameter {
                name: "strategy",
                reason: format!("unknown strategy '{s}'"),
            })
    }
}

/// An orthonormal basis `O = Φ Z` of the zero-integral splines.
///
/// Row `i` of `phi` holds the ZB coefficients of `O_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct OrthoBasis {
    knots: KnotSequence,
    strategy: Strategy,
    phi: DMatrix<f64>,
    supports: Vec<(usize, usize)>,
    ip_count: u64,
    complete: bool,
    levels: Vec<usize>,
}

impl OrthoBasis {
    pub fn knots(&self) -> &KnotSequence {
        &self.knots
    }

    pub fn strategy(&self) -> Strategy {
        self.strategy
    }

    pub fn dim(&self) -> usize {
        self.phi.nrows()
    }

    pub fn phi(&self) -> &DMatrix<f64> {
        &self.phi
    }

    /// Per-function supports as breakpoint indices `[left, right]` into `λ_0 ..= λ_{g+1}`.
    pub fn supports(&self) -> &[(usize, usize)] {
        &self.supports
    }

    /// Inner products consumed while building the basis.
    pub fn ip_count(&self) -> u64 {
        self.ip_count
    }

    /// False for a splinet stopped before exhausting its net.
    pub fn is_complete(&self) -> bool {
        self.complete
    }

    /// Splinet level of each function (1 = bottom); zero for other strategies.
    pub fn levels(&self) -> &[usize] {
        &self.levels
    }

    /// ZB coefficients `z = Φᵀ o` of a spline with coefficients `o` in this basis.
    pub fn to_zb_coeffs(&self, o: &[f64]) -> Vec<f64> {
        (self.phi.transpose() * DVector::from_column_slice(o))
            .iter()
            .copied()
            .collect()
    }

    /// Coefficients in this basis of the spline with ZB coefficients `z`.
    pub fn from_zb_coeffs(&self, z: &[f64]) -> Result<Vec<f64>> {
        let dim = self.phi.ncols();
        if z.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: z.len(),
            });
        }
        if self.phi.nrows() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: self.phi.nrows(),
            });
        }
        let lu = self.phi.transpose().lu();
        lu.solve(&DVector::from_column_slice(z))
            .map(|o| o.iter().copied().collect())
            .ok_or(Error::SingularSystem)
    }

    /// Row `i` of `Φ` as a ZB-basis spline.
    pub fn function(&self, i: usize) -> Spline {
        let coeffs = self.phi.row(i).iter().copied().collect();
        Spline::new(self.knots.clone(), Basis::ZbSpline, coeffs)
            .expect("row length equals ZB dimension")
    }

    pub fn functions(&self) -> Vec<Spline> {
        (0..self.dim()).map(|i| self.function(i)).collect()
    }

    /// Matrix with entries `O_j(x_r)`.
    pub fn collocation(&self, xs: &[f64]) -> Result<DMatrix<f64>> {
        self.collocation_deriv(xs, 0)
    }

    pub fn collocation_deriv(&self, xs: &[f64], deriv: usize) -> Result<DMatrix<f64>> {
        Ok(zb_design_matrix(&self.knots, xs, deriv)? * self.phi.transpose())
    }

    /// Matrix with entries `∫ O_i^{(l)} O_j^{(l)}`.
    pub fn penalty(&self, l: usize) -> Result<DMatrix<f64>> {
        let g = zb_gram(&self.knots, l)?;
        Ok(&self.phi * g * self.phi.transpose())
    }
}

fn inputs_from_splines(zb: &[Spline]) -> Result<(KnotSequence, Vec<Fun>)> {
    let first = zb.first().ok_or(Error::DegenerateSpace)?;
    let knots = first.knots().clone();
    let k = knots.degree();
    let mut funs = Vec::with_capacity(zb.len());
    for s in zb {
        if s.knots() != &knots {
            return Err(Error::KnotMismatch);
        }
        let c = s.zb_coeffs().ok_or_else(|| Error::InvalidParameter {
            name: "zb",
            reason: "inputs must be given in ZB or orthogonal coordinates".into(),
        })?;
        let nz: Vec<usize> = (0..c.len()).filter(|&i| c[i] != 0.0).collect();
        let (lo, hi) = match (nz.first(), nz.last()) {
            (Some(&l), Some(&h)) => (l, h + k + 2),
            _ => (0, 0),
        };
        funs.push(Fun {
            c: DVector::from_vec(c),
            lo,
            hi,
        });
    }
    Ok((knots, funs))
}

fn assemble(
    knots: KnotSequence,
    strategy: Strategy,
    funs: Vec<Fun>,
    ip_count: u64,
    complete: bool,
    levels: Vec<usize>,
) -> OrthoBasis {
    let dim = funs.first().map_or(0, |f| f.c.len());
    let k = knots.degree();
    let last = knots.num_intervals();
    let clamp = |e: usize| e.saturating_sub(k).min(last);
    let mut phi = DMatrix::zeros(funs.len(), dim);
    let mut supports = Vec::with_capacity(funs.len());
    for (i, f) in funs.iter().enumerate() {
        phi.row_mut(i).copy_from(&f.c.transpose());
        supports.push((clamp(f.lo), clamp(f.hi)));
    }
    OrthoBasis {
        knots,
        strategy,
        phi,
        supports,
        ip_count,
        complete,
        levels,
    }
}

/// One-sided Gram–Schmidt in the given direction.
pub fn gs_one_sided(
    zb: &[Spline],
    direction: Direction,
    ctx: &mut Instrumentation,
) -> Result<OrthoBasis> {
    let (knots, funs) = inputs_from_splines(zb)?;
    let gram = zb_gram(&knots, 0)?;
    let work = Work {
        gram: &gram,
        degree: knots.degree(),
    };
    let before = ctx.inner_products();
    let out = gram_schmidt::one_sided(&work, funs, direction, ctx)?;
    let strategy = match direction {
        Direction::LeftToRight => Strategy::GsLeftRight,
        Direction::RightToLeft => Strategy::GsRightLeft,
    };
    let n = out.len();
    Ok(assemble(
        knots,
        strategy,
        out,
        ctx.inner_products() - before,
        true,
        vec![0; n],
    ))
}

/// Symmetric two-sided Gram–Schmidt.
pub fn gs_two_sided(zb: &[Spline], ctx: &mut Instrumentation) -> Result<OrthoBasis> {
    let (knots, funs) = inputs_from_splines(zb)?;
    let gram = zb_gram(&knots, 0)?;
    let work = Work {
        gram: &gram,
        degree: knots.degree(),
    };
    let before = ctx.inner_products();
    let out = gram_schmidt::two_sided(&work, funs, ctx)?;
    let n = out.len();
    Ok(assemble(
        knots,
        Strategy::GsTwoSided,
        out,
        ctx.inner_products() - before,
        true,
        vec![0; n],
    ))
}

/// Dyadic splinet orthogonalization of the full ZB basis.
pub fn splinet(zb: &[Spline], net: &DyadicNet, ctx: &mut Instrumentation) -> Result<OrthoBasis> {
    splinet_partial(zb, net, usize::MAX, ctx)
}

/// Splinet stopped after at most `max_levels` reduction steps.
///
/// When stopped early the untreated functions are only normalized and the
/// result reports `is_complete() == false`.
pub fn splinet_partial(
    zb: &[Spline],
    net: &DyadicNet,
    max_levels: usize,
    ctx: &mut Instrumentation,
) -> Result<OrthoBasis> {
    let (knots, mut funs) = inputs_from_splines(zb)?;
    let g = knots.num_inner();
    let k = knots.degree();
    if dyadic_levels(g, k) != Some(net.num_levels()) || net.degree() != k {
        return Err(Error::NonDyadicKnots { g, k });
    }
    if funs.len() != g + k {
        return Err(Error::DimensionMismatch {
            expected: g + k,
            got: funs.len(),
        });
    }
    let gram = zb_gram(&knots, 0)?;
    let work = Work {
        gram: &gram,
        degree: k,
    };
    let before = ctx.inner_products();
    let complete = splinet::run(&work, &mut funs, net, max_levels, ctx)?;
    let levels = (0..funs.len()).map(|s| net.level_of(s)).collect();
    Ok(assemble(
        knots,
        Strategy::Splinet,
        funs,
        ctx.inner_products() - before,
        complete,
        levels,
    ))
}

/// The raw ZB basis as splines.
pub fn zb_basis(knots: &KnotSequence) -> Result<Vec<Spline>> {
    let dim = zb_dimension(knots)?;
    (0..dim).map(|s| Spline::zb_unit(knots, s)).collect()
}

/// Orthonormalizes the ZB basis of `knots` with the chosen strategy.
pub fn orthogonalize(knots: &KnotSequence, strategy: Strategy) -> Result<OrthoBasis> {
    let dim = zb_dimension(knots)?;
    if dim < 2 {
        return Err(Error::DegenerateSpace);
    }
    let zb = zb_basis(knots)?;
    let mut ctx = Instrumentation::new();
    match strategy {
        Strategy::GsLeftRight => gs_one_sided(&zb, Direction::LeftToRight, &mut ctx),
        Strategy::GsRightLeft => gs_one_sided(&zb, Direction::RightToLeft, &mut ctx),
        Strategy::GsTwoSided => gs_two_sided(&zb, &mut ctx),
        Strategy::Splinet => {
            let net = DyadicNet::new(knots)?;
            splinet(&zb, &net, &mut ctx)
        }
    }
}
