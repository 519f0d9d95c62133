//! Functions in ZB coordinates with tracked supports, and the inner product on them.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::inner::Instrumentation;

/// A zero-integral spline held as ZB coefficients.
///
/// `lo..hi` is a range of extended-knot indices outside of which the function vanishes.
#[derive(Debug, Clone)]
pub(crate) struct Fun {
    pub c: DVector<f64>,
    pub lo: usize,
    pub hi: usize,
}

pub(crate) fn overlap(lo1: usize, hi1: usize, lo2: usize, hi2: usize) -> bool {
    lo1.max(lo2) < hi1.min(hi2)
}

pub(crate) struct Work<'a> {
    pub gram: &'a DMatrix<f64>,
    pub degree: usize,
}

impl Work<'_> {
    /// Coefficient indices that can be nonzero for a function on extended range `lo..hi`.
    fn coeff_range(&self, f: &Fun) -> std::ops::Range<usize> {
        let n = self.gram.nrows();
        let end = (f.hi + 1).saturating_sub(self.degree + 2).min(n);
        f.lo.min(end)..end
    }

    pub fn inner(&self, u: &Fun, v: &Fun) -> f64 {
        let ru = self.coeff_range(u);
        let rv = self.coeff_range(v);
        let band = self.degree + 1;
        let mut total = 0.0;
        for p in ru {
            let cp = u.c[p];
            if cp == 0.0 {
                continue;
            }
            let q_lo = rv.start.max(p.saturating_sub(band));
            let q_hi = rv.end.min(p + band + 1);
            let mut acc = 0.0;
            for q in q_lo..q_hi {
                acc += self.gram[(p, q)] * v.c[q];
            }
            total += cp * acc;
        }
        total
    }

    pub fn counted(&self, u: &Fun, v: &Fun, ctx: &mut Instrumentation) -> f64 {
        ctx.record();
        self.inner(u, v)
    }

    /// Subtracts the component of `v` along the unit function `e`.
    pub fn project_out(&self, v: &mut Fun, e: &Fun, ctx: &mut Instrumentation) {
        let c = self.counted(v, e, ctx);
        if c != 0.0 {
            v.c.axpy(-c, &e.c, 1.0);
            v.lo = v.lo.min(e.lo);
            v.hi = v.hi.max(e.hi);
        }
    }

    pub fn normalize(&self, v: &mut Fun) -> Result<()> {
        let norm = self.inner(v, v).max(0.0).sqrt();
        if !(norm >= 1e-13) {
            return Err(Error::NumericalBreakdown { norm });
        }
        v.c /= norm;
        Ok(())
    }

    /// Symmetric orthonormalization of two unit functions.
    pub fn symmetric_pair(
        &self,
        u: &mut Fun,
        v: &mut Fun,
        ctx: &mut Instrumentation,
    ) -> Result<()> {
        let rho = self.counted(u, v, ctx);
        if !(1.0 - rho.abs() >= 1e-13) {
            return Err(Error::NumericalBreakdown {
                norm: (1.0 - rho.abs()).max(0.0).sqrt(),
            });
        }
        let a = 1.0 / (1.0 + rho).sqrt();
        let b = 1.0 / (1.0 - rho).sqrt();
        let (same, cross) = (0.5 * (a + b), 0.5 * (a - b));
        let new_u = &u.c * same + &v.c * cross;
        let new_v = &u.c * cross + &v.c * same;
        u.c = new_u;
        v.c = new_v;
        if rho != 0.0 {
            let (lo, hi) = (u.lo.min(v.lo), u.hi.max(v.hi));
            u.lo = lo;
            v.lo = lo;
            u.hi = hi;
            v.hi = hi;
        }
        Ok(())
    }
}
