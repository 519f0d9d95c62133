//! Closed-form support and cost predictions, and measured support.

use super::splinet::dyadic_levels;
use super::{OrthoBasis, Strategy};
use crate::error::{Error, Result};
use crate::quadrature::{gauss_legendre, mapped};
use crate::zb::zb_row;

const SUPPORT_TOL: f64 = 1e-11;

/// Length of the union of knot intervals on which each basis function is not identically zero.
pub fn support_lengths(basis: &OrthoBasis) -> Vec<f64> {
    let knots = basis.knots();
    let breaks = knots.breakpoints();
    let rule = gauss_legendre(knots.degree() + 1);
    let phi = basis.phi();
    let mut lengths = vec![0.0; basis.dim()];
    for j in 0..knots.num_intervals() {
        let nodes: Vec<(Vec<f64>, f64)> = mapped(&rule, breaks[j], breaks[j + 1])
            .map(|(x, w)| (zb_row(knots, 0, x), w))
            .collect();
        for (i, len) in lengths.iter_mut().enumerate() {
            let sq: f64 = nodes
                .iter()
                .map(|(row, w)| {
                    let v: f64 = row.iter().zip(phi.row(i).iter()).map(|(a, b)| a * b).sum();
                    w * v * v
                })
                .sum();
            if sq.sqrt() > SUPPORT_TOL {
                *len += breaks[j + 1] - breaks[j];
            }
        }
    }
    lengths
}

/// Total measured support of the basis divided by `b - a`.
pub fn relative_total_support(basis: &OrthoBasis) -> f64 {
    support_lengths(basis).iter().sum::<f64>() / basis.knots().eta()
}

fn dyadic(g: usize, k: usize) -> Result<usize> {
    dyadic_levels(g, k).ok_or(Error::NonDyadicKnots { g, k })
}

/// Predicted relative total support on equispaced knots.
pub fn predicted_support(strategy: Strategy, g: usize, k: usize) -> Result<f64> {
    let (gf, kf) = (g as f64, k as f64);
    Ok(match strategy {
        Strategy::GsLeftRight | Strategy::GsRightLeft => gf / 2.0 + kf + 1.0 - 1.0 / (gf + 1.0),
        Strategy::GsTwoSided => gf / 4.0 + kf + 7.0 / 4.0 - 2.0 / (gf + 1.0),
        Strategy::Splinet => ((k + 1) * dyadic(g, k)?) as f64,
    })
}

/// Predicted number of inner products.
pub fn predicted_ip_count(strategy: Strategy, g: usize, k: usize) -> Result<i64> {
    let (g, k) = (g as i64, k as i64);
    Ok(match strategy {
        Strategy::GsLeftRight | Strategy::GsRightLeft => (k + 1) * g + k * (k - 1) / 2 - 1,
        Strategy::GsTwoSided => (k + 1) * (2 * g - 4) - k * (k + 1) / 2,
        Strategy::Splinet => {
            let n = dyadic(g as usize, k as usize)? as i64;
            (5 * k + 4) * (g + k) / 2 - 2 * n * (k + 1) * (k + 1) - k * (k + 1) / 2
        }
    })
}
