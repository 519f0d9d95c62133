//! Zero-integral spline bases for clr-transformed densities.
//!
//! Densities on `[a, b]` are mapped by the centred log-ratio transform to
//! functions with zero integral. Those are represented exactly in the ZB-spline
//! basis, which can be orthonormalized by Gram–Schmidt variants or by the
//! dyadic splinet scheme. On top of that sit smoothing-spline fitting and
//! functional principal component analysis on basis coefficients.

pub mod bayes;
pub mod bspline;
pub mod error;
pub mod inner;
pub mod knots;
pub mod ortho;
pub mod quadrature;
pub mod sfpca;
pub mod smoothing;
pub mod spline;
pub mod zb;

pub use error::{Error, Result};
pub use inner::{gram, l2_inner, nonzero_count, zb_gram, GramMatrix, Instrumentation};
pub use knots::{make_knots, KnotPlacement, KnotSequence};
pub use ortho::{orthogonalize, DyadicNet, OrthoBasis, Strategy};
pub use spline::{spline_integral, Basis, Spline};
