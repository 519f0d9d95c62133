//! Piecewise Gauss–Legendre quadrature over knot intervals.

use std::num::NonZeroUsize;

use gauss_quad::GaussLegendre;

/// Nodes and weights on `[-1, 1]` for an `n`-point rule.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let n = NonZeroUsize::new(n.max(1)).expect("positive node count");
    GaussLegendre::new(n).into_node_weight_pairs().into_vec()
}

/// Nodes exact for polynomials of degree `degree`.
pub fn nodes_for_degree(degree: usize) -> usize {
    degree.div_ceil(2) + 1
}

/// Maps a reference rule onto `[lo, hi]`.
pub fn mapped(rule: &[(f64, f64)], lo: f64, hi: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
    let half = 0.5 * (hi - lo);
    let mid = 0.5 * (hi + lo);
    rule.iter().map(move |&(t, w)| (mid + half * t, half * w))
}

/// Integrates `f` over each `[breaks[j], breaks[j+1]]` and sums the results.
pub fn integrate_piecewise<F: FnMut(f64) -> f64>(breaks: &[f64], n: usize, mut f: F) -> f64 {
    let rule = gauss_legendre(n);
    breaks
        .windows(2)
        .map(|w| {
            mapped(&rule, w[0], w[1])
                .map(|(x, wt)| wt * f(x))
                .sum::<f64>()
        })
        .sum()
}
