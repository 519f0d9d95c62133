//! Dyadic net of ZB tuplets and the bottom-up splinet orthogonalization.

use super::gram_schmidt::two_sided;
use super::work::{Fun, Work};
use crate::error::{Error, Result};
use crate::inner::Instrumentation;
use crate::knots::KnotSequence;

/// Number of levels `N` with `g = (2^N - 1)(k + 1) - k`, if any.
pub fn dyadic_levels(g: usize, k: usize) -> Option<usize> {
    let total = g + k;
    if !total.is_multiple_of(k + 1) {
        return None;
    }
    let tuplets = total / (k + 1) + 1;
    if tuplets.is_power_of_two() && tuplets >= 2 {
        Some(tuplets.trailing_zeros() as usize)
    } else {
        None
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DyadicNet {
    n: usize,
    degree: usize,
    /// `levels[l - 1]` holds the tuplets of level `l`, each a list of ZB storage indices.
    levels: Vec<Vec<Vec<usize>>>,
    level_of_tuplet: Vec<usize>,
}

impl DyadicNet {
    pub fn new(knots: &KnotSequence) -> Result<Self> {
        Self::from_counts(knots.num_inner(), knots.degree())
    }

    pub fn from_counts(g: usize, k: usize) -> Result<Self> {
        let n = dyadic_levels(g, k).ok_or(Error::NonDyadicKnots { g, k })?;
        let count = (1usize << n) - 1;
        let mut levels = vec![Vec::new(); n];
        let mut level_of_tuplet = Vec::with_capacity(count);
        for t in 0..count {
            let level = (t + 1).trailing_zeros() as usize + 1;
            level_of_tuplet.push(level);
            levels[level - 1].push((t * (k + 1)..(t + 1) * (k + 1)).collect());
        }
        Ok(Self {
            n,
            degree: k,
            levels,
            level_of_tuplet,
        })
    }

    /// Number of levels `N`.
    pub fn num_levels(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn levels(&self) -> &[Vec<Vec<usize>>] {
        &self.levels
    }

    pub fn num_tuplets(&self) -> usize {
        self.level_of_tuplet.len()
    }

    /// Level (1 = bottom) of the ZB function with storage index `s`.
    pub fn level_of(&self, s: usize) -> usize {
        self.level_of_tuplet[s / (self.degree + 1)]
    }

    fn tuplet(&self, t: usize) -> std::ops::Range<usize> {
        t * (self.degree + 1)..(t + 1) * (self.degree + 1)
    }
}

/// Runs at most `max_levels` reduction steps; returns whether the net was exhausted.
pub(crate) fn run(
    work: &Work,
    funs: &mut [Fun],
    net: &DyadicNet,
    max_levels: usize,
    ctx: &mut Instrumentation,
) -> Result<bool> {
    let mut remaining: Vec<usize> = (0..net.num_tuplets()).collect();
    let mut steps = 0;
    while !remaining.is_empty() {
        if steps == max_levels {
            for &t in &remaining {
                for s in net.tuplet(t) {
                    work.normalize(&mut funs[s])?;
                }
            }
            return Ok(false);
        }
        for &t in remaining.iter().step_by(2) {
            orthogonalize_tuplet(work, funs, net.tuplet(t), ctx)?;
        }
        for pos in (1..remaining.len()).step_by(2) {
            let neighbours: Vec<usize> = net
                .tuplet(remaining[pos - 1])
                .chain(net.tuplet(remaining[pos + 1]))
                .collect();
            for s in net.tuplet(remaining[pos]) {
                let mut v = funs[s].clone();
                for &e in &neighbours {
                    work.project_out(&mut v, &funs[e], ctx);
                }
                funs[s] = v;
            }
        }
        remaining = remaining.into_iter().skip(1).step_by(2).collect();
        steps += 1;
    }
    Ok(true)
}

fn orthogonalize_tuplet(
    work: &Work,
    funs: &mut [Fun],
    members: std::ops::Range<usize>,
    ctx: &mut Instrumentation,
) -> Result<()> {
    let inputs = funs[members.clone()].to_vec();
    let outputs = two_sided(work, inputs, ctx)?;
    for (s, f) in members.zip(outputs) {
        funs[s] = f;
    }
    Ok(())
}
