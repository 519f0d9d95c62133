//! One-sided and symmetric two-sided Gram–Schmidt on ZB coordinates.

use super::work::{overlap, Fun, Work};
use crate::error::Result;
use crate::inner::Instrumentation;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    LeftToRight,
    RightToLeft,
}

/// Orthonormalizes `v` against those of `done` whose support meets the original support of `v`.
fn one_sided_step(work: &Work, mut v: Fun, done: &[Fun], ctx: &mut Instrumentation) -> Result<Fun> {
    let (lo, hi) = (v.lo, v.hi);
    for e in done {
        if overlap(lo, hi, e.lo, e.hi) {
            work.project_out(&mut v, e, ctx);
        }
    }
    work.normalize(&mut v)?;
    Ok(v)
}

/// Results are returned in input order.
pub(crate) fn one_sided(
    work: &Work,
    inputs: Vec<Fun>,
    direction: Direction,
    ctx: &mut Instrumentation,
) -> Result<Vec<Fun>> {
    let n = inputs.len();
    let order: Vec<usize> = match direction {
        Direction::LeftToRight => (0..n).collect(),
        Direction::RightToLeft => (0..n).rev().collect(),
    };
    let mut slots: Vec<Option<Fun>> = inputs.into_iter().map(Some).collect();
    let mut done: Vec<Fun> = Vec::with_capacity(n);
    let mut placed = vec![0usize; n];
    for (pos, &i) in order.iter().enumerate() {
        let v = slots[i].take().expect("each input used once");
        done.push(one_sided_step(work, v, &done, ctx)?);
        placed[i] = pos;
    }
    Ok(placed.into_iter().map(|p| done[p].clone()).collect())
}

/// Symmetric two-sided scheme; results are returned in input order.
pub(crate) fn two_sided(
    work: &Work,
    inputs: Vec<Fun>,
    ctx: &mut Instrumentation,
) -> Result<Vec<Fun>> {
    let n = inputs.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    let lo = inputs.iter().map(|f| f.lo).min().unwrap_or(0);
    let hi = inputs.iter().map(|f| f.hi).max().unwrap_or(0);
    let sum = lo + hi;
    let left: Vec<usize> = (0..n).filter(|&i| 2 * inputs[i].hi <= sum).collect();
    let right: Vec<usize> = (0..n)
        .filter(|&i| 2 * inputs[i].hi > sum && 2 * inputs[i].lo >= sum)
        .collect();
    let central: Vec<usize> = (0..n)
        .filter(|&i| 2 * inputs[i].hi > sum && 2 * inputs[i].lo < sum)
        .collect();

    let mut out: Vec<Option<Fun>> = vec![None; n];
    let mut done: Vec<Fun> = Vec::with_capacity(n);
    let record = |i: usize, f: Fun, done: &mut Vec<Fun>, out: &mut Vec<Option<Fun>>| {
        done.push(f.clone());
        out[i] = Some(f);
    };

    for &i in &left {
        let f = one_sided_step(work, inputs[i].clone(), &done, ctx)?;
        record(i, f, &mut done, &mut out);
    }
    for &i in right.iter().rev() {
        let f = one_sided_step(work, inputs[i].clone(), &done, ctx)?;
        record(i, f, &mut done, &mut out);
    }

    let (mut first, mut last) = (0usize, central.len());
    while last >= first + 2 {
        let (i, j) = (central[first], central[last - 1]);
        let mut u = inputs[i].clone();
        let mut v = inputs[j].clone();
        for e in &done {
            work.project_out(&mut u, e, ctx);
        }
        work.normalize(&mut u)?;
        for e in &done {
            work.project_out(&mut v, e, ctx);
        }
        work.normalize(&mut v)?;
        work.symmetric_pair(&mut u, &mut v, ctx)?;
        record(i, u, &mut done, &mut out);
        record(j, v, &mut done, &mut out);
        first += 1;
        last -= 1;
    }
    if last == first + 1 {
        let i = central[first];
        let mut u = inputs[i].clone();
        for e in &done {
            work.project_out(&mut u, e, ctx);
        }
        work.normalize(&mut u)?;
        record(i, u, &mut done, &mut out);
    }
    Ok(out
        .into_iter()
        .map(|f| f.expect("every input placed"))
        .collect())
}
