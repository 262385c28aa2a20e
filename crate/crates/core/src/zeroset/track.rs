//! Root continuation between nearby fibers.
//!
//! Two fibers are matched by nearest lifted points. A matching is accepted
//! when every root's nearest candidate is at most a third of the distance
//! to its second nearest and the result has the expected multiplicities;
//! otherwise the base segment is halved and both halves are matched.

use nalgebra::Vector3;

use crate::error::{Error, Result};
use crate::poly::C64;

use super::pencil::Pencil;
use super::sphere::from_sphere;

/// Maximum number of successive halvings of a base segment.
pub const MAX_HALVINGS: usize = 20;

const RATIO: f64 = 1.0 / 3.0;

/// The `t`-roots over one base point, for a fixed representative.
#[derive(Debug, Clone)]
pub(crate) struct Fiber {
    pub base: Vector3<f64>,
    pub rep: [C64; 2],
    pub roots: Vec<C64>,
}

impl Fiber {
    pub fn regular(pencil: &Pencil, base: Vector3<f64>) -> Result<Self> {
        let b = from_sphere(&base);
        let rep = [b.coords()[0], b.coords()[1]];
        let roots = pencil.fiber_t_roots(&rep);
        if roots.len() != pencil.degree {
            return Err(Error::FiberDegenerate { found: roots.len(), expected: pencil.degree });
        }
        Ok(Self { base, rep, roots })
    }

    pub fn distance(&self, pencil: &Pencil, i: usize, other: &Fiber, j: usize) -> f64 {
        pencil.lift_distance(&self.rep, self.roots[i], &other.rep, other.roots[j])
    }

    #[allow(dead_code)]
    pub fn min_gap(&self, pencil: &Pencil) -> f64 {
        let mut best = f64::INFINITY;
        for i in 0..self.roots.len() {
            for j in 0..i {
                best = best.min(self.distance(pencil, i, self, j));
            }
        }
        best
    }
}

fn nearest_assignment(pencil: &Pencil, a: &Fiber, b: &Fiber) -> Option<Vec<usize>> {
    let mut out = Vec::with_capacity(a.roots.len());
    for i in 0..a.roots.len() {
        let mut best = (f64::INFINITY, usize::MAX);
        let mut second = f64::INFINITY;
        for j in 0..b.roots.len() {
            let dist = a.distance(pencil, i, b, j);
            if dist < best.0 {
                second = best.0;
                best = (dist, j);
            } else if dist < second {
                second = dist;
            }
        }
        if b.roots.len() > 1 && !(best.0 < RATIO * second) {
            return None;
        }
        out.push(best.1);
    }
    Some(out)
}

fn midpoint(a: &Vector3<f64>, b: &Vector3<f64>) -> Vector3<f64> {
    (a + b).normalize()
}

/// Permutation `π` with root `i` over `a` continuing to root `π(i)` over `b`.
pub(crate) fn match_regular(pencil: &Pencil, a: &Fiber, b: &Fiber, depth: usize) -> Result<Vec<usize>> {
    if let Some(m) = nearest_assignment(pencil, a, b) {
        let mut seen = vec![false; b.roots.len()];
        if m.iter().all(|&j| !std::mem::replace(&mut seen[j], true)) {
            return Ok(m);
        }
    }
    if depth >= MAX_HALVINGS {
        return Err(Error::ContinuationAmbiguous);
    }
    let mid = Fiber::regular(pencil, midpoint(&a.base, &b.base))?;
    let p1 = match_regular(pencil, a, &mid, depth + 1)?;
    let p2 = match_regular(pencil, &mid, b, depth + 1)?;
    Ok(p1.iter().map(|&k| p2[k]).collect())
}

/// Map from the roots over `a` to the `d − 1` points over a branch value;
/// exactly two roots land on the double point `dbl`.
pub(crate) fn match_to_branch(pencil: &Pencil, a: &Fiber, q: &Fiber, dbl: usize, depth: usize) -> Result<Vec<usize>> {
    if let Some(m) = nearest_assignment(pencil, a, q) {
        let mut count = vec![0usize; q.roots.len()];
        for &j in &m {
            count[j] += 1;
        }
        if count.iter().enumerate().all(|(j, &c)| c == if j == dbl { 2 } else { 1 }) {
            return Ok(m);
        }
    }
    if depth >= MAX_HALVINGS {
        return Err(Error::ContinuationAmbiguous);
    }
    let mid = Fiber::regular(pencil, midpoint(&a.base, &q.base))?;
    let p1 = match_regular(pencil, a, &mid, depth + 1)?;
    let p2 = match_to_branch(pencil, &mid, q, dbl, depth + 1)?;
    Ok(p1.iter().map(|&k| p2[k]).collect())
}

/// Lifted length of every sheet along the base path `path(τ)`, `τ ∈ [0,1]`,
/// sampled at `steps` uniform parameters (each step matched with halving).
///
/// Returns the per-sheet lengths indexed by the roots of the start fiber
/// and the permutation to the roots of the end fiber.
pub(crate) fn lifted_lengths(
    pencil: &Pencil,
    start: &Fiber,
    path: &dyn Fn(f64) -> Vector3<f64>,
    steps: usize,
) -> Result<(Vec<f64>, Vec<usize>, Fiber)> {
    let d = start.roots.len();
    let mut lengths = vec![0.0; d];
    let mut perm: Vec<usize> = (0..d).collect();
    let mut cur = start.clone();
    for k in 1..=steps {
        let next = Fiber::regular(pencil, path(k as f64 / steps as f64))?;
        let m = match_regular(pencil, &cur, &next, 0)?;
        for (sheet, p) in perm.iter_mut().enumerate() {
            lengths[sheet] += cur.distance(pencil, *p, &next, m[*p]);
            *p = m[*p];
        }
        cur = next;
    }
    Ok((lengths, perm, cur))
}
