//! Sheet adjacency and the explicit diameter certificate of the cover.
//!
//! Fix a base point `x` away from the branch values and label the sheets by
//! the roots over `x`. Two sheets are adjacent when they meet at a branch
//! point reached along the base geodesic from `x`. Every point of the curve
//! joins the fiber over `x` by a lifted base geodesic of length at most
//! `L`, and an adjacency step costs two such legs, so any two points are at
//! distance at most `max(k, 1)·4·L` where `k` is the diameter of the
//! adjacency graph.

use std::collections::VecDeque;

use nalgebra::Vector3;

use crate::ensemble::KostlanSection;
use crate::error::{Error, Result};

use super::mesh::CurveMesh;
use super::pencil::Pencil;
use super::sphere::{sphere_distance, tangent_basis, to_sphere};
use super::track::{lifted_lengths, Fiber};

/// Number of evenly spaced half-meridians through `x` whose lifts are
/// measured, on top of those aimed at the branch values.
pub const MERIDIANS: usize = 64;

#[derive(Debug, Clone)]
pub struct SheetAdjacency {
    /// Sheets meeting at each branch value, labelled by the roots over `x`.
    pub pairs: Vec<(usize, usize)>,
    /// Diameter of the adjacency graph.
    pub k_max: usize,
    /// Largest measured lifted length of a base geodesic from `x`.
    pub lifted_length: f64,
    /// `max(k_max, 1)·4·lifted_length`, computational units.
    pub bound: f64,
}

fn great_circle(a: Vector3<f64>, b: Vector3<f64>) -> impl Fn(f64) -> Vector3<f64> {
    let omega = a.angle(&b);
    let e = (b - a * a.dot(&b)).normalize();
    move |tau: f64| a * (omega * tau).cos() + e * (omega * tau).sin()
}

/// Lifted length of the worst sheet along `path`, refined by step doubling
/// until two successive estimates agree to `1e-3`.
fn converged_max_length(pencil: &Pencil, start: &Fiber, path: &dyn Fn(f64) -> Vector3<f64>) -> Result<f64> {
    let mut steps = 64;
    let mut prev = lifted_lengths(pencil, start, path, steps)?.0;
    loop {
        steps *= 2;
        let next = lifted_lengths(pencil, start, path, steps)?.0;
        let delta = prev.iter().zip(&next).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        let top = next.iter().cloned().fold(0.0, f64::max);
        if delta <= 1e-3 * top || steps >= 4096 {
            return Ok(top);
        }
        prev = next;
    }
}

pub fn sheet_adjacency(s: &KostlanSection, pencil: &Pencil, mesh: &CurveMesh) -> Result<SheetAdjacency> {
    let d = s.d;
    let q: Vec<Vector3<f64>> = mesh.branch.points.iter().map(|b| to_sphere(&b.base)).collect();
    let x = *mesh
        .base_points
        .iter()
        .max_by(|a, b| {
            let ma = q.iter().map(|c| sphere_distance(c, a)).fold(f64::INFINITY, f64::min);
            let mb = q.iter().map(|c| sphere_distance(c, b)).fold(f64::INFINITY, f64::min);
            ma.partial_cmp(&mb).unwrap()
        })
        .expect("mesh has base points");
    let start = Fiber::regular(pencil, x)?;

    // adjacency: follow the geodesic to just before each branch value
    let sep = mesh.branch.min_separation();
    let mut pairs = Vec::with_capacity(q.len());
    for c in &q {
        let full = great_circle(x, *c);
        let omega = x.angle(c);
        let stop = 1.0 - (2.0 * 1e-6f64.min(0.01 * sep)) / omega;
        let path = move |tau: f64| full(tau * stop);
        let (_, perm, end) = lifted_lengths(pencil, &start, &path, 64)?;
        let mut best = (f64::INFINITY, 0, 0);
        for i in 0..end.roots.len() {
            for j in 0..i {
                let gap = end.distance(pencil, i, &end, j);
                if gap < best.0 {
                    best = (gap, i, j);
                }
            }
        }
        let sheet_of = |root: usize| perm.iter().position(|&p| p == root).expect("permutation");
        let (a, b) = (sheet_of(best.1), sheet_of(best.2));
        pairs.push((a.min(b), a.max(b)));
    }
    let mut graph = vec![Vec::new(); d];
    for &(a, b) in &pairs {
        graph[a].push(b);
        graph[b].push(a);
    }
    let mut k_max = 0;
    for src in 0..d {
        let mut dist = vec![usize::MAX; d];
        dist[src] = 0;
        let mut queue = VecDeque::from([src]);
        while let Some(u) = queue.pop_front() {
            for &v in &graph[u] {
                if dist[v] == usize::MAX {
                    dist[v] = dist[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        if dist.contains(&usize::MAX) {
            return Err(Error::DisconnectedSheets);
        }
        k_max = k_max.max(*dist.iter().max().unwrap());
    }

    // lifted half-meridians from x to its antipode
    let (e1, e2) = tangent_basis(&x);
    let mut angles: Vec<f64> = (0..MERIDIANS).map(|k| 2.0 * std::f64::consts::PI * k as f64 / MERIDIANS as f64).collect();
    for c in &q {
        let v = c - x * x.dot(c);
        let a = v.dot(&e2).atan2(v.dot(&e1));
        angles.push(a + 1e-3);
        angles.push(a - 1e-3);
    }
    let mut lifted_length: f64 = 0.0;
    for a in angles {
        let dir = e1 * a.cos() + e2 * a.sin();
        let path = move |tau: f64| x * (std::f64::consts::PI * tau).cos() + dir * (std::f64::consts::PI * tau).sin();
        lifted_length = lifted_length.max(converged_max_length(pencil, &start, &path)?);
    }
    let bound = k_max.max(1) as f64 * 4.0 * lifted_length;
    Ok(SheetAdjacency { pairs, k_max, lifted_length, bound })
}

/// Diameter certificate `max(k, 1)·4·L` of the branched cover.
pub fn sheet_adjacency_bound(s: &KostlanSection, pencil: &Pencil, mesh: &CurveMesh) -> Result<f64> {
    Ok(sheet_adjacency(s, pencil, mesh)?.bound)
}
