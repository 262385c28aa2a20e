//! Triangulation of `Z(s)` by lifting a triangulation of the base `CP^1`.

use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;

use nalgebra::Vector3;
use rayon::prelude::*;

use crate::ensemble::KostlanSection;
use crate::error::{Error, Result};
use crate::projective::ProjectivePoint;
use crate::surface::TriMesh;

use super::branch::{detect_branch_points_with, BranchData, BranchOptions};
use super::pencil::Pencil;
use super::sphere::{from_sphere, icosphere, offset_point, sphere_distance, spherical_delaunay, to_sphere, ICOSAHEDRON_EDGE};
use super::track::{match_regular, match_to_branch, Fiber};

/// A vertex of the lifted mesh.
#[derive(Debug, Clone)]
pub struct MeshVertex {
    pub point: ProjectivePoint,
    /// Index into [`CurveMesh::base_points`].
    pub base: usize,
    /// Sheet label; a ramification point carries the smaller of its two.
    pub sheet: usize,
    pub branch: bool,
}

/// Triangulated zero curve with Fubini-Study edge lengths.
#[derive(Debug, Clone)]
pub struct CurveMesh {
    pub degree: usize,
    pub vertices: Vec<MeshVertex>,
    pub surface: TriMesh,
    /// Base triangulation vertices, as points of the unit sphere.
    pub base_points: Vec<Vector3<f64>>,
    pub base_faces: Vec<[usize; 3]>,
    pub branch: BranchData,
    pub genus: usize,
}

impl CurveMesh {
    pub fn faces(&self) -> &[[usize; 3]] {
        &self.surface.faces
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.surface.euler_characteristic()
    }

    pub fn points(&self) -> Vec<ProjectivePoint> {
        self.vertices.iter().map(|v| v.point.clone()).collect()
    }

    /// Largest `|s(v)|` over the vertices.
    pub fn max_residual(&self, s: &KostlanSection) -> f64 {
        self.vertices.iter().map(|v| s.value_norm(&v.point)).fold(0.0, f64::max)
    }

    /// OFF-style text: `OFF`, counts, one line per vertex with the three
    /// homogeneous coordinates as six reals followed by the sheet label,
    /// then one `3 a b c` line per face.
    pub fn to_off(&self) -> String {
        let mut out = String::new();
        writeln!(out, "OFF").unwrap();
        writeln!(out, "{} {} {}", self.vertices.len(), self.surface.faces.len(), self.surface.edges.len()).unwrap();
        for v in &self.vertices {
            for c in v.point.coords() {
                write!(out, "{:.17e} {:.17e} ", c.re, c.im).unwrap();
            }
            writeln!(out, "{}", v.sheet).unwrap();
        }
        for f in &self.surface.faces {
            writeln!(out, "3 {} {} {}", f[0], f[1], f[2]).unwrap();
        }
        out
    }
}

fn expected_chi(d: usize) -> i64 {
    let d = d as i64;
    2 - (d - 1) * (d - 2)
}

/// Base vertices: a subdivided icosahedron with the branch values inserted
/// and surrounded by geometrically shrinking hexagonal rings, so that each
/// branch value is a vertex whose lifted star has roughly the size of the
/// ambient mesh.
fn base_points(pencil: &Pencil, branch: &BranchData, resolution: usize) -> Result<(Vec<Vector3<f64>>, usize, Vec<Option<usize>>)> {
    let (ico, _) = icosphere(resolution);
    let h = ICOSAHEDRON_EDGE / (1u64 << resolution) as f64;
    let q: Vec<Vector3<f64>> = branch.points.iter().map(|b| to_sphere(&b.base)).collect();
    let mut pts: Vec<Vector3<f64>> = Vec::new();
    let mut kept_min = Vec::new();
    for v in &ico {
        let m = q.iter().map(|c| sphere_distance(c, v)).fold(f64::INFINITY, f64::min);
        if m > 0.85 * h {
            pts.push(*v);
            kept_min.push(m);
        }
    }
    let pole = (0..pts.len())
        .max_by(|&a, &b| kept_min[a].partial_cmp(&kept_min[b]).unwrap())
        .ok_or_else(|| Error::TopologyMismatch("no base vertex left".into()))?;
    let mut branch_of = vec![None; pts.len()];
    for (k, c) in q.iter().enumerate() {
        branch_of.push(Some(k));
        pts.push(*c);
    }
    for (k, c) in q.iter().enumerate() {
        let sep = q
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != k)
            .map(|(_, o)| sphere_distance(c, o))
            .fold(f64::INFINITY, f64::min);
        let r_out = (0.5 * h).min(0.3 * sep);
        // lifted size of the outer ring decides how far the rings shrink
        let p = &branch.points[k].point;
        let probe = Fiber::regular(pencil, offset_point(c, r_out, 0.0))?;
        let r_lift = probe
            .roots
            .iter()
            .map(|&t| pencil.lift(t, &probe.rep).distance(p))
            .fold(f64::INFINITY, f64::min);
        let rho_in = (r_out * (h / (2.0 * r_lift)).powi(2)).min(r_out).max(r_out * 1e-12);
        let rings = (r_out / rho_in).log2().ceil().max(0.0) as usize;
        for ring in 0..=rings {
            let rho = r_out / (1u64 << ring) as f64;
            let phase = if ring % 2 == 0 { 0.0 } else { std::f64::consts::PI / 6.0 };
            for j in 0..6 {
                pts.push(offset_point(c, rho, phase + j as f64 * std::f64::consts::PI / 3.0));
                branch_of.push(None);
            }
        }
    }
    Ok((pts, pole, branch_of))
}

/// Base subdivision level used when none is requested.
pub const DEFAULT_RESOLUTION: usize = 4;

/// Lifted edge length allowed on flat parts of the curve, in units of the
/// base spacing.
const LIFT_TARGET: f64 = 1.5;

/// Rounds of base edge splitting.
const MAX_REFINE_ROUNDS: usize = 6;

/// Split base edges until every lifted edge is at most `LIFT_TARGET·h`, so
/// that no sheet is much coarser than the base spacing. Edges at a branch
/// value are left to the rings.
fn refine_base(
    pencil: &Pencil,
    pts: &mut Vec<Vector3<f64>>,
    branch_of: &mut Vec<Option<usize>>,
    pole: usize,
    resolution: usize,
) -> Result<()> {
    let h = ICOSAHEDRON_EDGE / (1u64 << resolution) as f64;
    let mut fibers: Vec<Option<Fiber>> = Vec::new();
    for _ in 0..MAX_REFINE_ROUNDS {
        let start = fibers.len();
        let fresh: Vec<Option<Fiber>> = (start..pts.len())
            .into_par_iter()
            .map(|v| if branch_of[v].is_some() { Ok(None) } else { Fiber::regular(pencil, pts[v]).map(Some) })
            .collect::<Result<_>>()?;
        fibers.extend(fresh);
        let faces = spherical_delaunay(pts, pole)?;
        let mut edges: Vec<(usize, usize)> = faces
            .iter()
            .flat_map(|f| (0..3).map(move |k| (f[k].min(f[(k + 1) % 3]), f[k].max(f[(k + 1) % 3]))))
            .collect();
        edges.sort_unstable();
        edges.dedup();
        let split: Vec<Option<Vector3<f64>>> = edges
            .par_iter()
            .map(|&(a, b)| {
                let (Some(fa), Some(fb)) = (&fibers[a], &fibers[b]) else {
                    return Ok(None);
                };
                if sphere_distance(&pts[a], &pts[b]) < h * 1e-3 {
                    return Ok(None);
                }
                let perm = match_regular(pencil, fa, fb, 0)?;
                let lifted = (0..perm.len()).map(|i| fa.distance(pencil, i, fb, perm[i])).fold(0.0, f64::max);
                Ok((lifted > LIFT_TARGET * h).then(|| (pts[a] + pts[b]).normalize()))
            })
            .collect::<Result<_>>()?;
        let before = pts.len();
        for m in split.into_iter().flatten() {
            pts.push(m);
            branch_of.push(None);
        }
        if pts.len() == before {
            break;
        }
    }
    Ok(())
}

enum BaseFiber {
    Regular(Fiber),
    Branch { fiber: Fiber, dbl: usize },
}

impl BaseFiber {
    fn fiber(&self) -> &Fiber {
        match self {
            BaseFiber::Regular(f) | BaseFiber::Branch { fiber: f, .. } => f,
        }
    }
}

fn branch_fiber(pencil: &Pencil, base: Vector3<f64>, p: &ProjectivePoint) -> Result<BaseFiber> {
    let mut f = Fiber::regular(pencil, base)?;
    let y = pencil.frame.adjoint() * nalgebra::DVector::from_column_slice(p.coords());
    let lambda = if y[1].norm() >= y[2].norm() { f.rep[0] / y[1] } else { f.rep[1] / y[2] };
    let tq = y[0] * lambda;
    let mut order: Vec<usize> = (0..f.roots.len()).collect();
    order.sort_by(|&a, &b| (f.roots[a] - tq).norm().partial_cmp(&(f.roots[b] - tq).norm()).unwrap());
    let (i, j) = (order[0].min(order[1]), order[0].max(order[1]));
    f.roots.remove(j);
    f.roots[i] = tq;
    Ok(BaseFiber::Branch { fiber: f, dbl: i })
}

/// Lift a triangulation of the base to a triangulation of `Z(s)`.
///
/// `resolution` is the icosahedral subdivision level of the base (at
/// least 3); base edges whose lifts are long are split further. The result is validated: closed oriented surface, Euler
/// characteristic `2 − (d−1)(d−2)`.
pub fn build_mesh(s: &KostlanSection, pencil: &Pencil, resolution: usize) -> Result<CurveMesh> {
    if resolution < 3 {
        return Err(Error::InvalidParameter(format!("mesh resolution must be at least 3 (got {resolution})")));
    }
    let branch = match &pencil.branch {
        Some(b) => b.clone(),
        None => detect_branch_points_with(s, pencil, &BranchOptions::default())?,
    };
    let d = s.d;
    let (mut pts, pole, mut branch_of) = base_points(pencil, &branch, resolution)?;
    refine_base(pencil, &mut pts, &mut branch_of, pole, resolution)?;
    let base_faces = spherical_delaunay(&pts, pole)?;

    let fibers: Vec<BaseFiber> = pts
        .par_iter()
        .zip(branch_of.par_iter())
        .map(|(b, k)| match k {
            None => Fiber::regular(pencil, *b).map(BaseFiber::Regular),
            Some(k) => branch_fiber(pencil, *b, &branch.points[*k].point),
        })
        .collect::<Result<_>>()?;

    // undirected base edges, stored from a regular endpoint
    let mut edge_maps: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
    let mut base_edges: Vec<(usize, usize)> = Vec::new();
    for f in &base_faces {
        for k in 0..3 {
            let (a, b) = (f[k], f[(k + 1) % 3]);
            let key = (a.min(b), a.max(b));
            if !edge_maps.contains_key(&key) {
                edge_maps.insert(key, Vec::new());
                base_edges.push(key);
            }
        }
    }
    let maps: Vec<Vec<usize>> = base_edges
        .par_iter()
        .map(|&(a, b)| match (&fibers[a], &fibers[b]) {
            (BaseFiber::Regular(fa), BaseFiber::Regular(fb)) => match_regular(pencil, fa, fb, 0),
            (BaseFiber::Regular(fa), BaseFiber::Branch { fiber, dbl }) => match_to_branch(pencil, fa, fiber, *dbl, 0),
            (BaseFiber::Branch { fiber, dbl }, BaseFiber::Regular(fb)) => match_to_branch(pencil, fb, fiber, *dbl, 0),
            _ => Err(Error::TopologyMismatch("two branch values share a base edge".into())),
        })
        .collect::<Result<_>>()?;
    for (key, m) in base_edges.iter().zip(maps) {
        edge_maps.insert(*key, m);
    }
    let is_branch = |v: usize| matches!(fibers[v], BaseFiber::Branch { .. });
    // map along the directed edge a → b, a regular
    let along = |a: usize, b: usize| -> Vec<usize> {
        let m = &edge_maps[&(a.min(b), a.max(b))];
        if a < b || is_branch(b) {
            m.clone()
        } else {
            let mut inv = vec![0; m.len()];
            for (i, &j) in m.iter().enumerate() {
                inv[j] = i;
            }
            inv
        }
    };

    let mut offset = Vec::with_capacity(pts.len());
    let mut total = 0usize;
    for f in &fibers {
        offset.push(total);
        total += f.fiber().roots.len();
    }

    let mut faces = Vec::with_capacity(base_faces.len() * d);
    for bf in &base_faces {
        let r = (0..3).find(|&k| !is_branch(bf[k])).expect("branch values are never adjacent");
        let (a, b, c) = (bf[r], bf[(r + 1) % 3], bf[(r + 2) % 3]);
        let pab = along(a, b);
        let pac = along(a, c);
        let consistent = if is_branch(c) {
            let pbc = along(b, c);
            (0..d).all(|i| pbc[pab[i]] == pac[i])
        } else {
            let pcb = along(c, b);
            (0..d).all(|i| pcb[pac[i]] == pab[i])
        };
        if !consistent {
            return Err(Error::ContinuationAmbiguous);
        }
        for i in 0..d {
            faces.push([offset[a] + i, offset[b] + pab[i], offset[c] + pac[i]]);
        }
    }

    // sheet labels along a BFS tree of regular base vertices
    let mut labels: Vec<Option<Vec<usize>>> = vec![None; pts.len()];
    let mut nbrs: Vec<Vec<usize>> = vec![Vec::new(); pts.len()];
    for &(a, b) in &base_edges {
        nbrs[a].push(b);
        nbrs[b].push(a);
    }
    labels[pole] = Some((0..d).collect());
    let mut queue = VecDeque::from([pole]);
    while let Some(a) = queue.pop_front() {
        let la = labels[a].clone().unwrap();
        for &b in &nbrs[a] {
            if labels[b].is_some() || is_branch(b) {
                continue;
            }
            let p = along(a, b);
            let mut lb = vec![0; d];
            for i in 0..d {
                lb[p[i]] = la[i];
            }
            labels[b] = Some(lb);
            queue.push_back(b);
        }
    }
    let mut branch = branch;
    for (v, f) in fibers.iter().enumerate() {
        if let BaseFiber::Branch { fiber, dbl } = f {
            let a = *nbrs[v].iter().find(|&&a| !is_branch(a)).expect("branch value has regular neighbours");
            let la = labels[a].as_ref().unwrap();
            let p = along(a, v);
            let mut lb = vec![usize::MAX; fiber.roots.len()];
            let mut pair = Vec::new();
            for i in 0..d {
                lb[p[i]] = lb[p[i]].min(la[i]);
                if p[i] == *dbl {
                    pair.push(la[i]);
                }
            }
            pair.sort();
            let k = branch_of[v].unwrap();
            branch.points[k].sheets = Some((pair[0], pair[1]));
            labels[v] = Some(lb);
        }
    }

    let mut vertices = Vec::with_capacity(total);
    for (v, f) in fibers.iter().enumerate() {
        let fb = f.fiber();
        let lab = labels[v].as_ref().ok_or_else(|| Error::TopologyMismatch("base mesh is disconnected".into()))?;
        for (j, &t) in fb.roots.iter().enumerate() {
            vertices.push(MeshVertex {
                point: pencil.lift(t, &fb.rep),
                base: v,
                sheet: lab[j],
                branch: matches!(f, BaseFiber::Branch { dbl, .. } if *dbl == j),
            });
        }
    }
    let surface = TriMesh::new(total, faces, |a, b| vertices[a].point.distance(&vertices[b].point));
    if let Some(e) = surface.lengths.iter().position(|&l| !(l > 0.0)) {
        return Err(Error::TopologyMismatch(format!("edge {e} has zero length")));
    }
    surface.check_closed_surface()?;
    let chi = surface.euler_characteristic();
    if chi != expected_chi(d) {
        return Err(Error::TopologyMismatch(format!("Euler characteristic {chi}, expected {}", expected_chi(d))));
    }
    let genus = ((d - 1) * (d.max(2) - 2)) / 2;
    Ok(CurveMesh { degree: d, vertices, surface, base_points: pts, base_faces, branch, genus })
}

/// Base point of a mesh base vertex as a point of `CP^1`.
pub fn base_point(mesh: &CurveMesh, v: usize) -> ProjectivePoint {
    from_sphere(&mesh.base_points[v])
}
