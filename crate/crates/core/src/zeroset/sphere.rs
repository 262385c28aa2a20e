//! The base `CP^1` as the round sphere: Hopf coordinates, icosahedral
//! point sets and spherical Delaunay triangulations.
//!
//! `CP^1` with its Fubini-Study metric is the sphere of radius `1/2`, so the
//! FS distance between two base points is half the angle between their
//! images on the unit sphere.

use std::collections::HashMap;

use nalgebra::{Rotation3, Unit, Vector3};
use spade::{DelaunayTriangulation, HasPosition, Point2, Triangulation};

use crate::error::{Error, Result};
use crate::poly::C64;
use crate::projective::ProjectivePoint;

/// FS edge length of the level-0 icosahedron on `CP^1`.
pub const ICOSAHEDRON_EDGE: f64 = 0.553_574_358_897_045_3;

/// `[u:v] ↦ (2 Re(u v̄), 2 Im(u v̄), |u|² − |v|²)` on the unit sphere.
pub fn to_sphere(b: &ProjectivePoint) -> Vector3<f64> {
    let c = b.coords();
    let (u, v) = (c[0], c[1]);
    let uv = u * v.conj();
    Vector3::new(2.0 * uv.re, 2.0 * uv.im, u.norm_sqr() - v.norm_sqr())
}

/// Inverse of [`to_sphere`] with a canonical phase.
pub fn from_sphere(x: &Vector3<f64>) -> ProjectivePoint {
    let x = x.normalize();
    let (u, v) = if x.z >= 0.0 {
        let u = ((1.0 + x.z) / 2.0).sqrt();
        (C64::new(u, 0.0), C64::new(x.x, -x.y) / (2.0 * u))
    } else {
        let v = ((1.0 - x.z) / 2.0).sqrt();
        (C64::new(x.x, x.y) / (2.0 * v), C64::new(v, 0.0))
    };
    ProjectivePoint::new(vec![u, v]).expect("nonzero")
}

/// Base-space FS distance between two unit vectors of the sphere model.
pub fn sphere_distance(a: &Vector3<f64>, b: &Vector3<f64>) -> f64 {
    0.5 * a.cross(b).norm().atan2(a.dot(b))
}

/// Point at FS distance `rho` from `center` in direction `angle`, measured
/// from an arbitrary but fixed tangent reference.
pub fn offset_point(center: &Vector3<f64>, rho: f64, angle: f64) -> Vector3<f64> {
    let (e1, e2) = tangent_basis(center);
    let dir = e1 * angle.cos() + e2 * angle.sin();
    center * (2.0 * rho).cos() + dir * (2.0 * rho).sin()
}

pub fn tangent_basis(c: &Vector3<f64>) -> (Vector3<f64>, Vector3<f64>) {
    let helper = if c.x.abs() < 0.9 { Vector3::x() } else { Vector3::y() };
    let e1 = (helper - c * c.dot(&helper)).normalize();
    let e2 = c.cross(&e1);
    (e1, e2)
}

/// Vertices and faces of the icosahedron subdivided `level` times.
pub fn icosphere(level: usize) -> (Vec<Vector3<f64>>, Vec<[usize; 3]>) {
    let p = (1.0 + 5f64.sqrt()) / 2.0;
    let mut verts: Vec<Vector3<f64>> = [
        (-1.0, p, 0.0),
        (1.0, p, 0.0),
        (-1.0, -p, 0.0),
        (1.0, -p, 0.0),
        (0.0, -1.0, p),
        (0.0, 1.0, p),
        (0.0, -1.0, -p),
        (0.0, 1.0, -p),
        (p, 0.0, -1.0),
        (p, 0.0, 1.0),
        (-p, 0.0, -1.0),
        (-p, 0.0, 1.0),
    ]
    .iter()
    .map(|&(x, y, z)| Vector3::new(x, y, z).normalize())
    .collect();
    let mut faces: Vec<[usize; 3]> = vec![
        [0, 11, 5],
        [0, 5, 1],
        [0, 1, 7],
        [0, 7, 10],
        [0, 10, 11],
        [1, 5, 9],
        [5, 11, 4],
        [11, 10, 2],
        [10, 7, 6],
        [7, 1, 8],
        [3, 9, 4],
        [3, 4, 2],
        [3, 2, 6],
        [3, 6, 8],
        [3, 8, 9],
        [4, 9, 5],
        [2, 4, 11],
        [6, 2, 10],
        [8, 6, 7],
        [9, 8, 1],
    ];
    for _ in 0..level {
        let mut mid: HashMap<(usize, usize), usize> = HashMap::new();
        let mut next = Vec::with_capacity(faces.len() * 4);
        let mut midpoint = |a: usize, b: usize, verts: &mut Vec<Vector3<f64>>| -> usize {
            let key = (a.min(b), a.max(b));
            *mid.entry(key).or_insert_with(|| {
                verts.push((verts[a] + verts[b]).normalize());
                verts.len() - 1
            })
        };
        for f in &faces {
            let ab = midpoint(f[0], f[1], &mut verts);
            let bc = midpoint(f[1], f[2], &mut verts);
            let ca = midpoint(f[2], f[0], &mut verts);
            next.push([f[0], ab, ca]);
            next.push([f[1], bc, ab]);
            next.push([f[2], ca, bc]);
            next.push([ab, bc, ca]);
        }
        faces = next;
    }
    (verts, faces)
}

struct Indexed {
    pos: Point2<f64>,
    idx: usize,
}

impl HasPosition for Indexed {
    type Scalar = f64;
    fn position(&self) -> Point2<f64> {
        self.pos
    }
}

/// Delaunay triangulation of points on the unit sphere (their convex hull),
/// with faces oriented outward.
///
/// The points are projected stereographically from `points[pole]`; circles
/// map to circles, so the planar Delaunay triangulation of the projection
/// together with the fan from the pole to the planar hull is the spherical
/// one.
pub fn spherical_delaunay(points: &[Vector3<f64>], pole: usize) -> Result<Vec<[usize; 3]>> {
    let np = points[pole].normalize();
    let rot = Rotation3::rotation_between(&np, &Vector3::z()).unwrap_or_else(|| {
        Rotation3::from_axis_angle(&Unit::new_normalize(Vector3::x()), std::f64::consts::PI)
    });
    let projected: Vec<Indexed> = points
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != pole)
        .map(|(i, p)| {
            let q = rot * p.normalize();
            let s = 1.0 - q.z;
            Indexed { pos: Point2::new(q.x / s, q.y / s), idx: i }
        })
        .collect();
    let expected = projected.len();
    let tri: DelaunayTriangulation<Indexed> =
        DelaunayTriangulation::bulk_load_stable(projected).map_err(|e| Error::TopologyMismatch(format!("base triangulation failed: {e:?}")))?;
    if tri.num_vertices() != expected {
        return Err(Error::TopologyMismatch("coincident base points".into()));
    }
    let orient = |f: [usize; 3]| -> [usize; 3] {
        let (a, b, c) = (points[f[0]], points[f[1]], points[f[2]]);
        if a.dot(&(b - a).cross(&(c - a))) >= 0.0 {
            f
        } else {
            [f[0], f[2], f[1]]
        }
    };
    let mut faces: Vec<[usize; 3]> = tri
        .inner_faces()
        .map(|f| {
            let v = f.vertices();
            orient([v[0].data().idx, v[1].data().idx, v[2].data().idx])
        })
        .collect();
    for e in tri.convex_hull() {
        faces.push(orient([e.from().data().idx, e.to().data().idx, pole]));
    }
    Ok(faces)
}
