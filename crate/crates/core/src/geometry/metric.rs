//! Distances, areas and the distance to rank-deficient maps.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::poly::C64;
use crate::projective::ProjectivePoint;
use crate::surface::TriMesh;
use crate::zeroset::CurveMesh;

/// `arccos |⟨p, q⟩|` (computational units, line diameter `π/2`).
pub fn fs_distance(p: &ProjectivePoint, q: &ProjectivePoint) -> f64 {
    p.distance(q)
}

/// Area of a triangle from its side lengths (Kahan's stable Heron form).
///
/// Returns `None` when the lengths violate the triangle inequality by more
/// than rounding.
pub fn heron(l: [f64; 3]) -> Option<f64> {
    let mut s = l;
    s.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let [a, b, c] = s;
    let slack = c - (a - b);
    if slack < -1e-12 * a {
        return None;
    }
    let prod = (a + (b + c)) * slack.max(0.0) * (c + (a - b)) * (a + (b - c));
    Some(0.25 * prod.max(0.0).sqrt())
}

pub fn face_areas(tri: &TriMesh) -> Result<Vec<f64>> {
    (0..tri.faces.len())
        .map(|f| heron(tri.face_lengths(f)).ok_or(Error::DegenerateFace { face: f }))
        .collect()
}

/// Total area from the edge lengths, computational units.
pub fn surface_area(tri: &TriMesh) -> Result<f64> {
    Ok(face_areas(tri)?.iter().sum())
}

pub fn area(mesh: &CurveMesh) -> Result<f64> {
    surface_area(&mesh.surface)
}

/// Smallest singular value of an `r × n` matrix with `r ≤ n`: its distance
/// (operator norm) to the maps that are not onto.
pub fn sigma_min_distance(a: &DMatrix<C64>) -> Result<f64> {
    if a.nrows() > a.ncols() || a.nrows() == 0 {
        return Err(Error::InvalidParameter(format!("need 1 ≤ r ≤ n, got a {}×{} matrix", a.nrows(), a.ncols())));
    }
    Ok(a.clone().svd(false, false).singular_values.min())
}
