//! Gaussian curvature of the zero curve, analytically from jets of the
//! section and discretely from angle defects.

use serde::{Deserialize, Serialize};

use crate::ensemble::{eval_jet, JetFrame, KostlanSection};
use crate::error::{Error, Result};
use crate::surface::TriMesh;
use crate::zeroset::CurveMesh;

use super::metric::{face_areas, heron};

/// Holomorphic sectional curvature of `CP^n` in computational units.
pub const AMBIENT_CURVATURE: f64 = 4.0;

/// Gradients below this norm make the tangent line ill-defined.
pub const SINGULAR_GRADIENT: f64 = 1e-10;

/// Curvature at one mesh vertex by both routes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvatureSample {
    pub vertex: usize,
    pub k_analytic: f64,
    pub k_discrete: f64,
    pub dual_area: f64,
}

/// Gaussian curvature of `Z(s)` at the jet's point (which must lie on it).
///
/// The tangent line is `ξ = (g_2, −g_1)/|g|` for the gradient row
/// `g = ∇s`. The second fundamental form is `σ(ξ, ξ) = −(ξᵀ∇²s ξ)/‖∇s‖²`
/// times the normal `ḡ`, so `|σ(ξ, ξ)| = |ξᵀ∇²s ξ|/|g|`, and the Gauss
/// equation for a complex curve in a Kähler surface of holomorphic
/// sectional curvature 4 reads `K = 4 − 2|σ(ξ, ξ)|²`.
pub fn gauss_curvature_analytic(jet: &JetFrame) -> Result<f64> {
    if jet.grad.len() != 2 {
        return Err(Error::InvalidParameter("analytic curvature needs a jet on CP^2".into()));
    }
    let g = &jet.grad;
    let gn = (g[0].norm_sqr() + g[1].norm_sqr()).sqrt();
    if gn < SINGULAR_GRADIENT {
        return Err(Error::NearSingularGradient(gn));
    }
    let xi = [g[1] / gn, -g[0] / gn];
    let h = &jet.hess;
    let q = xi[0] * xi[0] * h[(0, 0)] + xi[0] * xi[1] * (h[(0, 1)] + h[(1, 0)]) + xi[1] * xi[1] * h[(1, 1)];
    Ok(AMBIENT_CURVATURE - 2.0 * q.norm_sqr() / (gn * gn))
}

/// Angle at corner `k` of a triangle whose side opposite corner `k` is
/// `l[k]` (half-angle formula, accurate for thin triangles).
fn corner_angle(l: [f64; 3], k: usize) -> f64 {
    let s = 0.5 * (l[0] + l[1] + l[2]);
    let (a, b, c) = (l[k], l[(k + 1) % 3], l[(k + 2) % 3]);
    2.0 * ((s - b).max(0.0) * (s - c).max(0.0)).sqrt().atan2((s * (s - a)).max(0.0).sqrt())
}

/// Interior angle at each corner of every face, from the edge lengths.
pub fn corner_angles(tri: &TriMesh) -> Vec<[f64; 3]> {
    (0..tri.faces.len())
        .map(|f| {
            let l = tri.face_lengths(f);
            [corner_angle(l, 0), corner_angle(l, 1), corner_angle(l, 2)]
        })
        .collect()
}

/// `2π − Σ(incident angles)` at every vertex.
pub fn angle_defects(tri: &TriMesh) -> Vec<f64> {
    let mut sum = vec![0.0; tri.n_vertices];
    for (f, ang) in tri.faces.iter().zip(corner_angles(tri)) {
        for k in 0..3 {
            sum[f[k]] += ang[k];
        }
    }
    sum.into_iter().map(|s| 2.0 * std::f64::consts::PI - s).collect()
}

/// Barycentric dual areas (a third of each incident face).
pub fn dual_areas(tri: &TriMesh) -> Result<Vec<f64>> {
    let mut out = vec![0.0; tri.n_vertices];
    for (f, a) in tri.faces.iter().zip(face_areas(tri)?) {
        for &v in f {
            out[v] += a / 3.0;
        }
    }
    Ok(out)
}

/// Angle defect over barycentric dual area at one vertex.
pub fn gauss_curvature_discrete(tri: &TriMesh, vertex: usize) -> Result<f64> {
    let mut angle = 0.0;
    let mut area = 0.0;
    for (f, face) in tri.faces.iter().enumerate() {
        if let Some(k) = face.iter().position(|&v| v == vertex) {
            let l = tri.face_lengths(f);
            area += heron(l).ok_or(Error::DegenerateFace { face: f })? / 3.0;
            angle += corner_angle(l, k);
        }
    }
    Ok((2.0 * std::f64::consts::PI - angle) / area)
}

/// Both curvature routes at every vertex.
pub fn curvature_samples(s: &KostlanSection, mesh: &CurveMesh) -> Result<Vec<CurvatureSample>> {
    let defects = angle_defects(&mesh.surface);
    let areas = dual_areas(&mesh.surface)?;
    mesh.vertices
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let k = gauss_curvature_analytic(&eval_jet(s, &v.point))?;
            Ok(CurvatureSample { vertex: i, k_analytic: k, k_discrete: defects[i] / areas[i], dual_area: areas[i] })
        })
        .collect()
}

/// `Σ K_discrete·(dual area) = Σ angle defects`, which is `2πχ` exactly.
pub fn total_curvature(mesh: &CurveMesh) -> f64 {
    angle_defects(&mesh.surface).iter().sum()
}

/// `Σ K_analytic·(dual area)`, a quadrature of `∫ K dA`.
pub fn total_curvature_analytic(s: &KostlanSection, mesh: &CurveMesh) -> Result<f64> {
    Ok(curvature_samples(s, mesh)?.iter().map(|c| c.k_analytic * c.dual_area).sum())
}
