//! Branch points of the projection `Z(s) → CP^1`.
//!
//! A branch point is a solution of `G = ∂_t G = 0` in frame coordinates
//! `(t, u, v)`. It is simple when `∂_t² G ≠ 0` (exactly two roots collide)
//! and the curve is smooth there (`∇G ≠ 0`).

use crate::ensemble::KostlanSection;
use crate::error::{Error, Result};
use crate::poly::C64;
use crate::projective::{fs_distance_raw, ProjectivePoint};

use super::pencil::Pencil;
use super::sphere::{from_sphere, icosphere};

#[derive(Debug, Clone, PartialEq)]
pub struct BranchOptions {
    /// Relative Newton step size at which a branch point counts as found.
    pub tol: f64,
    /// Smallest admissible FS distance between two branch values.
    pub min_separation: f64,
    /// `‖∇s‖ < singular_tol·d·sup|s|` at a critical point flags a singular
    /// curve.
    pub singular_tol: f64,
    /// Finest icosphere level used for Newton seeds.
    pub max_level: usize,
}

impl Default for BranchOptions {
    fn default() -> Self {
        Self { tol: 1e-13, min_separation: 1e-4, singular_tol: 1e-6, max_level: 5 }
    }
}

/// One simple branch point.
#[derive(Debug, Clone)]
pub struct BranchPoint {
    /// Branch value on `CP^1`.
    pub base: ProjectivePoint,
    /// The ramification point on the curve.
    pub point: ProjectivePoint,
    pub multiplicity: u32,
    /// Sheets (in the labelling of a built mesh) that meet here.
    pub sheets: Option<(usize, usize)>,
}

#[derive(Debug, Clone, Default)]
pub struct BranchData {
    pub points: Vec<BranchPoint>,
}

impl BranchData {
    pub fn count(&self) -> usize {
        self.points.len()
    }

    /// Smallest FS distance between two branch values (`∞` if fewer than two).
    pub fn min_separation(&self) -> f64 {
        let mut best = f64::INFINITY;
        for i in 0..self.points.len() {
            for j in 0..i {
                best = best.min(self.points[i].base.distance(&self.points[j].base));
            }
        }
        best
    }
}

#[derive(Clone, Copy)]
enum Chart {
    /// base `[1 : w]`, frame coordinates `(t, 1, w)`
    First,
    /// base `[w : 1]`, frame coordinates `(t, w, 1)`
    Second,
}

impl Chart {
    fn coords(self, t: C64, w: C64) -> [C64; 3] {
        let one = C64::new(1.0, 0.0);
        match self {
            Chart::First => [t, one, w],
            Chart::Second => [t, w, one],
        }
    }
    fn w_index(self) -> usize {
        match self {
            Chart::First => 2,
            Chart::Second => 1,
        }
    }
    fn flip(self) -> Self {
        match self {
            Chart::First => Chart::Second,
            Chart::Second => Chart::First,
        }
    }
}

/// Newton's method on `(G, ∂_t G)`; returns frame coordinates of the
/// critical point.
fn newton_branch(pencil: &Pencil, mut t: C64, mut w: C64, mut chart: Chart, tol: f64) -> Option<[C64; 3]> {
    for _ in 0..80 {
        if w.norm() > 1.5 {
            t /= w;
            w = w.inv();
            chart = chart.flip();
        }
        let y = chart.coords(t, w);
        let (g, grad, hess) = pencil.g.eval_jet2(&y);
        let wi = chart.w_index();
        let (gt, gw, gtt, gtw) = (grad[0], grad[wi], hess[(0, 0)], hess[(0, wi)]);
        let det = gt * gtw - gw * gtt;
        if det.norm() == 0.0 || !det.is_finite() {
            return None;
        }
        let dt = (g * gtw - gw * gt) / det;
        let dw = (gt * gt - g * gtt) / det;
        // damp wild steps so the iterate stays in the chart's useful range
        let step = dt.norm().max(dw.norm());
        let limit = 0.5 * (1.0 + t.norm());
        let damp = if step > limit { limit / step } else { 1.0 };
        t -= dt * damp;
        w -= dw * damp;
        if damp == 1.0 && dt.norm() <= tol * (1.0 + t.norm()) && dw.norm() <= tol * (1.0 + w.norm()) {
            return Some(chart.coords(t, w));
        }
    }
    None
}

fn norm3(y: &[C64]) -> f64 {
    y.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

/// Locate the branch values by Newton iteration seeded at icosphere
/// vertices (levels 3 up to `max_level`) from the closest pair of fiber
/// roots.
pub fn detect_branch_points(s: &KostlanSection, pencil: &Pencil, tol: f64) -> Result<BranchData> {
    detect_branch_points_with(s, pencil, &BranchOptions { tol, ..BranchOptions::default() })
}

pub fn detect_branch_points_with(s: &KostlanSection, pencil: &Pencil, opts: &BranchOptions) -> Result<BranchData> {
    let d = s.d;
    let expected = d * (d.saturating_sub(1));
    let mut found: Vec<BranchPoint> = Vec::new();
    if d < 2 {
        return Ok(BranchData { points: found });
    }
    for level in 3..=opts.max_level.max(3) {
        let (verts, _) = icosphere(level);
        for v in &verts {
            let b = from_sphere(v);
            let (u0, v0) = (b.coords()[0], b.coords()[1]);
            let (chart, w) = if u0.norm() >= v0.norm() { (Chart::First, v0 / u0) } else { (Chart::Second, u0 / v0) };
            let rep = chart.coords(C64::new(0.0, 0.0), w);
            let base = [rep[1], rep[2]];
            let roots = pencil.fiber_t_roots(&base);
            if roots.len() < 2 {
                continue;
            }
            let mut best = (f64::INFINITY, 0, 1);
            for i in 0..roots.len() {
                for j in 0..i {
                    let dist = pencil.lift_distance(&base, roots[i], &base, roots[j]);
                    if dist < best.0 {
                        best = (dist, i, j);
                    }
                }
            }
            let t0 = (roots[best.1] + roots[best.2]) * 0.5;
            let Some(y) = newton_branch(pencil, t0, w, chart, opts.tol) else { continue };
            let scale = norm3(&y);
            let yn: Vec<C64> = y.iter().map(|c| c / scale).collect();
            if found.iter().any(|f| fs_distance_raw(&pencil_coords(pencil, &f.point), &yn) < 1e-7) {
                continue;
            }
            let (_, grad) = pencil.g.eval_grad(&yn);
            if norm3(&grad) < opts.singular_tol * d as f64 * pencil.sup {
                return Err(Error::MultiplicityAnomaly(format!("singular point of the curve over [{:.6}:{:.6}]", yn[1], yn[2])));
            }
            let base_pt = ProjectivePoint::new(vec![yn[1], yn[2]]).expect("critical point is not the center");
            let point = pencil.lift(yn[0], &[yn[1], yn[2]]);
            let fiber = pencil.fiber_t_roots(&[yn[1], yn[2]]);
            let near = fiber.iter().filter(|&&t| fs_distance_raw(&[t, yn[1], yn[2]], &yn) < 1e-3).count();
            if near > 2 {
                return Err(Error::MultiplicityAnomaly(format!("{near} roots collide over [{:.6}:{:.6}]", yn[1], yn[2])));
            }
            found.push(BranchPoint { base: base_pt, point, multiplicity: 2, sheets: None });
        }
        if found.len() >= expected {
            break;
        }
    }
    if found.len() != expected {
        return Err(Error::MultiplicityAnomaly(format!("found {} branch values, expected {expected}", found.len())));
    }
    Ok(BranchData { points: found })
}

fn pencil_coords(pencil: &Pencil, p: &ProjectivePoint) -> Vec<C64> {
    let z = nalgebra::DVector::from_column_slice(p.coords());
    (pencil.frame.adjoint() * z).iter().copied().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensemble::{sample_section, SamplingMode};
    use crate::poly::HomogeneousPoly;
    use crate::zeroset::pencil::choose_pencil;
    use nalgebra::DMatrix;

    #[test]
    fn conic_has_two_branch_values() {
        let p = HomogeneousPoly::from_terms(2, 2, &[(&[2, 0, 0], C64::new(1.0, 0.0)), (&[0, 1, 1], C64::new(-1.0, 0.0))]);
        let s = KostlanSection::from_polynomial(&p);
        let pencil = Pencil::from_frame(&s, DMatrix::identity(3, 3)).unwrap();
        let b = detect_branch_points(&s, &pencil, 1e-13).unwrap();
        assert_eq!(b.count(), 2);
        let want = [ProjectivePoint::from_real(&[1.0, 0.0]).unwrap(), ProjectivePoint::from_real(&[0.0, 1.0]).unwrap()];
        for w in &want {
            assert!(b.points.iter().any(|q| q.base.distance(w) < 1e-9));
        }
    }

    #[test]
    fn random_cubic_has_six() {
        let s = sample_section(2, 3, 1, 42, SamplingMode::Sphere).unwrap();
        let p = choose_pencil(&s, 1).unwrap();
        assert_eq!(p.branch.unwrap().count(), 6);
    }
}
