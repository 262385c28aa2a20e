//! Distance from a section to the discriminant (sections with a singular
//! zero), from the pointwise value and gradient.

use serde::{Deserialize, Serialize};

use nalgebra::{DMatrix, DVector};

use crate::ensemble::{eval_jet, KostlanSection};
use crate::error::Result;
use crate::poly::C64;
use crate::projective::{compass_minimize, quasi_uniform_points, ProjectivePoint};

/// Gauss-Newton iterations of [`singular_polish`].
const POLISH_STEPS: usize = 60;

/// Number of grid minima refined by pattern search.
pub const REFINED_STARTS: usize = 16;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscriminantDistance {
    pub value: f64,
    /// Size of the dropped `O(1/d)` correction relative to `value`.
    pub relative_uncertainty: f64,
    pub argmin: Vec<C64>,
}

/// `√(|s(x)|²/dⁿ + σ_min(∇s(x))²/d^{n+1})` at a point.
///
/// For a line bundle the covariant gradient at a unit representative `Z` is
/// the horizontal part of the affine gradient, whose norm is
/// `√(‖∇P‖² − d²|P|²)` by Euler's identity `∇P·Z = d·P`.
pub fn discriminant_objective(s: &KostlanSection, x: &ProjectivePoint) -> f64 {
    let (v, g) = s.polynomial().eval_grad(x.coords());
    let d = s.d as f64;
    let n = s.n as i32;
    let g2 = g.iter().map(|c| c.norm_sqr()).sum::<f64>();
    let sigma2 = (g2 - d * d * v.norm_sqr()).max(0.0);
    (v.norm_sqr() / d.powi(n) + sigma2 / d.powi(n + 1)).sqrt()
}

/// Gauss-Newton on the overdetermined system `s = 0, ∇s = 0` in normal
/// coordinates at the current iterate, using the pseudo-inverse of
/// `[∇s; ∇²s]` so that degenerate singular points (cusps) still attract.
///
/// Pattern search alone creeps along the curved valley of the objective
/// near a singular point; this converges onto the point itself. Returns the
/// iterate with the smallest objective.
pub fn singular_polish(s: &KostlanSection, start: &ProjectivePoint) -> (ProjectivePoint, f64) {
    let n = s.n;
    let mut x = start.clone();
    let mut best = (x.clone(), discriminant_objective(s, &x));
    for _ in 0..POLISH_STEPS {
        let jet = eval_jet(s, &x);
        let mut rhs = DVector::from_element(n + 1, C64::new(0.0, 0.0));
        let mut jac = DMatrix::from_element(n + 1, n, C64::new(0.0, 0.0));
        rhs[0] = -jet.value;
        for i in 0..n {
            rhs[i + 1] = -jet.grad[i];
            jac[(0, i)] = jet.grad[i];
            for j in 0..n {
                jac[(i + 1, j)] = jet.hess[(i, j)];
            }
        }
        let scale = jac.iter().map(|c| c.norm()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
        let Ok(step) = jac.svd(true, true).solve(&rhs, 1e-10 * scale) else { break };
        if step.iter().any(|c| !c.is_finite()) || step.norm() > 1.0 {
            break;
        }
        x = x.chart_point(&jet.frame, step.as_slice());
        let f = discriminant_objective(s, &x);
        if f < best.1 {
            best = (x.clone(), f);
        }
        if step.norm() < 1e-15 {
            break;
        }
    }
    best
}

/// `π^{n/2} · min_x` of [`discriminant_objective`] over `grid` quasi-uniform
/// points, the best [`REFINED_STARTS`] refined with at most `refine_steps`
/// pattern-search evaluations each and then by [`singular_polish`].
pub fn distance_to_discriminant_report(s: &KostlanSection, grid: usize, refine_steps: usize) -> Result<DiscriminantDistance> {
    s.require_line_bundle()?;
    let pts = quasi_uniform_points(s.n, grid.max(1));
    let mut vals: Vec<(f64, usize)> = pts.iter().enumerate().map(|(i, p)| (discriminant_objective(s, p), i)).collect();
    vals.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let n = s.n as f64;
    let vol = std::f64::consts::PI.powf(n) / (1..=s.n).map(|i| i as f64).product::<f64>();
    let spacing = (vol / pts.len() as f64).powf(1.0 / (2.0 * n));
    let mut best = (vals[0].0, pts[vals[0].1].clone());
    for &(_, i) in vals.iter().take(REFINED_STARTS) {
        let (p, f) = compass_minimize(|p| discriminant_objective(s, p), &pts[i], 0.5 * spacing, 1e-10, refine_steps);
        let (p, f) = match singular_polish(s, &p) {
            (q, g) if g < f => (q, g),
            _ => (p, f),
        };
        if f < best.0 {
            best = (f, p);
        }
    }
    Ok(DiscriminantDistance {
        value: std::f64::consts::PI.powf(n / 2.0) * best.0,
        relative_uncertainty: 1.0 / s.d as f64,
        argmin: best.1.coords().to_vec(),
    })
}

pub fn distance_to_discriminant(s: &KostlanSection, grid: usize, refine_steps: usize) -> Result<f64> {
    Ok(distance_to_discriminant_report(s, grid, refine_steps)?.value)
}
