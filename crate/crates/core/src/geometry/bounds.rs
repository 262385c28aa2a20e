//! Deterministic lower and upper bounds: implicit-function radii, the
//! injectivity and eigenvalue comparison bounds, and the predicted scaling
//! of each observable with the unspecified constants set to one.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Constants of the quantitative implicit function theorem.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GraphRadiusInputs {
    /// Lower bound on the distance from `Df(x)` to the singular maps.
    pub epsilon: f64,
    /// Bound on `‖Df‖`.
    pub c1: f64,
    /// Bound on `‖D²f‖`.
    pub c2: f64,
    /// `‖(D_{x₂} f(x))⁻¹‖`.
    pub m: f64,
    /// Bound on `‖D_{x₁} f‖` over the `δ`-ball.
    pub c: f64,
}

impl GraphRadiusInputs {
    pub fn new(epsilon: f64, c1: f64, c2: f64, m: f64, c: f64) -> Result<Self> {
        let all = [epsilon, c1, c2, m, c];
        if all.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
            return Err(Error::InvalidParameter(format!("graph radius inputs must be positive, got {all:?}")));
        }
        Ok(Self { epsilon, c1, c2, m, c })
    }

    /// Inputs whose `D_{x₁}` and inverse bounds are the derivative bounds
    /// themselves (`C = C₁`, `M = 1/ε`).
    pub fn from_derivative_bounds(epsilon: f64, c1: f64, c2: f64) -> Result<Self> {
        Self::new(epsilon, c1, c2, 1.0 / epsilon, c1)
    }
}

/// `(δ, δ′) = (ε²/(4·C₁·C₂), δ/(2·M·C))`.
pub fn graph_radius(inputs: &GraphRadiusInputs) -> (f64, f64) {
    let delta = inputs.epsilon * inputs.epsilon / (4.0 * inputs.c1 * inputs.c2);
    (delta, delta / (2.0 * inputs.m * inputs.c))
}

/// `min(π/√K_max, systole/2)`, dropping the curvature branch when
/// `K_max ≤ 0` and the systole branch when the systole is infinite.
pub fn inj_lower_bound(k_max: f64, systole: f64) -> f64 {
    let curv = if k_max > 0.0 { std::f64::consts::PI / k_max.sqrt() } else { f64::INFINITY };
    let syst = if systole.is_finite() { 0.5 * systole } else { f64::INFINITY };
    curv.min(syst)
}

/// `C^{1 + diam·√κ} · diam^{-2}` for Ricci curvature bounded below by `−κ`.
///
/// `n_dim` selects the dimensional constant `C`; the bound is stated with the
/// caller's `C`, so the dimension is recorded only for validation.
pub fn eig_lower_bound(diam: f64, kappa: f64, n_dim: usize, c: f64) -> Result<f64> {
    if !(diam > 0.0) || !(kappa >= 0.0) || !(c > 0.0 && c <= 1.0) || n_dim == 0 {
        return Err(Error::InvalidParameter(format!("need diam > 0, κ ≥ 0, 0 < C ≤ 1, n ≥ 1 (got {diam}, {kappa}, {c}, {n_dim})")));
    }
    Ok(c.powf(1.0 + diam * kappa.sqrt()) / (diam * diam))
}

/// Predicted scales in normalized units (line area 1), with every unspecified constant `C = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PredictedScales {
    pub n: usize,
    pub d: usize,
    pub r: usize,
    pub a_d: f64,
    /// Value used for every unspecified constant.
    pub constant: f64,
    /// `a_d · d^{-(3n+1)/2} / √log d`, the radius of the good balls.
    pub rho: f64,
    /// Systole scale, equal to `rho`.
    pub systole: f64,
    /// Explicit threshold `d^{-4}` (surfaces in `CP²`).
    pub systole_threshold: f64,
    /// `d^{3n+2} log²d / a_d²`.
    pub curvature: f64,
    /// Explicit threshold `d⁹` (surfaces in `CP²`).
    pub curvature_threshold: f64,
    /// `a_d / (d^{(3n+2)/2} log d)`.
    pub injectivity: f64,
    /// `E` in the eigenvalue bound `λ₁ ≥ exp(−E)`, with
    /// `E = d^{(3n+2+6r)/2} log d / a_d`; kept as an exponent because the
    /// bound itself underflows for moderate `d`.
    pub lambda1_exponent: f64,
    /// Explicit exponent `d⁷` of the threshold `exp(−d⁷)` (surfaces in `CP²`).
    pub lambda1_threshold_exponent: f64,
    /// `d^{3r}`.
    pub diameter: f64,
}

pub fn predicted_scales(n: usize, d: usize, a_d: f64, r: usize) -> Result<PredictedScales> {
    if d < 2 || !(a_d > 0.0 && a_d <= 1.0) || n == 0 || r == 0 || r > n {
        return Err(Error::InvalidParameter(format!("need d ≥ 2, 0 < a_d ≤ 1, 1 ≤ r ≤ n (got n={n}, d={d}, a_d={a_d}, r={r})")));
    }
    let df = d as f64;
    let nf = n as f64;
    let log = df.ln();
    let rho = a_d * df.powf(-(3.0 * nf + 1.0) / 2.0) / log.sqrt();
    Ok(PredictedScales {
        n,
        d,
        r,
        a_d,
        constant: 1.0,
        rho,
        systole: rho,
        systole_threshold: df.powi(-4),
        curvature: df.powf(3.0 * nf + 2.0) * log * log / (a_d * a_d),
        curvature_threshold: df.powi(9),
        injectivity: a_d / (df.powf((3.0 * nf + 2.0) / 2.0) * log),
        lambda1_exponent: df.powf((3.0 * nf + 2.0 + 6.0 * r as f64) / 2.0) * log / a_d,
        lambda1_threshold_exponent: df.powi(7),
        diameter: df.powi(3 * r as i32),
    })
}
