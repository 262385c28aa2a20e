//! Roots of univariate complex polynomials.
//!
//! The main solver is Aberth-Ehrlich simultaneous iteration followed by a
//! Newton polish; if it fails to converge the eigenvalues of the companion
//! matrix are used instead.

use nalgebra::{DMatrix, Schur};

use crate::poly::C64;

fn horner_with_derivative(c: &[C64], z: C64) -> (C64, C64) {
    let mut p = C64::new(0.0, 0.0);
    let mut dp = C64::new(0.0, 0.0);
    for &a in c.iter().rev() {
        dp = dp * z + p;
        p = p * z + a;
    }
    (p, dp)
}

fn trim(coeffs: &[C64]) -> &[C64] {
    let scale = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let mut m = coeffs.len();
    while m > 1 && coeffs[m - 1].norm() <= 1e-300 * scale.max(1e-300) {
        m -= 1;
    }
    &coeffs[..m]
}

/// All roots of `Σ c_k t^k` (coefficients in ascending order).
///
/// Exactly zero leading coefficients are dropped, so the output length is
/// the effective degree.
pub fn polynomial_roots(coeffs: &[C64]) -> Vec<C64> {
    let c = trim(coeffs);
    let m = c.len().saturating_sub(1);
    if m == 0 {
        return Vec::new();
    }
    if let Some(r) = aberth(c) {
        return r;
    }
    companion_roots(c)
}

fn aberth(c: &[C64]) -> Option<Vec<C64>> {
    let m = c.len() - 1;
    let lead = c[m];
    // Initial guesses on a circle whose radius matches the geometric mean
    // of the root moduli, slightly rotated to avoid symmetric stagnation.
    let r0 = (c[0].norm() / lead.norm()).powf(1.0 / m as f64);
    let r0 = if r0.is_finite() && r0 > 0.0 { r0 } else { 1.0 };
    let mut z: Vec<C64> = (0..m)
        .map(|k| C64::from_polar(r0, 2.0 * std::f64::consts::PI * (k as f64 + 0.25) / m as f64 + 0.4))
        .collect();
    let mut done = vec![false; m];
    for _ in 0..500 {
        let mut all = true;
        for i in 0..m {
            if done[i] {
                continue;
            }
            let (p, dp) = horner_with_derivative(c, z[i]);
            if p.norm() == 0.0 {
                done[i] = true;
                continue;
            }
            let ratio = p / dp;
            let s: C64 = (0..m).filter(|&j| j != i).map(|j| C64::new(1.0, 0.0) / (z[i] - z[j])).sum();
            let w = ratio / (C64::new(1.0, 0.0) - ratio * s);
            if !w.is_finite() {
                return None;
            }
            z[i] -= w;
            if w.norm() <= 4.0 * f64::EPSILON * z[i].norm().max(1e-300) {
                done[i] = true;
            } else {
                all = false;
            }
        }
        if all {
            for zi in &mut z {
                polish(c, zi);
            }
            return Some(z);
        }
    }
    None
}

fn polish(c: &[C64], z: &mut C64) {
    for _ in 0..3 {
        let (p, dp) = horner_with_derivative(c, *z);
        if dp.norm() == 0.0 {
            return;
        }
        let step = p / dp;
        let cand = *z - step;
        if horner_with_derivative(c, cand).0.norm() < p.norm() {
            *z = cand;
        } else {
            return;
        }
    }
}

fn companion_roots(c: &[C64]) -> Vec<C64> {
    let m = c.len() - 1;
    let lead = c[m];
    let mut a = DMatrix::from_element(m, m, C64::new(0.0, 0.0));
    for i in 1..m {
        a[(i, i - 1)] = C64::new(1.0, 0.0);
    }
    for i in 0..m {
        a[(i, m - 1)] = -c[i] / lead;
    }
    let ev = Schur::try_new(a.clone(), 1e-15, 10_000)
        .and_then(|s| s.eigenvalues())
        .unwrap_or_else(|| a.diagonal());
    let mut out: Vec<C64> = ev.iter().copied().collect();
    for z in &mut out {
        polish(c, z);
    }
    out
}
