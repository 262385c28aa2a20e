//! The Bergman kernel of `O(d)` on `CP^n` and its Bargmann-Fock scaling
//! limit.
//!
//! With the mass-one Fubini-Study volume the weighted monomials are
//! orthonormal, so the kernel is `E_d(Z, W) = C(n+d, n)·⟨Z, W⟩^d` for
//! unit representatives. Near a point `x`, choosing representatives whose
//! `x`-component is real and positive is exactly the radial parallel
//! transport trivialization.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::ensemble::{binomial, kostlan_weight};
use crate::error::{Error, Result};
use crate::poly::{monomial_exponents, C64};
use crate::projective::{herm, unitary_frame, ProjectivePoint};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelMethod {
    BasisSum,
    ClosedForm,
}

/// `E_d(z, w)` together with the points and degree it was computed for.
#[derive(Debug, Clone)]
pub struct KernelValue {
    pub value: C64,
    pub points: (ProjectivePoint, ProjectivePoint),
    pub degree: usize,
}

fn monomial(z: &[C64], e: &[u32]) -> C64 {
    z.iter().zip(e).map(|(zi, &k)| zi.powu(k)).product()
}

pub fn bergman_kernel(n: usize, d: usize, z: &ProjectivePoint, w: &ProjectivePoint, method: KernelMethod) -> Result<KernelValue> {
    if z.dim() != n || w.dim() != n {
        return Err(Error::InvalidParameter(format!("points must lie in CP^{n}")));
    }
    let value = match method {
        KernelMethod::ClosedForm => herm(z.coords(), w.coords()).powu(d as u32) * binomial((n + d) as u64, n as u64) as f64,
        KernelMethod::BasisSum => monomial_exponents(n, d)
            .iter()
            .map(|e| {
                let wt = kostlan_weight(e, n, d).expect("valid exponent");
                monomial(z.coords(), e) * monomial(w.coords(), e).conj() * (wt * wt)
            })
            .sum(),
    };
    Ok(KernelValue { value, points: (z.clone(), w.clone()), degree: d })
}

/// `exp(−(π/2)(‖z‖² + ‖w‖² − 2⟨z, w⟩))` with `⟨z, w⟩ = Σ z_i w̄_i`.
pub fn bargmann_fock(z: &[C64], w: &[C64]) -> C64 {
    let zz: f64 = z.iter().map(|a| a.norm_sqr()).sum();
    let ww: f64 = w.iter().map(|a| a.norm_sqr()).sum();
    let zw = herm(z, w);
    (-(std::f64::consts::FRAC_PI_2) * (C64::new(zz + ww, 0.0) - zw * 2.0)).exp()
}

/// A pair `(u, v)` of rescaled chart points, `‖u‖, ‖v‖ ≤ 1`.
pub type RescaledPair = (Vec<C64>, Vec<C64>);

/// Deterministic pairs of points in the closed unit ball of `ℂ^n`.
///
/// The first pair is `(0, 0)`, so on-diagonal behaviour is always probed.
pub fn rescaled_sample_pairs(n: usize, count: usize, seed: u64) -> Vec<RescaledPair> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ball = |rng: &mut ChaCha8Rng| -> Vec<C64> {
        let v: Vec<C64> = (0..n).map(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))).collect();
        let nv = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        let radius: f64 = rng.random::<f64>().powf(1.0 / (2 * n) as f64);
        v.into_iter().map(|a| a * (radius / nv)).collect()
    };
    let mut out = vec![(vec![C64::new(0.0, 0.0); n], vec![C64::new(0.0, 0.0); n])];
    while out.len() < count {
        let u = ball(&mut rng);
        let v = ball(&mut rng);
        out.push((u, v));
    }
    out.truncate(count);
    out
}

/// Point of `CP^n` at normalized chart position `z` around `x`, with the
/// representative normalized so its `x`-component is real positive.
fn transported_point(frame: &DMatrix<C64>, x: &ProjectivePoint, z: &[C64]) -> ProjectivePoint {
    let s = std::f64::consts::PI.sqrt();
    let zeta: Vec<C64> = z.iter().map(|a| a * s).collect();
    let p = x.exp_point(frame, &zeta);
    let phase = herm(p.coords(), x.coords());
    let unit = phase / phase.norm();
    ProjectivePoint::new(p.coords().iter().map(|c| c * unit.conj()).collect()).expect("nonzero")
}

fn scaled_kernel(n: usize, d: usize, frame: &DMatrix<C64>, x: &ProjectivePoint, z: &[C64], w: &[C64]) -> C64 {
    let pz = transported_point(frame, x, z);
    let pw = transported_point(frame, x, w);
    let e = bergman_kernel(n, d, &pz, &pw, KernelMethod::ClosedForm).expect("dimensions agree").value;
    let nf: f64 = (1..=n).map(|i| i as f64).product();
    e * (nf / (d as f64).powi(n as i32))
}

/// Worst deviation of the rescaled kernel from the Bargmann-Fock kernel.
///
/// Chart positions are in normalized units (line area 1) at geodesic normal coordinates around
/// `x`, `z = u/√d` for each sample pair `(u, v)`. Order `k = 0` compares
/// `n!·d^{-n}·E_d(z, w)` with `𝒫(u, v)`; order `k = 1` compares their
/// derivatives with respect to the real coordinates of `u`, both by central
/// differences with step `1/64` in `u` (that is `d^{-1/2}/64` in `z`).
pub fn rescaled_error(n: usize, d: usize, x: &ProjectivePoint, k: usize, samples: &[RescaledPair]) -> Result<f64> {
    if d < 1 || k > 1 || x.dim() != n {
        return Err(Error::InvalidParameter(format!("need d ≥ 1, k ≤ 1 and x in CP^{n}")));
    }
    let frame = unitary_frame(x.coords());
    let sd = (d as f64).sqrt();
    let diff = |u: &[C64], v: &[C64]| -> C64 {
        let z: Vec<C64> = u.iter().map(|a| a / sd).collect();
        let w: Vec<C64> = v.iter().map(|a| a / sd).collect();
        scaled_kernel(n, d, &frame, x, &z, &w) - bargmann_fock(u, v)
    };
    let h = 1.0 / 64.0;
    let mut worst: f64 = 0.0;
    for (u, v) in samples {
        if u.len() != n || v.len() != n {
            return Err(Error::InvalidParameter("sample dimension mismatch".into()));
        }
        if k == 0 {
            worst = worst.max(diff(u, v).norm());
            continue;
        }
        for i in 0..n {
            for dir in [C64::new(1.0, 0.0), C64::new(0.0, 1.0)] {
                let mut up = u.clone();
                let mut um = u.clone();
                up[i] += dir * h;
                um[i] -= dir * h;
                let g = (diff(&up, v) - diff(&um, v)) / (2.0 * h);
                worst = worst.max(g.norm());
            }
        }
    }
    Ok(worst)
}
