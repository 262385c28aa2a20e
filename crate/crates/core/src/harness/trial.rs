//! One Monte Carlo trial: sample, mesh, measure.

use serde::{Deserialize, Serialize};

use crate::ensemble::{eval_jet, pointwise_norms, sample_section, sup_norm_estimate, KostlanSection};
use crate::error::Result;
use crate::geometry::curvature::gauss_curvature_analytic;
use crate::geometry::{diameter, distance_to_discriminant, spectral_gap, systole};
use crate::zeroset::{build_mesh, choose_pencil, sheet_adjacency_bound};

use super::config::{ExperimentConfig, Observable};

/// Pattern-search evaluations per start for the discriminant distance.
pub const DISCRIMINANT_REFINE_STEPS: usize = 2000;

/// Outcome of one trial. Geometric quantities are in computational units;
/// unmeasured observables are `None`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub d: usize,
    pub trial: usize,
    pub seed: u64,
    /// Failure cause, `None` for a retained trial.
    pub failure: Option<String>,
    pub area: Option<f64>,
    pub chi: Option<i64>,
    pub vertices: Option<usize>,
    /// `∞` on a sphere.
    pub systole: Option<f64>,
    pub diameter: Option<f64>,
    pub lambda1: Option<f64>,
    pub max_abs_k: Option<f64>,
    /// Minimum of the analytic curvature (its negative part bounds Ricci).
    pub min_k: Option<f64>,
    pub min_sigma: Option<f64>,
    pub discriminant_distance: Option<f64>,
    pub sup0: Option<f64>,
    pub sup1: Option<f64>,
    pub sup2: Option<f64>,
    pub diameter_bound: Option<f64>,
    /// Wall-clock time, kept out of every output file.
    #[serde(skip)]
    pub runtime_ms: f64,
}

impl TrialRecord {
    fn empty(d: usize, trial: usize, seed: u64) -> Self {
        Self {
            d,
            trial,
            seed,
            failure: None,
            area: None,
            chi: None,
            vertices: None,
            systole: None,
            diameter: None,
            lambda1: None,
            max_abs_k: None,
            min_k: None,
            min_sigma: None,
            discriminant_distance: None,
            sup0: None,
            sup1: None,
            sup2: None,
            diameter_bound: None,
            runtime_ms: 0.0,
        }
    }

    pub fn retained(&self) -> bool {
        self.failure.is_none()
    }
}

/// SplitMix64 finalizer.
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of trial `trial` at degree `d`, derived from the master seed by a
/// counter so that it does not depend on scheduling or on the other degrees.
pub fn trial_seed(master: u64, d: usize, trial: usize) -> u64 {
    splitmix64(splitmix64(master ^ splitmix64(d as u64)).wrapping_add(trial as u64))
}

/// Sample and measure one section; errors are recorded, never propagated.
pub fn run_trial(cfg: &ExperimentConfig, d: usize, trial: usize) -> TrialRecord {
    let seed = trial_seed(cfg.seed, d, trial);
    let start = std::time::Instant::now();
    let mut rec = TrialRecord::empty(d, trial, seed);
    if let Err(e) = measure(cfg, &mut rec) {
        rec.failure = Some(e.to_string());
    }
    rec.runtime_ms = start.elapsed().as_secs_f64() * 1e3;
    rec
}

/// Measure a given section; `seed` drives the pencil choice.
pub fn observe_section(cfg: &ExperimentConfig, s: &KostlanSection, seed: u64) -> TrialRecord {
    let start = std::time::Instant::now();
    let mut rec = TrialRecord::empty(s.d, 0, seed);
    if let Err(e) = measure_section(cfg, s, &mut rec) {
        rec.failure = Some(e.to_string());
    }
    rec.runtime_ms = start.elapsed().as_secs_f64() * 1e3;
    rec
}

fn measure(cfg: &ExperimentConfig, rec: &mut TrialRecord) -> Result<()> {
    let s = sample_section(cfg.n, rec.d, cfg.r, rec.seed, cfg.mode)?;
    measure_section(cfg, &s, rec)
}

fn measure_section(cfg: &ExperimentConfig, s: &KostlanSection, rec: &mut TrialRecord) -> Result<()> {
    let d = rec.d;
    if cfg.wants(Observable::SupNorms) {
        let res = (2 * d).max(16);
        rec.sup0 = Some(sup_norm_estimate(s, 0, res)?);
        rec.sup1 = Some(sup_norm_estimate(s, 1, res)?);
        rec.sup2 = Some(sup_norm_estimate(s, 2, res)?);
    }
    if cfg.wants(Observable::Discriminant) {
        let grid = 64 * d * d;
        rec.discriminant_distance = Some(distance_to_discriminant(&s.normalized(), grid, DISCRIMINANT_REFINE_STEPS)?);
    }
    let pencil = choose_pencil(s, rec.seed)?;
    let mesh = build_mesh(s, &pencil, cfg.resolution)?;
    rec.area = Some(crate::geometry::area(&mesh)?);
    rec.chi = Some(mesh.euler_characteristic());
    rec.vertices = Some(mesh.vertices.len());
    if cfg.wants(Observable::Curvature) || cfg.wants(Observable::SigmaMin) {
        let mut kmax = 0.0f64;
        let mut kmin = f64::INFINITY;
        let mut smin = f64::INFINITY;
        for v in &mesh.vertices {
            let jet = eval_jet(s, &v.point);
            smin = smin.min(pointwise_norms(&jet).sigma_min);
            if cfg.wants(Observable::Curvature) {
                let k = gauss_curvature_analytic(&jet)?;
                kmax = kmax.max(k.abs());
                kmin = kmin.min(k);
            }
        }
        if cfg.wants(Observable::Curvature) {
            rec.max_abs_k = Some(kmax);
            rec.min_k = Some(kmin);
        }
        if cfg.wants(Observable::SigmaMin) {
            rec.min_sigma = Some(smin);
        }
    }
    if cfg.wants(Observable::Systole) {
        rec.systole = Some(systole(&mesh));
    }
    if cfg.wants(Observable::Diameter) {
        rec.diameter = Some(diameter(&mesh));
    }
    if cfg.wants(Observable::Lambda1) {
        rec.lambda1 = Some(spectral_gap(&mesh)?);
    }
    if cfg.wants(Observable::DiameterBound) {
        rec.diameter_bound = Some(sheet_adjacency_bound(s, &pencil, &mesh)?);
    }
    Ok(())
}
