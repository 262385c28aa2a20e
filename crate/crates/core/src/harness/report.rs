//! Events, per-degree aggregates and report files.

use std::io::Write;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{eig_lower_bound, predicted_scales, PredictedScales};
use crate::units::UnitSystem;

use super::config::ExperimentConfig;
use super::stats::{mean, median, wilson, Frequency};
use super::trial::{run_trial, TrialRecord};

/// Report format version.
pub const SCHEMA_VERSION: u32 = 1;

/// Degree-dependent threshold in normalized units (line area 1).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Threshold {
    Constant { value: f64 },
    /// `coefficient · d^exponent`.
    Power { coefficient: f64, exponent: f64 },
    /// `exp(−d^exponent)`.
    ExpNegPower { exponent: f64 },
    /// The measured quantity carries its own comparison value.
    Measured,
}

impl Threshold {
    pub fn at(&self, d: usize) -> f64 {
        let df = d as f64;
        match *self {
            Threshold::Constant { value } => value,
            Threshold::Power { coefficient, exponent } => coefficient * df.powf(exponent),
            Threshold::ExpNegPower { exponent } => (-df.powf(exponent)).exp(),
            Threshold::Measured => f64::NAN,
        }
    }
}

/// Which comparison an event makes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EventKind {
    /// Normalized systole at least the threshold.
    SystoleAtLeast,
    /// Normalized `max |K|` at most the threshold.
    CurvatureAtMost,
    /// Normalized `λ₁` at least the threshold.
    Lambda1AtLeast,
    /// Distance to the discriminant at most the threshold.
    DiscriminantAtMost,
    /// `λ₁` at least the comparison bound built from the measured diameter
    /// and curvature floor (constant `C = 1`).
    EigBoundHolds,
    /// Sheet-adjacency bound at least the measured diameter.
    DiameterCertified,
}

/// A named predicate on one trial.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Event {
    pub name: String,
    pub kind: EventKind,
    pub threshold: Threshold,
}

impl Event {
    pub fn new(name: &str, kind: EventKind, threshold: Threshold) -> Self {
        Self { name: name.to_string(), kind, threshold }
    }

    /// `syst ≥ d^{-4}`.
    pub fn systole_s2() -> Self {
        Self::new("systole_ge_d^-4", EventKind::SystoleAtLeast, Threshold::Power { coefficient: 1.0, exponent: -4.0 })
    }

    /// `sup |K| ≤ d^9`.
    pub fn curvature_k2() -> Self {
        Self::new("max_abs_k_le_d^9", EventKind::CurvatureAtMost, Threshold::Power { coefficient: 1.0, exponent: 9.0 })
    }

    /// `λ₁ ≥ exp(−d^7)`.
    pub fn spectral_l2() -> Self {
        Self::new("lambda1_ge_exp(-d^7)", EventKind::Lambda1AtLeast, Threshold::ExpNegPower { exponent: 7.0 })
    }

    pub fn eig_bound() -> Self {
        Self::new("lambda1_ge_eig_bound", EventKind::EigBoundHolds, Threshold::Measured)
    }

    pub fn diameter_certified() -> Self {
        Self::new("diameter_le_sheet_bound", EventKind::DiameterCertified, Threshold::Measured)
    }

    pub fn defaults() -> Vec<Self> {
        vec![Self::systole_s2(), Self::curvature_k2(), Self::spectral_l2(), Self::eig_bound(), Self::diameter_certified()]
    }

    /// Whether the event holds, `None` if a needed observable is missing.
    pub fn holds(&self, rec: &TrialRecord, units: &UnitSystem) -> Option<bool> {
        let t = self.threshold.at(rec.d);
        Some(match self.kind {
            EventKind::SystoleAtLeast => units.length_to_normalized(rec.systole?) >= t,
            EventKind::CurvatureAtMost => units.curvature_to_normalized(rec.max_abs_k?) <= t,
            EventKind::Lambda1AtLeast => units.eigenvalue_to_normalized(rec.lambda1?) >= t,
            EventKind::DiscriminantAtMost => rec.discriminant_distance? <= t,
            EventKind::EigBoundHolds => {
                let diam = units.length_to_normalized(rec.diameter?);
                let kappa = units.curvature_to_normalized((-rec.min_k?).max(0.0));
                let bound = eig_lower_bound(diam, kappa, 2, 1.0).ok()?;
                units.eigenvalue_to_normalized(rec.lambda1?) >= bound
            }
            EventKind::DiameterCertified => rec.diameter_bound? >= rec.diameter?,
        })
    }
}

/// Frequency of `event` among retained trials where it is defined.
pub fn event_frequency(records: &[TrialRecord], event: &Event, units: &UnitSystem) -> Result<Frequency> {
    let outcomes: Vec<bool> = records.iter().filter(|r| r.retained()).filter_map(|r| event.holds(r, units)).collect();
    if outcomes.is_empty() {
        return Err(Error::InvalidParameter(format!("no retained trial defines event {}", event.name)));
    }
    wilson(outcomes.iter().filter(|&&b| b).count(), outcomes.len())
}

/// Mean and median of one observable over the retained trials.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObservableStats {
    pub name: String,
    pub count: usize,
    pub mean: Option<f64>,
    pub median: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EventSummary {
    pub event: Event,
    pub threshold: Option<f64>,
    pub frequency: Option<Frequency>,
}

/// Aggregates for one degree.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DegreeSummary {
    pub d: usize,
    pub a_d: f64,
    pub trials: usize,
    pub retained: usize,
    pub failure_rate: Frequency,
    pub expected_chi: i64,
    /// Every retained trial has the expected Euler characteristic.
    pub chi_consistent: bool,
    pub observables: Vec<ObservableStats>,
    pub events: Vec<EventSummary>,
    pub scales: Option<PredictedScales>,
}

/// Header, per-trial rows and per-degree aggregates of one experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObservableReport {
    pub schema_version: u32,
    pub config_hash: String,
    pub config: ExperimentConfig,
    /// Normalized-to-computational scale factors; stored observables are
    /// computational.
    pub units: UnitSystem,
    /// Value used for every unspecified constant in the thresholds.
    pub constant: f64,
    pub trials: Vec<TrialRecord>,
    pub summaries: Vec<DegreeSummary>,
}

/// The aggregate part of a report, written as JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportSummary {
    pub schema_version: u32,
    pub config_hash: String,
    pub config: ExperimentConfig,
    pub units: UnitSystem,
    pub constant: f64,
    pub summaries: Vec<DegreeSummary>,
}

type Getter = fn(&TrialRecord) -> Option<f64>;

const COLUMNS: [(&str, Getter); 13] = [
    ("area", |r| r.area),
    ("chi", |r| r.chi.map(|c| c as f64)),
    ("systole", |r| r.systole),
    ("diameter", |r| r.diameter),
    ("lambda1", |r| r.lambda1),
    ("max_abs_k", |r| r.max_abs_k),
    ("min_k", |r| r.min_k),
    ("min_sigma", |r| r.min_sigma),
    ("discriminant_distance", |r| r.discriminant_distance),
    ("sup0", |r| r.sup0),
    ("sup1", |r| r.sup1),
    ("sup2", |r| r.sup2),
    ("diameter_bound", |r| r.diameter_bound),
];

fn expected_chi(d: usize) -> i64 {
    let d = d as i64;
    2 - (d - 1) * (d - 2)
}

/// Per-degree aggregates. The records are sorted by `(d, trial)` first, so
/// the result does not depend on their order.
pub fn summarize(cfg: &ExperimentConfig, records: &[TrialRecord], events: &[Event]) -> Result<Vec<DegreeSummary>> {
    let units = UnitSystem::standard();
    let mut sorted = records.to_vec();
    sorted.sort_by_key(|r| (r.d, r.trial));
    let mut degrees: Vec<usize> = sorted.iter().map(|r| r.d).collect();
    degrees.dedup();
    degrees
        .into_iter()
        .map(|d| {
            let group: Vec<TrialRecord> = sorted.iter().filter(|r| r.d == d).cloned().collect();
            let retained: Vec<&TrialRecord> = group.iter().filter(|r| r.retained()).collect();
            let failure_rate = wilson(group.len() - retained.len(), group.len())?;
            let observables = COLUMNS
                .iter()
                .map(|(name, get)| {
                    let vals: Vec<f64> = retained.iter().filter_map(|r| get(r)).collect();
                    ObservableStats { name: name.to_string(), count: vals.len(), mean: mean(&vals), median: median(&vals) }
                })
                .collect();
            let events = events
                .iter()
                .map(|e| EventSummary {
                    event: e.clone(),
                    threshold: Some(e.threshold.at(d)).filter(|t| !t.is_nan()),
                    frequency: event_frequency(&group, e, &units).ok(),
                })
                .collect();
            let a_d = cfg.a_d.value(d);
            Ok(DegreeSummary {
                d,
                a_d,
                trials: group.len(),
                retained: retained.len(),
                failure_rate,
                expected_chi: expected_chi(d),
                chi_consistent: retained.iter().all(|r| r.chi.is_none_or(|c| c == expected_chi(d))),
                observables,
                events,
                scales: predicted_scales(cfg.n, d, a_d, cfg.r).ok(),
            })
        })
        .collect()
}

/// Run every trial of the experiment on the rayon pool.
///
/// Trial failures are recorded in the rows and counted in the failure
/// rates; only an invalid configuration is an error.
pub fn run_trials(cfg: &ExperimentConfig) -> Result<ObservableReport> {
    cfg.validate()?;
    let jobs: Vec<(usize, usize)> = cfg.degrees.iter().flat_map(|&d| (0..cfg.trials).map(move |t| (d, t))).collect();
    let trials: Vec<TrialRecord> = jobs.par_iter().map(|&(d, t)| run_trial(cfg, d, t)).collect();
    let summaries = summarize(cfg, &trials, &Event::defaults())?;
    Ok(ObservableReport {
        schema_version: SCHEMA_VERSION,
        config_hash: cfg.content_hash(),
        config: cfg.clone(),
        units: UnitSystem::standard(),
        constant: 1.0,
        trials,
        summaries,
    })
}

fn fmt_opt(v: Option<f64>) -> String {
    match v {
        None => String::new(),
        Some(x) if x == f64::INFINITY => "inf".into(),
        Some(x) => format!("{x:e}"),
    }
}

impl ObservableReport {
    pub fn summary(&self) -> ReportSummary {
        ReportSummary {
            schema_version: self.schema_version,
            config_hash: self.config_hash.clone(),
            config: self.config.clone(),
            units: self.units,
            constant: self.constant,
            summaries: self.summaries.clone(),
        }
    }

    /// Aggregates as pretty JSON (non-finite numbers become `null`).
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.summary()).expect("summary serializes")
    }

    /// Per-trial rows, computational units, `inf` for an infinite systole.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header = vec!["config_hash", "d", "trial", "seed", "failure", "vertices"];
        header.extend(COLUMNS.iter().map(|c| c.0));
        let ser = |e: csv::Error| Error::Serialization(e.to_string());
        w.write_record(&header).map_err(ser)?;
        for r in &self.trials {
            let mut row = vec![
                self.config_hash.clone(),
                r.d.to_string(),
                r.trial.to_string(),
                r.seed.to_string(),
                r.failure.clone().unwrap_or_default(),
                r.vertices.map(|v| v.to_string()).unwrap_or_default(),
            ];
            row.extend(COLUMNS.iter().map(|(name, get)| if *name == "chi" { r.chi.map(|c| c.to_string()).unwrap_or_default() } else { fmt_opt(get(r)) }));
            w.write_record(&row).map_err(ser)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Serialization(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Serialization(e.to_string()))
    }

    pub fn write_files(&self, csv_path: &Path, json_path: &Path) -> Result<()> {
        let io = |e: std::io::Error| Error::Serialization(e.to_string());
        let csv = self.to_csv()?;
        std::fs::File::create(csv_path).and_then(|mut f| f.write_all(csv.as_bytes())).map_err(io)?;
        std::fs::File::create(json_path).and_then(|mut f| f.write_all(self.to_json().as_bytes())).map_err(io)?;
        Ok(())
    }
}
