//! Experiment configuration.

use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::ensemble::SamplingMode;
use crate::error::{Error, Result};
use crate::zeroset::DEFAULT_RESOLUTION;

/// Rule producing the sequence `a_d → 0` of the probability statements.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ADRule {
    /// `a_d = min(1, 1/log d)`.
    InvLog,
    /// `a_d = d^{−α}`.
    Power(f64),
}

impl ADRule {
    pub fn value(&self, d: usize) -> f64 {
        let df = d as f64;
        match *self {
            ADRule::InvLog => {
                if d <= 2 {
                    1.0
                } else {
                    (1.0 / df.ln()).min(1.0)
                }
            }
            ADRule::Power(alpha) => df.powf(-alpha),
        }
    }
}

impl FromStr for ADRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "inv_log" {
            return Ok(ADRule::InvLog);
        }
        if let Some(rest) = s.strip_prefix("power:") {
            let alpha: f64 = rest.trim().parse().map_err(|_| Error::InvalidParameter(format!("bad exponent in a_d rule {s:?}")))?;
            if !(alpha.is_finite() && alpha >= 0.0) {
                return Err(Error::InvalidParameter(format!("a_d exponent must be finite and ≥ 0, got {alpha}")));
            }
            return Ok(ADRule::Power(alpha));
        }
        Err(Error::InvalidParameter(format!("unknown a_d rule {s:?} (expected \"inv_log\" or \"power:α\")")))
    }
}

impl std::fmt::Display for ADRule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ADRule::InvLog => write!(f, "inv_log"),
            ADRule::Power(a) => write!(f, "power:{a}"),
        }
    }
}

impl Serialize for ADRule {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for ADRule {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Per-trial measurements that can be switched on or off.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Observable {
    Systole,
    Diameter,
    Lambda1,
    Curvature,
    SigmaMin,
    Discriminant,
    SupNorms,
    DiameterBound,
}

impl Observable {
    pub const ALL: [Observable; 8] = [
        Observable::Systole,
        Observable::Diameter,
        Observable::Lambda1,
        Observable::Curvature,
        Observable::SigmaMin,
        Observable::Discriminant,
        Observable::SupNorms,
        Observable::DiameterBound,
    ];
}

impl std::fmt::Display for Observable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let v = serde_json::to_value(self).map_err(|_| std::fmt::Error)?;
        f.write_str(v.as_str().ok_or(std::fmt::Error)?)
    }
}

impl FromStr for Observable {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        serde_json::from_value(serde_json::Value::String(s.trim().to_string()))
            .map_err(|_| Error::InvalidParameter(format!("unknown observable {s:?}")))
    }
}

fn default_n() -> usize {
    2
}
fn default_r() -> usize {
    1
}
fn default_mode() -> SamplingMode {
    SamplingMode::Gaussian
}
fn default_resolution() -> usize {
    DEFAULT_RESOLUTION
}
fn default_a_d() -> ADRule {
    ADRule::InvLog
}
fn default_observables() -> Vec<Observable> {
    Observable::ALL.to_vec()
}

/// A Monte Carlo experiment: `trials` sections for each degree in `degrees`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default = "default_n")]
    pub n: usize,
    pub degrees: Vec<usize>,
    #[serde(default = "default_r")]
    pub r: usize,
    pub trials: usize,
    #[serde(default = "default_mode")]
    pub mode: SamplingMode,
    pub seed: u64,
    #[serde(default = "default_resolution")]
    pub resolution: usize,
    #[serde(default = "default_a_d")]
    pub a_d: ADRule,
    #[serde(default = "default_observables")]
    pub observables: Vec<Observable>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_csv: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_json: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn new(degrees: Vec<usize>, trials: usize, seed: u64) -> Self {
        Self {
            n: default_n(),
            degrees,
            r: default_r(),
            trials,
            mode: default_mode(),
            seed,
            resolution: default_resolution(),
            a_d: default_a_d(),
            observables: default_observables(),
            output_csv: None,
            output_json: None,
        }
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| Error::Serialization(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidParameter("trials must be at least 1".into()));
        }
        if self.degrees.is_empty() || self.degrees.contains(&0) {
            return Err(Error::InvalidParameter("degrees must be a nonempty list of positive integers".into()));
        }
        if self.n != 2 || self.r != 1 {
            return Err(Error::InvalidParameter(format!("experiments run on curves in CP^2 (n = 2, r = 1), got n = {}, r = {}", self.n, self.r)));
        }
        if self.resolution < 3 {
            return Err(Error::InvalidParameter("mesh resolution must be at least 3".into()));
        }
        for &d in &self.degrees {
            let a = self.a_d.value(d);
            if !(a > 0.0 && a <= 1.0) {
                return Err(Error::InvalidParameter(format!("a_d = {a} at d = {d} is outside (0, 1]")));
            }
        }
        Ok(())
    }

    pub fn wants(&self, o: Observable) -> bool {
        self.observables.contains(&o)
    }

    /// Serialization that determines the hash: output paths are excluded and
    /// the observable set is sorted.
    pub fn canonical_json(&self) -> String {
        let mut c = self.clone();
        c.output_csv = None;
        c.output_json = None;
        c.observables.sort();
        c.observables.dedup();
        serde_json::to_string(&c).expect("config serializes")
    }

    /// SHA-256 of the canonical config, framed as a git blob
    /// (`"blob <len>\0<content>"`).
    pub fn content_hash(&self) -> String {
        let body = self.canonical_json();
        let mut h = Sha256::new();
        h.update(format!("blob {}\0", body.len()).as_bytes());
        h.update(body.as_bytes());
        hex::encode(h.finalize())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn a_d_rules() {
        assert_eq!("inv_log".parse::<ADRule>().unwrap(), ADRule::InvLog);
        assert_eq!("power:0.5".parse::<ADRule>().unwrap(), ADRule::Power(0.5));
        assert!("power:x".parse::<ADRule>().is_err());
        assert!("log".parse::<ADRule>().is_err());
        assert!((ADRule::InvLog.value(10) - 1.0 / 10f64.ln()).abs() < 1e-15);
        assert_eq!(ADRule::InvLog.value(2), 1.0);
        assert!((ADRule::Power(0.5).value(4) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn toml_round_trip_and_hash() {
        let cfg = ExperimentConfig::from_toml("degrees = [1, 3]\ntrials = 4\nseed = 9\na_d = \"power:0.25\"\n").unwrap();
        assert_eq!(cfg.degrees, vec![1, 3]);
        assert_eq!(cfg.a_d, ADRule::Power(0.25));
        let mut other = cfg.clone();
        other.output_csv = Some("x.csv".into());
        assert_eq!(cfg.content_hash(), other.content_hash());
        other.seed = 10;
        assert_ne!(cfg.content_hash(), other.content_hash());
        assert_eq!(cfg.content_hash().len(), 64);
    }

    #[test]
    fn validation() {
        assert!(ExperimentConfig::new(vec![3], 0, 1).validate().is_err());
        assert!(ExperimentConfig::new(vec![0], 1, 1).validate().is_err());
        assert!(ExperimentConfig::from_toml("degrees = [2]\ntrials = 1\nseed = 1\nbogus = 3\n").is_err());
    }
}
