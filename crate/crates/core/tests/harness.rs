//! Experiment driver: determinism, report schema, aggregation and event
//! statistics.

use std::path::PathBuf;

use divlab::harness::*;
use divlab::UnitSystem;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn mini_config() -> ExperimentConfig {
    let mut cfg = ExperimentConfig::new(vec![1, 3], 2, 2024);
    cfg.resolution = 3;
    cfg
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("divlab-harness-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn same_config_gives_byte_identical_files() {
    let cfg = mini_config();
    let a = run_trials(&cfg).unwrap();
    let b = run_trials(&cfg).unwrap();
    let (ca, ja) = (scratch("a.csv"), scratch("a.json"));
    let (cb, jb) = (scratch("b.csv"), scratch("b.json"));
    a.write_files(&ca, &ja).unwrap();
    b.write_files(&cb, &jb).unwrap();
    assert_eq!(std::fs::read(&ca).unwrap(), std::fs::read(&cb).unwrap());
    assert_eq!(std::fs::read(&ja).unwrap(), std::fs::read(&jb).unwrap());
    // both files carry the config hash
    let hash = cfg.content_hash();
    assert!(std::fs::read_to_string(&ca).unwrap().lines().skip(1).all(|l| l.starts_with(&hash)));
    assert!(std::fs::read_to_string(&ja).unwrap().contains(&hash));
}

/// Compare `text` with a stored golden file; `DIVLAB_UPDATE_GOLDEN=1`
/// rewrites it.
fn check_golden(name: &str, text: &str) {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    if std::env::var_os("DIVLAB_UPDATE_GOLDEN").is_some() {
        std::fs::create_dir_all(path.parent().unwrap()).unwrap();
        std::fs::write(&path, text).unwrap();
        return;
    }
    let want = std::fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing golden file {}", path.display()));
    assert_eq!(text, want, "{name} differs from the golden copy");
}

#[test]
fn report_matches_golden_files() {
    let report = run_trials(&mini_config()).unwrap();
    check_golden("mini.csv", &report.to_csv().unwrap());
    check_golden("mini.json", &report.to_json());
}

#[test]
fn lines_are_spheres() {
    let mut cfg = ExperimentConfig::new(vec![1], 10, 7);
    cfg.resolution = 3;
    cfg.observables = vec![Observable::Systole, Observable::Diameter];
    let report = run_trials(&cfg).unwrap();
    assert_eq!(report.trials.len(), 10);
    for t in &report.trials {
        assert!(t.retained(), "{:?}", t.failure);
        assert_eq!(t.systole, Some(f64::INFINITY));
        assert_eq!(t.chi, Some(2));
    }
    assert!(report.to_csv().unwrap().lines().skip(1).all(|l| l.contains(",inf,")));
}

#[test]
fn quartic_failure_rate_is_low() {
    let mut cfg = ExperimentConfig::new(vec![4], 50, 11);
    cfg.observables = vec![];
    let report = run_trials(&cfg).unwrap();
    let s = &report.summaries[0];
    assert!(s.failure_rate.rate < 0.1, "{:?}", s.failure_rate);
    assert!(s.chi_consistent);
}

#[test]
fn aggregation_ignores_trial_order() {
    let mut cfg = ExperimentConfig::new(vec![2, 3], 4, 5);
    cfg.resolution = 3;
    cfg.observables = vec![Observable::Systole, Observable::Curvature, Observable::Diameter];
    let report = run_trials(&cfg).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..5 {
        let mut shuffled = report.trials.clone();
        shuffled.shuffle(&mut rng);
        assert_eq!(summarize(&cfg, &shuffled, &Event::defaults()).unwrap(), report.summaries);
    }
}

#[test]
fn frequencies_lie_in_the_unit_interval() {
    let report = run_trials(&mini_config()).unwrap();
    for s in &report.summaries {
        for e in &s.events {
            if let Some(f) = &e.frequency {
                assert!((0.0..=1.0).contains(&f.rate));
                assert!(0.0 <= f.ci_low && f.ci_low <= f.rate && f.rate <= f.ci_high && f.ci_high <= 1.0);
            }
        }
    }
}

#[test]
fn always_true_event_has_rate_one() {
    let mut cfg = ExperimentConfig::new(vec![2], 5, 3);
    cfg.resolution = 3;
    cfg.observables = vec![Observable::Curvature];
    let report = run_trials(&cfg).unwrap();
    let always = Event::new("k_finite", EventKind::CurvatureAtMost, Threshold::Constant { value: f64::INFINITY });
    let f = event_frequency(&report.trials, &always, &UnitSystem::standard()).unwrap();
    assert_eq!(f.rate, 1.0);
    assert!((f.ci_high - 1.0).abs() < 1e-15);
    let never = Event::new("k_negative", EventKind::CurvatureAtMost, Threshold::Constant { value: -1.0 });
    assert_eq!(event_frequency(&report.trials, &never, &UnitSystem::standard()).unwrap().rate, 0.0);
}

#[test]
fn discriminant_tail_is_rare() {
    let d = 3;
    let mut cfg = ExperimentConfig::new(vec![d], 50, 77);
    cfg.resolution = 3;
    cfg.observables = vec![Observable::Discriminant];
    let report = run_trials(&cfg).unwrap();
    let r_d = 0.01 * (d as f64).powi(-4);
    let tail = Event::new("near_discriminant", EventKind::DiscriminantAtMost, Threshold::Constant { value: r_d });
    let f = event_frequency(&report.trials, &tail, &UnitSystem::standard()).unwrap();
    assert!(f.rate <= 10.0 * r_d * (d as f64).powi(4), "{f:?}");
}

#[test]
fn area_scales_linearly_in_degree() {
    let mut cfg = ExperimentConfig::new(vec![1, 2, 3, 4, 5], 2, 13);
    cfg.resolution = 3;
    cfg.observables = vec![];
    let report = run_trials(&cfg).unwrap();
    let pts: Vec<(f64, f64)> = report
        .summaries
        .iter()
        .map(|s| (s.d as f64, s.observables.iter().find(|o| o.name == "area").unwrap().median.unwrap()))
        .collect();
    let fit = scaling_fit(&pts).unwrap();
    assert!((fit.exponent - 1.0).abs() < 0.05, "{fit:?}");
}

#[test]
fn config_round_trips_through_toml() {
    let text = "degrees = [2, 3]\ntrials = 4\nseed = 9\na_d = \"power:0.5\"\nobservables = [\"systole\", \"lambda1\"]\n";
    let cfg = ExperimentConfig::from_toml(text).unwrap();
    assert_eq!(cfg.degrees, vec![2, 3]);
    assert_eq!(cfg.a_d, ADRule::Power(0.5));
    assert!(cfg.wants(Observable::Lambda1) && !cfg.wants(Observable::Diameter));
    assert!(ExperimentConfig::from_toml("degrees = [2]\ntrials = 0\nseed = 1\n").is_err());
    assert!(ExperimentConfig::from_toml("degrees = [2]\ntrials = 1\nseed = 1\nbogus = 3\n").is_err());
    let mut other = cfg.clone();
    other.output_csv = Some("x.csv".into());
    other.observables.reverse();
    assert_eq!(cfg.content_hash(), other.content_hash());
}
