//! Acceptance suite: thirteen end-to-end criteria, each printed as one
//! PASS/FAIL line with the measured values and wall time.
//!
//! Runs as a plain binary (`harness = false`) so the lines always reach
//! stdout; the process exits non-zero if any criterion fails. Pass a
//! criterion number (or several) as arguments to run a subset.

use std::f64::consts::{FRAC_PI_2, PI};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use divlab::bergman::{rescaled_error, rescaled_sample_pairs};
use divlab::chern::{projective_discriminant_degree, rational_to_f64};
use divlab::ensemble::{sample_section, sup_norm_estimate, KostlanSection, SamplingMode};
use divlab::geometry::*;
use divlab::harness::{event_frequency, run_trials, scaling_fit, Event, ExperimentConfig, Observable, ObservableReport};
use divlab::poly::{HomogeneousPoly, C64};
use divlab::projective::random_unitary;
use divlab::zeroset::{build_mesh, choose_pencil, CurveMesh, DEFAULT_RESOLUTION};
use divlab::{ProjectivePoint, UnitSystem};
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

type Outcome = Result<String, String>;

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn binom(a: u64, b: u64) -> u64 {
    (0..b).fold(1, |acc, i| acc * (a - i) / (i + 1))
}

fn curve(d: usize, seed: u64, resolution: usize) -> (KostlanSection, CurveMesh) {
    let s = sample_section(2, d, 1, seed, SamplingMode::Gaussian).unwrap();
    let p = choose_pencil(&s, seed).unwrap();
    let m = build_mesh(&s, &p, resolution).unwrap();
    (s, m)
}

fn experiment(degrees: Vec<usize>, trials: usize, seed: u64, resolution: usize, observables: Vec<Observable>) -> ObservableReport {
    let mut cfg = ExperimentConfig::new(degrees, trials, seed);
    cfg.resolution = resolution;
    cfg.observables = observables;
    run_trials(&cfg).unwrap()
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

fn c1_discriminant_degree() -> Outcome {
    let mut bad = Vec::new();
    for d in 2..=10i64 {
        let got = projective_discriminant_degree(2, 1, d).unwrap().degree;
        if got != (3 * (d - 1) * (d - 1)).into() {
            bad.push(format!("d={d}: {got}"));
        }
    }
    for n in 1..=4usize {
        for r in 1..=n {
            let p = projective_discriminant_degree(n, r, 5).unwrap().polynomial;
            let lead = p.get(n).map(rational_to_f64).unwrap_or(0.0);
            let want = (r as u64 * binom(n as u64 + 1, r as u64)) as f64;
            if p.len() != n + 1 || lead != want {
                bad.push(format!("(n,r)=({n},{r}): leading {lead} want {want}"));
            }
        }
    }
    check(bad.is_empty(), if bad.is_empty() { "3(d-1)^2 for d=2..10; leading r·C(n+1,r) for n<=4".into() } else { bad.join("; ") })
}

fn c2_topology() -> Outcome {
    let mut lines = Vec::new();
    let mut ok = true;
    for d in 1..=6usize {
        for seed in [1u64, 2] {
            let (_, m) = curve(d, seed, DEFAULT_RESOLUTION);
            let want = 2 - (d as i64 - 1) * (d as i64 - 2);
            ok &= m.euler_characteristic() == want;
            if seed == 1 {
                lines.push(format!("d={d}:χ={}", m.euler_characteristic()));
            }
        }
    }
    check(ok, lines.join(" "))
}

fn c3_gauss_bonnet() -> Outcome {
    let mut worst_discrete: f64 = 0.0;
    let mut worst_analytic: f64 = 0.0;
    for d in 1..=6usize {
        let (s, m) = curve(d, 30 + d as u64, DEFAULT_RESOLUTION);
        let target = 2.0 * PI * m.euler_characteristic() as f64;
        worst_discrete = worst_discrete.max((total_curvature(&m) - target).abs());
        let samples = curvature_samples(&s, &m).unwrap();
        let analytic: f64 = samples.iter().map(|c| c.k_analytic * c.dual_area).sum();
        let mass: f64 = samples.iter().map(|c| c.k_analytic.abs() * c.dual_area).sum();
        worst_analytic = worst_analytic.max((analytic - target).abs() / mass);
    }
    check(
        worst_discrete < 1e-8 && worst_analytic < 0.02,
        format!("max |Σ defects − 2πχ| = {worst_discrete:.2e}; max analytic error / Σ|K|A = {:.3}%", 100.0 * worst_analytic),
    )
}

fn c4_area() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut parts = Vec::new();
    for d in 1..=6usize {
        let (_, m) = curve(d, 40 + d as u64, DEFAULT_RESOLUTION);
        let ratio = area(&m).unwrap() / PI;
        worst = worst.max((ratio / d as f64 - 1.0).abs());
        parts.push(format!("{ratio:.4}"));
    }
    check(worst < 0.01, format!("area/π = [{}], worst relative error {:.3}%", parts.join(", "), 100.0 * worst))
}

fn c5_round_line() -> Outcome {
    let (s, m) = curve(1, 5, DEFAULT_RESOLUTION);
    let samples = curvature_samples(&s, &m).unwrap();
    let k_err = samples.iter().map(|c| (c.k_discrete / 4.0 - 1.0).abs().max((c.k_analytic / 4.0 - 1.0).abs())).fold(0.0, f64::max);
    let lam = spectral_gap(&m).unwrap();
    let diam = diameter(&m);
    check(
        k_err < 0.05 && (lam / 8.0 - 1.0).abs() < 0.05 && (diam / FRAC_PI_2 - 1.0).abs() < 0.02,
        format!("max |K/4 − 1| = {:.2}%, λ₁ = {lam:.4}, diameter = {diam:.5}", 100.0 * k_err),
    )
}

fn c6_bergman() -> Outcome {
    let degrees = [5usize, 10, 20, 40];
    let mut parts = Vec::new();
    let mut ok = true;
    for n in [1usize, 2] {
        let x = ProjectivePoint::from_real(&[0.3, 0.5, 0.8][..=n]).unwrap();
        let samples = rescaled_sample_pairs(n, 64, 11);
        let errs: Vec<f64> = degrees.iter().map(|&d| rescaled_error(n, d, &x, 0, &samples).unwrap()).collect();
        ok &= errs.windows(2).all(|w| w[1] <= 0.75 * w[0]);
        parts.push(format!("n={n} err={:?}", errs.iter().map(|e| format!("{e:.3e}")).collect::<Vec<_>>()));
    }
    let x = ProjectivePoint::from_real(&[0.6, 0.8]).unwrap();
    let origin = vec![(vec![C64::new(0.0, 0.0)], vec![C64::new(0.0, 0.0)])];
    let diag_ok = degrees.iter().all(|&d| (rescaled_error(1, d, &x, 0, &origin).unwrap() - 1.0 / d as f64).abs() < 1e-12);
    ok &= diag_ok;
    parts.push(format!("n=1 diagonal error = 1/d: {diag_ok}"));
    check(ok, parts.join("; "))
}

fn c7_transfert() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let gauss = |rng: &mut ChaCha8Rng, r: usize, c: usize| DMatrix::from_fn(r, c, |_, _| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)));
    let mut worst: f64 = 0.0;
    for k in 0..1000 {
        let rows = 1 + k % 3;
        let a = gauss(&mut rng, rows, rows + k % 2 + 1);
        let s = sigma_min_distance(&a).unwrap();
        let ev = (&a * a.adjoint()).symmetric_eigenvalues().min();
        worst = worst.max((s * s - ev).abs());
    }
    // distance to the rank-deficient matrices by grid search over u ∈ CP¹
    let mut worst_bf: f64 = 0.0;
    for _ in 0..25 {
        let a = gauss(&mut rng, 2, 3);
        let f = |th: f64, ph: f64| {
            let u = [C64::new(th.cos(), 0.0), C64::from_polar(th.sin(), ph)];
            (0..3).map(|j| (u[0].conj() * a[(0, j)] + u[1].conj() * a[(1, j)]).norm_sqr()).sum::<f64>().sqrt()
        };
        let (mut lo, mut hi) = ((0.0, 0.0), (FRAC_PI_2, 2.0 * PI));
        let mut best = (f64::INFINITY, 0.0, 0.0);
        for _ in 0..6 {
            for i in 0..=60 {
                for j in 0..=60 {
                    let th = lo.0 + (hi.0 - lo.0) * i as f64 / 60.0;
                    let ph = lo.1 + (hi.1 - lo.1) * j as f64 / 60.0;
                    let v = f(th, ph);
                    if v < best.0 {
                        best = (v, th, ph);
                    }
                }
            }
            let (dt, dp) = ((hi.0 - lo.0) / 20.0, (hi.1 - lo.1) / 20.0);
            lo = ((best.1 - dt).max(0.0), best.2 - dp);
            hi = ((best.1 + dt).min(FRAC_PI_2), best.2 + dp);
        }
        worst_bf = worst_bf.max((best.0 - sigma_min_distance(&a).unwrap()).abs());
    }
    check(worst < 1e-10 && worst_bf < 1e-4, format!("max |σ² − λ_min(AA*)| = {worst:.2e} over 1000; brute-force gap {worst_bf:.2e} over 25"))
}

fn c8_sup_norms() -> Outcome {
    let degrees = [5usize, 10, 20, 40];
    let mut med0 = Vec::new();
    let mut med1 = Vec::new();
    for &d in &degrees {
        let res = (2 * d).max(16);
        let (mut a, mut b) = (Vec::new(), Vec::new());
        for t in 0..100u64 {
            let s = sample_section(2, d, 1, 1000 * d as u64 + t, SamplingMode::Sphere).unwrap();
            a.push(sup_norm_estimate(&s, 0, res).unwrap());
            b.push(sup_norm_estimate(&s, 1, res).unwrap());
        }
        let l = (d as f64).ln().sqrt();
        med0.push(median(a) / l);
        med1.push(median(b) / l);
    }
    let (lo, hi) = med0.iter().fold((f64::INFINITY, 0.0f64), |(l, h), &v| (l.min(v), h.max(v)));
    let spread = hi / lo - 1.0;
    let pts: Vec<(f64, f64)> = degrees.iter().zip(&med1).map(|(&d, &m)| (d as f64, m)).collect();
    let fit = scaling_fit(&pts).unwrap();
    check(
        spread < 0.5 && (fit.exponent - 0.5).abs() <= 0.15,
        format!(
            "median sup|s|/√log d = {:?} (spread {:.1}%); k=1 exponent {:.3} ± {:.3}",
            med0.iter().map(|v| format!("{v:.3}")).collect::<Vec<_>>(),
            100.0 * spread,
            fit.exponent,
            fit.stderr
        ),
    )
}

fn c9_systole() -> Outcome {
    let units = UnitSystem::standard();
    let report = experiment(vec![6, 8, 10], 50, 9, 3, vec![Observable::Systole]);
    let mut parts = Vec::new();
    let mut ok = true;
    for &d in &[6usize, 8, 10] {
        let recs: Vec<_> = report.trials.iter().filter(|r| r.d == d).cloned().collect();
        let f = event_frequency(&recs, &Event::systole_s2(), &units).unwrap();
        let min = recs.iter().filter_map(|r| r.systole).fold(f64::INFINITY, f64::min);
        let kept = recs.iter().filter(|r| r.retained()).count();
        ok &= f.rate >= 0.9;
        parts.push(format!("d={d}: rate {:.2} [{:.2},{:.2}] ({kept}/50 kept, min syst {:.3} normalized)", f.rate, f.ci_low, f.ci_high, units.length_to_normalized(min)));
    }
    let lines = experiment(vec![1], 10, 9, 3, vec![Observable::Systole]);
    let inf = lines.trials.iter().all(|r| r.systole == Some(f64::INFINITY));
    ok &= inf;
    parts.push(format!("d=1 all infinite: {inf}"));
    check(ok, parts.join("; "))
}

fn c10_curvature() -> Outcome {
    let units = UnitSystem::standard();
    let degrees = vec![3, 4, 5, 6];
    let report = experiment(degrees.clone(), 50, 10, 3, vec![Observable::Curvature]);
    let mut parts = Vec::new();
    let mut ok = true;
    for &d in &degrees {
        let recs: Vec<_> = report.trials.iter().filter(|r| r.d == d).cloned().collect();
        let f = event_frequency(&recs, &Event::curvature_k2(), &units).unwrap();
        let ks: Vec<f64> = recs.iter().filter_map(|r| r.max_abs_k).map(|k| units.curvature_to_normalized(k)).collect();
        let max = ks.iter().cloned().fold(0.0, f64::max);
        ok &= f.rate == 1.0;
        parts.push(format!("d={d}: rate {:.2}, max|K| median {:.1} max {:.1} (normalized)", f.rate, median(ks), max));
    }
    check(ok, parts.join("; "))
}

fn c11_spectral() -> Outcome {
    let units = UnitSystem::standard();
    let report = experiment(vec![2, 3, 4, 5], 8, 11, 3, vec![Observable::Lambda1, Observable::Curvature, Observable::Diameter]);
    let mut ok = true;
    let mut parts = Vec::new();
    for d in [2usize, 3, 4, 5] {
        let recs: Vec<_> = report.trials.iter().filter(|r| r.d == d && r.retained()).cloned().collect();
        let l2 = recs.iter().all(|r| Event::spectral_l2().holds(r, &units) == Some(true));
        let eig = recs.iter().all(|r| Event::eig_bound().holds(r, &units) == Some(true));
        let lam = median(recs.iter().filter_map(|r| r.lambda1).collect());
        ok &= l2 && eig && !recs.is_empty();
        parts.push(format!("d={d}: {} kept, λ₁ ≥ exp(−d⁷) {l2}, λ₁ ≥ eig bound {eig}, median λ₁ {lam:.3}", recs.len()));
    }
    check(ok, parts.join("; "))
}

fn c12_diameter() -> Outcome {
    let degrees: Vec<usize> = (2..=8).collect();
    let report = experiment(degrees.clone(), 4, 12, 3, vec![Observable::Diameter, Observable::DiameterBound]);
    let kept: Vec<_> = report.trials.iter().filter(|r| r.retained()).collect();
    let certified = kept.iter().all(|r| r.diameter_bound.unwrap() >= r.diameter.unwrap());
    let pts: Vec<(f64, f64)> = degrees
        .iter()
        .map(|&d| (d as f64, median(kept.iter().filter(|r| r.d == d).map(|r| r.diameter.unwrap()).collect())))
        .collect();
    let fit = scaling_fit(&pts).unwrap();
    check(
        certified && fit.exponent <= 3.5 && !kept.is_empty(),
        format!(
            "{} kept; bound ≥ diameter in all: {certified}; medians {:?}; exponent {:.3} ± {:.3}",
            kept.len(),
            pts.iter().map(|p| format!("{:.3}", p.1)).collect::<Vec<_>>(),
            fit.exponent,
            fit.stderr
        ),
    )
}

fn c13_discriminant() -> Outcome {
    let cubic = |terms: &[(&[u32], f64)]| {
        let t: Vec<(&[u32], C64)> = terms.iter().map(|(e, c)| (*e, C64::new(*c, 0.0))).collect();
        KostlanSection::from_polynomial(&HomogeneousPoly::from_terms(2, 3, &t)).normalized()
    };
    let cusp = cubic(&[(&[1, 0, 2], 1.0), (&[0, 3, 0], -1.0)]);
    let fermat = cubic(&[(&[3, 0, 0], 1.0), (&[0, 3, 0], 1.0), (&[0, 0, 3], 1.0)]);
    let dc = distance_to_discriminant(&cusp, 576, 4000).unwrap();
    let f1 = distance_to_discriminant(&fermat, 576, 4000).unwrap();
    let f2 = distance_to_discriminant(&fermat, 1152, 4000).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let mut drift: f64 = 0.0;
    for _ in 0..4 {
        let u = random_unitary(3, &mut rng);
        drift = drift.max((distance_to_discriminant(&fermat.transformed(&u).unwrap(), 576, 4000).unwrap() - f1).abs());
    }
    check(
        dc.abs() < 1e-6 && f1 > 0.0 && (f1 - f2).abs() < 0.01 * f2 && drift < 1e-6,
        format!("cusp {dc:.2e}; Fermat {f1:.6} / {f2:.6} at two grids; unitary drift {drift:.2e}"),
    )
}

fn main() {
    let criteria: [(&str, Duration, fn() -> Outcome); 13] = [
        ("discriminant degree", Duration::from_secs(1), c1_discriminant_degree),
        ("topology", Duration::from_secs(120), c2_topology),
        ("Gauss-Bonnet", Duration::from_secs(120), c3_gauss_bonnet),
        ("Wirtinger area", Duration::from_secs(120), c4_area),
        ("round-line oracles", Duration::from_secs(30), c5_round_line),
        ("Bergman asymptotics", Duration::from_secs(60), c6_bergman),
        ("sigma_min transfer", Duration::from_secs(30), c7_transfert),
        ("sup-norm scaling", Duration::from_secs(300), c8_sup_norms),
        ("systole events", Duration::from_secs(600), c9_systole),
        ("curvature events", Duration::from_secs(300), c10_curvature),
        ("spectral events", Duration::from_secs(300), c11_spectral),
        ("diameter certificate", Duration::from_secs(300), c12_diameter),
        ("discriminant distance", Duration::from_secs(60), c13_discriminant),
    ];
    let selected: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failures = 0;
    for (i, (name, budget, run)) in criteria.iter().enumerate() {
        let k = i + 1;
        if !selected.is_empty() && !selected.contains(&k) {
            continue;
        }
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let elapsed = start.elapsed();
        let over = elapsed > *budget;
        let (tag, detail) = match (&outcome, over) {
            (Ok(d), false) => ("PASS", d.clone()),
            (Ok(d), true) => ("FAIL", format!("{d} [over the {:?} budget]", budget)),
            (Err(d), _) => ("FAIL", d.clone()),
        };
        if tag == "FAIL" {
            failures += 1;
        }
        println!("criterion {k:>2} {tag} {name} ({:.1} s): {detail}", elapsed.as_secs_f64());
    }
    if failures > 0 {
        println!("{failures} criterion(s) failed");
        std::process::exit(1);
    }
}
