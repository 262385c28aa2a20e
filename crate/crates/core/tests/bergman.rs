//! Bergman kernel checks: reproducing property by quadrature, diagonal
//! constancy, and agreement of the two evaluation routes.

use divlab::bergman::{bergman_kernel, rescaled_error, rescaled_sample_pairs, KernelMethod};
use divlab::ensemble::{sample_section, SamplingMode};
use divlab::poly::C64;
use divlab::ProjectivePoint;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use std::f64::consts::TAU;

fn random_point(n: usize, rng: &mut ChaCha8Rng) -> ProjectivePoint {
    let c = (0..=n).map(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))).collect();
    ProjectivePoint::new(c).unwrap()
}

#[test]
fn reproducing_property_on_the_line() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let m = 128;
    for (d, seed) in [(3usize, 1u64), (6, 2), (10, 3)] {
        let s = sample_section(1, d, 1, seed, SamplingMode::Gaussian).unwrap();
        let x = random_point(1, &mut rng);
        // Moment coordinate t = |w_1|² is uniform for the probability
        // volume; phases are uniform. Midpoint rule in t, equispaced phases.
        let mut acc = C64::new(0.0, 0.0);
        for i in 0..m {
            let t = (i as f64 + 0.5) / m as f64;
            for k in 0..m {
                let th = TAU * k as f64 / m as f64;
                let w = ProjectivePoint::new(vec![C64::new((1.0 - t).sqrt(), 0.0), C64::from_polar(t.sqrt(), th)]).unwrap();
                let e = bergman_kernel(1, d, &x, &w, KernelMethod::ClosedForm).unwrap().value;
                acc += e * s.polynomial().eval(w.coords());
            }
        }
        acc /= (m * m) as f64;
        let target = s.polynomial().eval(x.coords());
        let scale = s.coefficient_norm();
        assert!((acc - target).norm() < 1e-2 * scale, "d={d}: {acc} vs {target}");
    }
}

#[test]
fn diagonal_is_constant() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for (n, d) in [(1usize, 7usize), (2, 5), (3, 3)] {
        let vals: Vec<f64> = (0..100)
            .map(|_| {
                let x = random_point(n, &mut rng);
                bergman_kernel(n, d, &x, &x, KernelMethod::BasisSum).unwrap().value.re
            })
            .collect();
        let mean = vals.iter().sum::<f64>() / vals.len() as f64;
        let sd = (vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / vals.len() as f64).sqrt();
        assert!(sd < 1e-8 * mean, "n={n} d={d}: sd {sd} mean {mean}");
        let dim: f64 = (1..=n).map(|i| (d + i) as f64 / i as f64).product();
        assert!((mean - dim).abs() < 1e-9 * dim);
    }
}

#[test]
fn rescaled_error_shrinks_with_degree() {
    let x = ProjectivePoint::from_real(&[0.3, 0.5, 0.8]).unwrap();
    let samples = rescaled_sample_pairs(2, 40, 9);
    let errs: Vec<f64> = [5usize, 10, 20, 40].iter().map(|&d| rescaled_error(2, d, &x, 0, &samples).unwrap()).collect();
    for w in errs.windows(2) {
        assert!(w[1] <= 0.75 * w[0], "{errs:?}");
    }
    let e1: Vec<f64> = [5usize, 10, 20, 40].iter().map(|&d| rescaled_error(2, d, &x, 1, &samples).unwrap()).collect();
    assert!(e1[3] < e1[0], "{e1:?}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn basis_sum_matches_closed_form(seed in 0u64..10_000, n in 1usize..4, d in 0usize..9) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let z = random_point(n, &mut rng);
        let w = random_point(n, &mut rng);
        let a = bergman_kernel(n, d, &z, &w, KernelMethod::BasisSum).unwrap().value;
        let b = bergman_kernel(n, d, &z, &w, KernelMethod::ClosedForm).unwrap().value;
        prop_assert!((a - b).norm() < 1e-10 * (1.0 + b.norm()));
    }

    #[test]
    fn kernel_is_hermitian(seed in 0u64..10_000, d in 1usize..9) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let z = random_point(2, &mut rng);
        let w = random_point(2, &mut rng);
        let a = bergman_kernel(2, d, &z, &w, KernelMethod::BasisSum).unwrap().value;
        let b = bergman_kernel(2, d, &w, &z, KernelMethod::BasisSum).unwrap().value;
        prop_assert!((a - b.conj()).norm() < 1e-10 * (1.0 + a.norm()));
    }
}
