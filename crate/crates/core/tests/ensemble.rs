//! Ensemble properties checked against independent quadrature and moment
//! estimates.

use divlab::ensemble::{eval_jet, pointwise_norms, sample_section, KostlanSection, SamplingMode};
use divlab::poly::C64;
use divlab::projective::random_unitary;
use divlab::ProjectivePoint;
use nalgebra::DMatrix;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::TAU;

/// Quadrature nodes on the moment simplex `{p ≥ 0, Σp = 1}` of `CP^n`.
///
/// Under the moment map `Z ↦ (|Z_0|², …, |Z_n|²)` the Fubini-Study
/// probability volume pushes forward to the uniform measure on the simplex
/// times the uniform measure on the phase torus.
fn simplex_nodes(n: usize, m: usize) -> Vec<(Vec<f64>, f64)> {
    match n {
        // composite Simpson on [0, 1]
        1 => (0..=2 * m)
            .map(|i| {
                let t = i as f64 / (2 * m) as f64;
                let w = if i == 0 || i == 2 * m {
                    1.0
                } else if i % 2 == 1 {
                    4.0
                } else {
                    2.0
                };
                (vec![1.0 - t, t], w / (6 * m) as f64)
            })
            .collect(),
        // edge-midpoint rule on an m×m subdivision of the triangle
        2 => {
            let h = 1.0 / m as f64;
            let mut out = Vec::new();
            let cells = (m * m) as f64;
            let mut push = |a: [f64; 2], b: [f64; 2], c: [f64; 2]| {
                for (u, v) in [(a, b), (b, c), (c, a)] {
                    let x = 0.5 * (u[0] + v[0]);
                    let y = 0.5 * (u[1] + v[1]);
                    out.push((vec![1.0 - x - y, x, y], 1.0 / (3.0 * cells)));
                }
            };
            for i in 0..m {
                for j in 0..m - i {
                    let (x, y) = (i as f64 * h, j as f64 * h);
                    push([x, y], [x + h, y], [x, y + h]);
                    if i + j + 1 < m {
                        push([x + h, y], [x + h, y + h], [x, y + h]);
                    }
                }
            }
            out
        }
        _ => unreachable!(),
    }
}

fn unit_section(n: usize, d: usize, k: usize) -> KostlanSection {
    let dim = divlab::ensemble::basis_dimension(n, d, 1).unwrap();
    let mut c = vec![C64::new(0.0, 0.0); dim];
    c[k] = C64::new(1.0, 0.0);
    KostlanSection::from_coefficients(n, d, 1, 0, SamplingMode::Gaussian, c).unwrap()
}

fn gram_matrix(n: usize, d: usize, radial: usize, phases: usize) -> DMatrix<C64> {
    let dim = divlab::ensemble::basis_dimension(n, d, 1).unwrap();
    let basis: Vec<KostlanSection> = (0..dim).map(|k| unit_section(n, d, k)).collect();
    let mut g = DMatrix::from_element(dim, dim, C64::new(0.0, 0.0));
    let nodes = simplex_nodes(n, radial);
    let phase_count = phases.pow(n as u32);
    for (p, w) in &nodes {
        for t in 0..phase_count {
            let mut coords = vec![C64::new(p[0].max(0.0).sqrt(), 0.0)];
            let mut rest = t;
            for pi in &p[1..] {
                let theta = TAU * (rest % phases) as f64 / phases as f64;
                rest /= phases;
                coords.push(C64::from_polar(pi.max(0.0).sqrt(), theta));
            }
            let vals: Vec<C64> = basis.iter().map(|s| s.polynomial().eval(&coords)).collect();
            let wt = w / phase_count as f64;
            for i in 0..dim {
                for j in 0..dim {
                    g[(i, j)] += vals[i] * vals[j].conj() * wt;
                }
            }
        }
    }
    g
}

#[test]
fn weighted_monomials_are_orthonormal_on_the_line() {
    for d in 1..=6 {
        let g = gram_matrix(1, d, 64, 64);
        let err = (g - DMatrix::identity(d + 1, d + 1)).iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert!(err < 1e-3, "d={d}: {err}");
    }
}

#[test]
fn weighted_monomials_are_orthonormal_on_the_plane() {
    for d in 1..=3 {
        let g = gram_matrix(2, d, 64, 8);
        let dim = (d + 1) * (d + 2) / 2;
        let err = (g - DMatrix::identity(dim, dim)).iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert!(err < 1e-3, "d={d}: {err}");
    }
}

#[test]
fn gaussian_second_moments_match_identity() {
    let (n, d, draws) = (1, 3, 10_000);
    let dim = d + 1;
    let mut m = DMatrix::from_element(dim, dim, C64::new(0.0, 0.0));
    let mut sq = DMatrix::from_element(dim, dim, 0.0);
    for seed in 0..draws {
        let s = sample_section(n, d, 1, seed as u64, SamplingMode::Gaussian).unwrap();
        for i in 0..dim {
            for j in 0..dim {
                let p = s.coefficients[i] * s.coefficients[j].conj();
                m[(i, j)] += p;
                sq[(i, j)] += p.norm_sqr();
            }
        }
    }
    let nd = draws as f64;
    for i in 0..dim {
        for j in 0..dim {
            let mean = m[(i, j)] / nd;
            let target = if i == j { 1.0 } else { 0.0 };
            let var = sq[(i, j)] / nd - mean.norm_sqr();
            let se = (var / nd).sqrt();
            assert!((mean - target).norm() < 3.0 * se, "({i},{j}) mean {mean} se {se}");
        }
    }
}

#[test]
fn sphere_mode_lies_on_unit_sphere() {
    for seed in 0..20 {
        let s = sample_section(2, 5, 1, seed, SamplingMode::Sphere).unwrap();
        assert!((s.coefficient_norm() - 1.0).abs() < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn pointwise_norms_are_unitarily_invariant(seed in 0u64..1000, d in 1usize..6, x in proptest::collection::vec(-1.0f64..1.0, 6)) {
        let s = sample_section(2, d, 1, seed, SamplingMode::Gaussian).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        let u = random_unitary(3, &mut rng);
        let t = s.transformed(&u).unwrap();
        let coords: Vec<C64> = (0..3).map(|i| C64::new(x[2 * i], x[2 * i + 1])).collect();
        prop_assume!(coords.iter().map(|c| c.norm_sqr()).sum::<f64>() > 1e-3);
        let p = ProjectivePoint::new(coords.clone()).unwrap();
        let up = ProjectivePoint::new((&u * nalgebra::DVector::from_vec(coords)).iter().copied().collect()).unwrap();
        let a = pointwise_norms(&eval_jet(&s, &p));
        let b = pointwise_norms(&eval_jet(&t, &up));
        for (x, y) in [(a.value, b.value), (a.grad, b.grad), (a.hess, b.hess), (a.sigma_min, b.sigma_min)] {
            prop_assert!((x - y).abs() < 1e-8 * (1.0 + x.abs()), "{x} vs {y}");
        }
    }

    #[test]
    fn json_round_trip_preserves_values(seed in 0u64..1000, d in 1usize..8) {
        let s = sample_section(2, d, 1, seed, SamplingMode::Sphere).unwrap();
        let t = KostlanSection::from_json(&s.to_json()).unwrap();
        prop_assert_eq!(&s.coefficients, &t.coefficients);
    }
}
