//! Points, unitary frames, grids and local search on `CP^n`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::C64;

/// A point of `CP^n`, stored as a unit-norm representative.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProjectivePoint {
    coords: Vec<C64>,
}

pub(crate) fn norm(v: &[C64]) -> f64 {
    v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

/// Hermitian product `Σ a_i conj(b_i)`.
pub(crate) fn herm(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x * y.conj()).sum()
}

impl ProjectivePoint {
    pub fn new(coords: Vec<C64>) -> Result<Self> {
        let r = norm(&coords);
        if !(r > 0.0) || !r.is_finite() {
            return Err(Error::InvalidParameter("projective point with zero coordinates".into()));
        }
        Ok(Self { coords: coords.into_iter().map(|c| c / r).collect() })
    }

    pub fn from_real(coords: &[f64]) -> Result<Self> {
        Self::new(coords.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub fn coords(&self) -> &[C64] {
        &self.coords
    }

    /// Complex dimension `n` of the ambient `CP^n`.
    pub fn dim(&self) -> usize {
        self.coords.len() - 1
    }

    /// `|⟨p, q⟩|` of unit representatives.
    pub fn overlap(&self, other: &Self) -> f64 {
        herm(&self.coords, &other.coords).norm().min(1.0)
    }

    /// Fubini-Study geodesic distance `arccos |⟨p, q⟩|` (line diameter `π/2`).
    pub fn distance(&self, other: &Self) -> f64 {
        fs_distance_raw(&self.coords, &other.coords)
    }

    /// Point reached from `self` by the affine chart vector `z` in `frame`.
    pub fn chart_point(&self, frame: &DMatrix<C64>, z: &[C64]) -> Self {
        let m = self.coords.len();
        let mut v = self.coords.clone();
        for (i, zi) in z.iter().enumerate() {
            for r in 0..m {
                v[r] += zi * frame[(r, i + 1)];
            }
        }
        Self::new(v).expect("chart point is nonzero")
    }

    /// Exponential map: the geodesic from `self` with initial velocity `z`.
    pub fn exp_point(&self, frame: &DMatrix<C64>, z: &[C64]) -> Self {
        let r = norm(z);
        if r == 0.0 {
            return self.clone();
        }
        let m = self.coords.len();
        let mut v: Vec<C64> = self.coords.iter().map(|c| c * r.cos()).collect();
        let s = r.sin() / r;
        for (i, zi) in z.iter().enumerate() {
            for row in 0..m {
                v[row] += zi * s * frame[(row, i + 1)];
            }
        }
        Self::new(v).expect("exp point is nonzero")
    }
}

/// FS distance between two nonzero (not necessarily normalized) vectors.
pub fn fs_distance_raw(a: &[C64], b: &[C64]) -> f64 {
    let c = herm(a, b).norm() / (norm(a) * norm(b));
    // acos is ill-conditioned near 1; there the sine comes from the
    // Lagrange identity `Σ_{i<j} |a_i b_j − a_j b_i|²`, free of cancellation.
    if c > 0.9 {
        let mut wedge = 0.0;
        for i in 0..a.len() {
            for j in i + 1..a.len() {
                wedge += (a[i] * b[j] - a[j] * b[i]).norm_sqr();
            }
        }
        (wedge.sqrt() / (norm(a) * norm(b))).min(1.0).asin()
    } else {
        c.min(1.0).acos()
    }
}

/// Unitary matrix whose first column is `x` (unit norm).
pub fn unitary_frame(x: &[C64]) -> DMatrix<C64> {
    let m = x.len();
    let mut cols: Vec<Vec<C64>> = vec![x.to_vec()];
    for k in 0..m {
        if cols.len() == m {
            break;
        }
        let mut v = vec![C64::new(0.0, 0.0); m];
        v[k] = C64::new(1.0, 0.0);
        for c in &cols {
            let p = herm(&v, c);
            for i in 0..m {
                v[i] -= p * c[i];
            }
        }
        let r = norm(&v);
        if r > 0.3 {
            cols.push(v.into_iter().map(|c| c / r).collect());
        }
    }
    // Second pass to restore orthogonality to machine precision.
    let mut out: Vec<Vec<C64>> = Vec::with_capacity(m);
    for mut v in cols {
        for c in &out {
            let p = herm(&v, c);
            for i in 0..m {
                v[i] -= p * c[i];
            }
        }
        let r = norm(&v);
        out.push(v.into_iter().map(|c| c / r).collect());
    }
    DMatrix::from_fn(m, m, |r, c| out[c][r])
}

/// Haar-distributed unitary matrix via Gram-Schmidt on a Ginibre matrix.
pub fn random_unitary<R: Rng + ?Sized>(m: usize, rng: &mut R) -> DMatrix<C64> {
    loop {
        let g: Vec<Vec<C64>> = (0..m)
            .map(|_| {
                (0..m)
                    .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
                    .collect()
            })
            .collect();
        let mut out: Vec<Vec<C64>> = Vec::with_capacity(m);
        let mut ok = true;
        for mut v in g {
            for _ in 0..2 {
                for c in &out {
                    let p = herm(&v, c);
                    for i in 0..m {
                        v[i] -= p * c[i];
                    }
                }
            }
            let r = norm(&v);
            if r < 1e-8 {
                ok = false;
                break;
            }
            out.push(v.into_iter().map(|c| c / r).collect());
        }
        if ok {
            return DMatrix::from_fn(m, m, |r, c| out[c][r]);
        }
    }
}

/// Additive-recurrence quasi-random sequence in `[0,1)^dim`.
fn r_sequence(dim: usize, count: usize) -> impl Iterator<Item = Vec<f64>> {
    // Root of x^{dim+1} = x + 1.
    let mut phi = 2.0f64;
    for _ in 0..64 {
        phi = (1.0 + phi).powf(1.0 / (dim as f64 + 1.0));
    }
    let alpha: Vec<f64> = (1..=dim).map(|k| (1.0 / phi.powi(k as i32)).fract()).collect();
    (0..count).map(move |i| alpha.iter().map(|a| (0.5 + a * (i as f64 + 1.0)).fract()).collect())
}

/// Quasi-uniform points of `CP^n` for the Fubini-Study volume.
///
/// The moment map pushes the FS probability measure to the uniform measure
/// on the simplex, with independent uniform phases. The sequence is nested:
/// the first `k` points do not depend on `count ≥ k`.
pub fn quasi_uniform_points(n: usize, count: usize) -> Vec<ProjectivePoint> {
    r_sequence(2 * n, count)
        .map(|u| {
            let mut cuts: Vec<f64> = u[..n].to_vec();
            cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let mut p = Vec::with_capacity(n + 1);
            let mut prev = 0.0;
            for c in &cuts {
                p.push(c - prev);
                prev = *c;
            }
            p.push(1.0 - prev);
            let coords = p
                .iter()
                .enumerate()
                .map(|(i, &pi)| {
                    let phase = if i == 0 { 0.0 } else { 2.0 * std::f64::consts::PI * u[n + i - 1] };
                    Complex64::from_polar(pi.max(0.0).sqrt(), phase)
                })
                .collect();
            ProjectivePoint::new(coords).expect("simplex point is nonzero")
        })
        .collect()
}

/// Derivative-free pattern search over `CP^n` in the affine chart at the
/// current iterate. Minimizes `f`; pass a negated objective to maximize.
pub fn compass_minimize<F>(f: F, start: &ProjectivePoint, step: f64, tol: f64, max_evals: usize) -> (ProjectivePoint, f64)
where
    F: Fn(&ProjectivePoint) -> f64,
{
    let n = start.dim();
    let mut x = start.clone();
    let mut fx = f(&x);
    let mut h = step;
    let mut evals = 1;
    while h > tol && evals < max_evals {
        let frame = unitary_frame(x.coords());
        let mut improved = false;
        'dirs: for k in 0..2 * n {
            for sign in [1.0, -1.0] {
                let mut z = vec![C64::new(0.0, 0.0); n];
                z[k / 2] = if k % 2 == 0 { C64::new(sign * h, 0.0) } else { C64::new(0.0, sign * h) };
                let y = x.chart_point(&frame, &z);
                let fy = f(&y);
                evals += 1;
                if fy < fx {
                    x = y;
                    fx = fy;
                    improved = true;
                    break 'dirs;
                }
            }
        }
        if !improved {
            h *= 0.5;
        }
    }
    (x, fx)
}
