//! Kostlan random sections of `O(d)` on `CP^n` and their pointwise jets.
//!
//! A section is stored by its coefficients `a_I` in the weighted monomial
//! basis `w_I Z^I`, `w_I = √((n+d)! / (n! I!))`, which is orthonormal for the
//! Fubini-Study probability volume. Gaussian sections have i.i.d. complex
//! coefficients with `E|a_I|² = 1`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{monomial_exponents, HomogeneousPoly, MonomialBasis, C64};
use crate::projective::{compass_minimize, quasi_uniform_points, unitary_frame, ProjectivePoint};

/// Exponent tuple `(i_0, …, i_n)` of a monomial.
pub type MultiIndex = Vec<u32>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SamplingMode {
    Gaussian,
    Sphere,
}

impl std::str::FromStr for SamplingMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gaussian" => Ok(Self::Gaussian),
            "sphere" => Ok(Self::Sphere),
            _ => Err(Error::InvalidParameter(format!("unknown sampling mode {s:?}"))),
        }
    }
}

impl std::fmt::Display for SamplingMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Gaussian => "gaussian",
            Self::Sphere => "sphere",
        })
    }
}

fn ln_factorial(k: u64) -> f64 {
    (2..=k).map(|i| (i as f64).ln()).sum()
}

/// `C(a, b)` for small arguments.
pub fn binomial(a: u64, b: u64) -> u128 {
    if b > a {
        return 0;
    }
    let b = b.min(a - b);
    let mut acc: u128 = 1;
    for i in 0..b {
        acc = acc * (a - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// Complex dimension `r·C(n+d, n)` of the section space.
pub fn basis_dimension(n: usize, d: usize, r: usize) -> Result<usize> {
    if n < 1 || r < 1 {
        return Err(Error::InvalidParameter(format!("need n ≥ 1, r ≥ 1 (got n={n}, r={r})")));
    }
    Ok(r * binomial((n + d) as u64, n as u64) as usize)
}

/// `√((n+d)! / (n! i_0! ⋯ i_n!))`, evaluated in log space.
pub fn kostlan_weight(index: &[u32], n: usize, d: usize) -> Result<f64> {
    if index.len() != n + 1 || index.iter().map(|&i| i as usize).sum::<usize>() != d {
        return Err(Error::InvalidParameter(format!("multi-index {index:?} is not of degree {d} in {} variables", n + 1)));
    }
    let ln = ln_factorial((n + d) as u64) - ln_factorial(n as u64) - index.iter().map(|&i| ln_factorial(i as u64)).sum::<f64>();
    Ok((0.5 * ln).exp())
}

/// A section of `O(d)^{⊕r}` on `CP^n` (numerics require `r = 1`).
#[derive(Debug, Clone)]
pub struct KostlanSection {
    pub n: usize,
    pub d: usize,
    pub r: usize,
    pub seed: u64,
    pub mode: SamplingMode,
    /// Weighted-basis coefficients, slot-major, colex order within a slot.
    pub coefficients: Vec<C64>,
    polys: Vec<HomogeneousPoly>,
}

#[derive(Serialize, Deserialize)]
struct SectionRecord {
    n: usize,
    d: usize,
    r: usize,
    seed: u64,
    mode: SamplingMode,
    coefficients: Vec<[f64; 2]>,
}

impl KostlanSection {
    pub fn from_coefficients(n: usize, d: usize, r: usize, seed: u64, mode: SamplingMode, coefficients: Vec<C64>) -> Result<Self> {
        let dim = basis_dimension(n, d, r)?;
        if coefficients.len() != dim {
            return Err(Error::InvalidParameter(format!("expected {dim} coefficients, got {}", coefficients.len())));
        }
        let basis = MonomialBasis::new(n, d);
        let weights: Vec<f64> = basis.exps.iter().map(|e| kostlan_weight(e, n, d).unwrap()).collect();
        let per = basis.len();
        let polys = (0..r)
            .map(|slot| {
                let c = coefficients[slot * per..(slot + 1) * per].iter().zip(&weights).map(|(a, w)| a * *w).collect();
                HomogeneousPoly::from_coeffs(basis.clone(), c)
            })
            .collect();
        Ok(Self { n, d, r, seed, mode, coefficients, polys })
    }

    /// Wrap an explicit polynomial (plain monomial coefficients), `r = 1`.
    pub fn from_polynomial(p: &HomogeneousPoly) -> Self {
        let (n, d) = (p.n(), p.degree());
        let a = p
            .basis()
            .exps
            .iter()
            .zip(&p.coeffs)
            .map(|(e, c)| c / kostlan_weight(e, n, d).unwrap())
            .collect();
        Self::from_coefficients(n, d, 1, 0, SamplingMode::Gaussian, a).expect("consistent dimensions")
    }

    /// Rescale to unit coefficient norm.
    pub fn normalized(&self) -> Self {
        let r = self.coefficient_norm();
        let c = self.coefficients.iter().map(|a| a / r).collect();
        Self::from_coefficients(self.n, self.d, self.r, self.seed, SamplingMode::Sphere, c).unwrap()
    }

    pub fn coefficient_norm(&self) -> f64 {
        self.coefficients.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn multi_indices(&self) -> Vec<MultiIndex> {
        monomial_exponents(self.n, self.d)
    }

    /// The polynomial of slot 0 in the plain monomial basis.
    pub fn polynomial(&self) -> &HomogeneousPoly {
        &self.polys[0]
    }

    pub(crate) fn require_line_bundle(&self) -> Result<()> {
        if self.r != 1 {
            return Err(Error::InvalidParameter("pointwise numerics support rank r = 1 only".into()));
        }
        Ok(())
    }

    /// `|s(x)|` in the metric `h^d`.
    pub fn value_norm(&self, x: &ProjectivePoint) -> f64 {
        self.polys[0].eval(x.coords()).norm()
    }

    /// The section `Z ↦ s(U^{-1} Z)`; its zero set is `U·Z(s)`.
    pub fn transformed(&self, u: &DMatrix<C64>) -> Result<Self> {
        self.require_line_bundle()?;
        let q = self.polys[0].compose_linear(&u.adjoint());
        let mut out = Self::from_polynomial(&q);
        out.seed = self.seed;
        out.mode = self.mode;
        Ok(out)
    }

    pub fn to_json(&self) -> String {
        let rec = SectionRecord {
            n: self.n,
            d: self.d,
            r: self.r,
            seed: self.seed,
            mode: self.mode,
            coefficients: self.coefficients.iter().map(|c| [c.re, c.im]).collect(),
        };
        serde_json::to_string_pretty(&rec).expect("section serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let rec: SectionRecord = serde_json::from_str(s).map_err(|e| Error::Serialization(e.to_string()))?;
        let c = rec.coefficients.iter().map(|p| Complex64::new(p[0], p[1])).collect();
        Self::from_coefficients(rec.n, rec.d, rec.r, rec.seed, rec.mode, c)
    }
}

/// Draw a section; identical arguments give bit-identical coefficients.
pub fn sample_section(n: usize, d: usize, r: usize, seed: u64, mode: SamplingMode) -> Result<KostlanSection> {
    let dim = basis_dimension(n, d, r)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut c: Vec<C64> = (0..dim)
        .map(|_| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            Complex64::new(re * s, im * s)
        })
        .collect();
    if mode == SamplingMode::Sphere {
        let norm = c.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        for a in &mut c {
            *a /= norm;
        }
    }
    KostlanSection::from_coefficients(n, d, r, seed, mode, c)
}

/// Value and first two covariant derivatives of a section at a point.
///
/// The chart `z ↦ [x + Σ z_i e_i]` built on the unitary frame `(x, e_1, …,
/// e_n)` is holomorphically normal at `x` and the connection form of the
/// Chern connection vanishes there, so the covariant derivatives at `x` are
/// the plain holomorphic derivatives of `P` along the frame vectors. `hess`
/// is the `(1,0)(1,0)` part; the `(0,1)(1,0)` part equals `-d·s(x)·δ`.
#[derive(Debug, Clone)]
pub struct JetFrame {
    pub point: ProjectivePoint,
    pub degree: usize,
    pub value: C64,
    pub grad: Vec<C64>,
    pub hess: DMatrix<C64>,
    pub frame: DMatrix<C64>,
}

pub fn eval_jet(s: &KostlanSection, x: &ProjectivePoint) -> JetFrame {
    let frame = unitary_frame(x.coords());
    eval_jet_in_frame(s, x, &frame)
}

/// As [`eval_jet`] with a caller-supplied unitary frame (first column ∝ `x`).
pub fn eval_jet_in_frame(s: &KostlanSection, x: &ProjectivePoint, frame: &DMatrix<C64>) -> JetFrame {
    let n = s.n;
    let (value, g, h) = s.polys[0].eval_jet2(x.coords());
    let e = frame.columns(1, n);
    let grad_row = nalgebra::RowDVector::from_row_slice(&g) * e;
    let hess = e.transpose() * &h * e;
    JetFrame {
        point: x.clone(),
        degree: s.d,
        value,
        grad: grad_row.iter().copied().collect(),
        hess,
        frame: frame.clone(),
    }
}

/// Norms of a jet in its orthonormal frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointwiseNorms {
    pub value: f64,
    pub grad: f64,
    pub hess: f64,
    pub sigma_min: f64,
}

/// `(|s|, ‖∇s‖, ‖∇²s‖, σ_min(∇s))`.
///
/// `‖∇²s‖` is the largest singular value of the holomorphic Hessian plus the
/// norm `d·|s|` of the curvature part; it is exact on the zero set.
pub fn pointwise_norms(j: &JetFrame) -> PointwiseNorms {
    let grad = j.grad.iter().map(|g| g.norm_sqr()).sum::<f64>().sqrt();
    let hess_op = if j.hess.nrows() == 0 {
        0.0
    } else {
        j.hess.clone().svd(false, false).singular_values.max()
    };
    PointwiseNorms {
        value: j.value.norm(),
        grad,
        hess: hess_op + j.degree as f64 * j.value.norm(),
        // rank one: the gradient row has a single singular value
        sigma_min: grad,
    }
}

fn norm_of_order(s: &KostlanSection, x: &ProjectivePoint, k: usize) -> f64 {
    match k {
        0 => s.value_norm(x),
        1 => {
            let frame = unitary_frame(x.coords());
            let (_, g) = s.polys[0].eval_grad(x.coords());
            let mut acc = 0.0;
            for i in 1..=s.n {
                let gi: C64 = (0..=s.n).map(|r| g[r] * frame[(r, i)]).sum();
                acc += gi.norm_sqr();
            }
            acc.sqrt()
        }
        _ => pointwise_norms(&eval_jet(s, x)).hess,
    }
}

/// Grid-plus-ascent estimate of `sup_x ‖∇^k s(x)‖` for `k ∈ {0,1,2}`.
///
/// The grid has `resolution²` quasi-uniform points (nested in the
/// resolution); the best eight grid points are refined by pattern search.
pub fn sup_norm_estimate(s: &KostlanSection, k: usize, resolution: usize) -> Result<f64> {
    s.require_line_bundle()?;
    if resolution < 1 || k > 2 {
        return Err(Error::InvalidParameter(format!("need resolution ≥ 1 and k ≤ 2 (got {resolution}, {k})")));
    }
    let count = resolution * resolution;
    let pts = quasi_uniform_points(s.n, count);
    let mut vals: Vec<(f64, usize)> = pts.iter().enumerate().map(|(i, p)| (norm_of_order(s, p, k), i)).collect();
    vals.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap().then(a.1.cmp(&b.1)));
    let n = s.n as f64;
    let vol = std::f64::consts::PI.powf(n) / (1..=s.n).map(|i| i as f64).product::<f64>();
    let spacing = (vol / count as f64).powf(1.0 / (2.0 * n));
    let mut best = vals[0].0;
    for &(_, i) in vals.iter().take(8) {
        let (_, f) = compass_minimize(|p| -norm_of_order(s, p, k), &pts[i], 0.5 * spacing, 1e-7, 4000);
        best = best.max(-f);
    }
    Ok(best)
}
