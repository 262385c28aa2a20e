//! Linear projections `CP^2 ⇢ CP^1` from a center and the fibers of `Z(s)`.

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::ensemble::{sup_norm_estimate, KostlanSection};
use crate::error::{Error, Result};
use crate::poly::{HomogeneousPoly, C64};
use crate::projective::{fs_distance_raw, random_unitary, ProjectivePoint};
use crate::roots::polynomial_roots;

use super::branch::{detect_branch_points_with, BranchData, BranchOptions};

/// Roots closer than this (FS distance of the lifted points) are treated
/// as a collision.
pub const CLUSTER_TOL: f64 = 1e-5;

/// Maximum number of random frames tried by [`choose_pencil`].
pub const MAX_PENCIL_ATTEMPTS: usize = 64;

/// Projection from `c = frame·e_0`: `[Z] ↦ [Y_1 : Y_2]` with `Y = frame^* Z`.
///
/// The fiber over a base point `[u:v]` is the line `{[t:u:v]}` in frame
/// coordinates; on it the section restricts to a polynomial in `t` whose
/// leading coefficient is `P(c)`.
#[derive(Debug, Clone)]
pub struct Pencil {
    pub frame: DMatrix<C64>,
    pub degree: usize,
    /// `P ∘ frame`.
    pub(crate) g: HomogeneousPoly,
    /// Estimate of `sup |s|` used to make thresholds relative.
    pub sup: f64,
    /// Branch data found while validating the pencil.
    pub branch: Option<BranchData>,
}

impl Pencil {
    /// Pencil with an explicit frame, without admissibility checks.
    pub fn from_frame(s: &KostlanSection, frame: DMatrix<C64>) -> Result<Self> {
        if s.n != 2 || s.r != 1 {
            return Err(Error::InvalidParameter("pencils are defined for sections on CP^2 with r = 1".into()));
        }
        if frame.nrows() != 3 || frame.ncols() != 3 {
            return Err(Error::InvalidParameter("pencil frame must be 3×3".into()));
        }
        let g = s.polynomial().compose_linear(&frame);
        let sup = sup_norm_estimate(s, 0, 16.max(2 * s.d))?;
        Ok(Self { frame, degree: s.d, g, sup, branch: None })
    }

    pub fn center(&self) -> ProjectivePoint {
        ProjectivePoint::new(self.frame.column(0).iter().copied().collect()).expect("unitary column")
    }

    /// Base point of `p` under the projection.
    pub fn project(&self, p: &ProjectivePoint) -> Result<ProjectivePoint> {
        let z = nalgebra::DVector::from_column_slice(p.coords());
        let y = self.frame.adjoint() * z;
        ProjectivePoint::new(vec![y[1], y[2]]).map_err(|_| Error::InvalidParameter("the center has no image".into()))
    }

    /// `|P(c)|` in the `h^d` metric.
    pub fn center_value(&self) -> f64 {
        self.g.coeffs[self.g.basis().index_of(&[self.degree as u32, 0, 0]).expect("monomial t^d")].norm()
    }

    /// Ascending coefficients in `t` of `G(t, u, v)`.
    pub(crate) fn fiber_polynomial(&self, base: &[C64]) -> Vec<C64> {
        self.g.restrict_first(base)
    }

    /// Frame coordinates `(t, u, v)` mapped back to `CP^2`.
    pub(crate) fn lift(&self, t: C64, base: &[C64]) -> ProjectivePoint {
        let y = nalgebra::DVector::from_column_slice(&[t, base[0], base[1]]);
        ProjectivePoint::new((&self.frame * y).iter().copied().collect()).expect("nonzero")
    }

    /// Raw `t`-roots over `base`, with `d` entries whenever `P(c) ≠ 0`.
    pub(crate) fn fiber_t_roots(&self, base: &[C64]) -> Vec<C64> {
        let q = self.fiber_polynomial(base);
        polynomial_roots(&q)
    }

    pub(crate) fn lift_distance(&self, base_a: &[C64], ta: C64, base_b: &[C64], tb: C64) -> f64 {
        fs_distance_raw(&[ta, base_a[0], base_a[1]], &[tb, base_b[0], base_b[1]])
    }
}

/// The roots of `s` on the fiber over `base`, lifted to `CP^2`.
pub fn fiber_roots(s: &KostlanSection, pencil: &Pencil, base: &ProjectivePoint) -> Result<Vec<ProjectivePoint>> {
    let b = base.coords();
    let q = pencil.fiber_polynomial(b);
    let scale = q.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let found = q.iter().rposition(|c| c.norm() > 1e-12 * scale.max(f64::MIN_POSITIVE)).unwrap_or(0);
    if found < s.d || scale == 0.0 {
        return Err(Error::FiberDegenerate { found, expected: s.d });
    }
    let roots = polynomial_roots(&q);
    let pts: Vec<ProjectivePoint> = roots.iter().map(|&t| pencil.lift(t, b)).collect();
    for i in 0..pts.len() {
        for j in 0..i {
            let gap = pts[i].distance(&pts[j]);
            if gap < CLUSTER_TOL {
                return Err(Error::NearBranch { gap });
            }
        }
    }
    Ok(pts)
}

/// Draw random unitary frames until the projection is admissible: the
/// center is off the curve by `1e-6·sup|s|`, the cover has `d(d−1)` simple
/// branch values, and they are pairwise at FS distance at least
/// `min_separation`.
pub fn choose_pencil(s: &KostlanSection, seed: u64) -> Result<Pencil> {
    choose_pencil_with(s, seed, &BranchOptions::default())
}

pub fn choose_pencil_with(s: &KostlanSection, seed: u64, opts: &BranchOptions) -> Result<Pencil> {
    if s.coefficient_norm() == 0.0 {
        return Err(Error::InvalidParameter("zero section".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..MAX_PENCIL_ATTEMPTS {
        let u = random_unitary(3, &mut rng);
        let mut pencil = Pencil::from_frame(s, u)?;
        match admissibility(s, &pencil, opts) {
            Ok(b) => {
                pencil.branch = Some(b);
                return Ok(pencil);
            }
            Err(Error::FiberDegenerate { .. } | Error::MultiplicityAnomaly(_) | Error::NearBranch { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::PencilNotFound { attempts: MAX_PENCIL_ATTEMPTS })
}

/// Check the admissibility conditions of [`choose_pencil`] for a given
/// pencil, returning its branch data.
///
/// A center on the curve is reported as [`Error::FiberDegenerate`] (every
/// fiber polynomial drops degree); branch values closer than
/// `opts.min_separation` as [`Error::NearBranch`].
pub fn admissibility(s: &KostlanSection, pencil: &Pencil, opts: &BranchOptions) -> Result<BranchData> {
    if pencil.center_value() <= 1e-6 * pencil.sup {
        return Err(Error::FiberDegenerate { found: 0, expected: s.d });
    }
    let b = detect_branch_points_with(s, pencil, opts)?;
    let gap = b.min_separation();
    if gap < opts.min_separation {
        return Err(Error::NearBranch { gap });
    }
    Ok(b)
}
