//! Exact Chern and Segre class calculus in `Q[h]/(h^{n+1})`.
//!
//! Classes are polynomials in one degree-two generator `h` with a
//! top-degree integration functional `∫ h^n = top_degree`. For `CP^n`,
//! `h` is the hyperplane class and `top_degree = 1`; a smooth degree-`e`
//! hypersurface of `CP^{n+1}` uses `top_degree = e`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

fn q(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// Generalized binomial `a(a−1)⋯(a−m+1)/m!`, valid for negative `a`.
pub fn generalized_binomial(a: i64, m: i64) -> BigInt {
    if m < 0 {
        return BigInt::zero();
    }
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..m {
        num *= BigInt::from(a - i);
        den *= BigInt::from(i + 1);
    }
    num / den
}

/// Element `Σ_k c_k h^k` of the truncated cohomology ring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CohomologyPolynomial {
    pub n: usize,
    pub coeffs: Vec<BigRational>,
    pub top_degree: BigRational,
}

impl CohomologyPolynomial {
    /// Class on `CP^n` from its coefficients (extra degrees are truncated).
    pub fn new(n: usize, coeffs: Vec<BigRational>) -> Self {
        Self::with_top_degree(n, coeffs, BigRational::one())
    }

    pub fn with_top_degree(n: usize, mut coeffs: Vec<BigRational>, top_degree: BigRational) -> Self {
        coeffs.resize(n + 1, BigRational::zero());
        Self { n, coeffs, top_degree }
    }

    pub fn from_integers(n: usize, coeffs: &[i64]) -> Self {
        Self::new(n, coeffs.iter().map(|&c| q(c)).collect())
    }

    pub fn scalar(&self, c: BigRational) -> Self {
        Self::with_top_degree(self.n, vec![c], self.top_degree.clone())
    }

    pub fn one(n: usize) -> Self {
        Self::from_integers(n, &[1])
    }

    /// The generator `h`.
    pub fn hyperplane(n: usize) -> Self {
        Self::from_integers(n, &[0, 1])
    }

    pub fn part(&self, k: i64) -> BigRational {
        if k < 0 || k as usize > self.n {
            BigRational::zero()
        } else {
            self.coeffs[k as usize].clone()
        }
    }

    /// The degree-`k` homogeneous component as a class.
    pub fn component(&self, k: usize) -> Self {
        let mut c = vec![BigRational::zero(); self.n + 1];
        if k <= self.n {
            c[k] = self.coeffs[k].clone();
        }
        Self::with_top_degree(self.n, c, self.top_degree.clone())
    }

    /// Top coefficient times `∫ h^n`.
    pub fn integrate(&self) -> BigRational {
        &self.coeffs[self.n] * &self.top_degree
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.n != other.n || self.top_degree != other.top_degree {
            return Err(Error::InvalidParameter("classes live in different cohomology rings".into()));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let c = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Ok(Self::with_top_degree(self.n, c, self.top_degree.clone()))
    }

    pub fn scale(&self, s: &BigRational) -> Self {
        let c = self.coeffs.iter().map(|a| a * s).collect();
        Self::with_top_degree(self.n, c, self.top_degree.clone())
    }

    /// Pullback under multiplication by `-1` on degree-one classes
    /// (`c_k ↦ (−1)^k c_k`), which sends `c(E)` to `c(E*)`.
    pub fn alternate(&self) -> Self {
        let c = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, a)| if k % 2 == 1 { -a } else { a.clone() })
            .collect();
        Self::with_top_degree(self.n, c, self.top_degree.clone())
    }

    pub fn pow(&self, e: usize) -> Self {
        let mut acc = self.scalar(BigRational::one());
        for _ in 0..e {
            acc = ring_mul(&acc, self).expect("same ring");
        }
        acc
    }

    /// Multiplicative inverse; requires an invertible constant term.
    pub fn inverse(&self) -> Result<Self> {
        let c0 = &self.coeffs[0];
        if c0.is_zero() {
            return Err(Error::InvalidParameter("class with zero constant term is not invertible".into()));
        }
        let mut inv = vec![BigRational::zero(); self.n + 1];
        inv[0] = c0.recip();
        for k in 1..=self.n {
            let mut acc = BigRational::zero();
            for i in 1..=k {
                acc += &self.coeffs[i] * &inv[k - i];
            }
            inv[k] = -acc * c0.recip();
        }
        Ok(Self::with_top_degree(self.n, inv, self.top_degree.clone()))
    }
}

/// Product truncated above degree `n`.
pub fn ring_mul(a: &CohomologyPolynomial, b: &CohomologyPolynomial) -> Result<CohomologyPolynomial> {
    a.check_compatible(b)?;
    let n = a.n;
    let mut c = vec![BigRational::zero(); n + 1];
    for i in 0..=n {
        if a.coeffs[i].is_zero() {
            continue;
        }
        for j in 0..=(n - i) {
            c[i + j] += &a.coeffs[i] * &b.coeffs[j];
        }
    }
    Ok(CohomologyPolynomial::with_top_degree(n, c, a.top_degree.clone()))
}

/// A vector bundle described by its rank and total Chern class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BundleData {
    pub rank: usize,
    pub chern: CohomologyPolynomial,
}

impl BundleData {
    pub fn new(rank: usize, chern: CohomologyPolynomial) -> Result<Self> {
        if chern.coeffs[0] != BigRational::one() {
            return Err(Error::InvalidParameter("total Chern class must start with 1".into()));
        }
        if let Some(k) = (rank + 1..=chern.n).find(|&k| !chern.coeffs[k].is_zero()) {
            return Err(Error::InvalidParameter(format!("c_{k} is nonzero for a bundle of rank {rank}")));
        }
        Ok(Self { rank, chern })
    }

    pub fn trivial(n: usize, rank: usize) -> Self {
        Self { rank, chern: CohomologyPolynomial::one(n) }
    }

    /// `O(a)` on `CP^n`.
    pub fn line(n: usize, a: i64) -> Self {
        Self { rank: 1, chern: CohomologyPolynomial::from_integers(n, &[1, a]) }
    }

    /// Cotangent bundle of `CP^n`, `c(Ω) = (1 − h)^{n+1}`.
    pub fn cotangent_projective(n: usize) -> Self {
        Self { rank: n, chern: CohomologyPolynomial::from_integers(n, &[1, -1]).pow(n + 1) }
    }

    pub fn dual(&self) -> Self {
        Self { rank: self.rank, chern: self.chern.alternate() }
    }
}

/// Total Segre class `s(E) = c(E)^{-1}`.
pub fn segre_from_chern(b: &BundleData) -> CohomologyPolynomial {
    b.chern.inverse().expect("c_0 = 1")
}

/// Total Chern class of `E ⊗ M` where `c_1(M) = t`:
/// `c_ℓ(E⊗M) = Σ_m C(r−ℓ+m, m)·c_{ℓ−m}(E)·t^m`.
pub fn chern_tensor_line(b: &BundleData, t: &CohomologyPolynomial) -> Result<CohomologyPolynomial> {
    b.chern.check_compatible(t)?;
    let n = b.chern.n;
    let r = b.rank as i64;
    let t1 = t.component(1);
    let tp: Vec<CohomologyPolynomial> = (0..=n).map(|m| t1.pow(m)).collect();
    let mut out = b.chern.scalar(BigRational::zero());
    for l in 0..=(b.rank.min(n)) {
        for m in 0..=l {
            let coeff = BigRational::from_integer(generalized_binomial(r - l as i64 + m as i64, m as i64));
            if coeff.is_zero() {
                continue;
            }
            out = out.add(&ring_mul(&b.chern.component(l - m), &tp[m])?.scale(&coeff))?;
        }
    }
    Ok(out)
}

/// `E ⊗ M` as a bundle.
pub fn twist(b: &BundleData, t: &CohomologyPolynomial) -> Result<BundleData> {
    Ok(BundleData { rank: b.rank, chern: chern_tensor_line(b, t)? })
}

/// Degree of the discriminant hypersurface together with its polynomial
/// dependence on `d` (ascending coefficients).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiscriminantDegree {
    pub degree: BigInt,
    pub polynomial: Vec<BigRational>,
}

fn check_inputs(n: usize, r: usize, omega: &BundleData, e: &BundleData, l_c1: &CohomologyPolynomial) -> Result<()> {
    if r < 1 || r > n {
        return Err(Error::InvalidParameter(format!("need 1 ≤ r ≤ n (got r={r}, n={n})")));
    }
    if e.rank != r || omega.rank != n {
        return Err(Error::InvalidParameter("bundle ranks do not match (r, n)".into()));
    }
    if omega.chern.n != n {
        return Err(Error::InvalidParameter("classes must live on an n-dimensional base".into()));
    }
    omega.chern.check_compatible(&e.chern)?;
    omega.chern.check_compatible(l_c1)
}

/// `∫ Σ_{k+h=n−r+1} c_k(Ω) Σ_j C(r+h−1, r+j−1) s_j(F*) c_{h−j−1+r}(F)` for
/// `F = E ⊗ L^d`, evaluated exactly for one value of `d`.
pub fn discriminant_value(n: usize, r: usize, d: i64, omega: &BundleData, e: &BundleData, l_c1: &CohomologyPolynomial) -> Result<BigRational> {
    check_inputs(n, r, omega, e, l_c1)?;
    let f = twist(e, &l_c1.scale(&q(d)))?;
    let s_dual = segre_from_chern(&f.dual());
    let c_f = &f.chern;
    let ri = r as i64;
    let mut total = omega.chern.scalar(BigRational::zero());
    for hh in 0..=(n - r + 1) {
        let k = n - r + 1 - hh;
        let mut inner = omega.chern.scalar(BigRational::zero());
        for j in 0..=hh {
            let b = generalized_binomial(ri + hh as i64 - 1, ri + j as i64 - 1);
            if b.is_zero() {
                continue;
            }
            let cj = c_f.component_or_zero(hh as i64 - j as i64 - 1 + ri);
            let term = ring_mul(&s_dual.component(j), &cj)?.scale(&BigRational::from_integer(b));
            inner = inner.add(&term)?;
        }
        total = total.add(&ring_mul(&omega.chern.component(k), &inner)?)?;
    }
    Ok(total.integrate())
}

impl CohomologyPolynomial {
    fn component_or_zero(&self, k: i64) -> Self {
        if k < 0 {
            self.scalar(BigRational::zero())
        } else {
            self.component(k as usize)
        }
    }
}

/// Exact solution of the Vandermonde system through `(x_i, y_i)`.
fn interpolate(xs: &[i64], ys: &[BigRational]) -> Vec<BigRational> {
    let m = xs.len();
    let mut coeffs = vec![BigRational::zero(); m];
    for i in 0..m {
        // Lagrange basis polynomial for node i, built in ascending order.
        let mut basis = vec![BigRational::one()];
        let mut denom = BigRational::one();
        for (j, &xj) in xs.iter().enumerate() {
            if j == i {
                continue;
            }
            let mut next = vec![BigRational::zero(); basis.len() + 1];
            for (k, b) in basis.iter().enumerate() {
                next[k + 1] += b;
                next[k] -= b * q(xj);
            }
            basis = next;
            denom *= q(xs[i] - xj);
        }
        let w = &ys[i] / denom;
        for (k, b) in basis.iter().enumerate() {
            coeffs[k] += b * &w;
        }
    }
    coeffs
}

/// Degree of the discriminant of `H^0(X, E ⊗ L^d)` and its polynomial in `d`.
///
/// The polynomial has degree at most `n` and is recovered exactly by
/// interpolation at `d = 0, …, n`. A negative or fractional value signals
/// inconsistent Chern data. Hypotheses such as 1-jet spannedness of
/// `E ⊗ L^d` are not checked.
pub fn discriminant_degree(
    n: usize,
    r: usize,
    d: i64,
    omega: &BundleData,
    e: &BundleData,
    l_c1: &CohomologyPolynomial,
) -> Result<DiscriminantDegree> {
    let xs: Vec<i64> = (0..=n as i64).collect();
    let ys = xs.iter().map(|&x| discriminant_value(n, r, x, omega, e, l_c1)).collect::<Result<Vec<_>>>()?;
    let polynomial = interpolate(&xs, &ys);
    let value = discriminant_value(n, r, d, omega, e, l_c1)?;
    if !value.is_integer() {
        return Err(Error::NegativeDegree(format!("fractional discriminant degree {value}")));
    }
    if value.is_negative() {
        return Err(Error::NegativeDegree(format!("discriminant degree {value} < 0")));
    }
    Ok(DiscriminantDegree { degree: value.to_integer(), polynomial })
}

/// The same polynomial in `d`, expanded term by term: the Segre class of
/// `E* ⊗ L^{-d}` and the Chern class of `E ⊗ L^d` are each written through
/// the classes of `E` and powers of `c_1(L)`, and the coefficient of `d^p`
/// is accumulated directly.
pub fn discriminant_polynomial_expanded(
    n: usize,
    r: usize,
    omega: &BundleData,
    e: &BundleData,
    l_c1: &CohomologyPolynomial,
) -> Result<Vec<BigRational>> {
    check_inputs(n, r, omega, e, l_c1)?;
    let s_e_dual = segre_from_chern(&e.dual());
    let l = l_c1.component(1);
    let lp: Vec<CohomologyPolynomial> = (0..=2 * n + 2).map(|p| l.pow(p)).collect();
    let ri = r as i64;
    let mut coeffs = vec![omega.chern.scalar(BigRational::zero()); 2 * n + 3];
    for hh in 0..=(n - r + 1) as i64 {
        let k = n as i64 - ri + 1 - hh;
        let ck = omega.chern.component_or_zero(k);
        for j in 0..=hh {
            let b1 = generalized_binomial(ri + hh - 1, ri + j - 1);
            for i in 0..=j {
                let b2 = generalized_binomial(ri + j - 1, ri + i - 1);
                let si = s_e_dual.component_or_zero(i);
                for m in 0..=(hh - j - 1 + ri).max(-1) {
                    let b3 = generalized_binomial(j + m + 1 - hh, m);
                    let coeff = BigRational::from_integer(&b1 * &b2 * &b3);
                    if coeff.is_zero() {
                        continue;
                    }
                    let cm = e.chern.component_or_zero(hh - j - 1 + ri - m);
                    let class = ring_mul(&ring_mul(&ring_mul(&ck, &si)?, &cm)?, &lp[(j - i + m) as usize])?;
                    let p = (m + j - i) as usize;
                    coeffs[p] = coeffs[p].add(&class.scale(&coeff))?;
                }
            }
        }
    }
    let mut out: Vec<BigRational> = coeffs.iter().map(|c| c.integrate()).collect();
    while out.len() > 1 && out.last().is_some_and(|c| c.is_zero()) {
        out.pop();
    }
    Ok(out)
}

/// `Σ_{i=0}^r ∫ H^{n−r}·c_{r−i}(E)·c_1(L)^i·d^i`.
pub fn branched_cover_degree(
    n: usize,
    r: usize,
    d: i64,
    e: &BundleData,
    l_c1: &CohomologyPolynomial,
    h: &CohomologyPolynomial,
) -> Result<BigInt> {
    if r < 1 || r > n || e.rank != r {
        return Err(Error::InvalidParameter(format!("need 1 ≤ r ≤ n and rank E = r (got r={r}, n={n})")));
    }
    e.chern.check_compatible(l_c1)?;
    e.chern.check_compatible(h)?;
    let hpow = h.component(1).pow(n - r);
    let l = l_c1.component(1);
    let mut total = BigRational::zero();
    for i in 0..=r {
        let class = ring_mul(&ring_mul(&hpow, &e.chern.component(r - i))?, &l.pow(i))?;
        total += class.integrate() * q(d).pow(i as i32);
    }
    if !total.is_integer() {
        return Err(Error::InvalidParameter(format!("fractional covering degree {total}")));
    }
    Ok(total.to_integer())
}

/// Plain-integer view of an exact rational, when it fits.
pub fn rational_to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Convenience wrapper for `CP^n` with trivial `E` of rank `r`,
/// `L = O(1)`.
pub fn projective_discriminant_degree(n: usize, r: usize, d: i64) -> Result<DiscriminantDegree> {
    discriminant_degree(
        n,
        r,
        d,
        &BundleData::cotangent_projective(n),
        &BundleData::trivial(n, r),
        &CohomologyPolynomial::hyperplane(n),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigRational> {
        v.iter().map(|&c| q(c)).collect()
    }

    #[test]
    fn ring_examples() {
        let a = CohomologyPolynomial::from_integers(2, &[1, 1]);
        let b = CohomologyPolynomial::from_integers(2, &[1, -1]);
        assert_eq!(ring_mul(&a, &b).unwrap().coeffs, ints(&[1, 0, -1]));
        assert_eq!(ring_mul(&a, &CohomologyPolynomial::one(2)).unwrap(), a);
        assert_eq!(a.pow(3).coeffs, ints(&[1, 3, 3]));
    }

    #[test]
    fn segre_examples() {
        assert_eq!(segre_from_chern(&BundleData::trivial(3, 2)).coeffs, ints(&[1, 0, 0, 0]));
        for d in [1, 2, 5] {
            let s = segre_from_chern(&BundleData::line(2, -d));
            assert_eq!(s.coeffs, ints(&[1, d, d * d]));
        }
    }

    #[test]
    fn twist_examples() {
        let d = 4;
        let t = CohomologyPolynomial::hyperplane(2).scale(&q(d));
        assert_eq!(chern_tensor_line(&BundleData::trivial(2, 1), &t).unwrap().coeffs, ints(&[1, d, 0]));
        assert_eq!(chern_tensor_line(&BundleData::trivial(2, 2), &t).unwrap().coeffs, ints(&[1, 2 * d, d * d]));
    }

    #[test]
    fn generalized_binomials() {
        assert_eq!(generalized_binomial(5, 2), BigInt::from(10));
        assert_eq!(generalized_binomial(-1, 3), BigInt::from(-1));
        assert_eq!(generalized_binomial(-2, 2), BigInt::from(3));
        assert_eq!(generalized_binomial(3, 5), BigInt::from(0));
        assert_eq!(generalized_binomial(7, 0), BigInt::from(1));
    }

    #[test]
    fn plane_curve_discriminant() {
        for d in 2..=10i64 {
            let dd = projective_discriminant_degree(2, 1, d).unwrap();
            assert_eq!(dd.degree, BigInt::from(3 * (d - 1) * (d - 1)), "d={d}");
        }
        let p = projective_discriminant_degree(2, 1, 3).unwrap().polynomial;
        assert_eq!(p, ints(&[3, -6, 3]));
    }

    #[test]
    fn branched_cover_examples() {
        let h2 = CohomologyPolynomial::hyperplane(2);
        for d in 1..=6 {
            assert_eq!(branched_cover_degree(2, 1, d, &BundleData::trivial(2, 1), &h2, &h2).unwrap(), BigInt::from(d));
        }
        let h3 = CohomologyPolynomial::hyperplane(3);
        assert_eq!(branched_cover_degree(3, 2, 5, &BundleData::trivial(3, 2), &h3, &h3).unwrap(), BigInt::from(25));
    }

    #[test]
    fn inconsistent_bundle_rejected() {
        let c = CohomologyPolynomial::from_integers(2, &[1, 1, 1]);
        assert!(BundleData::new(1, c).is_err());
        assert!(BundleData::new(1, CohomologyPolynomial::from_integers(2, &[2, 1])).is_err());
    }
}
