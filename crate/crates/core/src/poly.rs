//! Dense homogeneous polynomials in `n + 1` complex variables.
//!
//! Monomials of a fixed degree are stored in colex order: exponent tuples
//! `(i_0, …, i_n)` are compared on `i_n` first, then `i_{n-1}`, down to
//! `i_0`. For `n = 2, d = 2` this gives
//! `X0², X0X1, X1², X0X2, X1X2, X2²`.

use std::collections::HashMap;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;

pub type C64 = Complex64;

/// All exponent tuples of total degree `d` in `n + 1` variables, colex order.
pub fn monomial_exponents(n: usize, d: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; n + 1];
    fill(&mut cur, n, d as u32, &mut out);
    out.sort_by(|a, b| a.iter().rev().cmp(b.iter().rev()));
    out
}

fn fill(cur: &mut Vec<u32>, pos: usize, remaining: u32, out: &mut Vec<Vec<u32>>) {
    if pos == 0 {
        cur[0] = remaining;
        out.push(cur.clone());
        return;
    }
    for k in 0..=remaining {
        cur[pos] = k;
        fill(cur, pos - 1, remaining - k, out);
    }
    cur[pos] = 0;
}

/// Monomial exponents plus a reverse index.
#[derive(Debug)]
pub struct MonomialBasis {
    pub n: usize,
    pub d: usize,
    pub exps: Vec<Vec<u32>>,
    index: HashMap<Vec<u32>, usize>,
}

impl MonomialBasis {
    pub fn new(n: usize, d: usize) -> Arc<Self> {
        let exps = monomial_exponents(n, d);
        let index = exps.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
        Arc::new(Self { n, d, exps, index })
    }

    pub fn len(&self) -> usize {
        self.exps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn index_of(&self, exps: &[u32]) -> Option<usize> {
        self.index.get(exps).copied()
    }
}

/// `P(Z) = Σ c_I Z^I` with coefficients in the plain monomial basis.
#[derive(Debug, Clone)]
pub struct HomogeneousPoly {
    basis: Arc<MonomialBasis>,
    pub coeffs: Vec<C64>,
}

fn power_table(z: &[C64], d: usize) -> Vec<Vec<C64>> {
    z.iter()
        .map(|&x| {
            let mut p = Vec::with_capacity(d + 1);
            let mut acc = C64::new(1.0, 0.0);
            for _ in 0..=d {
                p.push(acc);
                acc *= x;
            }
            p
        })
        .collect()
}

impl HomogeneousPoly {
    pub fn zero(basis: Arc<MonomialBasis>) -> Self {
        let coeffs = vec![C64::new(0.0, 0.0); basis.len()];
        Self { basis, coeffs }
    }

    pub fn from_coeffs(basis: Arc<MonomialBasis>, coeffs: Vec<C64>) -> Self {
        assert_eq!(basis.len(), coeffs.len(), "coefficient count mismatch");
        Self { basis, coeffs }
    }

    /// Build from `(exponents, coefficient)` pairs; unknown monomials panic.
    pub fn from_terms(n: usize, d: usize, terms: &[(&[u32], C64)]) -> Self {
        let basis = MonomialBasis::new(n, d);
        let mut p = Self::zero(basis);
        for (e, c) in terms {
            let i = p.basis.index_of(e).expect("monomial degree mismatch");
            p.coeffs[i] += *c;
        }
        p
    }

    pub fn basis(&self) -> &Arc<MonomialBasis> {
        &self.basis
    }

    pub fn n(&self) -> usize {
        self.basis.n
    }

    pub fn degree(&self) -> usize {
        self.basis.d
    }

    pub fn eval(&self, z: &[C64]) -> C64 {
        let pw = power_table(z, self.degree());
        self.basis
            .exps
            .iter()
            .zip(&self.coeffs)
            .map(|(e, c)| {
                let mut m = *c;
                for (i, &k) in e.iter().enumerate() {
                    m *= pw[i][k as usize];
                }
                m
            })
            .sum()
    }

    /// Value and holomorphic gradient `∂P/∂Z_k`.
    pub fn eval_grad(&self, z: &[C64]) -> (C64, Vec<C64>) {
        let m = self.n() + 1;
        let pw = power_table(z, self.degree());
        let zero = C64::new(0.0, 0.0);
        let mut val = zero;
        let mut grad = vec![zero; m];
        let mut p = vec![zero; m];
        let mut q = vec![zero; m];
        let mut suffix = vec![zero; m + 1];
        for (e, c) in self.basis.exps.iter().zip(&self.coeffs) {
            for i in 0..m {
                let k = e[i] as usize;
                p[i] = pw[i][k];
                q[i] = if k > 0 { pw[i][k - 1] * k as f64 } else { zero };
            }
            suffix[m] = *c;
            for i in (0..m).rev() {
                suffix[i] = suffix[i + 1] * p[i];
            }
            val += suffix[0];
            let mut prefix = C64::new(1.0, 0.0);
            for a in 0..m {
                if e[a] > 0 {
                    grad[a] += prefix * q[a] * suffix[a + 1];
                }
                prefix *= p[a];
            }
        }
        (val, grad)
    }

    /// Value, gradient and holomorphic Hessian `∂²P/∂Z_j∂Z_k`.
    pub fn eval_jet2(&self, z: &[C64]) -> (C64, Vec<C64>, DMatrix<C64>) {
        let m = self.n() + 1;
        let d = self.degree();
        let pw = power_table(z, d);
        let zero = C64::new(0.0, 0.0);
        let mut val = zero;
        let mut grad = vec![zero; m];
        let mut h = DMatrix::from_element(m, m, zero);
        // factor(i, k) = pw[i][k] with negative exponents contributing zero.
        let f = |i: usize, k: i64| -> C64 {
            if k < 0 {
                zero
            } else {
                pw[i][k as usize]
            }
        };
        for (e, c) in self.basis.exps.iter().zip(&self.coeffs) {
            if *c == zero {
                continue;
            }
            let mut mono = *c;
            for i in 0..m {
                mono *= pw[i][e[i] as usize];
            }
            val += mono;
            for a in 0..m {
                if e[a] == 0 {
                    continue;
                }
                let mut t = *c * e[a] as f64;
                for i in 0..m {
                    let k = e[i] as i64 - if i == a { 1 } else { 0 };
                    t *= f(i, k);
                }
                grad[a] += t;
            }
            {
                for a in 0..m {
                    for b in a..m {
                        let coef = if a == b {
                            (e[a] as f64) * (e[a] as f64 - 1.0)
                        } else {
                            (e[a] as f64) * (e[b] as f64)
                        };
                        if coef == 0.0 {
                            continue;
                        }
                        let mut t = *c * coef;
                        for i in 0..m {
                            let k = e[i] as i64 - (i == a) as i64 - (i == b) as i64;
                            t *= f(i, k);
                        }
                        h[(a, b)] += t;
                        if a != b {
                            h[(b, a)] += t;
                        }
                    }
                }
            }
        }
        (val, grad, h)
    }

    /// `Q(Y) = P(A·Y)` for a square matrix `A`.
    pub fn compose_linear(&self, a: &DMatrix<C64>) -> HomogeneousPoly {
        let m = self.n() + 1;
        assert_eq!(a.nrows(), m);
        assert_eq!(a.ncols(), m);
        let d = self.degree();
        let levels: Vec<Arc<MonomialBasis>> = (0..=d).map(|k| MonomialBasis::new(self.n(), k)).collect();
        // raise[k][idx][j]: index at degree k+1 of monomial idx times Y_j.
        let raise: Vec<Vec<Vec<usize>>> = (0..d)
            .map(|k| {
                levels[k]
                    .exps
                    .iter()
                    .map(|e| {
                        (0..m)
                            .map(|j| {
                                let mut f = e.clone();
                                f[j] += 1;
                                levels[k + 1].index_of(&f).unwrap()
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        let zero = C64::new(0.0, 0.0);
        let mut out = vec![zero; levels[d].len()];
        for (e, c) in self.basis.exps.iter().zip(&self.coeffs) {
            if *c == zero {
                continue;
            }
            let mut cur = vec![*c];
            let mut k = 0;
            for (i, &ei) in e.iter().enumerate() {
                for _ in 0..ei {
                    let mut next = vec![zero; levels[k + 1].len()];
                    for (idx, &v) in cur.iter().enumerate() {
                        if v == zero {
                            continue;
                        }
                        for j in 0..m {
                            next[raise[k][idx][j]] += v * a[(i, j)];
                        }
                    }
                    cur = next;
                    k += 1;
                }
            }
            for (o, v) in out.iter_mut().zip(cur) {
                *o += v;
            }
        }
        HomogeneousPoly::from_coeffs(levels[d].clone(), out)
    }

    /// Coefficients (ascending powers of `t`) of `t ↦ P(t, y_1, …, y_n)`.
    pub fn restrict_first(&self, rest: &[C64]) -> Vec<C64> {
        let d = self.degree();
        assert_eq!(rest.len(), self.n());
        let pw = power_table(rest, d);
        let mut out = vec![C64::new(0.0, 0.0); d + 1];
        for (e, c) in self.basis.exps.iter().zip(&self.coeffs) {
            let mut m = *c;
            for (i, &k) in e[1..].iter().enumerate() {
                m *= pw[i][k as usize];
            }
            out[e[0] as usize] += m;
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn colex_order_small() {
        let e = monomial_exponents(2, 2);
        let want: Vec<Vec<u32>> = vec![
            vec![2, 0, 0],
            vec![1, 1, 0],
            vec![0, 2, 0],
            vec![1, 0, 1],
            vec![0, 1, 1],
            vec![0, 0, 2],
        ];
        assert_eq!(e, want);
        assert_eq!(monomial_exponents(2, 3).len(), 10);
        assert_eq!(monomial_exponents(3, 2).len(), 10);
    }

    #[test]
    fn jet_matches_finite_differences() {
        // P = X0^2 X1 + (2 - i) X1 X2^2 + 3 X2^3
        let p = HomogeneousPoly::from_terms(
            2,
            3,
            &[(&[2, 1, 0], c(1.0, 0.0)), (&[0, 1, 2], c(2.0, -1.0)), (&[0, 0, 3], c(3.0, 0.0))],
        );
        let z = [c(0.3, 0.1), c(-0.7, 0.4), c(0.2, -0.5)];
        let (v, g, h) = p.eval_jet2(&z);
        assert!((v - p.eval(&z)).norm() < 1e-14);
        let eps = 1e-6;
        for a in 0..3 {
            let mut zp = z;
            let mut zm = z;
            zp[a] += eps;
            zm[a] -= eps;
            let fd = (p.eval(&zp) - p.eval(&zm)) / (2.0 * eps);
            assert!((fd - g[a]).norm() < 1e-8);
            let (_, gp) = p.eval_grad(&zp);
            let (_, gm) = p.eval_grad(&zm);
            for b in 0..3 {
                let fd2 = (gp[b] - gm[b]) / (2.0 * eps);
                assert!((fd2 - h[(b, a)]).norm() < 1e-7);
            }
        }
    }

    #[test]
    fn composition_agrees_with_pointwise() {
        let p = HomogeneousPoly::from_terms(
            2,
            3,
            &[(&[1, 1, 1], c(1.0, 2.0)), (&[3, 0, 0], c(-1.0, 0.0)), (&[0, 2, 1], c(0.5, 0.5))],
        );
        let a = DMatrix::from_row_slice(
            3,
            3,
            &[c(1.0, 0.2), c(0.0, 1.0), c(0.3, 0.0), c(-0.4, 0.0), c(1.0, 0.0), c(0.0, -0.2), c(0.1, 0.1), c(0.2, 0.0), c(0.9, 0.0)],
        );
        let q = p.compose_linear(&a);
        let y = nalgebra::DVector::from_vec(vec![c(0.2, 0.3), c(-0.5, 0.1), c(0.7, -0.2)]);
        let ay = &a * &y;
        let lhs = q.eval(y.as_slice());
        let rhs = p.eval(ay.as_slice());
        assert!((lhs - rhs).norm() < 1e-13);
    }

    #[test]
    fn restriction_to_fiber() {
        // t^2 - u v at (u, v) = (1, 1): roots ±1.
        let p = HomogeneousPoly::from_terms(2, 2, &[(&[2, 0, 0], c(1.0, 0.0)), (&[0, 1, 1], c(-1.0, 0.0))]);
        let q = p.restrict_first(&[c(1.0, 0.0), c(1.0, 0.0)]);
        assert_eq!(q, vec![c(-1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
    }
}
