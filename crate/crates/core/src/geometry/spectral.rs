//! First nonzero Laplace eigenvalue of the mesh.
//!
//! Discretization: cotangent stiffness `S` against the lumped (barycentric)
//! mass `M`. Solver: block shift-invert iteration with the constants removed
//! in the `M` inner product, followed by Rayleigh–Ritz on the block.

use faer::linalg::solvers::Solve;
use faer::sparse::{SparseColMat, Triplet};
use faer::{Mat, Side};
use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};
use crate::surface::TriMesh;
use crate::zeroset::CurveMesh;

use super::curvature::dual_areas;
use super::metric::heron;

/// Block size of the subspace iteration.
pub const BLOCK: usize = 12;
/// Relative residual required of the returned eigenpair.
pub const RESIDUAL_TOL: f64 = 1e-8;
/// Outer iteration cap.
pub const MAX_OUTER: usize = 500;

/// Symmetric sparse matrix in compressed rows.
#[derive(Debug, Clone)]
pub struct SparseSym {
    pub row_start: Vec<usize>,
    pub cols: Vec<usize>,
    pub vals: Vec<f64>,
    pub diag: Vec<f64>,
}

impl SparseSym {
    pub fn n(&self) -> usize {
        self.diag.len()
    }

    pub fn mul(&self, x: &[f64], y: &mut [f64]) {
        for i in 0..self.n() {
            let mut acc = self.diag[i] * x[i];
            for k in self.row_start[i]..self.row_start[i + 1] {
                acc += self.vals[k] * x[self.cols[k]];
            }
            y[i] = acc;
        }
    }
}

/// Cotangent stiffness matrix (positive semidefinite, rows sum to zero).
pub fn cotan_stiffness(tri: &TriMesh) -> Result<SparseSym> {
    let n = tri.n_vertices;
    let mut off = vec![0.0; tri.edges.len()];
    for (f, face) in tri.faces.iter().enumerate() {
        let l = tri.face_lengths(f);
        let area = heron(l).ok_or(Error::DegenerateFace { face: f })?;
        if area <= 0.0 {
            return Err(Error::DegenerateFace { face: f });
        }
        for k in 0..3 {
            // the edge opposite corner k joins the other two corners
            let (a, b, c) = (l[k], l[(k + 1) % 3], l[(k + 2) % 3]);
            let cot = (b * b + c * c - a * a) / (4.0 * area);
            let e = tri.edge_id(face[(k + 1) % 3], face[(k + 2) % 3]).expect("face edge");
            off[e] += 0.5 * cot;
        }
    }
    let mut rows: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
    let mut diag = vec![0.0; n];
    for (&[a, b], &w) in tri.edges.iter().zip(&off) {
        rows[a].push((b, -w));
        rows[b].push((a, -w));
        diag[a] += w;
        diag[b] += w;
    }
    let mut row_start = vec![0];
    let mut cols = Vec::new();
    let mut vals = Vec::new();
    for r in rows {
        for (c, v) in r {
            cols.push(c);
            vals.push(v);
        }
        row_start.push(cols.len());
    }
    Ok(SparseSym { row_start, cols, vals, diag })
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Remove the constant component in the `M` inner product.
fn deflate(x: &mut [f64], mass: &[f64], total: f64) {
    let c = dot(x, mass) / total;
    x.iter_mut().for_each(|v| *v -= c);
}

fn diverged(iterations: usize, residual: f64) -> Error {
    Error::SolverDivergence { iterations, residual }
}

/// Smallest nonzero eigenvalue of `S u = λ M u` on a connected mesh.
///
/// Each step solves `(S + σM) X = M Y` with one sparse Cholesky factor, where
/// the small shift `σ` makes the operator definite; Rayleigh–Ritz then uses
/// `S` itself, so the shift does not bias the eigenvalue.
pub fn laplacian_gap(tri: &TriMesh) -> Result<f64> {
    let n = tri.n_vertices;
    let s = cotan_stiffness(tri)?;
    let mass = dual_areas(tri)?;
    let total: f64 = mass.iter().sum();
    // leave room in the complement of the constants so the block stays independent
    let k = BLOCK.min(n / 2);
    if k == 0 {
        return Err(Error::InvalidParameter("mesh too small for a spectral gap".into()));
    }
    let sigma = 1e-3 * s.diag.iter().sum::<f64>() / total;
    let mut triplets = Vec::with_capacity(s.cols.len() + n);
    for i in 0..n {
        triplets.push(Triplet::new(i, i, s.diag[i] + sigma * mass[i]));
        for q in s.row_start[i]..s.row_start[i + 1] {
            triplets.push(Triplet::new(i, s.cols[q], s.vals[q]));
        }
    }
    let shifted = SparseColMat::<usize, f64>::try_new_from_triplets(n, n, &triplets).map_err(|_| diverged(0, f64::NAN))?;
    let llt = shifted.sp_cholesky(Side::Lower).map_err(|_| diverged(0, f64::NAN))?;

    // deterministic start block from a hash of the vertex index
    let mut block = Mat::<f64>::from_fn(n, k, |i, j| {
        let h = (i as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15).rotate_left(7 * j as u32 + 11);
        (h >> 11) as f64 / (1u64 << 53) as f64 - 0.5
    });
    let mut residual = f64::INFINITY;
    for outer in 0..MAX_OUTER {
        let mut rhs = Mat::<f64>::from_fn(n, k, |i, j| mass[i] * block[(i, j)]);
        llt.solve_in_place(rhs.as_mut());
        let mut cols: Vec<Vec<f64>> = (0..k)
            .map(|j| {
                let mut c: Vec<f64> = (0..n).map(|i| rhs[(i, j)]).collect();
                deflate(&mut c, &mass, total);
                c
            })
            .collect();
        // Rayleigh–Ritz: M-orthonormalize, then diagonalize the projected stiffness
        let q = DMatrix::from_fn(n, k, |i, j| cols[j][i]);
        let mq = DMatrix::from_fn(n, k, |i, j| mass[i] * q[(i, j)]);
        let gram = q.transpose() * &mq;
        let chol = nalgebra::Cholesky::new(gram).ok_or_else(|| diverged(outer, residual))?;
        let linv = chol.l().try_inverse().ok_or_else(|| diverged(outer, residual))?;
        let qo = &q * linv.transpose();
        let mut sq = DMatrix::zeros(n, k);
        let mut out = vec![0.0; n];
        for j in 0..k {
            let col: Vec<f64> = qo.column(j).iter().copied().collect();
            s.mul(&col, &mut out);
            sq.set_column(j, &DVector::from_column_slice(&out));
        }
        let proj = qo.transpose() * &sq;
        let proj = 0.5 * (&proj + proj.transpose());
        let eig = SymmetricEigen::new(proj);
        let mut order: Vec<usize> = (0..k).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let ritz = &qo * &eig.eigenvectors;
        for (slot, &c) in order.iter().enumerate() {
            cols[slot] = ritz.column(c).iter().copied().collect();
        }
        block = Mat::<f64>::from_fn(n, k, |i, j| cols[j][i]);
        let lambda = eig.eigenvalues[order[0]];
        // relative residual ‖S u − λ M u‖ / (λ ‖M u‖)
        let u = &cols[0];
        s.mul(u, &mut out);
        let mu: Vec<f64> = u.iter().zip(&mass).map(|(u, m)| u * m).collect();
        let res: f64 = out.iter().zip(&mu).map(|(a, b)| (a - lambda * b).powi(2)).sum::<f64>().sqrt();
        residual = res / (lambda.abs() * dot(&mu, &mu).sqrt());
        if residual < RESIDUAL_TOL {
            return Ok(lambda);
        }
    }
    Err(diverged(MAX_OUTER, residual))
}

/// Spectral gap of the zero curve in computational units.
pub fn spectral_gap(mesh: &CurveMesh) -> Result<f64> {
    laplacian_gap(&mesh.surface)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stiffness_rows_sum_to_zero() {
        let faces = vec![[0, 1, 2], [0, 2, 3], [0, 3, 1], [1, 3, 2]];
        let t = TriMesh::new(4, faces, |_, _| 1.0);
        let s = cotan_stiffness(&t).unwrap();
        let mut y = vec![0.0; 4];
        s.mul(&[1.0; 4], &mut y);
        assert!(y.iter().all(|v| v.abs() < 1e-14));
    }

    #[test]
    fn octahedron_gap_is_positive() {
        let faces = vec![[0, 2, 4], [2, 1, 4], [1, 3, 4], [3, 0, 4], [2, 0, 5], [1, 2, 5], [3, 1, 5], [0, 3, 5]];
        let t = TriMesh::new(6, faces, |_, _| 1.0);
        let gap = laplacian_gap(&t).unwrap();
        assert!(gap > 0.0 && gap.is_finite());
    }
}
