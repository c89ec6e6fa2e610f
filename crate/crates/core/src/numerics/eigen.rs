use num_complex::Complex64;

use super::complex::{cdot, cnorm, CMatrix};
use super::matrix::{dot, norm, RealMatrix};
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 100;

/// Eigen-decomposition of a real symmetric matrix.
#[derive(Debug, Clone)]
pub struct SymmetricEigen {
    /// Eigenvalues in descending order.
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors stored as columns, aligned with `values`.
    pub vectors: RealMatrix,
}

impl SymmetricEigen {
    pub fn vector(&self, i: usize) -> Vec<f64> {
        self.vectors.column(i)
    }

    /// `V·diag(λ)·Vᵀ`.
    pub fn reconstruct(&self) -> RealMatrix {
        let n = self.values.len();
        let mut scaled = self.vectors.clone();
        for i in 0..n {
            for j in 0..n {
                scaled[(i, j)] *= self.values[j];
            }
        }
        scaled.matmul(&self.vectors.transpose())
    }
}

/// Cyclic Jacobi eigensolver for symmetric matrices.
pub fn symmetric_eigen(m: &RealMatrix) -> Result<SymmetricEigen> {
    if !m.is_square() {
        return Err(Error::domain(format!(
            "symmetric_eigen needs a square matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    let scale = m.max_abs().max(1.0);
    let asym = m.asymmetry();
    if asym > 1e-10 * scale {
        return Err(Error::domain(format!(
            "matrix is not symmetric (max |a_ij - a_ji| = {asym:e})"
        )));
    }
    let n = m.rows();
    let mut a = m.clone();
    // Symmetrize so rounding in the input cannot bias the rotations.
    for i in 0..n {
        for j in 0..i {
            let avg = 0.5 * (a[(i, j)] + a[(j, i)]);
            a[(i, j)] = avg;
            a[(j, i)] = avg;
        }
    }
    let mut v = RealMatrix::identity(n);
    let total = a.frobenius_norm();

    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|p| (p + 1..n).map(move |q| (p, q)))
            .map(|(p, q)| a[(p, q)] * a[(p, q)])
            .sum::<f64>()
            .sqrt();
        if off <= 1e-15 * total || off == 0.0 {
            return Ok(sorted(a, v));
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = if theta.is_finite() {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                } else {
                    0.0
                };
                if t == 0.0 {
                    a[(p, q)] = 0.0;
                    a[(q, p)] = 0.0;
                    continue;
                }
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
                a[(p, q)] = 0.0;
                a[(q, p)] = 0.0;
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }
    Err(Error::NumericalConsistency(format!(
        "Jacobi did not converge in {MAX_SWEEPS} sweeps"
    )))
}

fn sorted(a: RealMatrix, v: RealMatrix) -> SymmetricEigen {
    let n = a.rows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].total_cmp(&a[(i, i)]));
    let values = order.iter().map(|&i| a[(i, i)]).collect();
    let mut vectors = RealMatrix::zeros(n, n);
    for (new, &old) in order.iter().enumerate() {
        for k in 0..n {
            vectors[(k, new)] = v[(k, old)];
        }
    }
    SymmetricEigen { values, vectors }
}

/// Eigen-decomposition of a complex Hermitian matrix through its real
/// symmetric realification. Eigenvalues descending, eigenvectors unit norm.
pub fn hermitian_eigen(h: &CMatrix) -> Result<(Vec<f64>, Vec<Vec<Complex64>>)> {
    let n = h.rows();
    if h.cols() != n {
        return Err(Error::domain("hermitian_eigen needs a square matrix"));
    }
    let herm_defect = h.sub(&h.adjoint()).max_abs();
    if herm_defect > 1e-10 * h.max_abs().max(1.0) {
        return Err(Error::domain(format!(
            "matrix is not Hermitian (defect {herm_defect:e})"
        )));
    }
    let eig = symmetric_eigen(&h.realify())?;
    let scale = eig.values.iter().fold(1.0f64, |m, x| m.max(x.abs()));
    let cluster_tol = 1e-9 * scale;

    let mut values = Vec::with_capacity(n);
    let mut vectors: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    let mut start = 0;
    while start < 2 * n {
        let mut end = start + 1;
        while end < 2 * n && (eig.values[end - 1] - eig.values[end]).abs() <= cluster_tol {
            end += 1;
        }
        let size = end - start;
        if size % 2 != 0 {
            return Err(Error::NumericalConsistency(format!(
                "realified Hermitian spectrum has an odd cluster of size {size}"
            )));
        }
        let mut candidates: Vec<Vec<Complex64>> = (start..end)
            .map(|k| {
                let col = eig.vectors.column(k);
                (0..n).map(|i| Complex64::new(col[i], col[i + n])).collect()
            })
            .collect();
        let mut accepted: Vec<Vec<Complex64>> = Vec::new();
        for _ in 0..size / 2 {
            for cand in candidates.iter_mut() {
                if let Some(last) = accepted.last() {
                    let proj = cdot(last, cand);
                    for (c, l) in cand.iter_mut().zip(last) {
                        *c -= proj * l;
                    }
                }
            }
            let (best, best_norm) = candidates
                .iter()
                .enumerate()
                .map(|(i, c)| (i, cnorm(c)))
                .max_by(|a, b| a.1.total_cmp(&b.1))
                .unwrap();
            if best_norm < 1e-6 {
                return Err(Error::NumericalConsistency(
                    "could not extract complex eigenvectors from realified cluster".into(),
                ));
            }
            let v: Vec<Complex64> = candidates[best].iter().map(|c| c / best_norm).collect();
            candidates.swap_remove(best);
            accepted.push(v);
        }
        let mean = eig.values[start..end].iter().sum::<f64>() / size as f64;
        for v in accepted {
            values.push(mean);
            vectors.push(v);
        }
        start = end;
    }
    Ok((values, vectors))
}

/// Orthonormal basis for the span of the given columns (modified Gram–Schmidt
/// with one re-orthogonalisation pass).
pub fn orthonormalize(columns: &RealMatrix) -> Result<RealMatrix> {
    orthonormalize_with_tol(columns, 1e-10)
}

pub fn orthonormalize_with_tol(columns: &RealMatrix, rank_tol: f64) -> Result<RealMatrix> {
    let cols = columns.columns();
    let scale = cols.iter().map(|c| norm(c)).fold(0.0f64, f64::max);
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(cols.len());
    let mut dependent = 0usize;
    for c in cols {
        let mut v = c;
        for _ in 0..2 {
            for b in &basis {
                let p = dot(b, &v);
                for (x, y) in v.iter_mut().zip(b) {
                    *x -= p * y;
                }
            }
        }
        let nv = norm(&v);
        if scale == 0.0 || nv <= rank_tol * scale {
            dependent += 1;
            continue;
        }
        basis.push(v.iter().map(|x| x / nv).collect());
    }
    if dependent > 0 {
        return Err(Error::Domain(format!(
            "columns are linearly dependent: numerical rank {} of {}",
            basis.len(),
            columns.cols()
        )));
    }
    RealMatrix::from_columns(&basis).map(|m| {
        if m.rows() == 0 {
            RealMatrix::zeros(columns.rows(), 0)
        } else {
            m
        }
    })
}

/// Least-squares solution of `A x ≈ b` via the normal equations and an
/// eigen pseudo-inverse. Intended for tall systems with few columns.
pub fn least_squares(a: &RealMatrix, b: &[f64]) -> Result<Vec<f64>> {
    if a.rows() != b.len() {
        return Err(Error::domain("least_squares: row count does not match rhs"));
    }
    let ata = a.transpose().matmul(a);
    let atb = a.tr_matvec(b);
    let eig = symmetric_eigen(&ata)?;
    let cutoff = 1e-12 * eig.values.first().copied().unwrap_or(0.0).abs();
    let n = a.cols();
    let mut x = vec![0.0; n];
    for k in 0..n {
        let lam = eig.values[k];
        if lam <= cutoff {
            continue;
        }
        let v = eig.vector(k);
        let coef = dot(&v, &atb) / lam;
        for (xi, vi) in x.iter_mut().zip(&v) {
            *xi += coef * vi;
        }
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_symmetric(n: usize, rng: &mut ChaCha8Rng) -> RealMatrix {
        let mut m = RealMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..=i {
                let x: f64 = rng.random_range(-1.0..1.0);
                m[(i, j)] = x;
                m[(j, i)] = x;
            }
        }
        m
    }

    #[test]
    fn identity_spectrum() {
        let e = symmetric_eigen(&RealMatrix::identity(3)).unwrap();
        assert_eq!(e.values, vec![1.0, 1.0, 1.0]);
    }

    #[test]
    fn diagonal_spectrum() {
        let e = symmetric_eigen(&RealMatrix::from_diagonal(&[-1.0, 2.0])).unwrap();
        assert_eq!(e.values, vec![2.0, -1.0]);
        assert!((e.vector(0)[1].abs() - 1.0).abs() < 1e-15);
        assert!((e.vector(1)[0].abs() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            symmetric_eigen(&RealMatrix::zeros(2, 3)),
            Err(Error::Domain(_))
        ));
        let m = RealMatrix::from_rows(&[vec![1.0, 2.0], vec![0.0, 1.0]]).unwrap();
        assert!(matches!(symmetric_eigen(&m), Err(Error::Domain(_))));
    }

    #[test]
    fn random_reconstruction() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in [1usize, 2, 8, 17, 64] {
            let m = random_symmetric(n, &mut rng);
            let e = symmetric_eigen(&m).unwrap();
            assert!(e.reconstruct().sub(&m).max_abs() < 1e-8, "n = {n}");
            assert!(e.vectors.orthonormality_defect() < 1e-10);
            for i in 0..n {
                let v = e.vector(i);
                let mv = m.matvec(&v);
                for k in 0..n {
                    assert!((mv[k] - e.values[i] * v[k]).abs() < 1e-8);
                }
            }
            assert!(e.values.windows(2).all(|w| w[0] >= w[1]));
        }
    }

    #[test]
    fn hermitian_pauli_y() {
        let mut h = CMatrix::zeros(2, 2);
        h[(0, 1)] = Complex64::new(0.0, -1.0);
        h[(1, 0)] = Complex64::new(0.0, 1.0);
        let (vals, vecs) = hermitian_eigen(&h).unwrap();
        assert!((vals[0] - 1.0).abs() < 1e-12 && (vals[1] + 1.0).abs() < 1e-12);
        for (lam, v) in vals.iter().zip(&vecs) {
            let hv: Vec<Complex64> = (0..2).map(|i| h[(i, 0)] * v[0] + h[(i, 1)] * v[1]).collect();
            for i in 0..2 {
                assert!((hv[i] - v[i] * lam).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn hermitian_degenerate_cluster() {
        // diag(1, 1, -2) rotated by a unitary: a doubly degenerate eigenvalue.
        let s = 0.5f64.sqrt();
        let mut u = CMatrix::zeros(3, 3);
        u[(0, 0)] = Complex64::new(s, 0.0);
        u[(0, 1)] = Complex64::new(0.0, s);
        u[(1, 0)] = Complex64::new(0.0, s);
        u[(1, 1)] = Complex64::new(s, 0.0);
        u[(2, 2)] = Complex64::new(0.0, 1.0);
        let d = CMatrix::from_diagonal(&[1.0, 1.0, -2.0].map(|x| Complex64::new(x, 0.0)));
        let h = u.matmul(&d).matmul(&u.adjoint());
        let (vals, vecs) = hermitian_eigen(&h).unwrap();
        assert_eq!(vals.len(), 3);
        assert!((vals[0] - 1.0).abs() < 1e-12 && (vals[1] - 1.0).abs() < 1e-12);
        assert!(cdot(&vecs[0], &vecs[1]).norm() < 1e-10);
    }

    #[test]
    fn gram_schmidt_by_hand() {
        let m = RealMatrix::from_columns(&[vec![1.0, 0.0], vec![1.0, 1.0]]).unwrap();
        let q = orthonormalize(&m).unwrap();
        assert!(q.sub(&RealMatrix::identity(2)).max_abs() < 1e-15);
    }

    #[test]
    fn orthonormal_input_is_kept() {
        let c = std::f64::consts::FRAC_1_SQRT_2;
        let m = RealMatrix::from_columns(&[vec![c, c, 0.0], vec![0.0, 0.0, 1.0]]).unwrap();
        let q = orthonormalize(&m).unwrap();
        for j in 0..2 {
            let same = (0..3).all(|i| (q[(i, j)] - m[(i, j)]).abs() < 1e-14);
            let flipped = (0..3).all(|i| (q[(i, j)] + m[(i, j)]).abs() < 1e-14);
            assert!(same || flipped);
        }
    }

    #[test]
    fn random_tall_orthonormalize() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let cols: Vec<Vec<f64>> = (0..2)
            .map(|_| (0..8).map(|_| rng.random_range(-1.0..1.0)).collect())
            .collect();
        let q = orthonormalize(&RealMatrix::from_columns(&cols).unwrap()).unwrap();
        assert!(q.orthonormality_defect() < 1e-12);
    }

    #[test]
    fn rank_deficiency_reports_rank() {
        let m = RealMatrix::from_columns(&[vec![1.0, 2.0, 3.0], vec![2.0, 4.0, 6.0]]).unwrap();
        match orthonormalize(&m) {
            Err(Error::Domain(msg)) => assert!(msg.contains("numerical rank 1"), "{msg}"),
            other => panic!("expected rank error, got {other:?}"),
        }
    }

    #[test]
    fn least_squares_line_fit() {
        // y = 2x + 1 sampled exactly.
        let rows: Vec<Vec<f64>> = (0..5).map(|i| vec![1.0, i as f64]).collect();
        let a = RealMatrix::from_rows(&rows).unwrap();
        let b: Vec<f64> = (0..5).map(|i| 2.0 * i as f64 + 1.0).collect();
        let x = least_squares(&a, &b).unwrap();
        assert!((x[0] - 1.0).abs() < 1e-10 && (x[1] - 2.0).abs() < 1e-10);
    }
}
