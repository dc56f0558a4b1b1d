//! Dense symmetric eigensolver (cyclic Jacobi rotations).

use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 100;
const OFF_DIAGONAL_TOL: f64 = 1e-10;

/// Eigen-decomposition of a symmetric matrix, eigenvalues descending.
#[derive(Debug, Clone)]
pub(crate) struct SymmetricEigen {
    pub values: Vec<f64>,
    /// Row-major `dim × dim`; column `j` is the eigenvector of `values[j]`.
    pub vectors: Vec<f64>,
    pub dim: usize,
}

impl SymmetricEigen {
    pub fn vector(&self, j: usize) -> Vec<f64> {
        (0..self.dim)
            .map(|i| self.vectors[i * self.dim + j])
            .collect()
    }
}

/// `matrix` is row-major `dim × dim` and must be symmetric. Sweeps until
/// the off-diagonal Frobenius norm drops below `1e-10 · ‖A‖_F`.
pub(crate) fn symmetric_eigen(matrix: &[f64], dim: usize) -> Result<SymmetricEigen> {
    debug_assert_eq!(matrix.len(), dim * dim);
    if matrix.iter().any(|v| !v.is_finite()) {
        return Err(Error::Numerical("matrix has non-finite entries".into()));
    }
    let mut a = matrix.to_vec();
    let mut v = vec![0.0; dim * dim];
    for i in 0..dim {
        v[i * dim + i] = 1.0;
    }
    let tol = OFF_DIAGONAL_TOL * frobenius(&a);

    let mut sweeps = 0;
    while off_diagonal(&a, dim) > tol {
        if sweeps == MAX_SWEEPS {
            return Err(Error::Numerical(format!(
                "Jacobi eigensolver did not converge in {MAX_SWEEPS} sweeps"
            )));
        }
        sweeps += 1;
        for p in 0..dim {
            for q in p + 1..dim {
                let apq = a[p * dim + q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q * dim + q] - a[p * dim + p]) / (2.0 * apq);
                let t = if theta.is_finite() {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                } else {
                    0.0
                };
                if t == 0.0 {
                    a[p * dim + q] = 0.0;
                    a[q * dim + p] = 0.0;
                    continue;
                }
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                rotate(&mut a, dim, p, q, c, s);
                for k in 0..dim {
                    let vkp = v[k * dim + p];
                    let vkq = v[k * dim + q];
                    v[k * dim + p] = c * vkp - s * vkq;
                    v[k * dim + q] = s * vkp + c * vkq;
                }
            }
        }
    }

    let diag: Vec<f64> = (0..dim).map(|i| a[i * dim + i]).collect();
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&i, &j| diag[j].total_cmp(&diag[i]).then(i.cmp(&j)));
    let values = order.iter().map(|&i| diag[i]).collect();
    let mut vectors = vec![0.0; dim * dim];
    for (new_j, &old_j) in order.iter().enumerate() {
        for i in 0..dim {
            vectors[i * dim + new_j] = v[i * dim + old_j];
        }
    }
    Ok(SymmetricEigen {
        values,
        vectors,
        dim,
    })
}

/// `A <- Jᵀ A J` for the rotation in the `(p, q)` plane.
fn rotate(a: &mut [f64], dim: usize, p: usize, q: usize, c: f64, s: f64) {
    for k in 0..dim {
        let akp = a[k * dim + p];
        let akq = a[k * dim + q];
        a[k * dim + p] = c * akp - s * akq;
        a[k * dim + q] = s * akp + c * akq;
    }
    for k in 0..dim {
        let apk = a[p * dim + k];
        let aqk = a[q * dim + k];
        a[p * dim + k] = c * apk - s * aqk;
        a[q * dim + k] = s * apk + c * aqk;
    }
}

fn off_diagonal(a: &[f64], dim: usize) -> f64 {
    let mut sum = 0.0;
    for i in 0..dim {
        for j in 0..dim {
            if i != j {
                sum += a[i * dim + j] * a[i * dim + j];
            }
        }
    }
    sum.sqrt()
}

fn frobenius(a: &[f64]) -> f64 {
    a.iter().map(|v| v * v).sum::<f64>().sqrt()
}
