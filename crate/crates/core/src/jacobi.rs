//! Cyclic Jacobi eigensolver for dense symmetric matrices.
//!
//! Rotations sweep the strict upper triangle until the off-diagonal
//! Frobenius mass drops below `tol * ||S||_F`. The matrices here are small
//! (first-layer dimension of a group), so the O(n^3)-per-sweep cost is
//! irrelevant; what matters is the verifiable residual contract.

use crate::error::{Error, Result};
use nalgebra::DMatrix;

pub struct Eigen {
    /// Eigenvalues in descending order.
    pub values: Vec<f64>,
    /// Column `i` of `vectors` is the eigenvector for `values[i]`.
    pub vectors: DMatrix<f64>,
}

const MAX_SWEEPS: usize = 30;

fn off_diagonal_norm(a: &DMatrix<f64>) -> f64 {
    let n = a.nrows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)] * a[(i, j)];
            }
        }
    }
    s.sqrt()
}

/// Eigendecomposition of a symmetric matrix.
///
/// Fails if `s` is not symmetric to 1e-12 (relative to its Frobenius norm)
/// or the sweeps do not converge.
pub fn symmetric_eigen(s: &DMatrix<f64>, tol: f64) -> Result<Eigen> {
    let n = s.nrows();
    if s.ncols() != n {
        return Err(Error::dimension(format!("{}x{} matrix not square", n, s.ncols())));
    }
    let fro = s.norm();
    let asym = (s - s.transpose()).norm();
    if asym > 1e-12 * fro.max(1.0) {
        return Err(Error::validation(format!(
            "matrix not symmetric: ||S - S^T|| = {asym:.3e}"
        )));
    }

    let mut a = s.clone();
    let mut v = DMatrix::<f64>::identity(n, n);
    let threshold = tol * fro.max(f64::MIN_POSITIVE);

    let mut converged = n <= 1 || off_diagonal_norm(&a) <= threshold;
    for _ in 0..MAX_SWEEPS {
        if converged {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let app = a[(p, p)];
                let aqq = a[(q, q)];
                let theta = (aqq - app) / (2.0 * apq);
                let t = if theta >= 0.0 {
                    1.0 / (theta + (1.0 + theta * theta).sqrt())
                } else {
                    -1.0 / (-theta + (1.0 + theta * theta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let sn = t * c;
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = c * akp - sn * akq;
                    a[(k, q)] = sn * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = c * apk - sn * aqk;
                    a[(q, k)] = sn * apk + c * aqk;
                }
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - sn * vkq;
                    v[(k, q)] = sn * vkp + c * vkq;
                }
            }
        }
        converged = off_diagonal_norm(&a) <= threshold;
    }
    if !converged {
        return Err(Error::NoConvergence(MAX_SWEEPS));
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].partial_cmp(&a[(i, i)]).unwrap());
    let values: Vec<f64> = order.iter().map(|&i| a[(i, i)]).collect();
    let mut vectors = DMatrix::<f64>::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &v.column(src));
    }
    Ok(Eigen { values, vectors })
}
