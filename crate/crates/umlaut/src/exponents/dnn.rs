//! Doubly-nonnegative relaxation `max ⟨A,B⟩` over `B ⪰ 0, B ≥ 0, Σ B = 1`,
//! solved by ADMM with residual balancing.

use nalgebra::{DMatrix, SymmetricEigen};

use super::bhattacharyya::bhattacharyya_matrix;
use crate::error::{Error, Result};
use crate::prob::Channel;
use crate::simplex::project;

const MAX_ITER: usize = 200_000;

pub fn dnn_bound(channel: &Channel, tol: f64) -> Result<f64> {
    let matrix = bhattacharyya_matrix(channel);
    if matrix.has_infinite() {
        return Err(Error::Infinite);
    }
    dnn_bound_matrix(&matrix.to_f64(), channel.nx(), tol)
}

/// ADMM on a finite, row-major `d × d` objective matrix.
pub fn dnn_bound_matrix(a: &[f64], d: usize, tol: f64) -> Result<f64> {
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!("tolerance {tol} must be positive")));
    }
    if a.iter().any(|v| !v.is_finite()) {
        return Err(Error::Infinite);
    }
    let objective = DMatrix::from_row_slice(d, d, a);
    let mut nonneg = DMatrix::from_element(d, d, 1.0 / (d * d) as f64);
    let mut dual = DMatrix::zeros(d, d);
    let mut rho = 1.0;
    for _ in 0..MAX_ITER {
        let psd = psd_projection(&(&nonneg - &dual + &objective / rho));
        let previous = nonneg.clone();
        nonneg = nonneg_projection(&(&psd + &dual));
        dual += &psd - &nonneg;

        let primal = (&psd - &nonneg).norm();
        let dual_residual = rho * (&nonneg - &previous).norm();
        if primal < tol && dual_residual < tol {
            return Ok(objective.dot(&nonneg));
        }
        if primal > 10.0 * dual_residual {
            rho *= 2.0;
            dual /= 2.0;
        } else if dual_residual > 10.0 * primal {
            rho /= 2.0;
            dual *= 2.0;
        }
    }
    let value = objective.dot(&nonneg);
    Err(Error::NoConvergence {
        lower: value,
        upper: value,
    })
}

/// Clip negative eigenvalues of the symmetric part.
fn psd_projection(m: &DMatrix<f64>) -> DMatrix<f64> {
    let symmetric = (m + m.transpose()) * 0.5;
    let eigen = SymmetricEigen::new(symmetric);
    let clipped = eigen.eigenvalues.map(|v| v.max(0.0));
    &eigen.eigenvectors * DMatrix::from_diagonal(&clipped) * eigen.eigenvectors.transpose()
}

/// Exact Euclidean projection onto `{B ≥ 0, Σ B = 1}`.
fn nonneg_projection(m: &DMatrix<f64>) -> DMatrix<f64> {
    let projected = project(m.as_slice());
    DMatrix::from_vec(m.nrows(), m.ncols(), projected)
}
