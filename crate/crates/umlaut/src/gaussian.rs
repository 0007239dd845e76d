//! Closed forms for jointly Gaussian pairs and linear Gaussian channels.
//!
//! For `(X,Y) ~ N(m, V)` the umlaut marginal is `N(m_Y, V/V_XX)` with the
//! Schur complement `V/V_XX = V_YY − V_XYᵀ V_XX⁻¹ V_XY`, and
//! `U = ½ log(det V / det(V_XX ⊕ V/V_XX)) + ½ Tr[V⁻¹(V_XX ⊕ V/V_XX)] − (n+k)/2`.
//! For `Y = HX + N` with `N ~ N(m, V)` and input covariance `C`,
//! `U = ½ Tr[C Hᵀ V⁻¹ H]`.

use nalgebra::{Cholesky, DMatrix, DVector, Dyn, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const SYMMETRY_TOL: f64 = 1e-12;
const MIN_EIGENVALUE: f64 = 1e-10;
const MAX_CONDITION: f64 = 1e12;
const RANK_TOL: f64 = 1e-10;

fn to_matrix(rows: &[Vec<f64>], name: &str) -> Result<DMatrix<f64>> {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != ncols) {
        return Err(Error::InvalidParameter(format!("{name} is ragged")));
    }
    if rows.iter().flatten().any(|v| !v.is_finite()) {
        return Err(Error::InvalidParameter(format!("{name} has non-finite entries")));
    }
    Ok(DMatrix::from_fn(nrows, ncols, |i, j| rows[i][j]))
}

fn from_matrix(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows()).map(|i| m.row(i).iter().copied().collect()).collect()
}

/// Symmetric and positive definite with bounded condition number.
fn check_spd(m: &DMatrix<f64>) -> Result<()> {
    if !m.is_square() || (m - m.transpose()).amax() > SYMMETRY_TOL {
        return Err(Error::SingularCovariance);
    }
    let eigen = SymmetricEigen::new(m.clone());
    let min = eigen.eigenvalues.min();
    let max = eigen.eigenvalues.max();
    if !(min > MIN_EIGENVALUE) || max / min > MAX_CONDITION {
        return Err(Error::SingularCovariance);
    }
    Ok(())
}

fn check_psd(m: &DMatrix<f64>) -> Result<()> {
    if !m.is_square() || (m - m.transpose()).amax() > SYMMETRY_TOL {
        return Err(Error::InvalidParameter("input covariance is not symmetric".into()));
    }
    let eigen = SymmetricEigen::new(m.clone());
    if eigen.eigenvalues.min() < -MIN_EIGENVALUE {
        return Err(Error::InvalidParameter("input covariance is not positive semidefinite".into()));
    }
    Ok(())
}

fn cholesky(m: DMatrix<f64>) -> Result<Cholesky<f64, Dyn>> {
    Cholesky::new(m).ok_or(Error::SingularCovariance)
}

fn log_det(factor: &Cholesky<f64, Dyn>) -> f64 {
    2.0 * factor.l_dirty().diagonal().iter().map(|v| v.ln()).sum::<f64>()
}

/// Jointly Gaussian pair with `n`-dimensional `X` and `k`-dimensional `Y`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GaussianRecord", into = "GaussianRecord")]
pub struct GaussianJoint {
    nx: usize,
    ny: usize,
    mean: DVector<f64>,
    cov: DMatrix<f64>,
}

#[derive(Serialize, Deserialize)]
struct GaussianRecord {
    mean: Vec<f64>,
    cov: Vec<Vec<f64>>,
    nx: usize,
    ny: usize,
}

impl GaussianJoint {
    pub fn new(nx: usize, ny: usize, mean: Vec<f64>, cov: &[Vec<f64>]) -> Result<Self> {
        let dim = nx + ny;
        if nx == 0 || ny == 0 {
            return Err(Error::InvalidParameter("both blocks must be nonempty".into()));
        }
        if mean.len() != dim {
            return Err(Error::LengthMismatch {
                expected: dim,
                found: mean.len(),
            });
        }
        if mean.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("mean has non-finite entries".into()));
        }
        let cov = to_matrix(cov, "covariance")?;
        if cov.shape() != (dim, dim) {
            return Err(Error::ShapeMismatch {
                left: cov.shape(),
                right: (dim, dim),
            });
        }
        check_spd(&cov)?;
        Ok(Self {
            nx,
            ny,
            mean: DVector::from_vec(mean),
            cov,
        })
    }

    /// Standard bivariate normal with correlation `rho`.
    pub fn bivariate(rho: f64) -> Result<Self> {
        Self::new(1, 1, vec![0.0, 0.0], &[vec![1.0, rho], vec![rho, 1.0]])
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    pub fn mean(&self) -> &[f64] {
        self.mean.as_slice()
    }

    pub fn cov(&self) -> Vec<Vec<f64>> {
        from_matrix(&self.cov)
    }

    /// Independent concatenation `(X₁X₂, Y₁Y₂)` with block-diagonal covariance.
    pub fn direct_sum(&self, other: &GaussianJoint) -> Result<GaussianJoint> {
        let (n1, k1, n2, k2) = (self.nx, self.ny, other.nx, other.ny);
        let nx = n1 + n2;
        let dim = nx + k1 + k2;
        // Coordinates of self and other inside the combined ordering.
        let place_self = |i: usize| if i < n1 { i } else { nx + (i - n1) };
        let place_other = |i: usize| if i < n2 { n1 + i } else { nx + k1 + (i - n2) };
        let mut mean = vec![0.0; dim];
        let mut cov = vec![vec![0.0; dim]; dim];
        for i in 0..n1 + k1 {
            mean[place_self(i)] = self.mean[i];
            for j in 0..n1 + k1 {
                cov[place_self(i)][place_self(j)] = self.cov[(i, j)];
            }
        }
        for i in 0..n2 + k2 {
            mean[place_other(i)] = other.mean[i];
            for j in 0..n2 + k2 {
                cov[place_other(i)][place_other(j)] = other.cov[(i, j)];
            }
        }
        GaussianJoint::new(nx, k1 + k2, mean, &cov)
    }
}

impl TryFrom<GaussianRecord> for GaussianJoint {
    type Error = Error;

    fn try_from(r: GaussianRecord) -> Result<Self> {
        GaussianJoint::new(r.nx, r.ny, r.mean, &r.cov)
    }
}

impl From<GaussianJoint> for GaussianRecord {
    fn from(j: GaussianJoint) -> Self {
        GaussianRecord {
            mean: j.mean.as_slice().to_vec(),
            cov: from_matrix(&j.cov),
            nx: j.nx,
            ny: j.ny,
        }
    }
}

/// Umlaut marginal `N(mean_y, cov_y)` and the umlaut information.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaussianUmlaut {
    pub mean_y: Vec<f64>,
    pub cov_y: Vec<Vec<f64>>,
    pub value: f64,
}

pub fn gaussian_umlaut(joint: &GaussianJoint) -> Result<GaussianUmlaut> {
    let (n, k) = (joint.nx, joint.ny);
    let v = &joint.cov;
    let v_xx = v.view((0, 0), (n, n)).into_owned();
    let v_xy = v.view((0, n), (n, k)).into_owned();
    let v_yy = v.view((n, n), (k, k)).into_owned();

    let xx_factor = cholesky(v_xx.clone())?;
    let schur = &v_yy - v_xy.transpose() * xx_factor.solve(&v_xy);
    let schur = (&schur + schur.transpose()) * 0.5;

    let mut block = DMatrix::zeros(n + k, n + k);
    block.view_mut((0, 0), (n, n)).copy_from(&v_xx);
    block.view_mut((n, n), (k, k)).copy_from(&schur);

    let v_factor = cholesky(v.clone())?;
    let schur_factor = cholesky(schur.clone())?;
    let log_ratio = log_det(&v_factor) - log_det(&xx_factor) - log_det(&schur_factor);
    let trace = v_factor.solve(&block).trace();
    let value = 0.5 * log_ratio + 0.5 * trace - (n + k) as f64 / 2.0;
    Ok(GaussianUmlaut {
        mean_y: joint.mean.as_slice()[n..].to_vec(),
        cov_y: from_matrix(&schur),
        value: value.max(0.0),
    })
}

/// Linear Gaussian channel `Y = HX + N`, `N ~ N(m, V)`, with input
/// covariance `C`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ChannelRecord", into = "ChannelRecord")]
pub struct GaussianChannelSpec {
    gain: DMatrix<f64>,
    noise_mean: DVector<f64>,
    noise_cov: DMatrix<f64>,
    input_cov: DMatrix<f64>,
}

#[derive(Serialize, Deserialize)]
struct ChannelRecord {
    #[serde(rename = "H")]
    gain: Vec<Vec<f64>>,
    m: Vec<f64>,
    #[serde(rename = "V")]
    noise_cov: Vec<Vec<f64>>,
    #[serde(rename = "C")]
    input_cov: Vec<Vec<f64>>,
}

impl GaussianChannelSpec {
    pub fn new(gain: &[Vec<f64>], noise_mean: Vec<f64>, noise_cov: &[Vec<f64>], input_cov: &[Vec<f64>]) -> Result<Self> {
        let gain = to_matrix(gain, "H")?;
        let (k, n) = gain.shape();
        let noise_cov = to_matrix(noise_cov, "V")?;
        let input_cov = to_matrix(input_cov, "C")?;
        if noise_mean.len() != k {
            return Err(Error::LengthMismatch {
                expected: k,
                found: noise_mean.len(),
            });
        }
        if noise_cov.shape() != (k, k) {
            return Err(Error::ShapeMismatch {
                left: noise_cov.shape(),
                right: (k, k),
            });
        }
        if input_cov.shape() != (n, n) {
            return Err(Error::ShapeMismatch {
                left: input_cov.shape(),
                right: (n, n),
            });
        }
        check_spd(&noise_cov)?;
        check_psd(&input_cov)?;
        Ok(Self {
            gain,
            noise_mean: DVector::from_vec(noise_mean),
            noise_cov,
            input_cov,
        })
    }

    pub fn input_dim(&self) -> usize {
        self.gain.ncols()
    }

    pub fn output_dim(&self) -> usize {
        self.gain.nrows()
    }

    /// Joint law of `(X, Y)` for `X ~ N(0, C)`.
    pub fn induced_joint(&self) -> Result<GaussianJoint> {
        let (k, n) = self.gain.shape();
        let c = &self.input_cov;
        let cross = c * self.gain.transpose();
        let out = &self.gain * c * self.gain.transpose() + &self.noise_cov;
        let mut cov = vec![vec![0.0; n + k]; n + k];
        for i in 0..n + k {
            for j in 0..n + k {
                cov[i][j] = match (i < n, j < n) {
                    (true, true) => c[(i, j)],
                    (true, false) => cross[(i, j - n)],
                    (false, true) => cross[(j, i - n)],
                    (false, false) => out[(i - n, j - n)],
                };
            }
        }
        let mut mean = vec![0.0; n];
        mean.extend(self.noise_mean.iter());
        GaussianJoint::new(n, k, mean, &cov)
    }
}

impl TryFrom<ChannelRecord> for GaussianChannelSpec {
    type Error = Error;

    fn try_from(r: ChannelRecord) -> Result<Self> {
        GaussianChannelSpec::new(&r.gain, r.m, &r.noise_cov, &r.input_cov)
    }
}

impl From<GaussianChannelSpec> for ChannelRecord {
    fn from(s: GaussianChannelSpec) -> Self {
        ChannelRecord {
            gain: from_matrix(&s.gain),
            m: s.noise_mean.as_slice().to_vec(),
            noise_cov: from_matrix(&s.noise_cov),
            input_cov: from_matrix(&s.input_cov),
        }
    }
}

/// `½ Tr[C Hᵀ V⁻¹ H]`; requires `H` to have full row rank.
pub fn gaussian_channel_umlaut(spec: &GaussianChannelSpec) -> Result<f64> {
    let (k, _) = spec.gain.shape();
    let rank = spec.gain.rank(RANK_TOL);
    if rank != k {
        return Err(Error::RankDeficient { rank, expected: k });
    }
    let factor = cholesky(spec.noise_cov.clone())?;
    let whitened = factor.solve(&spec.gain);
    let value = 0.5 * (&spec.input_cov * spec.gain.transpose() * whitened).trace();
    Ok(value.max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bivariate_closed_form() {
        let g = gaussian_umlaut(&GaussianJoint::bivariate(0.5).unwrap()).unwrap();
        assert!((g.value - 1.0 / 6.0).abs() < 1e-14);
        assert!((g.cov_y[0][0] - 0.75).abs() < 1e-15);
    }

    #[test]
    fn independence_gives_zero() {
        let g = gaussian_umlaut(&GaussianJoint::bivariate(0.0).unwrap()).unwrap();
        assert_eq!(g.value, 0.0);
    }

    #[test]
    fn mean_shift_invariance() {
        let a = GaussianJoint::new(1, 1, vec![0.0, 0.0], &[vec![2.0, 0.7], vec![0.7, 1.0]]).unwrap();
        let b = GaussianJoint::new(1, 1, vec![3.0, -1.0], &[vec![2.0, 0.7], vec![0.7, 1.0]]).unwrap();
        let (ua, ub) = (gaussian_umlaut(&a).unwrap(), gaussian_umlaut(&b).unwrap());
        assert_eq!(ua.value, ub.value);
        assert_eq!(ub.mean_y, vec![-1.0]);
    }

    #[test]
    fn rejects_singular_covariance() {
        assert_eq!(GaussianJoint::bivariate(1.0), Err(Error::SingularCovariance));
    }

    #[test]
    fn scalar_channel() {
        let spec = GaussianChannelSpec::new(&[vec![1.0]], vec![0.0], &[vec![0.5]], &[vec![2.0]]).unwrap();
        assert!((gaussian_channel_umlaut(&spec).unwrap() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn zero_gain_is_rank_deficient() {
        let spec = GaussianChannelSpec::new(&[vec![0.0]], vec![0.0], &[vec![1.0]], &[vec![1.0]]).unwrap();
        assert_eq!(
            gaussian_channel_umlaut(&spec),
            Err(Error::RankDeficient { rank: 0, expected: 1 })
        );
    }
}
