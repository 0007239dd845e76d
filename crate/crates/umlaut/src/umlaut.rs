//! Umlaut information of a joint distribution, its Rényi variant, and the
//! lautum and mutual informations used for comparison.
//!
//! The umlaut marginal is the Gibbs law `Ü(y) ∝ exp(Σ_x P_X(x) log P_XY(x,y))`.
//! A column is killed when some `x` in the support of `P_X` has
//! `P_XY(x,y) = 0`; killed columns get weight zero.

use serde::{Deserialize, Serialize};

use crate::divergence::{entropy_slice, kl_slices};
use crate::error::{Error, Result};
use crate::ext::ExtReal;
use crate::numeric::{logsumexp, ZERO_MASS};
use crate::prob::{Dist, JointDist};

/// Closed-form umlaut information with its optimizer.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UmlautResult {
    pub value: ExtReal,
    /// Minimizer `Ü_Y`; the Y-marginal when the value is infinite.
    pub marginal: Dist,
    /// Normalizer `Z = Σ_y exp(Σ_x P_X(x) log P_XY(x,y))`; zero when infinite.
    pub normalizer: f64,
}

/// Rényi umlaut information of order `alpha`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RenyiUmlautResult {
    pub alpha: f64,
    pub value: ExtReal,
    pub marginal: Dist,
    /// Columns carrying the marginal; for `alpha > 1` the set of columns
    /// positive on the whole support of `P_X`.
    pub ystar: Vec<bool>,
}

/// Gibbs exponent of each column, `None` for killed columns.
fn column_exponents(joint: &JointDist) -> Vec<Option<f64>> {
    let px = joint.px();
    (0..joint.ny())
        .map(|y| {
            let mut acc = 0.0;
            for (x, &p) in px.iter().enumerate() {
                if p <= ZERO_MASS {
                    continue;
                }
                let m = joint.mass(x, y);
                if m <= 0.0 {
                    return None;
                }
                acc += p * m.ln();
            }
            Some(acc)
        })
        .collect()
}

/// Gibbs weights and log-normalizer from optional exponents.
fn gibbs_from_exponents(exponents: &[Option<f64>]) -> Option<(Vec<f64>, f64)> {
    let live: Vec<f64> = exponents.iter().flatten().copied().collect();
    if live.is_empty() {
        return None;
    }
    let log_z = logsumexp(&live);
    let weights = exponents
        .iter()
        .map(|e| e.map_or(0.0, |v| (v - log_z).exp()))
        .collect();
    Some((weights, log_z))
}

/// The umlaut marginal `Ü_Y` and the normalizer `Z`.
pub fn umlaut_marginal(joint: &JointDist) -> Result<(Dist, f64)> {
    let (weights, log_z) = gibbs_from_exponents(&column_exponents(joint)).ok_or(Error::AllZero)?;
    Ok((Dist::from_solver(joint.y_alphabet().clone(), weights), log_z.exp()))
}

/// `U(X;Y) = −H(P_X) − log Z`, infinite when every column is killed.
pub fn umlaut_info(joint: &JointDist) -> UmlautResult {
    match gibbs_from_exponents(&column_exponents(joint)) {
        Some((weights, log_z)) => UmlautResult {
            value: ExtReal::divergence(-entropy_slice(joint.px()) - log_z),
            marginal: Dist::from_solver(joint.y_alphabet().clone(), weights),
            normalizer: log_z.exp(),
        },
        None => UmlautResult {
            value: ExtReal::Infinite,
            marginal: joint.y_marginal(),
            normalizer: 0.0,
        },
    }
}

/// Rényi umlaut information via the `1/(1−α)`-norm closed form; for
/// `alpha > 1` the sum runs over `Y*` only.
pub fn renyi_umlaut_info(alpha: f64, joint: &JointDist) -> Result<RenyiUmlautResult> {
    if !(alpha > 0.0 && alpha != 1.0 && alpha.is_finite()) {
        return Err(Error::BadAlpha(alpha));
    }
    let px = joint.px();
    let support: Vec<usize> = (0..joint.nx()).filter(|&x| px[x] > ZERO_MASS).collect();
    let power = 1.0 / (1.0 - alpha);
    let mut ystar = vec![false; joint.ny()];
    // log of g(y)^{1/(1−α)} with g(y) = Σ_x P_X(x)^α P_XY(x,y)^{1−α}.
    let mut log_terms = vec![f64::NEG_INFINITY; joint.ny()];
    for y in 0..joint.ny() {
        let full = support.iter().all(|&x| joint.mass(x, y) > 0.0);
        if alpha > 1.0 && !full {
            continue;
        }
        let parts: Vec<f64> = support
            .iter()
            .filter(|&&x| joint.mass(x, y) > 0.0)
            .map(|&x| alpha * px[x].ln() + (1.0 - alpha) * joint.mass(x, y).ln())
            .collect();
        let log_g = logsumexp(&parts);
        if log_g > f64::NEG_INFINITY {
            ystar[y] = true;
            log_terms[y] = power * log_g;
        }
    }
    let log_z = logsumexp(&log_terms);
    if log_z == f64::NEG_INFINITY {
        return Ok(RenyiUmlautResult {
            alpha,
            value: ExtReal::Infinite,
            marginal: joint.y_marginal(),
            ystar,
        });
    }
    let weights = log_terms.iter().map(|t| (t - log_z).exp()).collect();
    Ok(RenyiUmlautResult {
        alpha,
        value: ExtReal::divergence(-log_z),
        marginal: Dist::from_solver(joint.y_alphabet().clone(), weights),
        ystar,
    })
}

/// Lautum information `D(P_X P_Y‖P_XY)` and mutual information
/// `D(P_XY‖P_X P_Y)`.
pub fn lautum_mutual(joint: &JointDist) -> (ExtReal, f64) {
    let independent = JointDist::independent(&joint.x_marginal(), &joint.y_marginal());
    let lautum = kl_slices(independent.mass_flat(), joint.mass_flat());
    let mutual = kl_slices(joint.mass_flat(), independent.mass_flat()).value();
    (lautum, mutual)
}
