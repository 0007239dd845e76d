//! Finite alphabets, distributions, joint distributions and channels.
//!
//! All types are immutable after construction. Constructors validate their
//! input, renormalize sums that are within `1e-9` of one, and snap entries
//! below `1e-15` to exact zeros so that support masks are crisp.

mod alphabet;
mod channel;
mod dist;
mod joint;

pub use alphabet::Alphabet;
pub use channel::Channel;
pub use dist::Dist;
pub use joint::{joint_from_channel, product_joint, JointDist};

use crate::error::{Error, Result};
use crate::numeric::{INPUT_SUM_TOL, ZERO_MASS};

/// Validate a weight vector and return its normalized copy.
///
/// An empty vector is rejected as not normalized.
pub(crate) fn normalized_weights(weights: &[f64]) -> Result<Vec<f64>> {
    for (index, &value) in weights.iter().enumerate() {
        if !value.is_finite() {
            return Err(Error::NonFinite(index));
        }
        if value < 0.0 {
            return Err(Error::NegativeWeight { index, value });
        }
    }
    let snapped: Vec<f64> = weights
        .iter()
        .map(|&w| if w < ZERO_MASS { 0.0 } else { w })
        .collect();
    let sum: f64 = snapped.iter().sum();
    if !(sum >= 1.0 - INPUT_SUM_TOL && sum <= 1.0 + INPUT_SUM_TOL) {
        return Err(Error::NotNormalized { sum });
    }
    // Absorb the residual into the largest entry; this leaves the other
    // entries bit-exact.
    let mut weights = snapped;
    if sum == 1.0 {
        return Ok(weights);
    }
    let largest = (0..weights.len())
        .max_by(|&a, &b| weights[a].total_cmp(&weights[b]).then(b.cmp(&a)))
        .expect("nonempty");
    let rest: f64 = weights.iter().enumerate().filter(|&(i, _)| i != largest).map(|(_, w)| w).sum();
    weights[largest] = 1.0 - rest;
    Ok(weights)
}

/// Renormalize a nonnegative vector produced by a solver.
pub(crate) fn renormalize(mut weights: Vec<f64>) -> Vec<f64> {
    for w in weights.iter_mut() {
        if !(*w >= ZERO_MASS) {
            *w = 0.0;
        }
    }
    let sum: f64 = weights.iter().sum();
    if sum > 0.0 {
        for w in weights.iter_mut() {
            *w /= sum;
        }
    }
    weights
}
