use serde::{Deserialize, Serialize};

use super::{normalized_weights, renormalize, Alphabet};
use crate::error::{Error, Result};

/// Probability vector over a named alphabet.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DistRecord", into = "DistRecord")]
pub struct Dist {
    alphabet: Alphabet,
    weights: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct DistRecord {
    alphabet: Alphabet,
    weights: Vec<f64>,
}

impl Dist {
    /// Validated constructor; sums within `1e-9` of one are renormalized.
    pub fn new(alphabet: Alphabet, weights: &[f64]) -> Result<Self> {
        if weights.len() != alphabet.size() {
            return Err(Error::LengthMismatch {
                expected: alphabet.size(),
                found: weights.len(),
            });
        }
        let weights = normalized_weights(weights)?;
        Ok(Self { alphabet, weights })
    }

    /// Distribution over the indexed alphabet `0..n`.
    pub fn from_weights(weights: &[f64]) -> Result<Self> {
        Self::new(Alphabet::indexed(weights.len())?, weights)
    }

    pub fn uniform(alphabet: Alphabet) -> Self {
        let n = alphabet.size();
        Self {
            alphabet,
            weights: vec![1.0 / n as f64; n],
        }
    }

    pub fn point(alphabet: Alphabet, index: usize) -> Result<Self> {
        if index >= alphabet.size() {
            return Err(Error::InvalidParameter(format!("index {index} out of range")));
        }
        let mut weights = vec![0.0; alphabet.size()];
        weights[index] = 1.0;
        Ok(Self { alphabet, weights })
    }

    /// Build from solver output: clips tiny or negative entries and renormalizes.
    pub(crate) fn from_solver(alphabet: Alphabet, weights: Vec<f64>) -> Self {
        debug_assert_eq!(alphabet.size(), weights.len());
        Self {
            alphabet,
            weights: renormalize(weights),
        }
    }

    /// Trusted constructor for weights already known to be normalized.
    pub(crate) fn from_parts(alphabet: Alphabet, weights: Vec<f64>) -> Self {
        debug_assert_eq!(alphabet.size(), weights.len());
        Self { alphabet, weights }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Mask of symbols with positive weight.
    pub fn support(&self) -> Vec<bool> {
        self.weights.iter().map(|&w| w > 0.0).collect()
    }

    /// Product distribution on the composite alphabet.
    pub fn product(&self, other: &Dist) -> Dist {
        let weights = self
            .weights
            .iter()
            .flat_map(|a| other.weights.iter().map(move |b| a * b))
            .collect();
        Dist {
            alphabet: self.alphabet.product(&other.alphabet),
            weights,
        }
    }

    /// Total-variation distance to another distribution of the same length.
    pub fn total_variation(&self, other: &Dist) -> f64 {
        0.5 * self
            .weights
            .iter()
            .zip(&other.weights)
            .map(|(a, b)| (a - b).abs())
            .sum::<f64>()
    }
}

impl TryFrom<DistRecord> for Dist {
    type Error = Error;

    fn try_from(record: DistRecord) -> Result<Self> {
        Dist::new(record.alphabet, &record.weights)
    }
}

impl From<Dist> for DistRecord {
    fn from(dist: Dist) -> Self {
        DistRecord {
            alphabet: dist.alphabet,
            weights: dist.weights,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_pair() {
        let d = Dist::from_weights(&[0.5, 0.5]).unwrap();
        assert_eq!(d, Dist::uniform(Alphabet::indexed(2).unwrap()));
    }

    #[test]
    fn length_checked() {
        let a = Alphabet::indexed(3).unwrap();
        assert!(matches!(Dist::new(a, &[1.0]), Err(Error::LengthMismatch { .. })));
    }

    #[test]
    fn product_weights() {
        let p = Dist::from_weights(&[0.25, 0.75]).unwrap();
        let q = Dist::from_weights(&[0.5, 0.5]).unwrap();
        assert_eq!(p.product(&q).weights(), &[0.125, 0.125, 0.375, 0.375]);
    }
}
