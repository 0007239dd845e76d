use serde::{Deserialize, Serialize};

use super::{normalized_weights, Alphabet, Dist};
use crate::error::{Error, Result};

/// Largest materialized tensor power, counted as `|X|^n · |Y|^n` entries.
pub const TENSOR_ENTRY_LIMIT: usize = 1 << 16;

/// Row-stochastic matrix `W(y|x)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ChannelRecord", into = "ChannelRecord")]
pub struct Channel {
    x_alphabet: Alphabet,
    y_alphabet: Alphabet,
    rows: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct ChannelRecord {
    inputs: Alphabet,
    outputs: Alphabet,
    matrix: Vec<Vec<f64>>,
}

impl Channel {
    /// Validated constructor; each row is normalized like a [`Dist`].
    pub fn new(x_alphabet: Alphabet, y_alphabet: Alphabet, rows: &[Vec<f64>]) -> Result<Self> {
        if rows.len() != x_alphabet.size() {
            return Err(Error::LengthMismatch {
                expected: x_alphabet.size(),
                found: rows.len(),
            });
        }
        let ny = y_alphabet.size();
        let mut flat = Vec::with_capacity(rows.len() * ny);
        for row in rows {
            if row.len() != ny {
                return Err(Error::LengthMismatch {
                    expected: ny,
                    found: row.len(),
                });
            }
            flat.extend(normalized_weights(row)?);
        }
        Ok(Self {
            x_alphabet,
            y_alphabet,
            rows: flat,
        })
    }

    /// Channel over indexed alphabets.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let ny = rows.first().map_or(0, Vec::len);
        Self::new(Alphabet::indexed(rows.len())?, Alphabet::indexed(ny)?, rows)
    }

    pub(crate) fn from_parts(x_alphabet: Alphabet, y_alphabet: Alphabet, rows: Vec<f64>) -> Self {
        debug_assert_eq!(rows.len(), x_alphabet.size() * y_alphabet.size());
        Self {
            x_alphabet,
            y_alphabet,
            rows,
        }
    }

    /// Binary symmetric channel with crossover probability `q`.
    pub fn bsc(q: f64) -> Result<Self> {
        check_probability(q)?;
        Self::from_rows(&[vec![1.0 - q, q], vec![q, 1.0 - q]])
    }

    /// Binary erasure channel with erasure probability `q`; outputs `0, 1, e`.
    pub fn bec(q: f64) -> Result<Self> {
        check_probability(q)?;
        Self::new(
            Alphabet::indexed(2)?,
            Alphabet::new(["0", "1", "e"])?,
            &[vec![1.0 - q, 0.0, q], vec![0.0, 1.0 - q, q]],
        )
    }

    /// Noiseless channel on `n` symbols.
    pub fn identity(n: usize) -> Result<Self> {
        let rows: Vec<Vec<f64>> = (0..n)
            .map(|x| (0..n).map(|y| if x == y { 1.0 } else { 0.0 }).collect())
            .collect();
        Self::from_rows(&rows)
    }

    /// Channel whose `inputs` rows all equal `row`.
    pub fn constant(row: &[f64], inputs: usize) -> Result<Self> {
        Self::from_rows(&vec![row.to_vec(); inputs])
    }

    pub fn x_alphabet(&self) -> &Alphabet {
        &self.x_alphabet
    }

    pub fn y_alphabet(&self) -> &Alphabet {
        &self.y_alphabet
    }

    pub fn nx(&self) -> usize {
        self.x_alphabet.size()
    }

    pub fn ny(&self) -> usize {
        self.y_alphabet.size()
    }

    pub fn entry(&self, x: usize, y: usize) -> f64 {
        self.rows[x * self.ny() + y]
    }

    pub fn row(&self, x: usize) -> &[f64] {
        let ny = self.ny();
        &self.rows[x * ny..(x + 1) * ny]
    }

    /// Row-major matrix entries.
    pub fn matrix_flat(&self) -> &[f64] {
        &self.rows
    }

    pub fn matrix(&self) -> Vec<Vec<f64>> {
        self.rows.chunks(self.ny()).map(<[f64]>::to_vec).collect()
    }

    /// Outputs `y` with `W(y|x) > 0` for every input.
    pub fn full_columns(&self) -> Vec<usize> {
        (0..self.ny())
            .filter(|&y| (0..self.nx()).all(|x| self.entry(x, y) > 0.0))
            .collect()
    }

    /// Smallest strictly positive entry.
    pub fn min_positive_entry(&self) -> f64 {
        self.rows
            .iter()
            .copied()
            .filter(|&w| w > 0.0)
            .fold(f64::INFINITY, f64::min)
    }

    /// Output law induced by an input distribution.
    pub fn output_dist(&self, input: &Dist) -> Result<Dist> {
        if input.len() != self.nx() {
            return Err(Error::AlphabetMismatch("input length differs from channel inputs".into()));
        }
        let mut out = vec![0.0; self.ny()];
        for (x, &p) in input.weights().iter().enumerate() {
            for (acc, w) in out.iter_mut().zip(self.row(x)) {
                *acc += p * w;
            }
        }
        Ok(Dist::from_solver(self.y_alphabet.clone(), out))
    }

    /// Parallel use of two channels, `W₁ × W₂`.
    pub fn product(&self, other: &Channel) -> Channel {
        let (nx, ny, mx, my) = (self.nx(), self.ny(), other.nx(), other.ny());
        let mut rows = vec![0.0; nx * mx * ny * my];
        let cols = ny * my;
        for x in 0..nx {
            for xp in 0..mx {
                let r = x * mx + xp;
                for y in 0..ny {
                    let w = self.entry(x, y);
                    for yp in 0..my {
                        rows[r * cols + y * my + yp] = w * other.entry(xp, yp);
                    }
                }
            }
        }
        Channel::from_parts(
            self.x_alphabet.product(&other.x_alphabet),
            self.y_alphabet.product(&other.y_alphabet),
            rows,
        )
    }

    /// `n` parallel uses; refuses more than [`TENSOR_ENTRY_LIMIT`] entries.
    pub fn power(&self, n: usize) -> Result<Channel> {
        if n == 0 {
            return Err(Error::InvalidParameter("tensor power must be positive".into()));
        }
        let entries = (self.nx() * self.ny()) as f64;
        if entries.powi(n as i32) > TENSOR_ENTRY_LIMIT as f64 {
            return Err(Error::TooLarge(format!(
                "{n}-fold power of a {}x{} channel",
                self.nx(),
                self.ny()
            )));
        }
        let mut out = self.clone();
        for _ in 1..n {
            out = out.product(self);
        }
        Ok(out)
    }

    /// Convex combination `λ·self + (1−λ)·other` over the same alphabets.
    pub fn mix(&self, lambda: f64, other: &Channel) -> Result<Channel> {
        check_probability(lambda)?;
        if self.nx() != other.nx() || self.ny() != other.ny() {
            return Err(Error::ShapeMismatch {
                left: (self.nx(), self.ny()),
                right: (other.nx(), other.ny()),
            });
        }
        let rows = self
            .rows
            .iter()
            .zip(&other.rows)
            .map(|(a, b)| lambda * a + (1.0 - lambda) * b)
            .collect();
        Ok(Channel::from_parts(self.x_alphabet.clone(), self.y_alphabet.clone(), rows))
    }

    /// Serial composition: apply `self`, then `next`.
    pub fn then(&self, next: &Channel) -> Result<Channel> {
        if next.nx() != self.ny() {
            return Err(Error::AlphabetMismatch(format!(
                "cannot feed {} outputs into {} inputs",
                self.ny(),
                next.nx()
            )));
        }
        let nz = next.ny();
        let mut rows = vec![0.0; self.nx() * nz];
        for x in 0..self.nx() {
            for (y, &w) in self.row(x).iter().enumerate() {
                for (z, v) in next.row(y).iter().enumerate() {
                    rows[x * nz + z] += w * v;
                }
            }
        }
        Ok(Channel::from_parts(self.x_alphabet.clone(), next.y_alphabet.clone(), rows))
    }

    /// Reorder inputs; `order[i]` is the old index placed at position `i`.
    pub fn permute_inputs(&self, order: &[usize]) -> Result<Channel> {
        let mut seen = vec![false; self.nx()];
        if order.len() != self.nx() || order.iter().any(|&i| i >= self.nx() || std::mem::replace(&mut seen[i], true)) {
            return Err(Error::InvalidParameter("not a permutation of the inputs".into()));
        }
        let labels: Vec<String> = order.iter().map(|&i| self.x_alphabet.labels()[i].clone()).collect();
        let rows = order.iter().flat_map(|&i| self.row(i).to_vec()).collect();
        Ok(Channel::from_parts(Alphabet::new(labels)?, self.y_alphabet.clone(), rows))
    }
}

fn check_probability(q: f64) -> Result<()> {
    if (0.0..=1.0).contains(&q) {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{q} is not a probability")))
    }
}

impl TryFrom<ChannelRecord> for Channel {
    type Error = Error;

    fn try_from(record: ChannelRecord) -> Result<Self> {
        Channel::new(record.inputs, record.outputs, &record.matrix)
    }
}

impl From<Channel> for ChannelRecord {
    fn from(channel: Channel) -> Self {
        ChannelRecord {
            matrix: channel.matrix(),
            inputs: channel.x_alphabet,
            outputs: channel.y_alphabet,
        }
    }
}
