use serde::{Deserialize, Serialize};

use super::{Alphabet, Channel, Dist};
use crate::error::{Error, Result};
use crate::numeric::ZERO_MASS;

/// Probability matrix over `X × Y`, stored row-major, with cached marginals.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "JointRecord", into = "JointRecord")]
pub struct JointDist {
    x_alphabet: Alphabet,
    y_alphabet: Alphabet,
    mass: Vec<f64>,
    x_marginal: Vec<f64>,
    y_marginal: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct JointRecord {
    #[serde(alias = "x_alphabet")]
    inputs: Alphabet,
    #[serde(alias = "y_alphabet")]
    outputs: Alphabet,
    mass: Vec<Vec<f64>>,
}

impl JointDist {
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
            flat.extend_from_slice(row);
        }
        Self::from_flat(x_alphabet, y_alphabet, flat)
    }

    /// Joint over indexed alphabets from a list of rows.
    pub fn from_matrix(rows: &[Vec<f64>]) -> Result<Self> {
        let ny = rows.first().map_or(0, Vec::len);
        Self::new(Alphabet::indexed(rows.len())?, Alphabet::indexed(ny)?, rows)
    }

    /// Validated constructor from a row-major mass vector.
    pub fn from_flat(x_alphabet: Alphabet, y_alphabet: Alphabet, mass: Vec<f64>) -> Result<Self> {
        let expected = x_alphabet.size() * y_alphabet.size();
        if mass.len() != expected {
            return Err(Error::LengthMismatch {
                expected,
                found: mass.len(),
            });
        }
        let mass = super::normalized_weights(&mass)?;
        Ok(Self::from_parts(x_alphabet, y_alphabet, mass))
    }

    /// Trusted constructor; computes marginals from the mass.
    pub(crate) fn from_parts(x_alphabet: Alphabet, y_alphabet: Alphabet, mass: Vec<f64>) -> Self {
        let ny = y_alphabet.size();
        let x_marginal = mass.chunks(ny).map(|r| r.iter().sum()).collect();
        let mut y_marginal = vec![0.0; ny];
        for row in mass.chunks(ny) {
            for (acc, m) in y_marginal.iter_mut().zip(row) {
                *acc += m;
            }
        }
        Self {
            x_alphabet,
            y_alphabet,
            mass,
            x_marginal,
            y_marginal,
        }
    }

    /// Product `P × Q` of two distributions.
    pub fn independent(px: &Dist, py: &Dist) -> Self {
        let mass = px
            .weights()
            .iter()
            .flat_map(|a| py.weights().iter().map(move |b| a * b))
            .collect();
        let mut joint = Self::from_parts(px.alphabet().clone(), py.alphabet().clone(), mass);
        joint.x_marginal = px.weights().to_vec();
        joint.y_marginal = py.weights().to_vec();
        joint
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

    pub fn mass(&self, x: usize, y: usize) -> f64 {
        self.mass[x * self.ny() + y]
    }

    /// Row-major mass vector.
    pub fn mass_flat(&self) -> &[f64] {
        &self.mass
    }

    pub fn row(&self, x: usize) -> &[f64] {
        let ny = self.ny();
        &self.mass[x * ny..(x + 1) * ny]
    }

    pub fn px(&self) -> &[f64] {
        &self.x_marginal
    }

    pub fn py(&self) -> &[f64] {
        &self.y_marginal
    }

    pub fn x_marginal(&self) -> Dist {
        Dist::from_parts(self.x_alphabet.clone(), self.x_marginal.clone())
    }

    pub fn y_marginal(&self) -> Dist {
        Dist::from_parts(self.y_alphabet.clone(), self.y_marginal.clone())
    }

    /// Row-sum and column-sum distributions.
    pub fn marginals(&self) -> (Dist, Dist) {
        (self.x_marginal(), self.y_marginal())
    }

    /// Whether the mass equals the product of its marginals within `tol`.
    pub fn is_product(&self, tol: f64) -> bool {
        let ny = self.ny();
        self.mass.iter().enumerate().all(|(i, m)| {
            let expected = self.x_marginal[i / ny] * self.y_marginal[i % ny];
            (m - expected).abs() <= tol
        })
    }

    /// Tensor product with row-major composite alphabets.
    pub fn product(&self, other: &JointDist) -> JointDist {
        product_joint(self, other)
    }

    /// Pass `Y` through a channel `Y → Z`, giving the joint of `X` and `Z`.
    pub fn post_process(&self, channel: &Channel) -> Result<JointDist> {
        if channel.x_alphabet().size() != self.ny() {
            return Err(Error::AlphabetMismatch(format!(
                "channel expects {} inputs, joint has {} outputs",
                channel.nx(),
                self.ny()
            )));
        }
        let nz = channel.ny();
        let mut mass = vec![0.0; self.nx() * nz];
        for x in 0..self.nx() {
            for (y, &m) in self.row(x).iter().enumerate() {
                if m == 0.0 {
                    continue;
                }
                for (z, w) in channel.row(y).iter().enumerate() {
                    mass[x * nz + z] += m * w;
                }
            }
        }
        let mut joint = Self::from_parts(self.x_alphabet.clone(), channel.y_alphabet().clone(), mass);
        joint.x_marginal = self.x_marginal.clone();
        Ok(joint)
    }

    /// Conditional law `P(y|x)` as a channel; requires a full-support X-marginal.
    pub fn conditional_channel(&self) -> Result<Channel> {
        if self.x_marginal.iter().any(|&p| p < ZERO_MASS) {
            return Err(Error::DegenerateSupport);
        }
        let rows: Vec<Vec<f64>> = (0..self.nx())
            .map(|x| self.row(x).iter().map(|m| m / self.x_marginal[x]).collect())
            .collect();
        Channel::new(self.x_alphabet.clone(), self.y_alphabet.clone(), &rows)
    }
}

/// Joint distribution `W(y|x) P(x)`; its X-marginal is exactly `P`.
pub fn joint_from_channel(channel: &Channel, input: &Dist) -> Result<JointDist> {
    if channel.x_alphabet() != input.alphabet() {
        return Err(Error::AlphabetMismatch(
            "input distribution is not over the channel's input alphabet".into(),
        ));
    }
    let ny = channel.ny();
    let mut mass = Vec::with_capacity(channel.nx() * ny);
    for (x, &p) in input.weights().iter().enumerate() {
        mass.extend(channel.row(x).iter().map(|w| w * p));
    }
    let mut joint = JointDist::from_parts(channel.x_alphabet().clone(), channel.y_alphabet().clone(), mass);
    joint.x_marginal = input.weights().to_vec();
    Ok(joint)
}

/// Tensor product of two joints over `(X × X') × (Y × Y')`.
pub fn product_joint(a: &JointDist, b: &JointDist) -> JointDist {
    let (nx, ny, mx, my) = (a.nx(), a.ny(), b.nx(), b.ny());
    let mut mass = vec![0.0; nx * mx * ny * my];
    let cols = ny * my;
    for x in 0..nx {
        for xp in 0..mx {
            let row = x * mx + xp;
            for y in 0..ny {
                let am = a.mass(x, y);
                for yp in 0..my {
                    mass[row * cols + y * my + yp] = am * b.mass(xp, yp);
                }
            }
        }
    }
    let mut joint = JointDist::from_parts(a.x_alphabet.product(&b.x_alphabet), a.y_alphabet.product(&b.y_alphabet), mass);
    joint.x_marginal = tensor(&a.x_marginal, &b.x_marginal);
    joint.y_marginal = tensor(&a.y_marginal, &b.y_marginal);
    joint
}

fn tensor(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().flat_map(|x| b.iter().map(move |y| x * y)).collect()
}

impl TryFrom<JointRecord> for JointDist {
    type Error = Error;

    fn try_from(record: JointRecord) -> Result<Self> {
        JointDist::new(record.inputs, record.outputs, &record.mass)
    }
}

impl From<JointDist> for JointRecord {
    fn from(joint: JointDist) -> Self {
        let ny = joint.ny();
        JointRecord {
            mass: joint.mass.chunks(ny).map(<[f64]>::to_vec).collect(),
            inputs: joint.x_alphabet,
            outputs: joint.y_alphabet,
        }
    }
}
