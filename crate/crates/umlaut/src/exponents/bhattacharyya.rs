use serde::{Deserialize, Serialize};

use super::dnn::dnn_bound_matrix;
use crate::channel_umlaut::{CertifiedValue, SolverOptions};
use crate::error::{Error, Result};
use crate::ext::ExtReal;
use crate::prob::{Channel, Dist};
use crate::simplex;

/// Symmetric matrix of pairwise Bhattacharyya distances
/// `A(x,x') = −log Σ_y √(W(y|x) W(y|x'))`; entries may be `+inf`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BhattMatrix {
    size: usize,
    entries: Vec<ExtReal>,
}

impl BhattMatrix {
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, x: usize, xp: usize) -> ExtReal {
        self.entries[x * self.size + xp]
    }

    pub fn has_infinite(&self) -> bool {
        self.entries.iter().any(|e| e.is_infinite())
    }

    /// Row-major entries as `f64`, with `+inf` for infinite entries.
    pub fn to_f64(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.value()).collect()
    }

    /// `pᵀAp` for finite matrices.
    pub fn quadratic(&self, p: &[f64]) -> f64 {
        quadratic(&self.to_f64(), p)
    }
}

pub(crate) fn quadratic(a: &[f64], p: &[f64]) -> f64 {
    let d = p.len();
    let mut total = 0.0;
    for i in 0..d {
        if p[i] == 0.0 {
            continue;
        }
        let row: f64 = (0..d).filter(|&j| p[j] != 0.0).map(|j| a[i * d + j] * p[j]).sum();
        total += p[i] * row;
    }
    total
}

pub fn bhattacharyya_matrix(channel: &Channel) -> BhattMatrix {
    let d = channel.nx();
    let mut entries = vec![ExtReal::ZERO; d * d];
    for x in 0..d {
        for xp in (x + 1)..d {
            let overlap: f64 = channel
                .row(x)
                .iter()
                .zip(channel.row(xp))
                .map(|(a, b)| (a * b).sqrt())
                .sum();
            let distance = if overlap > 0.0 {
                ExtReal::divergence(-overlap.ln())
            } else {
                ExtReal::Infinite
            };
            entries[x * d + xp] = distance;
            entries[xp * d + x] = distance;
        }
    }
    BhattMatrix { size: d, entries }
}

/// Unassisted zero-rate exponent `max_p pᵀAp` with default solver settings.
pub fn unassisted_zero_rate(channel: &Channel, tol: f64) -> Result<CertifiedValue> {
    unassisted_zero_rate_with(channel, &SolverOptions::with_tol(tol))
}

/// Exact for two inputs; multistart ascent certified against the DNN bound
/// otherwise. With at most four inputs the two must agree within `tol`.
pub fn unassisted_zero_rate_with(channel: &Channel, options: &SolverOptions) -> Result<CertifiedValue> {
    options.validate()?;
    let matrix = bhattacharyya_matrix(channel);
    if matrix.has_infinite() {
        return Err(Error::Infinite);
    }
    let d = channel.nx();
    let a = matrix.to_f64();
    let (lower, p) = match d {
        1 => (0.0, vec![1.0]),
        2 => (0.5 * a[1], vec![0.5, 0.5]),
        _ => maximize_quadratic(&a, d, options.seed),
    };
    let upper = if d <= 2 {
        lower
    } else {
        dnn_bound_matrix(&a, d, options.tol)?.max(lower)
    };
    if d <= 4 && upper - lower > options.tol {
        return Err(Error::NoConvergence { lower, upper });
    }
    let argmax_p = Dist::from_solver(channel.x_alphabet().clone(), p);
    let argmin_q = channel.output_dist(&argmax_p)?;
    Ok(CertifiedValue::new(lower, upper, argmax_p, argmin_q))
}

/// Multistart projected ascent followed by a stationarity polish on the
/// support of each local maximizer.
fn maximize_quadratic(a: &[f64], d: usize, seed: u64) -> (f64, Vec<f64>) {
    let value = |p: &[f64]| quadratic(a, p);
    let gradient = |p: &[f64], out: &mut [f64]| {
        for i in 0..d {
            out[i] = 2.0 * (0..d).map(|j| a[i * d + j] * p[j]).sum::<f64>();
        }
    };
    let mut starts = vec![simplex::uniform(d)];
    starts.extend((0..d).map(|i| {
        let mut e = vec![0.0; d];
        e[i] = 1.0;
        e
    }));
    starts.extend(simplex::dirichlet_samples(d, 16, seed));

    let mut best = (f64::NEG_INFINITY, simplex::uniform(d));
    for start in &starts {
        let (mut v, mut p) = simplex::projected_ascent(&value, &gradient, start, 10_000);
        if let Some((pv, pp)) = polish(a, d, &p) {
            if pv >= v {
                v = pv;
                p = pp;
            }
        }
        if v > best.0 {
            best = (v, p);
        }
    }
    best
}

/// Solve `A_SS z = 1` on the support `S` of `p`; a positive solution gives
/// the stationary point `z/Σz` with value `1/Σz`.
fn polish(a: &[f64], d: usize, p: &[f64]) -> Option<(f64, Vec<f64>)> {
    let support: Vec<usize> = (0..d).filter(|&i| p[i] > 1e-9).collect();
    let s = support.len();
    if s < 2 {
        return None;
    }
    let block = nalgebra::DMatrix::from_fn(s, s, |i, j| a[support[i] * d + support[j]]);
    let z = block.lu().solve(&nalgebra::DVector::from_element(s, 1.0))?;
    let total: f64 = z.iter().sum();
    if !(total > 0.0) || z.iter().any(|&v| v <= 0.0) {
        return None;
    }
    let mut out = vec![0.0; d];
    for (k, &i) in support.iter().enumerate() {
        out[i] = z[k] / total;
    }
    Some((quadratic(a, &out), out))
}
