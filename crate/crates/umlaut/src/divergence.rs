//! Relative entropy, Rényi divergence, Shannon entropy and the one-shot
//! hypothesis-testing divergence.
//!
//! Functions accept anything implementing [`Mass`]: distributions, joint
//! distributions and raw probability slices.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ext::ExtReal;
use crate::numeric::{logsumexp, xlogx};
use crate::prob::{Dist, JointDist};

/// Largest outcome space `dh_eps` will sort.
pub const OUTCOME_LIMIT: usize = 1 << 24;

/// A probability mass with a shape used for compatibility checks.
pub trait Mass {
    fn shape(&self) -> (usize, usize);
    fn masses(&self) -> &[f64];
}

impl Mass for Dist {
    fn shape(&self) -> (usize, usize) {
        (self.len(), 1)
    }

    fn masses(&self) -> &[f64] {
        self.weights()
    }
}

impl Mass for JointDist {
    fn shape(&self) -> (usize, usize) {
        (self.nx(), self.ny())
    }

    fn masses(&self) -> &[f64] {
        self.mass_flat()
    }
}

impl Mass for [f64] {
    fn shape(&self) -> (usize, usize) {
        (self.len(), 1)
    }

    fn masses(&self) -> &[f64] {
        self
    }
}

impl Mass for Vec<f64> {
    fn shape(&self) -> (usize, usize) {
        (self.len(), 1)
    }

    fn masses(&self) -> &[f64] {
        self
    }
}

fn paired<'a, M: Mass + ?Sized>(p: &'a M, q: &'a M) -> Result<(&'a [f64], &'a [f64])> {
    if p.shape() != q.shape() {
        return Err(Error::ShapeMismatch {
            left: p.shape(),
            right: q.shape(),
        });
    }
    Ok((p.masses(), q.masses()))
}

/// `D(P‖Q) = Σ P log(P/Q)`, infinite when `P` is not dominated by `Q`.
pub fn kl<M: Mass + ?Sized>(p: &M, q: &M) -> Result<ExtReal> {
    let (p, q) = paired(p, q)?;
    Ok(kl_slices(p, q))
}

pub(crate) fn kl_slices(p: &[f64], q: &[f64]) -> ExtReal {
    let mut total = 0.0;
    for (&a, &b) in p.iter().zip(q) {
        if a > 0.0 {
            if b <= 0.0 {
                return ExtReal::Infinite;
            }
            total += a * (a / b).ln();
        }
    }
    ExtReal::divergence(total)
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha != 1.0 && alpha.is_finite() {
        Ok(())
    } else {
        Err(Error::BadAlpha(alpha))
    }
}

/// Rényi divergence `(1/(α−1)) log Σ P^α Q^{1−α}`.
pub fn renyi<M: Mass + ?Sized>(alpha: f64, p: &M, q: &M) -> Result<ExtReal> {
    check_alpha(alpha)?;
    let (p, q) = paired(p, q)?;
    Ok(renyi_slices(alpha, p, q))
}

pub(crate) fn renyi_slices(alpha: f64, p: &[f64], q: &[f64]) -> ExtReal {
    let mut terms = Vec::with_capacity(p.len());
    for (&a, &b) in p.iter().zip(q) {
        if a <= 0.0 {
            continue;
        }
        if b <= 0.0 {
            if alpha > 1.0 {
                return ExtReal::Infinite;
            }
            continue;
        }
        terms.push(alpha * a.ln() + (1.0 - alpha) * b.ln());
    }
    let log_sum = logsumexp(&terms);
    if log_sum == f64::NEG_INFINITY {
        return ExtReal::Infinite;
    }
    ExtReal::divergence(log_sum / (alpha - 1.0))
}

/// Shannon entropy in nats.
pub fn entropy(p: &Dist) -> f64 {
    entropy_slice(p.weights())
}

pub(crate) fn entropy_slice(p: &[f64]) -> f64 {
    -p.iter().map(|&w| xlogx(w)).sum::<f64>()
}

/// Gibbs distribution `∝ exp(−a)` and the minimum `−log Σ exp(−a)` of the
/// free energy `−H(P) + E_P[a]`.
pub fn gibbs(energies: &[f64]) -> (Vec<f64>, f64) {
    let neg: Vec<f64> = energies.iter().map(|a| -a).collect();
    let log_z = logsumexp(&neg);
    let weights = neg.iter().map(|v| (v - log_z).exp()).collect();
    (weights, -log_z)
}

/// Free energy `−H(P) + E_P[a]`.
pub fn free_energy(p: &[f64], energies: &[f64]) -> f64 {
    p.iter()
        .zip(energies)
        .map(|(&w, &a)| if w > 0.0 { xlogx(w) + w * a } else { 0.0 })
        .sum()
}

/// Optimal test for `P` against `Q` at type-I level `ε`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HypoTestResult {
    /// `−log type2`.
    pub value: ExtReal,
    /// Acceptance probability of the null hypothesis `P` per outcome.
    pub test: Vec<f64>,
    /// `1 − E_P[T]`.
    pub type1: f64,
    /// `E_Q[T]`.
    pub type2: f64,
}

fn check_eps(eps: f64) -> Result<()> {
    if eps > 0.0 && eps < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("eps = {eps} is not in (0, 1)")))
    }
}

/// `D_H^ε(P‖Q) = −log min{E_Q[T] : E_P[T] ≥ 1−ε}`, by the Neyman–Pearson
/// construction with ties merged into one randomized block.
pub fn dh_eps<M: Mass + ?Sized>(eps: f64, p: &M, q: &M) -> Result<HypoTestResult> {
    check_eps(eps)?;
    let (p, q) = paired(p, q)?;
    dh_eps_slices(eps, p, q)
}

pub(crate) fn dh_eps_slices(eps: f64, p: &[f64], q: &[f64]) -> Result<HypoTestResult> {
    if p.len() > OUTCOME_LIMIT {
        return Err(Error::TooLarge(format!("{} outcomes", p.len())));
    }
    let mut order: Vec<usize> = (0..p.len()).filter(|&i| p[i] > 0.0).collect();
    let ratio = |i: usize| if q[i] > 0.0 { p[i] / q[i] } else { f64::INFINITY };
    order.sort_by(|&a, &b| ratio(b).total_cmp(&ratio(a)).then(a.cmp(&b)));

    let target = 1.0 - eps;
    let mut test = vec![0.0; p.len()];
    let mut accepted_p = 0.0;
    let mut accepted_q = 0.0;
    let mut start = 0;
    while start < order.len() && accepted_p < target {
        let lead = ratio(order[start]);
        let mut end = start + 1;
        while end < order.len() && same_ratio(lead, ratio(order[end])) {
            end += 1;
        }
        let block = &order[start..end];
        let block_p: f64 = block.iter().map(|&i| p[i]).sum();
        let block_q: f64 = block.iter().map(|&i| q[i]).sum();
        let fraction = ((target - accepted_p) / block_p).min(1.0);
        for &i in block {
            test[i] = fraction;
        }
        accepted_p += fraction * block_p;
        accepted_q += fraction * block_q;
        start = end;
    }
    let value = if accepted_q > 0.0 {
        ExtReal::divergence(-accepted_q.ln())
    } else {
        ExtReal::Infinite
    };
    Ok(HypoTestResult {
        value,
        test,
        type1: (1.0 - accepted_p).max(0.0),
        type2: accepted_q,
    })
}

fn same_ratio(a: f64, b: f64) -> bool {
    a == b || (a.is_finite() && b.is_finite() && (a - b).abs() <= 1e-12 * a.abs().max(b.abs()))
}

/// Rényi sandwich `(lower, upper)` around `D_H^ε(P‖Q)`.
///
/// The lower bound is `D_α(P‖Q) − (α/(1−α))·log(1/ε)` for `α < 1`; the
/// upper bound is the smaller of `(1 + D(P‖Q))/(1−ε)` and
/// `D_α(P‖Q) + (α/(α−1))·log(1/(1−ε))` for `α > 1`.
pub fn dh_bounds<M: Mass + ?Sized>(
    eps: f64,
    alpha_lo: f64,
    alpha_hi: f64,
    p: &M,
    q: &M,
) -> Result<(ExtReal, ExtReal)> {
    check_eps(eps)?;
    if !(alpha_lo > 0.0 && alpha_lo < 1.0) {
        return Err(Error::BadAlpha(alpha_lo));
    }
    if !(alpha_hi > 1.0 && alpha_hi.is_finite()) {
        return Err(Error::BadAlpha(alpha_hi));
    }
    let (p, q) = paired(p, q)?;
    let lower = match renyi_slices(alpha_lo, p, q) {
        ExtReal::Infinite => ExtReal::Infinite,
        ExtReal::Finite(d) => {
            let slack = alpha_lo / (1.0 - alpha_lo) * (1.0 / eps).ln();
            ExtReal::Finite((d - slack).max(0.0))
        }
    };
    let from_kl = kl_slices(p, q).value();
    let from_kl = (1.0 + from_kl) / (1.0 - eps);
    let from_renyi = renyi_slices(alpha_hi, p, q).value() + alpha_hi / (alpha_hi - 1.0) * (1.0 / (1.0 - eps)).ln();
    let upper = ExtReal::from_f64(from_kl.min(from_renyi));
    Ok((lower, upper))
}
