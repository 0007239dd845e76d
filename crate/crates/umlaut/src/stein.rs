//! Exact finite-blocklength sandwich for the composite Stein exponent of
//! the product-null family `{P_X^{×n} Q_{Y^n}}` against `P_XY^{×n}`.
//!
//! The upper series fixes the ansatz `Q_{Y^n} = Ü_Y^{×n}` and evaluates the
//! Neyman–Pearson test on the materialized product laws. The lower series
//! is the Rényi bound `U_α(X;Y) − (α/((1−α)n)) log(1/ε)`.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::divergence::dh_eps_slices;
use crate::error::{Error, Result};
use crate::ext::ExtReal;
use crate::prob::JointDist;
use crate::umlaut::{renyi_umlaut_info, umlaut_info};

/// Largest materialized product, counted in joint outcomes.
pub const PRODUCT_LIMIT: usize = 1 << 24;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SteinRow {
    pub n: usize,
    pub lower: f64,
    pub upper: ExtReal,
    /// Type-I error of the upper-bound test under the ansatz null.
    pub type1: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SteinReport {
    pub eps: f64,
    pub alpha: f64,
    /// `U(X;Y)`, the limit both series approach.
    pub target: f64,
    pub rows: Vec<SteinRow>,
}

/// Kronecker power of a flat mass vector, in row-major outcome order.
fn tensor_power(base: &[f64], n: usize) -> Vec<f64> {
    let mut out = vec![1.0];
    for _ in 0..n {
        let mut next = Vec::with_capacity(out.len() * base.len());
        for &a in &out {
            next.extend(base.iter().map(|&b| a * b));
        }
        out = next;
    }
    out
}

pub fn stein_sandwich(joint: &JointDist, n_max: usize, eps: f64, alpha: f64) -> Result<SteinReport> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::InvalidParameter(format!("eps = {eps} is not in (0, 1)")));
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::BadAlpha(alpha));
    }
    if n_max == 0 {
        return Err(Error::InvalidParameter("n_max must be positive".into()));
    }
    let cells = joint.nx() * joint.ny();
    let fits = (0..n_max).try_fold(1usize, |acc, _| acc.checked_mul(cells).filter(|&v| v <= PRODUCT_LIMIT));
    if fits.is_none() {
        return Err(Error::TooLarge(format!("({cells})^{n_max} joint outcomes")));
    }

    let umlaut = umlaut_info(joint);
    let target = umlaut.value.finite().ok_or(Error::Infinite)?;
    let renyi = renyi_umlaut_info(alpha, joint)?.value;
    let renyi = renyi.finite().ok_or(Error::Infinite)?;

    let marginal = umlaut.marginal.weights();
    let null: Vec<f64> = joint
        .px()
        .iter()
        .flat_map(|&p| marginal.iter().map(move |&q| p * q))
        .collect();
    let alt = joint.mass_flat();

    let slack = alpha / (1.0 - alpha) * (1.0 / eps).ln();
    let rows = (1..=n_max)
        .map(|n| {
            let test = dh_eps_slices(eps, &tensor_power(&null, n), &tensor_power(alt, n))?;
            let nf = n as f64;
            Ok(SteinRow {
                n,
                lower: renyi - slack / nf,
                upper: test.value.scale(1.0 / nf),
                type1: test.type1,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SteinReport {
        eps,
        alpha,
        target,
        rows,
    })
}

impl SteinReport {
    /// CSV with columns `n, lower, upper, target`, values multiplied by `scale`.
    pub fn write_csv<W: Write>(&self, sink: W, scale: f64) -> Result<()> {
        let mut writer = csv::Writer::from_writer(sink);
        writer.write_record(["n", "lower", "upper", "target"])?;
        for row in &self.rows {
            writer
                .write_record([
                    row.n.to_string(),
                    (row.lower * scale).to_string(),
                    row.upper.scale(scale).to_string(),
                    (self.target * scale).to_string(),
                ])
                ?;
        }
        writer.flush()?;
        Ok(())
    }
}
