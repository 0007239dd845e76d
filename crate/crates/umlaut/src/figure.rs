//! Umlaut against lautum information on the binary symmetric family.
//!
//! For `BSC(q)` the lautum information at the uniform input is
//! `L = ½ log(1/(4q(1−q)))` and its regularized version is
//! `L∞ = (½ − q) log((1−q)/q)`. The umlaut value comes from the channel
//! solver, so the sweep doubles as a check that `U = L < L∞` off `q = ½`.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::channel_umlaut::channel_umlaut;
use crate::error::{Error, Result};
use crate::prob::Channel;

/// Output unit for information quantities; computations are always in nats.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Units {
    #[default]
    Nats,
    Bits,
}

impl Units {
    /// Factor converting a value in nats to this unit.
    pub fn scale(self) -> f64 {
        match self {
            Units::Nats => 1.0,
            Units::Bits => 1.0 / std::f64::consts::LN_2,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub q: f64,
    pub umlaut: f64,
    pub lautum: f64,
    pub lautum_regularized: f64,
}

pub fn bsc_lautum(q: f64) -> f64 {
    0.5 * (1.0 / (4.0 * q * (1.0 - q))).ln()
}

pub fn bsc_lautum_regularized(q: f64) -> f64 {
    (0.5 - q) * ((1.0 - q) / q).ln()
}

/// The default grid `q = 0.05, 0.10, …, 0.45`.
pub fn default_grid() -> Vec<f64> {
    (1..=9).map(|i| i as f64 / 20.0).collect()
}

pub fn lu_sweep(qs: &[f64], tol: f64) -> Result<Vec<SweepRow>> {
    qs.iter()
        .map(|&q| {
            if !(q > 0.0 && q < 1.0) {
                return Err(Error::InvalidParameter(format!("crossover {q} is not in (0, 1)")));
            }
            Ok(SweepRow {
                q,
                umlaut: channel_umlaut(&Channel::bsc(q)?, tol)?.value,
                lautum: bsc_lautum(q),
                lautum_regularized: bsc_lautum_regularized(q),
            })
        })
        .collect()
}

/// CSV with columns `q, U, L, L_inf`; information columns multiplied by `scale`.
pub fn write_sweep_csv<W: Write>(rows: &[SweepRow], sink: W, scale: f64) -> Result<()> {
    let mut writer = csv::Writer::from_writer(sink);
    writer.write_record(["q", "U", "L", "L_inf"])?;
    for row in rows {
        writer.write_record([
            row.q.to_string(),
            (row.umlaut * scale).to_string(),
            (row.lautum * scale).to_string(),
            (row.lautum_regularized * scale).to_string(),
        ])?;
    }
    writer.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prob::{joint_from_channel, Dist};
    use crate::umlaut::lautum_mutual;

    #[test]
    fn lautum_formula_matches_direct_divergence() {
        for q in default_grid() {
            let w = Channel::bsc(q).unwrap();
            let joint = joint_from_channel(&w, &Dist::uniform(w.x_alphabet().clone())).unwrap();
            let (direct, _) = lautum_mutual(&joint);
            assert!((direct.value() - bsc_lautum(q)).abs() < 1e-14);
        }
    }

    #[test]
    fn regularized_lautum_dominates() {
        let rows = lu_sweep(&default_grid(), 1e-9).unwrap();
        for r in rows {
            assert!(r.lautum_regularized > r.umlaut);
            assert!((r.umlaut - r.lautum).abs() < 1e-8);
        }
    }

    #[test]
    fn bits_scale() {
        assert!((Units::Bits.scale() * 2f64.ln() - 1.0).abs() < 1e-15);
    }
}
