//! Channel umlaut information `U(W) = −log min_P Σ_y Π_x W(y|x)^{P(x)}`,
//! its Rényi variant, and the sphere-packing exponent.
//!
//! Both informations are computed by minimizing a log-convex function of the
//! input law with entropic mirror descent. Every iterate `P` yields a lower
//! bound `−ψ(P)` and, through its output law `Q`, an upper bound
//! `max_x D(Q‖W(·|x))` from the minimax form; the solver stops once the two
//! meet within the tolerance.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{ln_or_neg_inf, logsumexp};
use crate::prob::{Channel, Dist};
use crate::simplex::{self, CertifiedObjective, Sandwich, DEFAULT_SEED};

/// An optimum bracketed by certified lower and upper bounds.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertifiedValue {
    pub lower: f64,
    pub upper: f64,
    pub value: f64,
    pub gap: f64,
    /// Input law achieving `lower`.
    pub argmax_p: Dist,
    /// Output law achieving `upper`.
    pub argmin_q: Dist,
}

impl CertifiedValue {
    pub(crate) fn new(lower: f64, upper: f64, argmax_p: Dist, argmin_q: Dist) -> Self {
        Self {
            lower,
            upper,
            value: 0.5 * (lower + upper),
            gap: upper - lower,
            argmax_p,
            argmin_q,
        }
    }
}

/// Tolerance, iteration cap and seed shared by the simplex solvers.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolverOptions {
    pub tol: f64,
    pub max_iter: usize,
    pub seed: u64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            tol: 1e-8,
            max_iter: 100_000,
            seed: DEFAULT_SEED,
        }
    }
}

impl SolverOptions {
    pub fn with_tol(tol: f64) -> Self {
        Self { tol, ..Self::default() }
    }

    pub(crate) fn validate(&self) -> Result<()> {
        if self.tol > 0.0 && self.tol.is_finite() {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!("tolerance {} must be positive", self.tol)))
        }
    }

    pub(crate) fn starts(&self, d: usize) -> Vec<Vec<f64>> {
        simplex::restart_points(d, 6, 8, self.seed)
    }
}

/// Whether some output is reachable from every input.
pub fn is_umlaut_finite(channel: &Channel) -> bool {
    !channel.full_columns().is_empty()
}

/// Log-entries of `W` restricted to a set of columns, row-major.
fn log_columns(channel: &Channel, cols: &[usize]) -> Vec<f64> {
    (0..channel.nx())
        .flat_map(|x| cols.iter().map(move |&y| ln_or_neg_inf(channel.entry(x, y))))
        .collect()
}

fn expand(cols: &[usize], ny: usize, restricted: &[f64]) -> Vec<f64> {
    let mut full = vec![0.0; ny];
    for (&y, &q) in cols.iter().zip(restricted) {
        full[y] = q;
    }
    full
}

/// `ψ(P) = log Σ_{y ∈ Y_full} exp(Σ_x P(x) log W(y|x))`.
struct UmlautObjective {
    nx: usize,
    ny: usize,
    cols: Vec<usize>,
    log_w: Vec<f64>,
}

impl UmlautObjective {
    fn new(channel: &Channel) -> Self {
        let cols = channel.full_columns();
        Self {
            nx: channel.nx(),
            ny: channel.ny(),
            log_w: log_columns(channel, &cols),
            cols,
        }
    }

    fn exponents(&self, p: &[f64]) -> Vec<f64> {
        let m = self.cols.len();
        let mut a = vec![0.0; m];
        for (x, &w) in p.iter().enumerate() {
            if w > 0.0 {
                for (acc, l) in a.iter_mut().zip(&self.log_w[x * m..(x + 1) * m]) {
                    *acc += w * l;
                }
            }
        }
        a
    }
}

impl CertifiedObjective for UmlautObjective {
    fn dim(&self) -> usize {
        self.nx
    }

    fn value_grad(&self, p: &[f64], grad: &mut [f64]) -> f64 {
        let m = self.cols.len();
        let a = self.exponents(p);
        let psi = logsumexp(&a);
        let q: Vec<f64> = a.iter().map(|v| (v - psi).exp()).collect();
        for (x, g) in grad.iter_mut().enumerate() {
            *g = q.iter().zip(&self.log_w[x * m..(x + 1) * m]).map(|(q, l)| q * l).sum();
        }
        psi
    }

    fn value(&self, p: &[f64]) -> f64 {
        logsumexp(&self.exponents(p))
    }

    fn certificate(&self, p: &[f64]) -> (f64, Vec<f64>) {
        let m = self.cols.len();
        let a = self.exponents(p);
        let psi = logsumexp(&a);
        let log_q: Vec<f64> = a.iter().map(|v| v - psi).collect();
        let q: Vec<f64> = log_q.iter().map(|v| v.exp()).collect();
        let worst = (0..self.nx)
            .map(|x| {
                let row = &self.log_w[x * m..(x + 1) * m];
                q.iter().zip(&log_q).zip(row).map(|((q, lq), l)| q * (lq - l)).sum::<f64>()
            })
            .fold(f64::NEG_INFINITY, f64::max);
        (worst, expand(&self.cols, self.ny, &q))
    }
}

/// `ψ(P) = log Σ_y (Σ_x P(x) W(y|x)^{1−α})^{1/(1−α)}`, over `Y_full` when
/// `α > 1`.
struct RenyiObjective {
    alpha: f64,
    nx: usize,
    ny: usize,
    cols: Vec<usize>,
    log_w: Vec<f64>,
}

impl RenyiObjective {
    fn new(alpha: f64, channel: &Channel) -> Self {
        let cols = if alpha > 1.0 {
            channel.full_columns()
        } else {
            (0..channel.ny()).collect()
        };
        Self {
            alpha,
            nx: channel.nx(),
            ny: channel.ny(),
            log_w: log_columns(channel, &cols),
            cols,
        }
    }

    /// `log s_y` with `s_y = Σ_x P(x) W(y|x)^{1−α}`.
    fn log_sums(&self, p: &[f64]) -> Vec<f64> {
        let m = self.cols.len();
        let beta = 1.0 - self.alpha;
        let log_p: Vec<f64> = p.iter().map(|&w| ln_or_neg_inf(w)).collect();
        let mut parts = vec![0.0; self.nx];
        (0..m)
            .map(|j| {
                for (x, part) in parts.iter_mut().enumerate() {
                    let l = self.log_w[x * m + j];
                    *part = if l == f64::NEG_INFINITY { l } else { log_p[x] + beta * l };
                }
                logsumexp(&parts)
            })
            .collect()
    }

    fn log_terms(&self, log_s: &[f64]) -> Vec<f64> {
        let power = 1.0 / (1.0 - self.alpha);
        log_s
            .iter()
            .map(|&s| if s == f64::NEG_INFINITY { s } else { power * s })
            .collect()
    }
}

impl CertifiedObjective for RenyiObjective {
    fn dim(&self) -> usize {
        self.nx
    }

    fn value_grad(&self, p: &[f64], grad: &mut [f64]) -> f64 {
        let m = self.cols.len();
        let beta = 1.0 - self.alpha;
        let log_s = self.log_sums(p);
        let terms = self.log_terms(&log_s);
        let psi = logsumexp(&terms);
        for (x, g) in grad.iter_mut().enumerate() {
            let mut acc = 0.0;
            for j in 0..m {
                let l = self.log_w[x * m + j];
                if log_s[j] == f64::NEG_INFINITY || l == f64::NEG_INFINITY {
                    continue;
                }
                acc += (terms[j] - psi + beta * l - log_s[j]).exp();
            }
            *g = acc / beta;
        }
        psi
    }

    fn value(&self, p: &[f64]) -> f64 {
        logsumexp(&self.log_terms(&self.log_sums(p)))
    }

    fn certificate(&self, p: &[f64]) -> (f64, Vec<f64>) {
        let m = self.cols.len();
        let (alpha, beta) = (self.alpha, 1.0 - self.alpha);
        let terms = self.log_terms(&self.log_sums(p));
        let psi = logsumexp(&terms);
        let log_q: Vec<f64> = terms.iter().map(|t| t - psi).collect();
        let mut parts = Vec::with_capacity(m);
        let mut worst = f64::NEG_INFINITY;
        for x in 0..self.nx {
            parts.clear();
            let mut infinite = false;
            for j in 0..m {
                if log_q[j] == f64::NEG_INFINITY {
                    continue;
                }
                let l = self.log_w[x * m + j];
                if l == f64::NEG_INFINITY {
                    infinite |= alpha > 1.0;
                    continue;
                }
                parts.push(alpha * log_q[j] + beta * l);
            }
            let s = logsumexp(&parts);
            let d = if infinite || s == f64::NEG_INFINITY {
                f64::INFINITY
            } else {
                s / (alpha - 1.0)
            };
            worst = worst.max(d);
        }
        let q: Vec<f64> = log_q.iter().map(|v| v.exp()).collect();
        (worst, expand(&self.cols, self.ny, &q))
    }
}

fn certify(channel: &Channel, run: Sandwich, tol: f64) -> Result<CertifiedValue> {
    let lower = run.lower.max(0.0);
    let upper = run.upper.max(lower);
    if !(upper - lower <= tol) {
        return Err(Error::NoConvergence { lower, upper });
    }
    Ok(CertifiedValue::new(
        lower,
        upper,
        Dist::from_solver(channel.x_alphabet().clone(), run.argmax),
        Dist::from_solver(channel.y_alphabet().clone(), run.witness),
    ))
}

/// Channel umlaut information with default solver settings and tolerance `tol`.
pub fn channel_umlaut(channel: &Channel, tol: f64) -> Result<CertifiedValue> {
    channel_umlaut_with(channel, &SolverOptions::with_tol(tol))
}

pub fn channel_umlaut_with(channel: &Channel, options: &SolverOptions) -> Result<CertifiedValue> {
    options.validate()?;
    if !is_umlaut_finite(channel) {
        return Err(Error::Infinite);
    }
    let objective = UmlautObjective::new(channel);
    let run = simplex::multistart(&objective, &options.starts(channel.nx()), options.tol, options.max_iter);
    certify(channel, run, options.tol)
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha != 1.0 && alpha.is_finite() {
        Ok(())
    } else {
        Err(Error::BadAlpha(alpha))
    }
}

/// Rényi channel umlaut information `min_Q max_x D_α(Q‖W(·|x))`.
pub fn channel_renyi_umlaut(alpha: f64, channel: &Channel, tol: f64) -> Result<CertifiedValue> {
    channel_renyi_umlaut_with(alpha, channel, &SolverOptions::with_tol(tol))
}

pub fn channel_renyi_umlaut_with(alpha: f64, channel: &Channel, options: &SolverOptions) -> Result<CertifiedValue> {
    check_alpha(alpha)?;
    options.validate()?;
    if alpha > 1.0 && !is_umlaut_finite(channel) {
        return Err(Error::Infinite);
    }
    let objective = RenyiObjective::new(alpha, channel);
    let run = simplex::multistart(&objective, &options.starts(channel.nx()), options.tol, options.max_iter);
    certify(channel, run, options.tol)
}

/// Sphere-packing exponent `sup_{a∈(0,1]} U_{1−a}(W) − ((1−a)/a)·r`.
///
/// At `r = 0` this is the zero-rate limit `U(W)`. The endpoint `a = 1`
/// contributes `U_0(W) = 0`.
pub fn sphere_packing(r: f64, channel: &Channel, tol: f64) -> Result<f64> {
    sphere_packing_with(r, channel, &SolverOptions::with_tol(tol))
}

pub fn sphere_packing_with(r: f64, channel: &Channel, options: &SolverOptions) -> Result<f64> {
    options.validate()?;
    if !(r >= 0.0 && r.is_finite()) {
        return Err(Error::InvalidParameter(format!("rate {r} must be nonnegative")));
    }
    if r == 0.0 {
        return Ok(channel_umlaut_with(channel, options)?.value);
    }
    let objective = |a: f64| -> Result<f64> {
        if a >= 1.0 {
            return Ok(0.0);
        }
        let u = channel_renyi_umlaut_with(1.0 - a, channel, options)?.value;
        Ok(u - (1.0 - a) / a * r)
    };

    let mut grid: Vec<f64> = (1..=100).map(|k| 0.01 * k as f64).collect();
    grid.extend((1..=20).map(|j| 0.01 * 0.5f64.powi(j)));
    grid.extend((1..=20).map(|j| 1.0 - 0.01 * 0.5f64.powi(j)));
    grid.sort_by(f64::total_cmp);

    let mut best_a = 1.0;
    let mut best = 0.0;
    let mut spacing = 0.01;
    for (i, &a) in grid.iter().enumerate() {
        let value = objective(a)?;
        if value > best {
            best = value;
            best_a = a;
            let left = if i > 0 { a - grid[i - 1] } else { a };
            let right = if i + 1 < grid.len() { grid[i + 1] - a } else { 0.0 };
            spacing = left.max(right);
        }
    }
    // Local refinement: probe both neighbours at half the current spacing.
    for _ in 0..60 {
        let previous = best;
        spacing *= 0.5;
        for candidate in [best_a - spacing, best_a + spacing] {
            if candidate > 0.0 && candidate <= 1.0 {
                let value = objective(candidate)?;
                if value > best {
                    best = value;
                    best_a = candidate;
                }
            }
        }
        if best - previous < options.tol && spacing < 1e-6 {
            break;
        }
    }
    Ok(best)
}
