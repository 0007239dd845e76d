//! Non-signalling-assisted coding: the exact one-shot error as a linear
//! program, the meta-converse saddle value computed independently through
//! hypothesis testing, and the finite-blocklength Rényi sandwich.

mod lp;

use serde::{Deserialize, Serialize};

use crate::channel_umlaut::{channel_renyi_umlaut_with, SolverOptions};
use crate::error::{Error, Result};
use crate::ext::ExtReal;
use crate::prob::{Channel, Dist};
use crate::simplex;
use lp::LpOutcome;

/// Largest simplex tableau, in entries.
const TABLEAU_LIMIT: usize = 1 << 23;
/// Saddle values `h ≤ this` are reported as a zero error.
const ZERO_ERROR: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LpStatus {
    Optimal,
    /// The returned point violates a constraint by more than `1e-9`.
    InfeasibleGuard,
}

/// Optimal non-signalling code for `M` messages.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NsLpResult {
    #[serde(rename = "M")]
    pub messages: usize,
    pub eps_ns: f64,
    /// Code variables `R[x][y]`.
    #[serde(rename = "R")]
    pub code: Vec<Vec<f64>>,
    /// Input marginal `P` of the code.
    #[serde(rename = "P")]
    pub input: Dist,
    pub lp_status: LpStatus,
}

/// `ε^NS(M,W) = 1 − max Σ W(y|x) R_xy` subject to `Σ_x R_xy ≤ 1/M`,
/// `0 ≤ R_xy ≤ P(x)`, `Σ P = 1`.
pub fn ns_error_lp(messages: usize, channel: &Channel) -> Result<NsLpResult> {
    if messages == 0 {
        return Err(Error::InvalidParameter("M must be positive".into()));
    }
    let (nx, ny) = (channel.nx(), channel.ny());
    let cells = nx * ny;
    let vars = cells + nx;
    let rows = ny + cells + 1;
    if (rows + 1).saturating_mul(vars + rows + 1) > TABLEAU_LIMIT {
        return Err(Error::TooLarge(format!("LP for a {nx}x{ny} channel")));
    }
    let mut objective = vec![0.0; vars];
    objective[..cells].copy_from_slice(channel.matrix_flat());
    let mut constraints = vec![0.0; rows * vars];
    let mut bounds = vec![0.0; rows];
    let per_output = 1.0 / messages as f64;
    for y in 0..ny {
        for x in 0..nx {
            constraints[y * vars + x * ny + y] = 1.0;
        }
        bounds[y] = per_output;
    }
    for cell in 0..cells {
        let row = ny + cell;
        constraints[row * vars + cell] = 1.0;
        constraints[row * vars + cells + cell / ny] = -1.0;
    }
    let last = rows - 1;
    for x in 0..nx {
        constraints[last * vars + cells + x] = 1.0;
    }
    bounds[last] = 1.0;

    let solution = match lp::maximize(&objective, &constraints, &bounds) {
        LpOutcome::Optimal { solution, .. } => solution,
        LpOutcome::Unbounded => unreachable!("the feasible region is bounded"),
        LpOutcome::PivotLimit => {
            return Err(Error::NoConvergence { lower: 0.0, upper: 1.0 });
        }
    };
    let code: Vec<Vec<f64>> = (0..nx)
        .map(|x| solution[x * ny..(x + 1) * ny].iter().map(|r| r.max(0.0)).collect())
        .collect();
    let mut input: Vec<f64> = solution[cells..].iter().map(|p| p.max(0.0)).collect();
    // Σ P ≤ 1 is never binding in a harmful way: top up the slack uniformly.
    let slack = (1.0 - input.iter().sum::<f64>()).max(0.0) / nx as f64;
    input.iter_mut().for_each(|p| *p += slack);

    let success: f64 = (0..nx)
        .flat_map(|x| (0..ny).map(move |y| (x, y)))
        .map(|(x, y)| channel.entry(x, y) * code[x][y])
        .sum();
    let feasible = (0..ny).all(|y| (0..nx).map(|x| code[x][y]).sum::<f64>() <= per_output + 1e-9)
        && (0..nx).all(|x| code[x].iter().all(|&r| r <= input[x] + 1e-9));
    Ok(NsLpResult {
        messages,
        eps_ns: (1.0 - success).clamp(0.0, 1.0),
        code,
        input: Dist::from_solver(channel.x_alphabet().clone(), input),
        lp_status: if feasible { LpStatus::Optimal } else { LpStatus::InfeasibleGuard },
    })
}

/// Saddle point of the meta-converse with the optimal input and output laws.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetaConverse {
    pub value: ExtReal,
    pub input: Dist,
    pub output: Dist,
}

/// `max_{P_X} min_{Q_Y} D_H^{1/M}(P_X Q_Y‖P_XY)`.
pub fn metaconverse_saddle(messages: usize, channel: &Channel, tol: f64) -> Result<ExtReal> {
    Ok(metaconverse(messages, channel, tol)?.value)
}

/// Evaluates the saddle through the dual of the inner problem:
/// `max_Q β = h(P) = Σ_y max_{s≥0} [(1−ε)s − Σ_x P(x)(s − W(y|x))⁺]`, a convex
/// piecewise-linear function of `P` whose per-output maximizer is a
/// breakpoint. `h` is then minimized over the simplex: by nested
/// golden-section search for up to four inputs, by projected subgradient
/// descent beyond.
pub fn metaconverse(messages: usize, channel: &Channel, tol: f64) -> Result<MetaConverse> {
    if messages < 2 {
        return Err(Error::InvalidParameter("M must be at least 2".into()));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!("tolerance {tol} must be positive")));
    }
    let eps = 1.0 / messages as f64;
    let d = channel.nx();
    let (h, p) = if d <= 4 {
        let mut prefix = Vec::with_capacity(d);
        let mut best = (f64::INFINITY, vec![1.0; 1]);
        nested_minimum(channel, eps, &mut prefix, 1.0, tol, &mut best);
        best
    } else {
        subgradient_minimum(channel, eps)
    };
    let (_, thresholds) = dual_value(channel, eps, &p);
    let total: f64 = thresholds.iter().sum();
    let output = if total > 0.0 {
        thresholds
    } else {
        vec![1.0 / channel.ny() as f64; channel.ny()]
    };
    let value = if h <= ZERO_ERROR {
        ExtReal::Infinite
    } else {
        ExtReal::divergence(-h.ln())
    };
    Ok(MetaConverse {
        value,
        input: Dist::from_solver(channel.x_alphabet().clone(), p),
        output: Dist::from_solver(channel.y_alphabet().clone(), output),
    })
}

/// `h(P)` and the per-output optimal thresholds `s_y`.
fn dual_value(channel: &Channel, eps: f64, p: &[f64]) -> (f64, Vec<f64>) {
    let target = 1.0 - eps;
    let mut order: Vec<usize> = (0..channel.nx()).collect();
    let mut total = 0.0;
    let mut thresholds = Vec::with_capacity(channel.ny());
    for y in 0..channel.ny() {
        order.sort_by(|&a, &b| channel.entry(a, y).total_cmp(&channel.entry(b, y)));
        let mut cumulative = 0.0;
        let mut s = channel.entry(order[order.len() - 1], y);
        for &x in &order {
            cumulative += p[x];
            if cumulative >= target - 1e-15 {
                s = channel.entry(x, y);
                break;
            }
        }
        let penalty: f64 = (0..channel.nx()).map(|x| p[x] * (s - channel.entry(x, y)).max(0.0)).sum();
        total += target * s - penalty;
        thresholds.push(s);
    }
    (total.max(0.0), thresholds)
}

/// Golden-section search over `p[prefix.len()] ∈ [0, remaining]` of the
/// minimum over the remaining coordinates.
fn nested_minimum(
    channel: &Channel,
    eps: f64,
    prefix: &mut Vec<f64>,
    remaining: f64,
    tol: f64,
    best: &mut (f64, Vec<f64>),
) -> f64 {
    let d = channel.nx();
    if prefix.len() + 1 == d {
        prefix.push(remaining.max(0.0));
        let (h, _) = dual_value(channel, eps, prefix);
        if h < best.0 {
            *best = (h, prefix.clone());
        }
        prefix.pop();
        return h;
    }
    let eval = |t: f64, prefix: &mut Vec<f64>, best: &mut (f64, Vec<f64>)| {
        prefix.push(t);
        let v = nested_minimum(channel, eps, prefix, remaining - t, tol, best);
        prefix.pop();
        v
    };
    let ratio = 0.5 * (5f64.sqrt() - 1.0);
    let (mut lo, mut hi) = (0.0, remaining);
    let mut left = hi - ratio * (hi - lo);
    let mut right = lo + ratio * (hi - lo);
    let mut f_left = eval(left, prefix, best);
    let mut f_right = eval(right, prefix, best);
    let width = (tol * 1e-4).min(1e-13);
    while hi - lo > width {
        if f_left <= f_right {
            hi = right;
            right = left;
            f_right = f_left;
            left = hi - ratio * (hi - lo);
            f_left = eval(left, prefix, best);
        } else {
            lo = left;
            left = right;
            f_left = f_right;
            right = lo + ratio * (hi - lo);
            f_right = eval(right, prefix, best);
        }
    }
    let ends = [eval(0.0, prefix, best), eval(remaining, prefix, best)];
    f_left.min(f_right).min(ends[0]).min(ends[1])
}

/// Projected subgradient descent with diminishing steps from several starts.
fn subgradient_minimum(channel: &Channel, eps: f64) -> (f64, Vec<f64>) {
    let d = channel.nx();
    let mut best = (f64::INFINITY, simplex::uniform(d));
    for start in simplex::restart_points(d, 0, 8, simplex::DEFAULT_SEED) {
        let mut p = start;
        for t in 0..20_000 {
            let (h, s) = dual_value(channel, eps, &p);
            if h < best.0 {
                best = (h, p.clone());
            }
            let grad: Vec<f64> = (0..d)
                .map(|x| -(0..channel.ny()).map(|y| (s[y] - channel.entry(x, y)).max(0.0)).sum::<f64>())
                .collect();
            let step = 0.5 / ((t + 1) as f64).sqrt();
            let moved: Vec<f64> = p.iter().zip(&grad).map(|(x, g)| x - step * g).collect();
            p = simplex::project(&moved);
        }
    }
    best
}

/// Rényi bounds `(lower, upper)` on `−(1/n) log ε^NS(M, W^{×n})` from the
/// single-letter Rényi channel informations:
/// `lower = U_{α_lo}(W) − (α_lo/((1−α_lo)n)) log M` and
/// `upper = U_{α_hi}(W) + (α_hi/((α_hi−1)n)) log(1/(1−1/M))`.
pub fn ns_sandwich(
    messages: usize,
    blocklength: usize,
    channel: &Channel,
    alpha_lo: f64,
    alpha_hi: f64,
) -> Result<(f64, f64)> {
    if !(alpha_lo > 0.0 && alpha_lo < 1.0) {
        return Err(Error::BadAlpha(alpha_lo));
    }
    if !(alpha_hi > 1.0 && alpha_hi.is_finite()) {
        return Err(Error::BadAlpha(alpha_hi));
    }
    if messages == 0 || blocklength == 0 {
        return Err(Error::InvalidParameter("M and n must be positive".into()));
    }
    let options = SolverOptions::with_tol(1e-10);
    let n = blocklength as f64;
    let m = messages as f64;
    let u_lo = channel_renyi_umlaut_with(alpha_lo, channel, &options)?.lower;
    let lower = u_lo - alpha_lo / ((1.0 - alpha_lo) * n) * m.ln();
    let upper = match channel_renyi_umlaut_with(alpha_hi, channel, &options) {
        Ok(c) => c.upper + alpha_hi / ((alpha_hi - 1.0) * n) * (1.0 / (1.0 - 1.0 / m)).ln(),
        Err(Error::Infinite) => f64::INFINITY,
        Err(e) => return Err(e),
    };
    Ok((lower, upper))
}
