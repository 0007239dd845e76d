//! Small numerical kernels: log-sum-exp, log-factorials, thresholds.

/// Masses strictly below this are treated as exact zeros.
pub const ZERO_MASS: f64 = 1e-15;

/// Admissible deviation of user-supplied weights from unit sum.
pub const INPUT_SUM_TOL: f64 = 1e-9;

/// `log(sum(exp(x)))`, returning `-inf` for an empty or all `-inf` input.
pub fn logsumexp(values: &[f64]) -> f64 {
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    if max == f64::INFINITY {
        return f64::INFINITY;
    }
    let sum: f64 = values.iter().map(|v| (v - max).exp()).sum();
    max + sum.ln()
}

/// Natural log with `ln 0 = -inf` made explicit for clarity at call sites.
#[inline]
pub fn ln_or_neg_inf(x: f64) -> f64 {
    if x > 0.0 {
        x.ln()
    } else {
        f64::NEG_INFINITY
    }
}

/// `x ln x` with `0 ln 0 = 0`.
#[inline]
pub fn xlogx(x: f64) -> f64 {
    if x > 0.0 {
        x * x.ln()
    } else {
        0.0
    }
}

/// Table of `ln(i!)` for `i = 0..=n`.
pub fn ln_factorials(n: usize) -> Vec<f64> {
    let mut table = Vec::with_capacity(n + 1);
    table.push(0.0);
    let mut acc = 0.0;
    for i in 1..=n {
        acc += (i as f64).ln();
        table.push(acc);
    }
    table
}

/// Every composition of `total` into `parts` nonnegative integers, in
/// lexicographic order with the first part decreasing.
pub fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = vec![0; parts];
    fill_compositions(total, 0, &mut current, &mut out);
    out
}

fn fill_compositions(remaining: usize, slot: usize, current: &mut [usize], out: &mut Vec<Vec<usize>>) {
    if slot + 1 == current.len() {
        current[slot] = remaining;
        out.push(current.to_vec());
        return;
    }
    for take in (0..=remaining).rev() {
        current[slot] = take;
        fill_compositions(remaining - take, slot + 1, current, out);
    }
}

/// Number of compositions of `total` into `parts` parts, saturating.
pub fn composition_count(total: usize, parts: usize) -> u128 {
    // C(total + parts - 1, parts - 1)
    let n = (total + parts - 1) as u128;
    let k = (parts - 1).min(total) as u128;
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul(n - i) / (i + 1);
    }
    acc
}
