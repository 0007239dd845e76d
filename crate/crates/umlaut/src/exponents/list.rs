//! Lower umlaut information `ℓ_{k,q}` and list-decoding zero-rate exponents.
//!
//! With `f(v) = −log Σ_y Π_{x ∈ supp v} W(y|x)^{v(x)}` (the sum running over
//! outputs reachable from every `x` in the support of `v`),
//! `ℓ_{k,q}(W,P) = Σ_{x_1..x_k} Π P(x_i) · f(Σ_i q_i e_{x_i})`. For uniform
//! `q` the summand depends only on the type of the tuple, so the sum runs
//! over compositions of `k` with multinomial weights.

use serde::{Deserialize, Serialize};

use crate::channel_umlaut::{channel_umlaut_with, CertifiedValue, SolverOptions};
use crate::error::{Error, Result};
use crate::ext::ExtReal;
use crate::numeric::{composition_count, compositions, ln_factorials, logsumexp};
use crate::prob::{Channel, Dist};
use crate::simplex;

/// Largest number of tuples enumerated for non-uniform weights.
const TUPLE_LIMIT: f64 = 16_777_216.0;
/// Largest number of type classes enumerated.
const TYPE_LIMIT: u128 = 1 << 22;
/// Inputs with less mass than this are excluded from `p̄_min`.
const SUPPORT_MASK: f64 = 1e-9;

/// Block length `k` and position weights `q`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EllSpec {
    k: usize,
    q: Vec<f64>,
}

impl EllSpec {
    pub fn new(q: Vec<f64>) -> Result<Self> {
        if q.is_empty() {
            return Err(Error::InvalidParameter("k must be positive".into()));
        }
        if q.iter().any(|&w| !(w >= 0.0) || !w.is_finite()) {
            return Err(Error::InvalidParameter("weights must be nonnegative".into()));
        }
        let total: f64 = q.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::NotNormalized { sum: total });
        }
        Ok(Self { k: q.len(), q })
    }

    /// Uniform weights `u_k`.
    pub fn uniform(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidParameter("k must be positive".into()));
        }
        Ok(Self {
            k,
            q: vec![1.0 / k as f64; k],
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn q(&self) -> &[f64] {
        &self.q
    }

    pub fn is_uniform(&self) -> bool {
        let u = 1.0 / self.k as f64;
        self.q.iter().all(|&w| (w - u).abs() <= 1e-15)
    }
}

/// `f(v)`; may be negative when `Σv < 1` and `+inf` when no output is
/// reachable from the whole support of `v`.
pub fn geometric_exponent(channel: &Channel, v: &[f64]) -> f64 {
    let support: Vec<usize> = (0..channel.nx()).filter(|&x| v[x] > 0.0).collect();
    let terms: Vec<f64> = (0..channel.ny())
        .filter(|&y| support.iter().all(|&x| channel.entry(x, y) > 0.0))
        .map(|y| support.iter().map(|&x| v[x] * channel.entry(x, y).ln()).sum())
        .collect();
    -logsumexp(&terms)
}

/// `ℓ_{k,u_k}` as a polynomial in `P`: `Σ_t exp(log_coef_t) f_t Π_x P(x)^{n_t(x)}`.
struct TypePolynomial {
    types: Vec<Vec<usize>>,
    log_coef: Vec<f64>,
    exponent: Vec<f64>,
}

impl TypePolynomial {
    fn new(channel: &Channel, k: usize) -> Result<Self> {
        let d = channel.nx();
        if composition_count(k, d) > TYPE_LIMIT {
            return Err(Error::TooLarge(format!("type classes of length {k} over {d} symbols")));
        }
        let ln_fact = ln_factorials(k);
        let types = compositions(k, d);
        let log_coef = types
            .iter()
            .map(|n| ln_fact[k] - n.iter().map(|&c| ln_fact[c]).sum::<f64>())
            .collect();
        let exponent = types
            .iter()
            .map(|n| {
                let v: Vec<f64> = n.iter().map(|&c| c as f64 / k as f64).collect();
                geometric_exponent(channel, &v)
            })
            .collect();
        Ok(Self {
            types,
            log_coef,
            exponent,
        })
    }

    fn has_infinite(&self) -> bool {
        self.exponent.iter().any(|f| f.is_infinite())
    }

    /// Log of the multinomial probability of type `t` under `p`, with
    /// `skip` removing one factor `p(skip)`.
    fn log_weight(&self, t: usize, log_p: &[f64], skip: Option<usize>) -> f64 {
        let mut acc = self.log_coef[t];
        for (x, &c) in self.types[t].iter().enumerate() {
            let c = if skip == Some(x) { c - 1 } else { c };
            if c > 0 {
                acc += c as f64 * log_p[x];
            }
        }
        acc
    }

    fn value(&self, p: &[f64]) -> ExtReal {
        let log_p: Vec<f64> = p.iter().map(|&w| if w > 0.0 { w.ln() } else { f64::NEG_INFINITY }).collect();
        let mut total = 0.0;
        for t in 0..self.types.len() {
            let lw = self.log_weight(t, &log_p, None);
            if lw == f64::NEG_INFINITY {
                continue;
            }
            if self.exponent[t].is_infinite() {
                return ExtReal::Infinite;
            }
            total += lw.exp() * self.exponent[t];
        }
        ExtReal::Finite(total)
    }

    fn gradient(&self, p: &[f64], out: &mut [f64]) {
        let log_p: Vec<f64> = p.iter().map(|&w| if w > 0.0 { w.ln() } else { f64::NEG_INFINITY }).collect();
        out.iter_mut().for_each(|g| *g = 0.0);
        for t in 0..self.types.len() {
            if self.exponent[t].is_infinite() {
                continue;
            }
            for (x, &c) in self.types[t].iter().enumerate() {
                if c == 0 {
                    continue;
                }
                let lw = self.log_weight(t, &log_p, Some(x));
                if lw > f64::NEG_INFINITY {
                    out[x] += c as f64 * lw.exp() * self.exponent[t];
                }
            }
        }
    }
}

/// `ℓ_{k,q}(W,P)`: type classes for uniform `q`, tuple enumeration otherwise.
pub fn ell_kq(spec: &EllSpec, input: &Dist, channel: &Channel) -> Result<ExtReal> {
    if input.alphabet() != channel.x_alphabet() {
        return Err(Error::AlphabetMismatch("input law is not over the channel inputs".into()));
    }
    if spec.is_uniform() {
        return Ok(TypePolynomial::new(channel, spec.k)?.value(input.weights()));
    }
    let d = channel.nx();
    if spec.k as f64 * (d as f64).ln() > TUPLE_LIMIT.ln() + 1e-12 {
        return Err(Error::TooLarge(format!("{d}^{} tuples", spec.k)));
    }
    let p = input.weights();
    let mut tuple = vec![0usize; spec.k];
    let mut v = vec![0.0; d];
    let mut total = 0.0;
    loop {
        let weight: f64 = tuple.iter().map(|&x| p[x]).product();
        if weight > 0.0 {
            v.iter_mut().for_each(|e| *e = 0.0);
            for (&x, &q) in tuple.iter().zip(&spec.q) {
                v[x] += q;
            }
            let f = geometric_exponent(channel, &v);
            if f.is_infinite() {
                return Ok(ExtReal::Infinite);
            }
            total += weight * f;
        }
        // Odometer increment, last position fastest.
        let mut pos = spec.k;
        loop {
            if pos == 0 {
                return Ok(ExtReal::Finite(total));
            }
            pos -= 1;
            tuple[pos] += 1;
            if tuple[pos] < d {
                break;
            }
            tuple[pos] = 0;
        }
    }
}

/// List-decoding exponent `E_L = max_P ℓ_{L+1}(W,P)` with default settings.
pub fn list_zero_rate(list_size: usize, channel: &Channel, tol: f64) -> Result<CertifiedValue> {
    list_zero_rate_with(list_size, channel, &SolverOptions::with_tol(tol))
}

/// Multistart projected ascent on `ℓ_{L+1}`. The reported `value` and
/// `lower` are the exponent found; `upper` is the channel umlaut
/// information, which dominates every list exponent.
pub fn list_zero_rate_with(list_size: usize, channel: &Channel, options: &SolverOptions) -> Result<CertifiedValue> {
    options.validate()?;
    if list_size == 0 {
        return Err(Error::InvalidParameter("list size must be positive".into()));
    }
    let poly = TypePolynomial::new(channel, list_size + 1)?;
    if poly.has_infinite() {
        return Err(Error::Infinite);
    }
    let value = |p: &[f64]| poly.value(p).value();
    let gradient = |p: &[f64], out: &mut [f64]| poly.gradient(p, out);
    let mut best = (f64::NEG_INFINITY, simplex::uniform(channel.nx()));
    for start in options.starts(channel.nx()) {
        let (v, p) = simplex::projected_ascent(&value, &gradient, &start, 10_000);
        if v > best.0 {
            best = (v, p);
        }
    }
    let (upper, argmin_q) = match channel_umlaut_with(channel, options) {
        Ok(c) => (c.upper, c.argmin_q),
        Err(Error::Infinite) => (f64::INFINITY, Dist::uniform(channel.y_alphabet().clone())),
        Err(e) => return Err(e),
    };
    let argmax_p = Dist::from_solver(channel.x_alphabet().clone(), best.1);
    let mut certified = CertifiedValue::new(best.0, upper.max(best.0), argmax_p, argmin_q);
    certified.value = best.0;
    Ok(certified)
}

/// Quantitative bound on `U(W) − E_L(W)` for a given optimal input law.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GapBound {
    #[serde(rename = "L")]
    pub list_size: usize,
    pub epsilon: f64,
    pub bound: f64,
    pub pbar_min: f64,
    pub w_min: f64,
}

/// `|X|·exp(−(ε²/2)·p̄_min·(L+1)) − ε·log W_min` with
/// `ε = min{√(log(L+1)/(p̄_min(L+1))), ½}`.
pub fn list_gap_bound(list_size: usize, channel: &Channel, pbar: &Dist) -> Result<GapBound> {
    if list_size == 0 {
        return Err(Error::InvalidParameter("list size must be positive".into()));
    }
    if pbar.len() != channel.nx() {
        return Err(Error::AlphabetMismatch("reference law is not over the channel inputs".into()));
    }
    let pbar_min = pbar
        .weights()
        .iter()
        .copied()
        .filter(|&w| w > SUPPORT_MASK)
        .fold(f64::INFINITY, f64::min);
    if !pbar_min.is_finite() {
        return Err(Error::DegenerateSupport);
    }
    let w_min = channel.min_positive_entry();
    let blocks = (list_size + 1) as f64;
    let epsilon = (blocks.ln() / (pbar_min * blocks)).sqrt().min(0.5);
    let bound = channel.nx() as f64 * (-(epsilon * epsilon / 2.0) * pbar_min * blocks).exp() - epsilon * w_min.ln();
    Ok(GapBound {
        list_size,
        epsilon,
        bound,
        pbar_min,
        w_min,
    })
}
