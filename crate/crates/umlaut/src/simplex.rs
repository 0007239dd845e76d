//! Optimization on the probability simplex: Euclidean projection, restart
//! points, and entropic mirror descent with a duality-gap stopping rule.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;

/// Default seed for every randomized restart in the crate.
pub const DEFAULT_SEED: u64 = 0xC0FFEE;

/// Euclidean projection onto `{p ≥ 0, Σp = 1}` (sort-and-threshold).
pub fn project(v: &[f64]) -> Vec<f64> {
    let mut sorted = v.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let mut cumulative = 0.0;
    let mut theta = 0.0;
    for (i, &s) in sorted.iter().enumerate() {
        cumulative += s;
        let candidate = (cumulative - 1.0) / (i + 1) as f64;
        if s - candidate > 0.0 {
            theta = candidate;
        }
    }
    v.iter().map(|&x| (x - theta).max(0.0)).collect()
}

pub fn uniform(d: usize) -> Vec<f64> {
    vec![1.0 / d as f64; d]
}

/// Barycenters of every proper nonempty face, vertices first.
pub fn face_barycenters(d: usize) -> Vec<Vec<f64>> {
    let mut masks: Vec<u32> = (1..(1u32 << d) - 1).collect();
    masks.sort_by_key(|m| (m.count_ones(), *m));
    masks
        .into_iter()
        .map(|mask| {
            let size = mask.count_ones() as f64;
            (0..d)
                .map(|i| if mask >> i & 1 == 1 { 1.0 / size } else { 0.0 })
                .collect()
        })
        .collect()
}

/// `count` Dirichlet(1, ..., 1) samples from a seeded stream.
pub fn dirichlet_samples(d: usize, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let raw: Vec<f64> = (0..d).map(|_| rng.sample::<f64, _>(Exp1)).collect();
            let total: f64 = raw.iter().sum();
            raw.into_iter().map(|x| x / total).collect()
        })
        .collect()
}

/// Uniform point, face barycenters for `d ≤ max_face_dim`, then random points.
pub fn restart_points(d: usize, max_face_dim: usize, random: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut points = vec![uniform(d)];
    if d > 1 && d <= max_face_dim {
        points.extend(face_barycenters(d));
    }
    points.extend(dirichlet_samples(d, random, seed));
    points
}

/// A smooth convex function on the simplex, given in log form, together
/// with a dual certificate that upper-bounds `−min ψ`.
pub trait CertifiedObjective {
    fn dim(&self) -> usize;
    /// `ψ(p)` and its gradient.
    fn value_grad(&self, p: &[f64], grad: &mut [f64]) -> f64;
    fn value(&self, p: &[f64]) -> f64;
    /// Upper certificate at `p` and the output law that realizes it.
    fn certificate(&self, p: &[f64]) -> (f64, Vec<f64>);
}

/// Best sandwich found by one or more descent runs.
#[derive(Clone, Debug)]
pub struct Sandwich {
    pub lower: f64,
    pub argmax: Vec<f64>,
    pub upper: f64,
    pub witness: Vec<f64>,
    pub iterations: usize,
}

impl Sandwich {
    pub fn gap(&self) -> f64 {
        self.upper - self.lower
    }

    fn absorb(&mut self, other: Sandwich) {
        if other.lower > self.lower {
            self.lower = other.lower;
            self.argmax = other.argmax;
        }
        if other.upper < self.upper {
            self.upper = other.upper;
            self.witness = other.witness;
        }
        self.iterations += other.iterations;
    }
}

/// Entropic mirror descent on `ψ` with backtracking, stopping when the best
/// certificate gap drops below `tol`. `observe` sees each `(lower, upper)`.
pub fn mirror_descent<O: CertifiedObjective>(
    objective: &O,
    start: &[f64],
    tol: f64,
    max_iter: usize,
    observe: &mut dyn FnMut(f64, f64),
) -> Sandwich {
    let d = objective.dim();
    let mut p = start.to_vec();
    let mut grad = vec![0.0; d];
    let mut trial = vec![0.0; d];
    let mut step = 1.0;
    let mut best: Option<Sandwich> = None;
    let mut iterations = 0;
    while iterations < max_iter {
        iterations += 1;
        let psi = objective.value_grad(&p, &mut grad);
        let (upper, witness) = objective.certificate(&p);
        observe(-psi, upper);
        let current = Sandwich {
            lower: -psi,
            argmax: p.clone(),
            upper,
            witness,
            iterations: 0,
        };
        match best.as_mut() {
            Some(b) => b.absorb(current),
            None => best = Some(current),
        }
        if best.as_ref().is_some_and(|b| b.gap() <= tol) {
            break;
        }
        let shift = p
            .iter()
            .zip(&grad)
            .filter(|(w, _)| **w > 0.0)
            .map(|(_, g)| *g)
            .fold(f64::INFINITY, f64::min);
        let mut accepted = false;
        while step > 1e-30 {
            for ((t, &w), &g) in trial.iter_mut().zip(&p).zip(&grad) {
                *t = w * (-(step) * (g - shift)).exp();
            }
            let total: f64 = trial.iter().sum();
            trial.iter_mut().for_each(|t| *t /= total);
            let linear: f64 = trial.iter().zip(&p).zip(&grad).map(|((t, w), g)| g * (t - w)).sum();
            let bregman: f64 = trial
                .iter()
                .zip(&p)
                .filter(|(t, _)| **t > 0.0)
                .map(|(t, w)| t * (t / w).ln())
                .sum();
            let model = psi + linear + bregman.max(0.0) / step;
            if objective.value(&trial) <= model + 1e-15 * (1.0 + psi.abs()) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if !accepted || trial == p {
            break;
        }
        std::mem::swap(&mut p, &mut trial);
        step = (step * 2.0).min(1e8);
    }
    let mut out = best.expect("at least one iteration");
    out.iterations = iterations;
    out
}

/// Mirror descent from every restart point, with early exit once the merged
/// sandwich is within `tol`. The first start gets the full iteration budget.
pub fn multistart<O: CertifiedObjective>(
    objective: &O,
    starts: &[Vec<f64>],
    tol: f64,
    max_iter: usize,
) -> Sandwich {
    let mut merged: Option<Sandwich> = None;
    for (i, start) in starts.iter().enumerate() {
        let budget = if i == 0 { max_iter } else { (max_iter / 10).max(1) };
        let run = mirror_descent(objective, start, tol, budget, &mut |_, _| {});
        match merged.as_mut() {
            Some(m) => m.absorb(run),
            None => merged = Some(run),
        }
        if merged.as_ref().is_some_and(|m| m.gap() <= tol) {
            break;
        }
    }
    merged.expect("at least one restart point")
}

/// Projected gradient ascent of a smooth function with Armijo backtracking.
/// Returns the best value and its maximizer.
pub fn projected_ascent(
    value: &dyn Fn(&[f64]) -> f64,
    gradient: &dyn Fn(&[f64], &mut [f64]),
    start: &[f64],
    max_iter: usize,
) -> (f64, Vec<f64>) {
    let mut p = start.to_vec();
    let mut current = value(&p);
    let mut grad = vec![0.0; p.len()];
    let mut step = 1.0;
    for _ in 0..max_iter {
        gradient(&p, &mut grad);
        let mut moved = false;
        while step > 1e-20 {
            let shifted: Vec<f64> = p.iter().zip(&grad).map(|(x, g)| x + step * g).collect();
            let trial = project(&shifted);
            let ascent: f64 = trial.iter().zip(&p).zip(&grad).map(|((t, x), g)| g * (t - x)).sum();
            let candidate = value(&trial);
            if candidate >= current + 1e-4 * ascent && candidate >= current {
                let change = trial.iter().zip(&p).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
                let gain = candidate - current;
                // Stalled: no measurable gain from a vanishing move.
                moved = change > 1e-15 && !(gain <= 1e-16 * (1.0 + current.abs()) && change < 1e-9);
                p = trial;
                current = candidate;
                break;
            }
            step *= 0.5;
        }
        if !moved {
            break;
        }
        step = (step * 2.0).min(1e6);
    }
    (current, p)
}
