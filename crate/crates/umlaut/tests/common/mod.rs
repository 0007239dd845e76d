//! Shared generators for the integration suites.
#![allow(dead_code)]

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use umlaut::{Channel, Dist, JointDist};

pub const SEED: u64 = 0xC0FFEE;

pub fn rng(offset: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(SEED ^ offset)
}

/// Strictly positive probability vector.
pub fn random_weights(rng: &mut impl Rng, len: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..len).map(|_| rng.random_range(0.05..1.0)).collect();
    let total: f64 = raw.iter().sum();
    raw.iter().map(|v| v / total).collect()
}

pub fn random_dist(rng: &mut impl Rng, len: usize) -> Dist {
    Dist::from_weights(&random_weights(rng, len)).unwrap()
}

pub fn random_channel(rng: &mut impl Rng, nx: usize, ny: usize) -> Channel {
    let rows: Vec<Vec<f64>> = (0..nx).map(|_| random_weights(rng, ny)).collect();
    Channel::from_rows(&rows).unwrap()
}

pub fn random_joint(rng: &mut impl Rng, nx: usize, ny: usize) -> JointDist {
    let flat = random_weights(rng, nx * ny);
    let rows: Vec<Vec<f64>> = flat.chunks(ny).map(<[f64]>::to_vec).collect();
    JointDist::from_matrix(&rows).unwrap()
}

fn normalize(raw: Vec<f64>) -> Vec<f64> {
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|v| v / total).collect()
}

pub fn weights(len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.02f64..1.0, len).prop_map(normalize)
}

/// Weights where some entries may be exactly zero, keeping at least one positive.
pub fn sparse_weights(len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(prop_oneof![Just(0.0), 0.02f64..1.0], len)
        .prop_filter("needs mass", |v| v.iter().any(|&x| x > 0.0))
        .prop_map(normalize)
}

pub fn channel(nx: usize, ny: usize) -> impl Strategy<Value = Channel> {
    prop::collection::vec(weights(ny), nx).prop_map(|rows| Channel::from_rows(&rows).unwrap())
}

pub fn joint(nx: usize, ny: usize) -> impl Strategy<Value = JointDist> {
    weights(nx * ny).prop_map(move |flat| {
        let rows: Vec<Vec<f64>> = flat.chunks(ny).map(<[f64]>::to_vec).collect();
        JointDist::from_matrix(&rows).unwrap()
    })
}

pub fn sized_joint() -> impl Strategy<Value = JointDist> {
    (1usize..=3, 1usize..=3).prop_flat_map(|(nx, ny)| joint(nx, ny))
}

pub fn sized_channel() -> impl Strategy<Value = Channel> {
    (2usize..=3, 2usize..=3).prop_flat_map(|(nx, ny)| channel(nx, ny))
}

pub fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

/// `D(P_X × Q‖P_XY)` evaluated from scratch.
pub fn product_divergence(joint: &JointDist, q: &[f64]) -> f64 {
    let px = joint.px();
    let mut total = 0.0;
    for x in 0..joint.nx() {
        for (y, &qy) in q.iter().enumerate() {
            let a = px[x] * qy;
            if a > 0.0 {
                let b = joint.mass(x, y);
                if b == 0.0 {
                    return f64::INFINITY;
                }
                total += a * (a / b).ln();
            }
        }
    }
    total
}

/// `D_α(P_X × Q‖P_XY)` evaluated from scratch.
pub fn product_renyi(alpha: f64, joint: &JointDist, q: &[f64]) -> f64 {
    let px = joint.px();
    let mut s = 0.0;
    for x in 0..joint.nx() {
        for (y, &qy) in q.iter().enumerate() {
            let a = px[x] * qy;
            let b = joint.mass(x, y);
            if a > 0.0 {
                if b == 0.0 && alpha > 1.0 {
                    return f64::INFINITY;
                }
                if b > 0.0 {
                    s += a.powf(alpha) * b.powf(1.0 - alpha);
                }
            }
        }
    }
    s.ln() / (alpha - 1.0)
}

/// Minimum of `f` over the 1-simplex on a uniform grid.
pub fn grid_min_binary(steps: usize, f: impl Fn(&[f64]) -> f64) -> (f64, f64) {
    (0..=steps)
        .map(|i| {
            let t = i as f64 / steps as f64;
            (f(&[t, 1.0 - t]), t)
        })
        .fold((f64::INFINITY, 0.0), |best, cur| if cur.0 < best.0 { cur } else { best })
}

/// Points of the 2-simplex on a grid of the given step count.
pub fn simplex_grid3(steps: usize) -> Vec<[f64; 3]> {
    let mut out = Vec::new();
    for i in 0..=steps {
        for j in 0..=steps - i {
            let a = i as f64 / steps as f64;
            let b = j as f64 / steps as f64;
            out.push([a, b, (1.0 - a - b).max(0.0)]);
        }
    }
    out
}
