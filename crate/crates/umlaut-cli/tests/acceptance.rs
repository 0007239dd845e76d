//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Runs the library directly, and the `umlaut` binary for the
//! figure data.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use umlaut::divergence::{free_energy, gibbs};
use umlaut::exponents::geometric_exponent;
use umlaut::{
    bhattacharyya_matrix, channel_renyi_umlaut, channel_umlaut, dh_eps, dnn_bound, ell_kq, gaussian_channel_umlaut,
    gaussian_umlaut, joint_from_channel, list_gap_bound, list_zero_rate, metaconverse_saddle, ns_error_lp,
    ns_sandwich, renyi, stein_sandwich, umlaut_info, unassisted_zero_rate, Channel, Dist, EllSpec,
    GaussianChannelSpec, GaussianJoint, JointDist,
};

const SEED: u64 = 0xC0FFEE;
const TOL: f64 = 1e-8;
const BSC_U: f64 = 0.510825623765991;

type Outcome = Result<String, String>;

fn check(ok: bool, message: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(message())
    }
}

fn err(e: umlaut::Error) -> String {
    e.to_string()
}

fn grid() -> Vec<f64> {
    (1..=9).map(|i| i as f64 / 20.0).collect()
}

fn weights(rng: &mut ChaCha8Rng, len: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..len).map(|_| rng.random_range(0.05..1.0)).collect();
    let total: f64 = raw.iter().sum();
    raw.iter().map(|v| v / total).collect()
}

fn random_channel(rng: &mut ChaCha8Rng, max_in: usize, max_out: usize) -> Channel {
    let nx = rng.random_range(2..=max_in);
    let ny = rng.random_range(2..=max_out);
    let rows: Vec<Vec<f64>> = (0..nx).map(|_| weights(rng, ny)).collect();
    Channel::from_rows(&rows).unwrap()
}

fn time_limit(start: Instant, limit: Duration) -> Result<(), String> {
    check(start.elapsed() < limit, || format!("took {:?}, limit {limit:?}", start.elapsed()))
}

fn bsc_closed_form() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for q in grid() {
        let c = channel_umlaut(&Channel::bsc(q).map_err(err)?, TOL).map_err(err)?;
        let expected = -(q * (1.0 - q)).sqrt().ln() - 2f64.ln();
        worst = worst.max((c.value - expected).abs());
        check((c.value - expected).abs() <= 1e-7, || format!("q={q}: {} vs {expected}", c.value))?;
        let p = c.argmax_p.weights()[0];
        check((p - 0.5).abs() <= 1e-5, || format!("q={q}: argmax_p[0] = {p}"))?;
    }
    time_limit(start, Duration::from_secs(1))?;
    Ok(format!("max error {worst:.1e} in {:?}", start.elapsed()))
}

fn bec_closed_form() -> Outcome {
    let mut worst = 0.0f64;
    for q in grid() {
        let c = channel_umlaut(&Channel::bec(q).map_err(err)?, TOL).map_err(err)?;
        worst = worst.max((c.value + q.ln()).abs());
        check((c.value + q.ln()).abs() <= 1e-7, || format!("q={q}: {} vs {}", c.value, -q.ln()))?;
    }
    Ok(format!("max error {worst:.1e}"))
}

fn factor_two_law() -> Outcome {
    let mut worst = 0.0f64;
    for q in grid() {
        for w in [Channel::bsc(q).map_err(err)?, Channel::bec(q).map_err(err)?] {
            let u = channel_umlaut(&w, TOL).map_err(err)?.value;
            let e = unassisted_zero_rate(&w, TOL).map_err(err)?.value;
            worst = worst.max((e - u / 2.0).abs());
            check((e - u / 2.0).abs() <= 1e-6, || format!("q={q}: {e} vs {}", u / 2.0))?;
        }
    }
    Ok(format!("max error {worst:.1e}"))
}

fn additivity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut worst = 0.0f64;
    for pair in 0..20 {
        let a = random_channel(&mut rng, 3, 3);
        let b = random_channel(&mut rng, 3, 3);
        let ab = a.product(&b);
        let whole = channel_umlaut(&ab, TOL).map_err(err)?.value;
        let parts = channel_umlaut(&a, TOL).map_err(err)?.value + channel_umlaut(&b, TOL).map_err(err)?.value;
        worst = worst.max((whole - parts).abs());
        check((whole - parts).abs() <= 3e-8, || format!("pair {pair}: {whole} vs {parts}"))?;
        for alpha in [0.5, 2.0] {
            let whole = channel_renyi_umlaut(alpha, &ab, TOL).map_err(err)?.value;
            let parts = channel_renyi_umlaut(alpha, &a, TOL).map_err(err)?.value
                + channel_renyi_umlaut(alpha, &b, TOL).map_err(err)?.value;
            worst = worst.max((whole - parts).abs());
            check((whole - parts).abs() <= 3e-8, || format!("pair {pair}, alpha {alpha}: {whole} vs {parts}"))?;
        }
    }
    Ok(format!("max defect {worst:.1e}"))
}

fn metaconverse_equality() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 5);
    let mut worst = 0.0f64;
    for i in 0..10 {
        let w = random_channel(&mut rng, 3, 3);
        for m in [2, 3, 5] {
            let lp = ns_error_lp(m, &w).map_err(err)?;
            let saddle = metaconverse_saddle(m, &w, 1e-9).map_err(err)?;
            let gap = (-lp.eps_ns.ln() - saddle.value()).abs();
            worst = worst.max(gap);
            check(gap <= 1e-6, || format!("channel {i}, M={m}: gap {gap:e}"))?;
        }
    }
    time_limit(start, Duration::from_secs(30))?;
    Ok(format!("max gap {worst:.1e} in {:?}", start.elapsed()))
}

fn ns_sandwich_criterion() -> Outcome {
    let w = Channel::bsc(0.1).map_err(err)?;
    for n in 1..=3 {
        let exact = -ns_error_lp(2, &w.power(n).map_err(err)?).map_err(err)?.eps_ns.ln() / n as f64;
        let (lower, upper) = ns_sandwich(2, n, &w, 1.0 - 1e-3, 1.0 + 1e-3).map_err(err)?;
        check(lower <= exact && exact <= upper, || format!("n={n}: {lower} <= {exact} <= {upper} fails"))?;
    }
    let below = channel_renyi_umlaut(1.0 - 1e-3, &w, 1e-10).map_err(err)?;
    let above = channel_renyi_umlaut(1.0 + 1e-3, &w, 1e-10).map_err(err)?;
    check(below.lower <= BSC_U && BSC_U <= above.upper, || {
        format!("[{}, {}] misses {BSC_U}", below.lower, above.upper)
    })?;
    check((below.lower - BSC_U).abs() <= 2e-2 && (above.upper - BSC_U).abs() <= 2e-2, || {
        format!("[{}, {}] too wide", below.lower, above.upper)
    })?;
    Ok(format!("single-letter bracket [{:.6}, {:.6}]", below.lower, above.upper))
}

/// `ℓ_{k,u_k}` by summing over all `2^k` input tuples.
fn ell_direct(k: usize, p: &[f64], w: &Channel) -> f64 {
    let mut total = 0.0;
    for index in 0..1usize << k {
        let ones = index.count_ones() as usize;
        let weight = p[1].powi(ones as i32) * p[0].powi((k - ones) as i32);
        let v = [(k - ones) as f64 / k as f64, ones as f64 / k as f64];
        let s: f64 = (0..w.ny()).map(|y| w.entry(0, y).powf(v[0]) * w.entry(1, y).powf(v[1])).sum();
        total += weight * -s.ln();
    }
    total
}

fn list_ladder() -> Outcome {
    let w = Channel::bsc(0.1).map_err(err)?;
    let u = channel_umlaut(&w, TOL).map_err(err)?;
    let mut previous = 0.0;
    let mut ladder = Vec::new();
    for l in 1..=8usize {
        let e = list_zero_rate(l, &w, TOL).map_err(err)?.value;
        let oracle = (0..=1000)
            .map(|i| {
                let t = i as f64 / 1000.0;
                ell_direct(l + 1, &[t, 1.0 - t], &w)
            })
            .fold(f64::NEG_INFINITY, f64::max);
        check((e - oracle).abs() <= 1e-5, || format!("L={l}: {e} vs oracle {oracle}"))?;
        check(e >= previous - 1e-12 && e <= u.value + 1e-12, || format!("L={l}: {e} breaks the ladder"))?;
        let bound = list_gap_bound(l, &w, &u.argmax_p).map_err(err)?.bound;
        check(u.value - e <= bound, || format!("L={l}: gap {} > bound {bound}", u.value - e))?;
        previous = e;
        ladder.push(format!("{e:.6}"));
    }
    Ok(format!("E_1..E_8 = {}", ladder.join(", ")))
}

fn ell_convergence() -> Outcome {
    let pv_rows = Channel::from_rows(&[vec![0.0, 1.0], vec![0.5, 0.5]]).map_err(err)?;
    let pv_input = Dist::new(pv_rows.x_alphabet().clone(), &[1.0 / 3.0, 2.0 / 3.0]).map_err(err)?;
    let bsc = Channel::bsc(0.2).map_err(err)?;
    let bsc_input = Dist::uniform(bsc.x_alphabet().clone());
    let mut report = Vec::new();
    for (name, w, p) in [("pv", &pv_rows, &pv_input), ("bsc", &bsc, &bsc_input)] {
        let u = umlaut_info(&joint_from_channel(w, p).map_err(err)?).value.value();
        let mut last = 0.0;
        for k in [2, 4, 8, 16, 32, 64] {
            let ell = ell_kq(&EllSpec::uniform(k).map_err(err)?, p, w).map_err(err)?.value();
            check(ell <= u + 1e-12, || format!("{name} k={k}: {ell} > {u}"))?;
            last = u - ell;
        }
        let bound = list_gap_bound(63, w, p).map_err(err)?.bound;
        check(last <= bound, || format!("{name}: gap {last} > bound {bound}"))?;
        report.push(format!("{name} gap {last:.2e} <= {bound:.2e}"));
    }
    Ok(report.join("; "))
}

fn dnn_exactness() -> Outcome {
    let mut worst = 0.0f64;
    let levels: Vec<f64> = (1..=9).map(|i| i as f64 / 10.0).collect();
    for &a in &levels {
        for &b in &levels {
            let w = Channel::from_rows(&[vec![a, 1.0 - a], vec![b, 1.0 - b]]).map_err(err)?;
            let exact = 0.5 * bhattacharyya_matrix(&w).get(0, 1).value();
            let dnn = dnn_bound(&w, 1e-9).map_err(err)?;
            worst = worst.max((dnn - exact).abs());
            check((dnn - exact).abs() <= 1e-5, || format!("rows ({a}, {b}): {dnn} vs {exact}"))?;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 9);
    for i in 0..10 {
        let nx = 3;
        let ny = rng.random_range(2..=3);
        let rows: Vec<Vec<f64>> = (0..nx).map(|_| weights(&mut rng, ny)).collect();
        let w = Channel::from_rows(&rows).map_err(err)?;
        let matrix = bhattacharyya_matrix(&w);
        let mut best = f64::NEG_INFINITY;
        let steps = 1000;
        for s in 0..=steps {
            for t in 0..=steps - s {
                let p = [s as f64 / steps as f64, t as f64 / steps as f64, (steps - s - t) as f64 / steps as f64];
                best = best.max(matrix.quadratic(&p));
            }
        }
        let exact = unassisted_zero_rate(&w, TOL).map_err(err)?.value.max(best);
        let dnn = dnn_bound(&w, 1e-9).map_err(err)?;
        worst = worst.max((dnn - exact).abs());
        check((dnn - exact).abs() <= 1e-5, || format!("random channel {i}: {dnn} vs {exact}"))?;
    }
    Ok(format!("max error {worst:.1e}"))
}

fn stein_criterion() -> Outcome {
    let start = Instant::now();
    let pv = JointDist::from_matrix(&[vec![0.0, 1.0 / 3.0], vec![1.0 / 3.0, 1.0 / 3.0]]).map_err(err)?;
    let report = stein_sandwich(&pv, 6, 0.2, 0.8).map_err(err)?;
    let u = 2.0 / 3.0 * 2f64.ln();
    check((report.target - u).abs() < 1e-12, || format!("target {}", report.target))?;
    let last = &report.rows[5];
    check(last.lower <= u && u <= last.upper.value(), || {
        format!("[{}, {}] misses {u}", last.lower, last.upper)
    })?;
    for pair in report.rows[1..].windows(2) {
        check(pair[1].upper <= pair[0].upper, || format!("upper rises at n={}", pair[1].n))?;
    }
    time_limit(start, Duration::from_secs(60))?;
    Ok(format!("upper(6) = {:.6} in {:?}", last.upper.value(), start.elapsed()))
}

fn gaussian_criterion() -> Outcome {
    let mut worst = 0.0f64;
    for i in 0..10 {
        let rho = i as f64 / 10.0;
        let expected = rho * rho / (2.0 * (1.0 - rho * rho));
        let joint = gaussian_umlaut(&GaussianJoint::bivariate(rho).map_err(err)?).map_err(err)?.value;
        worst = worst.max((joint - expected).abs());
        check((joint - expected).abs() <= 1e-10, || format!("rho={rho}: {joint} vs {expected}"))?;
        if rho > 0.0 {
            let spec = GaussianChannelSpec::new(&[vec![rho]], vec![0.0], &[vec![1.0 - rho * rho]], &[vec![1.0]])
                .map_err(err)?;
            let channel = gaussian_channel_umlaut(&spec).map_err(err)?;
            worst = worst.max((channel - joint).abs());
            check((channel - joint).abs() <= 1e-10, || format!("rho={rho}: channel {channel} vs {joint}"))?;
        }
    }
    Ok(format!("max error {worst:.1e}"))
}

fn figure_sweep() -> Outcome {
    let output = Command::new(env!("CARGO_BIN_EXE_umlaut"))
        .arg("figure-lu-sweep")
        .output()
        .map_err(|e| e.to_string())?;
    check(output.status.success(), || format!("exit {:?}", output.status.code()))?;
    let mut reader = csv::Reader::from_reader(output.stdout.as_slice());
    let headers = reader.headers().map_err(|e| e.to_string())?.clone();
    check(headers == vec!["q", "U", "L", "L_inf"], || format!("headers {headers:?}"))?;
    let mut rows = 0;
    for record in reader.records() {
        let record = record.map_err(|e| e.to_string())?;
        let v: Vec<f64> = record.iter().map(|f| f.parse::<f64>().map_err(|e| e.to_string())).collect::<Result<_, _>>()?;
        let (q, u, l, l_inf) = (v[0], v[1], v[2], v[3]);
        let l_expected = 0.5 * (1.0 / (4.0 * q * (1.0 - q))).ln();
        let l_inf_expected = (0.5 - q) * ((1.0 - q) / q).ln();
        check((l - l_expected).abs() < 1e-12 && (l_inf - l_inf_expected).abs() < 1e-12, || format!("q={q}: bad L columns"))?;
        check((u - l).abs() <= 1e-7, || format!("q={q}: U={u} vs L={l}"))?;
        check(l_inf > u, || format!("q={q}: L_inf={l_inf} <= U={u}"))?;
        rows += 1;
    }
    check(rows == 9, || format!("{rows} rows"))?;
    Ok(format!("{rows} rows from the binary"))
}

fn property_batteries() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let cases = 64;
    for case in 0..cases {
        // Gibbs principle with its equality case.
        let d = rng.random_range(2..=6);
        let energies: Vec<f64> = (0..d).map(|_| rng.random_range(0.0..10.0)).collect();
        let (g, free) = gibbs(&energies);
        let partition = -energies.iter().map(|a| (-a).exp()).sum::<f64>().ln();
        check(
            (free_energy(&g, &energies) - partition).abs() <= 1e-10 && (free - partition).abs() <= 1e-10,
            || format!("gibbs equality, case {case}"),
        )?;
        let p = weights(&mut rng, d);
        check(free_energy(&p, &energies) >= partition - 1e-12, || format!("gibbs inequality, case {case}"))?;

        // Rényi monotonicity in the order.
        let p = weights(&mut rng, 4);
        let q = weights(&mut rng, 4);
        let orders = [0.2, 0.5, 0.9, 1.1, 2.0, 5.0];
        let values: Vec<f64> = orders.iter().map(|&a| renyi(a, &p, &q).unwrap().value()).collect();
        check(values.windows(2).all(|w| w[0] <= w[1] + 1e-12), || format!("renyi monotonicity, case {case}"))?;

        // Hypothesis testing under merging of two outcomes.
        let p = weights(&mut rng, 5);
        let q = weights(&mut rng, 5);
        let eps = rng.random_range(0.01..0.99);
        let merged = |v: &[f64]| vec![v[0] + v[1], v[2], v[3], v[4]];
        let fine = dh_eps(eps, &p, &q).unwrap().value.value();
        let coarse = dh_eps(eps, &merged(&p), &merged(&q)).unwrap().value.value();
        check(coarse <= fine + 1e-12, || format!("dh_eps data processing, case {case}"))?;

        // Umlaut information under post-processing of Y.
        let flat = weights(&mut rng, 6);
        let joint = JointDist::from_matrix(&[flat[..3].to_vec(), flat[3..].to_vec()]).unwrap();
        let rows: Vec<Vec<f64>> = (0..3).map(|_| weights(&mut rng, 2)).collect();
        let processed = joint.post_process(&Channel::from_rows(&rows).unwrap()).unwrap();
        check(
            umlaut_info(&processed).value.value() <= umlaut_info(&joint).value.value() + 1e-12,
            || format!("umlaut data processing, case {case}"),
        )?;

        // Monotonicity of the geometric exponent.
        let nx = rng.random_range(2..=3);
        let rows: Vec<Vec<f64>> = (0..nx).map(|_| weights(&mut rng, 3)).collect();
        let w = Channel::from_rows(&rows).unwrap();
        let low: Vec<f64> = (0..nx).map(|_| rng.random_range(0.0..1.0)).collect();
        let high: Vec<f64> = low.iter().map(|&u| u + rng.random_range(0.0..1.0 - u)).collect();
        check(geometric_exponent(&w, &high) >= geometric_exponent(&w, &low) - 1e-12, || {
            format!("f monotonicity, case {case}")
        })?;
    }
    Ok(format!("{cases} cases per property, seed {SEED:#X}"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 13] = [
        ("BSC closed form", bsc_closed_form),
        ("BEC closed form", bec_closed_form),
        ("factor-two law", factor_two_law),
        ("additivity", additivity),
        ("meta-converse equality", metaconverse_equality),
        ("NS sandwich", ns_sandwich_criterion),
        ("list-decoding ladder", list_ladder),
        ("ell convergence", ell_convergence),
        ("DNN exactness", dnn_exactness),
        ("Stein sandwich", stein_criterion),
        ("Gaussian closed forms", gaussian_criterion),
        ("figure sweep", figure_sweep),
        ("property batteries", property_batteries),
    ];
    let mut failures = 0;
    for (index, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", index + 1),
            Err(reason) => {
                failures += 1;
                println!("FAIL {:>2} {name}: {reason}", index + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
