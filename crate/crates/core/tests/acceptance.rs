//! Acceptance criteria 1-10. Prints one PASS/FAIL line per criterion (with
//! indented detail below it) and exits nonzero if any criterion fails.

mod common;

use std::path::PathBuf;
use std::time::{Duration, Instant};

use common::{golden_cases, grid, power_sum, random_poly, rng};
use qpoly::bench::{
    gen_random_poly, noise_sweep, shot_scaling_experiment, stress_experiment, table1_experiment,
    ExperimentConfig, RunReport, ShotScalingConfig,
};
use qpoly::compiler::{angle_of_weight, blocks, resources};
use qpoly::qasm::{check_qasm, to_qasm};
use qpoly::sim::dense::DenseSimulator;
use qpoly::sim::stream::{liveness, run_window, DEFAULT_WINDOW_CAP};
use qpoly::sim::run_statevector;
use qpoly::{build_circuit, Circuit, CompiledProgram, Order, Polynomial};

struct Outcome {
    pass: bool,
    summary: String,
    detail: Vec<String>,
}

impl Outcome {
    fn new(pass: bool, summary: impl Into<String>) -> Self {
        Self {
            pass,
            summary: summary.into(),
            detail: Vec::new(),
        }
    }

    fn with(mut self, detail: Vec<String>) -> Self {
        self.detail = detail;
        self
    }
}

fn within(elapsed: Duration, limit_s: f64) -> bool {
    elapsed.as_secs_f64() < limit_s
}

fn c1_primitives() -> Outcome {
    let t = Instant::now();
    let xs = grid(-1.0, 1.0, 9);
    let ws = grid(0.0, 1.0, 9);
    let mut mult_err: f64 = 0.0;
    for &a in &xs {
        for &b in &xs {
            let mut c = Circuit::new(2, 1);
            blocks::encode(&mut c, 0, a);
            blocks::encode(&mut c, 1, b);
            blocks::mult(&mut c, 0, 1, true);
            mult_err = mult_err.max((run_statevector(&c).unwrap().expect_z(1) - a * b).abs());
        }
    }
    let mut sum_err: f64 = 0.0;
    for &a in &xs {
        for &b in &xs {
            for &w in &ws {
                let mut c = Circuit::new(2, 0);
                blocks::encode(&mut c, 0, a);
                blocks::encode(&mut c, 1, b);
                blocks::sum(&mut c, 0, 1, angle_of_weight(w).unwrap(), true);
                let z = run_statevector(&c).unwrap().expect_z(0);
                sum_err = sum_err.max((z - (w * a + (1.0 - w) * b)).abs());
            }
        }
    }
    let el = t.elapsed();
    Outcome::new(
        mult_err < 1e-12 && sum_err < 1e-10 && within(el, 5.0),
        format!(
            "arithmetic primitives: mult 81 cases max err {mult_err:.1e} (< 1e-12), \
             sum 729 cases max err {sum_err:.1e} (< 1e-10), {:.2}s (< 5s)",
            el.as_secs_f64()
        ),
    )
}

fn c2_exactness() -> Outcome {
    let t = Instant::now();
    let xs = grid(-1.0, 1.0, 15);
    let mut r = rng(0xC2);
    let mut worst: f64 = 0.0;
    let mut first_fail: Option<(usize, Order)> = None;
    for d in 0..=8 {
        for _ in 0..20 {
            let p = random_poly(&mut r, d, 0.1);
            for order in [Order::Backward, Order::Forward] {
                let prog = CompiledProgram::compile(&p, order).unwrap();
                for &x in &xs {
                    let c = build_circuit(&prog, x).unwrap();
                    let z = run_statevector(&c).unwrap().expect_z(c.measured_qubit());
                    let e = (prog.rescale * z - power_sum(p.coeffs(), x)).abs();
                    worst = worst.max(e);
                    if e >= 1e-9 && first_fail.is_none() {
                        first_fail = Some((d, order));
                    }
                }
            }
        }
    }
    let el = t.elapsed();
    let mut o = Outcome::new(
        first_fail.is_none() && within(el, 30.0),
        format!(
            "noiseless exactness: d 0..8 x 20 polys x 15 points x 2 orders, max |C<Z> - P(x)| = {worst:.1e} (< 1e-9), {:.2}s (< 30s)",
            el.as_secs_f64()
        ),
    );
    if let Some((d, order)) = first_fail {
        o.detail.push(format!("first failing degree {d} ({order} order)"));
    }
    o
}

fn c3_equivalence() -> Outcome {
    let xs = grid(-1.0, 1.0, 15);
    let dense = DenseSimulator::default();
    let mut r = rng(0xC3);
    let mut worst: f64 = 0.0;
    let mut compared = 0;
    let mut skipped = 0;
    for d in 0..=10 {
        for _ in 0..10 {
            let p = random_poly(&mut r, d, 0.1);
            for order in [Order::Backward, Order::Forward] {
                let prog = CompiledProgram::compile(&p, order).unwrap();
                for &x in &xs {
                    let c = build_circuit(&prog, x).unwrap();
                    if liveness(&c).peak_window > DEFAULT_WINDOW_CAP {
                        skipped += 1;
                        continue;
                    }
                    let a = dense.expect_output(&c).unwrap();
                    let b = run_window(&c, DEFAULT_WINDOW_CAP).unwrap();
                    worst = worst.max((a - b).abs());
                    compared += 1;
                }
            }
        }
    }
    Outcome::new(
        worst < 1e-10,
        format!(
            "dense/stream equivalence: {compared} circuits, max |dZ| = {worst:.1e} (< 1e-10); \
             {skipped} backward circuits above the window cap of {DEFAULT_WINDOW_CAP} skipped"
        ),
    )
}

fn fmt_opt(v: Option<f64>, prec: usize) -> String {
    v.map_or_else(|| "n/a".to_string(), |v| format!("{v:.prec$}"))
}

fn c4_table1() -> (Outcome, Option<RunReport>) {
    let t = Instant::now();
    let rep = match table1_experiment(&ExperimentConfig::table1()) {
        Ok(r) => r,
        Err(e) => return (Outcome::new(false, format!("table1 preset: {e}")), None),
    };
    let el = t.elapsed();
    let mut pass = within(el, 120.0) && rep.failures.is_empty();
    let mut detail = vec![
        "deg   rmse  pred  ratio   corr   pass | ref rmse  corr  pass".to_string(),
    ];
    for s in &rep.per_degree {
        let ratio = s.rmse.zip(s.predicted_rmse).map(|(a, b)| a / b);
        let ok = ratio.is_some_and(|q| (0.5..=2.0).contains(&q))
            && s.pearson.is_some_and(|r| r >= 0.99)
            && s.pass_rate.is_some_and(|p| p >= 0.85);
        pass &= ok;
        let rf = s.reference.unwrap();
        detail.push(format!(
            "{:>3} {:>6} {:>5} {:>6} {:>6} {:>6} | {:>8.3} {:>5.3} {:>5.1}%{}",
            s.degree,
            fmt_opt(s.rmse, 4),
            fmt_opt(s.predicted_rmse, 4),
            fmt_opt(ratio, 3),
            fmt_opt(s.pearson, 4),
            s.pass_rate.map_or("n/a".into(), |p| format!("{:.1}%", 100.0 * p)),
            rf.rmse,
            rf.pearson,
            100.0 * rf.pass_rate,
            if ok { "" } else { "  <-- fails" }
        ));
    }
    (
        Outcome::new(
            pass,
            format!(
                "table1 preset: d 1..6, 15 points, 10 trials, 4096 shots: rmse/pred in [0.5, 2], \
                 corr >= 0.99, pass >= 85%, {:.2}s (< 120s)",
                el.as_secs_f64()
            ),
        )
        .with(detail),
        Some(rep),
    )
}

fn c5_shot_scaling() -> (Outcome, Option<String>) {
    let t = Instant::now();
    let rep = match shot_scaling_experiment(&ShotScalingConfig::default()) {
        Ok(r) => r,
        Err(e) => return (Outcome::new(false, format!("shot scaling: {e}")), None),
    };
    let el = t.elapsed();
    let detail = rep
        .rmse
        .iter()
        .map(|(n, r)| format!("N = {n:>6}: rmse {r:.5}"))
        .collect();
    (
        Outcome::new(
            (-0.55..=-0.45).contains(&rep.slope) && within(el, 120.0),
            format!(
                "shot scaling: degree 4, N = 2^8..2^16, 50 reps: slope {:.4} (in [-0.55, -0.45]), {:.2}s (< 120s)",
                rep.slope,
                el.as_secs_f64()
            ),
        )
        .with(detail),
        rep.to_json_string().ok(),
    )
}

fn c6_stress() -> (Outcome, Option<RunReport>) {
    let t = Instant::now();
    let rep = match stress_experiment(&ExperimentConfig::stress()) {
        Ok(r) => r,
        Err(e) => return (Outcome::new(false, format!("stress: {e}")), None),
    };
    let el = t.elapsed();
    let mut pass = within(el, 300.0) && rep.failures.is_empty();
    let mut detail = vec!["deg qubits  depth  2q    rmse    corr | ref rmse   corr".to_string()];
    for s in &rep.per_degree {
        let rf = s.reference.unwrap();
        let corr_ok = s.pearson.is_some_and(|r| r >= 0.999 && r >= rf.pearson);
        let rmse_ok = s.rmse.is_some_and(|r| r <= 0.017);
        let ok = s.qubits == s.degree + 1 && corr_ok && rmse_ok;
        pass &= ok;
        detail.push(format!(
            "{:>3} {:>6} {:>6} {:>3} {:>7} {:>7} | {:>8.3} {:>6.4}{}",
            s.degree,
            s.qubits,
            s.depth,
            s.two_qubit_gates,
            fmt_opt(s.rmse, 4),
            fmt_opt(s.pearson, 4),
            rf.rmse,
            rf.pearson,
            if ok { "" } else { "  <-- fails" }
        ));
    }
    (
        Outcome::new(
            pass,
            format!(
                "stress: d in {{1,5,..,35}}, forward, stream, 5 points, 1024 shots: qubits = d+1, \
                 corr >= 0.999, rmse <= 0.017, {:.2}s (< 300s)",
                el.as_secs_f64()
            ),
        )
        .with(detail),
        Some(rep),
    )
}

fn affine_fit(pts: &[(f64, f64)]) -> (f64, f64, f64) {
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let slope = sxy / sxx;
    let icpt = my - slope * mx;
    let ss_res: f64 = pts.iter().map(|p| (p.1 - slope * p.0 - icpt).powi(2)).sum();
    let ss_tot: f64 = pts.iter().map(|p| (p.1 - my).powi(2)).sum();
    (slope, icpt, 1.0 - ss_res / ss_tot)
}

fn c7_resources() -> Outcome {
    let mut pass = true;
    let mut detail = Vec::new();
    for order in [Order::Backward, Order::Forward] {
        let mut depth = Vec::new();
        let mut twoq = Vec::new();
        for d in 1..=20usize {
            let p = gen_random_poly(d, 700 + d as u64, 0.5, 0.5).unwrap();
            let c = build_circuit(&CompiledProgram::compile(&p, order).unwrap(), 0.3).unwrap();
            let r = resources(&c);
            pass &= r.qubits == d + 1;
            depth.push((d as f64, r.depth as f64));
            twoq.push((d as f64, r.two_qubit_gates as f64));
        }
        let (ds, di, dr2) = affine_fit(&depth);
        let (ts, ti, tr2) = affine_fit(&twoq);
        pass &= dr2 > 0.999 && tr2 > 0.999;
        detail.push(format!(
            "{order:>8}: depth = {ds:.3}d {di:+.3} (R2 {dr2:.6}) vs reference 3d+1; \
             two-qubit = {ts:.3}d {ti:+.3} (R2 {tr2:.6}) vs reference 4d-1"
        ));
        if (ds - 3.0).abs() > 1e-9 || (di - 1.0).abs() > 1e-9 {
            detail.push(format!("{order:>8}: depth constants differ from 3d+1 (flagged)"));
        }
        if (ts - 4.0).abs() > 1e-9 || (ti + 1.0).abs() > 1e-9 {
            detail.push(format!("{order:>8}: two-qubit constants differ from 4d-1 (flagged)"));
        }
    }
    Outcome::new(
        pass,
        "resources: d 1..20, qubits = d+1, depth and two-qubit count affine with R2 > 0.999",
    )
    .with(detail)
}

fn c8_noise() -> Outcome {
    let t = Instant::now();
    let rep = match noise_sweep(&ExperimentConfig::noise_sweep()) {
        Ok(r) => r,
        Err(e) => return Outcome::new(false, format!("noise sweep: {e}")),
    };
    let el = t.elapsed();
    let rs: Vec<(usize, f64, f64)> = rep
        .per_degree
        .iter()
        .map(|s| {
            let r = s.pearson.unwrap_or(0.0);
            let se = (1.0 - r * r) / ((s.records as f64) - 3.0).sqrt();
            (s.degree, r, se)
        })
        .collect();
    let mut inversions = Vec::new();
    for w in rs.windows(2) {
        let (d0, r0, s0) = w[0];
        let (d1, r1, s1) = w[1];
        if r1 - r0 > 2.0 * (s0 * s0 + s1 * s1).sqrt() {
            inversions.push((d0, d1));
        }
    }
    let first = rs.first().unwrap().1;
    let last = rs.last().unwrap().1;
    let pass = inversions.len() <= 1 && last < 0.99 && last < first;
    let mut detail: Vec<String> = rs
        .chunks(5)
        .map(|ch| {
            ch.iter()
                .map(|(d, r, se)| format!("d{d:>2} {r:.4}+-{se:.4}"))
                .collect::<Vec<_>>()
                .join("  ")
        })
        .collect();
    detail.push(format!("significant increases (> 2 combined SE): {inversions:?}"));
    Outcome::new(
        pass,
        format!(
            "noise trend: p2 = 0.005, d 1..20: corr non-increasing (<= 1 significant inversion), \
             final {last:.4} < 0.99 and < initial {first:.4}, {:.2}s",
            el.as_secs_f64()
        ),
    )
    .with(detail)
}

fn c9_determinism(
    table1: Option<&RunReport>,
    shots: Option<&str>,
    stress: Option<&RunReport>,
) -> Outcome {
    let (Some(table1), Some(shots), Some(stress)) = (table1, shots, stress) else {
        return Outcome::new(false, "determinism: an earlier run failed to produce a report");
    };
    // Rerun on a different thread count so task scheduling differs.
    let pool = rayon::ThreadPoolBuilder::new().num_threads(3).build().unwrap();
    let (a, b, c) = pool.install(|| {
        (
            table1_experiment(&ExperimentConfig::table1()).unwrap(),
            shot_scaling_experiment(&ShotScalingConfig::default()).unwrap(),
            stress_experiment(&ExperimentConfig::stress()).unwrap(),
        )
    });
    let same_t = a.to_json_string().unwrap() == table1.to_json_string().unwrap();
    let same_s = b.to_json_string().unwrap() == shots;
    let same_x = c.to_json_string().unwrap() == stress.to_json_string().unwrap();
    Outcome::new(
        same_t && same_s && same_x,
        format!(
            "determinism: rerun report JSON byte-identical: table1 {same_t}, shot scaling {same_s}, stress {same_x}"
        ),
    )
}

fn c10_qasm() -> Outcome {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures");
    let mut pass = true;
    let mut detail = Vec::new();
    for (name, coeffs, order, x) in golden_cases() {
        let prog = CompiledProgram::compile(&Polynomial::new(coeffs).unwrap(), order).unwrap();
        let text = to_qasm(&build_circuit(&prog, x).unwrap()).unwrap();
        let same = std::fs::read_to_string(dir.join(name)).is_ok_and(|f| f == text);
        let valid = check_qasm(&text).is_ok();
        pass &= same && valid;
        detail.push(format!("{name}: identical {same}, grammar {valid}"));
    }
    Outcome::new(pass, "qasm goldens: 3 pinned programs byte-identical and grammar-valid").with(detail)
}

fn main() {
    let started = Instant::now();
    let mut results = Vec::new();
    results.push(c1_primitives());
    results.push(c2_exactness());
    results.push(c3_equivalence());
    let (o4, t1) = c4_table1();
    results.push(o4);
    let (o5, shots) = c5_shot_scaling();
    results.push(o5);
    let (o6, st) = c6_stress();
    results.push(o6);
    results.push(c7_resources());
    results.push(c8_noise());
    results.push(c9_determinism(t1.as_ref(), shots.as_deref(), st.as_ref()));
    results.push(c10_qasm());

    println!();
    let mut failed = 0;
    for (i, o) in results.iter().enumerate() {
        println!(
            "criterion {:>2}: {} {}",
            i + 1,
            if o.pass { "PASS" } else { "FAIL" },
            o.summary
        );
        for line in &o.detail {
            println!("    {line}");
        }
        failed += usize::from(!o.pass);
    }
    println!(
        "\nacceptance: {} passed, {} failed ({:.1}s)",
        results.len() - failed,
        failed,
        started.elapsed().as_secs_f64()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
