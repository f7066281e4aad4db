//! Experiment harness: random polynomial families evaluated through the
//! compiled circuits, with per-degree metrics and plot-ready records.

use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::circuit::Circuit;
use crate::compiler::{build_circuit, resources, CompiledProgram, Order, ResourceCounts};
use crate::error::{Error, Result};
use crate::estimator::{exact_estimate, point_estimate, predicted_stderr, run_metrics, shot_scaling_fit, Estimate, PASS_THRESHOLD};
use crate::polynomial::{linspace, Polynomial};
use crate::rng::{derive_seed, rng_from_seed, uniform};
use crate::sim::dense::DenseSimulator;
use crate::sim::noise::{sample_from_expectation, NoiseModel};
use crate::sim::stream::{self, DEFAULT_WINDOW_CAP};

pub const DEFAULT_SEED: u64 = 20_240_611;

/// Tag mixed into polynomial seeds so they never collide with shot seeds.
const POLY_STREAM: u64 = u64::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum SimulatorKind {
    #[default]
    Dense,
    Stream,
}

impl std::str::FromStr for SimulatorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dense" => Ok(Self::Dense),
            "stream" => Ok(Self::Stream),
            other => Err(Error::Config(format!(
                "unknown simulator `{other}` (expected dense or stream)"
            ))),
        }
    }
}

/// Coefficient family drawn per (degree, trial).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Family {
    /// `a_k ~ U(-coeff_bound, coeff_bound)`, then rescaled to the sup target.
    #[default]
    Uniform,
    /// `a_k = ratio^k`, then rescaled to the sup target. Deterministic.
    Geometric { ratio: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub degrees: Vec<usize>,
    pub points_per_trial: usize,
    pub x_domain: (f64, f64),
    pub trials: usize,
    /// `None` evaluates exact expectations (the infinite-shot limit).
    pub shots: Option<u64>,
    pub master_seed: u64,
    pub coeff_bound: f64,
    pub sup_rescale_target: f64,
    pub family: Family,
    pub simulator: SimulatorKind,
    pub window_cap: usize,
    pub noise: Option<NoiseModel>,
    pub order: Order,
    pub threshold: f64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self::table1()
    }
}

impl ExperimentConfig {
    pub fn table1() -> Self {
        Self {
            degrees: (1..=6).collect(),
            points_per_trial: 15,
            x_domain: (-0.9, 0.9),
            trials: 10,
            shots: Some(4096),
            master_seed: DEFAULT_SEED,
            coeff_bound: 0.5,
            sup_rescale_target: 0.5,
            family: Family::Uniform,
            simulator: SimulatorKind::Dense,
            window_cap: DEFAULT_WINDOW_CAP,
            noise: None,
            order: Order::Backward,
            threshold: PASS_THRESHOLD,
        }
    }

    pub fn stress() -> Self {
        Self {
            degrees: vec![1, 5, 10, 15, 25, 30, 35],
            points_per_trial: 5,
            shots: Some(1024),
            sup_rescale_target: 1.0,
            simulator: SimulatorKind::Stream,
            order: Order::Forward,
            ..Self::table1()
        }
    }

    pub fn noise_sweep() -> Self {
        Self {
            degrees: (1..=20).collect(),
            shots: Some(1024),
            family: Family::Geometric { ratio: 0.5 },
            simulator: SimulatorKind::Stream,
            noise: Some(NoiseModel { p1: 0.0, p2: 0.005 }),
            order: Order::Forward,
            ..Self::table1()
        }
    }

    pub fn preset(name: &str) -> Result<Self> {
        match name {
            "table1" => Ok(Self::table1()),
            "stress" => Ok(Self::stress()),
            "noise" => Ok(Self::noise_sweep()),
            other => Err(Error::Config(format!("unknown preset `{other}`"))),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        let (lo, hi) = self.x_domain;
        if !(-1.0 <= lo && lo <= hi && hi <= 1.0) {
            return bad(format!("x_domain ({lo}, {hi}) must be an interval inside [-1, 1]"));
        }
        if self.degrees.is_empty() {
            return bad("degrees must not be empty".into());
        }
        if self.trials == 0 {
            return bad("trials must be at least 1".into());
        }
        if self.points_per_trial == 0 {
            return bad("points_per_trial must be at least 1".into());
        }
        if self.shots == Some(0) {
            return bad("shots must be at least 1".into());
        }
        if !(self.coeff_bound > 0.0 && self.coeff_bound.is_finite()) {
            return bad(format!("coeff_bound {} must be positive", self.coeff_bound));
        }
        if !(self.sup_rescale_target > 0.0 && self.sup_rescale_target.is_finite()) {
            return bad(format!(
                "sup_rescale_target {} must be positive",
                self.sup_rescale_target
            ));
        }
        if !(self.threshold > 0.0) {
            return bad(format!("threshold {} must be positive", self.threshold));
        }
        if let Family::Geometric { ratio } = self.family {
            if !(ratio.is_finite() && ratio != 0.0) {
                return bad(format!("geometric ratio {ratio} must be finite and nonzero"));
            }
        }
        if let Some(noise) = &self.noise {
            noise.validate()?;
        }
        if self.simulator == SimulatorKind::Stream
            && !(1..=stream::MAX_WINDOW_CAP).contains(&self.window_cap)
        {
            return bad(format!("window_cap {} outside 1..=12", self.window_cap));
        }
        Ok(())
    }

    fn points(&self) -> Vec<f64> {
        if self.points_per_trial == 1 {
            return vec![0.5 * (self.x_domain.0 + self.x_domain.1)];
        }
        linspace(self.x_domain.0, self.x_domain.1, self.points_per_trial)
    }
}

/// Uniform coefficients in `[-coeff_bound, coeff_bound]`, rescaled so that
/// `max |P| = sup_rescale_target` on `[-1, 1]`.
pub fn gen_random_poly(
    degree: usize,
    seed: u64,
    coeff_bound: f64,
    sup_rescale_target: f64,
) -> Result<Polynomial> {
    let mut seed = seed;
    loop {
        let mut rng = rng_from_seed(seed);
        let coeffs: Vec<f64> = (0..=degree)
            .map(|_| uniform(&mut rng, -coeff_bound, coeff_bound))
            .collect();
        let poly = Polynomial::new(coeffs)?;
        if !poly.is_zero() {
            return rescale_to_sup(&poly, sup_rescale_target);
        }
        seed = seed.wrapping_add(1);
    }
}

fn rescale_to_sup(poly: &Polynomial, target: f64) -> Result<Polynomial> {
    let sup = poly.sup_norm();
    Polynomial::new(poly.coeffs().iter().map(|a| a / sup * target).collect())
}

fn family_poly(config: &ExperimentConfig, degree: usize, trial: usize) -> Result<Polynomial> {
    match config.family {
        Family::Uniform => gen_random_poly(
            degree,
            derive_seed(config.master_seed, &[degree as u64, trial as u64, POLY_STREAM]),
            config.coeff_bound,
            config.sup_rescale_target,
        ),
        Family::Geometric { ratio } => {
            let p = Polynomial::new((0..=degree).map(|k| ratio.powi(k as i32)).collect())?;
            rescale_to_sup(&p, config.sup_rescale_target)
        }
    }
}

/// One evaluated point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub degree: usize,
    pub trial: usize,
    pub point_index: usize,
    pub x: f64,
    pub truth: f64,
    pub estimate: f64,
    pub stderr: f64,
    /// Exact `<Z_out>` behind the estimate; `rescale` is `C`.
    #[serde(skip)]
    pub exact_z: f64,
    #[serde(skip)]
    pub rescale: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Failure {
    pub degree: usize,
    pub trial: usize,
    pub point_index: usize,
    pub message: String,
}

/// Published numbers for the same degree, printed next to ours.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Reference {
    pub rmse: f64,
    pub pearson: f64,
    pub pass_rate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DegreeSummary {
    pub degree: usize,
    pub records: usize,
    pub rmse: Option<f64>,
    /// RMSE of `(estimate - truth) / C`.
    pub rmse_normalized: Option<f64>,
    /// Root-mean-square of the analytic shot-noise standard deviations.
    pub predicted_rmse: Option<f64>,
    pub pearson: Option<f64>,
    pub pass_rate: Option<f64>,
    pub qubits: usize,
    pub two_qubit_gates: usize,
    pub depth: usize,
    pub reference: Option<Reference>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub experiment: String,
    pub config: ExperimentConfig,
    pub per_degree: Vec<DegreeSummary>,
    pub records: Vec<Record>,
    pub failures: Vec<Failure>,
    /// Kept out of the report JSON so reruns compare byte for byte.
    #[serde(skip)]
    pub timings_ms: Timings,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Timings {
    pub total: f64,
    pub per_degree: Vec<(usize, f64)>,
}

impl RunReport {
    pub fn to_json_string(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    /// Degrees where every point failed.
    pub fn failed_degrees(&self) -> Vec<usize> {
        self.per_degree
            .iter()
            .filter(|d| d.records == 0)
            .map(|d| d.degree)
            .collect()
    }

    pub fn summary(&self, degree: usize) -> Option<&DegreeSummary> {
        self.per_degree.iter().find(|d| d.degree == degree)
    }

    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut w = csv::Writer::from_path(path)?;
        w.write_record(["degree", "trial", "point_index", "x", "truth", "estimate", "stderr"])?;
        for r in &self.records {
            w.write_record([
                r.degree.to_string(),
                r.trial.to_string(),
                r.point_index.to_string(),
                r.x.to_string(),
                r.truth.to_string(),
                r.estimate.to_string(),
                r.stderr.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    /// `report.json`, `records.csv` and `timings.json` under `dir`.
    pub fn write_dir(&self, dir: impl AsRef<Path>) -> Result<()> {
        let dir = dir.as_ref();
        std::fs::create_dir_all(dir)?;
        std::fs::write(dir.join("report.json"), self.to_json_string()?)?;
        self.write_csv(dir.join("records.csv"))?;
        let mut t = serde_json::to_string_pretty(&self.timings_ms)?;
        t.push('\n');
        std::fs::write(dir.join("timings.json"), t)?;
        Ok(())
    }
}

/// Simulate one circuit: the exact output `<Z>` and the estimate.
fn evaluate(
    config: &ExperimentConfig,
    circuit: &Circuit,
    rescale: f64,
    seed: u64,
) -> Result<(f64, Estimate)> {
    let exact = match config.simulator {
        SimulatorKind::Dense => DenseSimulator::default().expect_output(circuit)?,
        SimulatorKind::Stream => stream::run_window(circuit, config.window_cap)?,
    };
    let Some(shots) = config.shots else {
        return Ok((exact, exact_estimate(exact, rescale)));
    };
    let noise = config.noise.as_ref().filter(|n| !n.is_noiseless());
    let outcome = match (config.simulator, noise) {
        (_, None) => sample_from_expectation(exact, shots, seed)?,
        (SimulatorKind::Dense, Some(n)) => {
            DenseSimulator::default().sample_output(circuit, shots, seed, Some(n))?
        }
        (SimulatorKind::Stream, Some(n)) => {
            stream::sample_output_stream(circuit, config.window_cap, shots, seed, Some(n))?
        }
    };
    Ok((exact, point_estimate(&outcome, rescale)?))
}

fn context(degree: usize, trial: usize, point: usize, e: Error) -> Error {
    Error::Experiment {
        degree,
        trial,
        point,
        source: Box::new(e),
    }
}

/// Run every (degree, trial, point) task. Tasks run in parallel and are
/// gathered in (degree, trial, point) order; each draws from its own seed.
pub fn run_experiment(name: &str, config: &ExperimentConfig) -> Result<RunReport> {
    config.validate()?;
    let start = Instant::now();
    let points = config.points();

    let programs: Vec<(usize, usize, Result<CompiledProgram>)> = config
        .degrees
        .iter()
        .flat_map(|&d| (0..config.trials).map(move |t| (d, t)))
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|(d, t)| {
            let prog = family_poly(config, d, t)
                .and_then(|p| CompiledProgram::compile(&p, config.order));
            (d, t, prog)
        })
        .collect();

    let tasks: Vec<(usize, usize)> = (0..programs.len())
        .flat_map(|i| (0..points.len()).map(move |p| (i, p)))
        .collect();
    let outcomes: Vec<(std::result::Result<Record, Failure>, f64)> = tasks
        .into_par_iter()
        .map(|(i, p)| {
            let t0 = Instant::now();
            let (degree, trial, prog) = &programs[i];
            let (degree, trial) = (*degree, *trial);
            let x = points[p];
            let result = prog
                .as_ref()
                .map_err(|e| Error::Config(e.to_string()))
                .and_then(|prog| {
                    let circuit = build_circuit(prog, x)?;
                    let seed = derive_seed(config.master_seed, &[degree as u64, trial as u64, p as u64]);
                    let (exact_z, est) = evaluate(config, &circuit, prog.rescale, seed)?;
                    let truth = prog.source.as_ref().expect("compiled from coefficients").eval(x);
                    Ok(Record {
                        degree,
                        trial,
                        point_index: p,
                        x,
                        truth,
                        estimate: est.value,
                        stderr: est.stderr,
                        exact_z,
                        rescale: prog.rescale,
                    })
                })
                .map_err(|e| Failure {
                    degree,
                    trial,
                    point_index: p,
                    message: context(degree, trial, p, e).to_string(),
                });
            (result, t0.elapsed().as_secs_f64() * 1e3)
        })
        .collect();

    let mut records = Vec::new();
    let mut failures = Vec::new();
    let mut per_degree_ms: Vec<(usize, f64)> = config.degrees.iter().map(|&d| (d, 0.0)).collect();
    for (i, (res, ms)) in outcomes.into_iter().enumerate() {
        let d = programs[i / points.len()].0;
        if let Some(slot) = per_degree_ms.iter_mut().find(|s| s.0 == d) {
            slot.1 += ms;
        }
        match res {
            Ok(r) => records.push(r),
            Err(f) => failures.push(f),
        }
    }

    let mut per_degree = Vec::new();
    for &d in &config.degrees {
        per_degree.push(summarize(name, config, d, &records, &programs, &points)?);
    }

    Ok(RunReport {
        experiment: name.to_string(),
        config: config.clone(),
        per_degree,
        records,
        failures,
        timings_ms: Timings {
            total: start.elapsed().as_secs_f64() * 1e3,
            per_degree: per_degree_ms,
        },
    })
}

fn summarize(
    name: &str,
    config: &ExperimentConfig,
    degree: usize,
    records: &[Record],
    programs: &[(usize, usize, Result<CompiledProgram>)],
    points: &[f64],
) -> Result<DegreeSummary> {
    let recs: Vec<&Record> = records.iter().filter(|r| r.degree == degree).collect();
    let res = programs
        .iter()
        .find_map(|(d, _, p)| match p {
            Ok(p) if *d == degree => Some(p),
            _ => None,
        })
        .map(|p| build_circuit(p, points[0]).map(|c| resources(&c)))
        .transpose()?
        .unwrap_or(ResourceCounts {
            qubits: degree + 1,
            two_qubit_gates: 0,
            single_qubit_gates: 0,
            depth: 0,
        });
    let reference = match name {
        "table1" => table1_reference(degree),
        "stress" => stress_reference(degree),
        _ => None,
    };
    let mut summary = DegreeSummary {
        degree,
        records: recs.len(),
        rmse: None,
        rmse_normalized: None,
        predicted_rmse: None,
        pearson: None,
        pass_rate: None,
        qubits: res.qubits,
        two_qubit_gates: res.two_qubit_gates,
        depth: res.depth,
        reference,
    };
    if recs.is_empty() {
        return Ok(summary);
    }
    let pairs: Vec<(f64, f64)> = recs.iter().map(|r| (r.truth, r.estimate)).collect();
    let m = run_metrics(&pairs, config.threshold)?;
    let n = recs.len() as f64;
    let norm_sq: f64 = recs
        .iter()
        .map(|r| ((r.estimate - r.truth) / r.rescale).powi(2))
        .sum();
    summary.rmse = Some(m.rmse);
    summary.rmse_normalized = Some((norm_sq / n).sqrt());
    summary.pearson = m.pearson;
    summary.pass_rate = Some(m.pass_rate);
    summary.predicted_rmse = config.shots.map(|shots| {
        let var: f64 = recs
            .iter()
            .map(|r| predicted_stderr(r.exact_z, r.rescale, shots).powi(2))
            .sum();
        (var / n).sqrt()
    });
    Ok(summary)
}

fn table1_reference(degree: usize) -> Option<Reference> {
    const ROWS: [(f64, f64, f64); 6] = [
        (0.016, 0.999, 0.956),
        (0.018, 0.997, 0.911),
        (0.016, 0.998, 0.956),
        (0.013, 0.997, 0.978),
        (0.014, 0.998, 0.978),
        (0.015, 0.996, 0.956),
    ];
    let (rmse, pearson, pass_rate) = *ROWS.get(degree.checked_sub(1)?)?;
    Some(Reference {
        rmse,
        pearson,
        pass_rate,
    })
}

fn stress_reference(degree: usize) -> Option<Reference> {
    let (rmse, pearson, pass_rate) = match degree {
        1 => (0.008, 0.9999, 0.99),
        5 => (0.009, 0.9997, 0.98),
        10 => (0.004, 0.9997, 0.99),
        15 => (0.007, 0.9994, 0.99),
        25 => (0.007, 0.9998, 0.98),
        30 => (0.006, 0.9999, 0.99),
        35 => (0.008, 0.9948, 0.98),
        _ => return None,
    };
    Some(Reference {
        rmse,
        pearson,
        pass_rate,
    })
}

pub fn table1_experiment(config: &ExperimentConfig) -> Result<RunReport> {
    run_experiment("table1", config)
}

pub fn stress_experiment(config: &ExperimentConfig) -> Result<RunReport> {
    if config.simulator != SimulatorKind::Stream || config.order != Order::Forward {
        return Err(Error::Config(
            "the stress experiment needs the stream simulator and forward order".into(),
        ));
    }
    run_experiment("stress", config)
}

pub fn noise_sweep(config: &ExperimentConfig) -> Result<RunReport> {
    if config.noise.is_none() {
        return Err(Error::Config("the noise sweep needs a noise model".into()));
    }
    run_experiment("noise", config)
}

/// Shot-count sweep on one pinned program.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ShotScalingConfig {
    pub degree: usize,
    pub shot_counts: Vec<u64>,
    pub repetitions: usize,
    pub points: usize,
    pub x_domain: (f64, f64),
    pub master_seed: u64,
    pub coeff_bound: f64,
    pub sup_rescale_target: f64,
}

impl Default for ShotScalingConfig {
    fn default() -> Self {
        Self {
            degree: 4,
            shot_counts: vec![1 << 8, 1 << 10, 1 << 12, 1 << 14, 1 << 16],
            repetitions: 50,
            points: 15,
            x_domain: (-0.9, 0.9),
            master_seed: DEFAULT_SEED,
            coeff_bound: 0.5,
            sup_rescale_target: 0.5,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShotScalingReport {
    pub config: ShotScalingConfig,
    pub coeffs: Vec<f64>,
    /// `(N, rmse over repetitions and points)`.
    pub rmse: Vec<(u64, f64)>,
    pub slope: f64,
}

impl ShotScalingReport {
    pub fn to_json_string(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }
}

pub fn shot_scaling_experiment(config: &ShotScalingConfig) -> Result<ShotScalingReport> {
    if config.repetitions == 0 || config.points == 0 {
        return Err(Error::Config("repetitions and points must be at least 1".into()));
    }
    let poly = gen_random_poly(
        config.degree,
        derive_seed(config.master_seed, &[config.degree as u64, POLY_STREAM]),
        config.coeff_bound,
        config.sup_rescale_target,
    )?;
    let prog = CompiledProgram::compile(&poly, Order::Backward)?;
    let xs = linspace(config.x_domain.0, config.x_domain.1, config.points.max(2));
    let sim = DenseSimulator::default();
    let exact: Vec<f64> = xs
        .iter()
        .map(|&x| sim.expect_output(&build_circuit(&prog, x)?))
        .collect::<Result<_>>()?;

    let rmse = config
        .shot_counts
        .par_iter()
        .map(|&n| {
            let mut sq = 0.0;
            for rep in 0..config.repetitions {
                for (p, (&x, &z)) in xs.iter().zip(&exact).enumerate() {
                    let seed = derive_seed(config.master_seed, &[n, rep as u64, p as u64]);
                    let out = sample_from_expectation(z, n, seed)?;
                    let est = point_estimate(&out, prog.rescale)?;
                    sq += (est.value - poly.eval(x)).powi(2);
                }
            }
            Ok((n, (sq / (config.repetitions * xs.len()) as f64).sqrt()))
        })
        .collect::<Result<Vec<_>>>()?;
    let slope = shot_scaling_fit(&rmse)?;
    Ok(ShotScalingReport {
        config: config.clone(),
        coeffs: poly.coeffs().to_vec(),
        rmse,
        slope,
    })
}

/// Classical evaluation encoded on a single qubit: `y = P(x) / max|P|`.
/// `shots = None` returns the exact value.
pub fn direct_baseline_eval(poly: &Polynomial, x: f64, shots: Option<u64>, seed: u64) -> Result<Estimate> {
    if poly.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let c_direct = poly.sup_norm();
    let y = poly.eval(x) / c_direct;
    if !(y.abs() <= 1.0 + 1e-12) {
        return Err(Error::EncodingDomain(y));
    }
    let mut c = Circuit::new(1, 0);
    c.ry(0, y.clamp(-1.0, 1.0).acos());
    let z = DenseSimulator::default().expect_output(&c)?;
    match shots {
        None => Ok(exact_estimate(z, c_direct)),
        Some(n) => point_estimate(&sample_from_expectation(z, n, seed)?, c_direct),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_poly_hits_sup_target() {
        for d in [1, 3, 6] {
            let p = gen_random_poly(d, 11, 0.5, 0.5).unwrap();
            assert_eq!(p.degree(), d);
            assert!((p.sup_norm() - 0.5).abs() < 1e-9);
        }
        let p = gen_random_poly(0, 4, 0.5, 0.5).unwrap();
        assert_eq!(p.coeffs()[0].abs(), 0.5);
    }

    #[test]
    fn config_validation() {
        assert!(ExperimentConfig::table1().validate().is_ok());
        let mut c = ExperimentConfig::table1();
        c.x_domain = (-1.2, 0.5);
        assert!(c.validate().is_err());
        let mut c = ExperimentConfig::table1();
        c.trials = 0;
        assert!(c.validate().is_err());
        assert!(ExperimentConfig::preset("nope").is_err());
    }

    #[test]
    fn config_json_fills_defaults_and_rejects_unknown_keys() {
        let c: ExperimentConfig = serde_json::from_str(r#"{"trials": 2}"#).unwrap();
        assert_eq!(c.trials, 2);
        assert_eq!(c.points_per_trial, 15);
        assert!(serde_json::from_str::<ExperimentConfig>(r#"{"trails": 2}"#).is_err());
    }

    #[test]
    fn exact_surrogate_recovers_truth() {
        let cfg = ExperimentConfig {
            degrees: vec![0, 2, 5],
            trials: 2,
            shots: None,
            ..ExperimentConfig::table1()
        };
        let rep = table1_experiment(&cfg).unwrap();
        assert_eq!(rep.records.len(), 3 * 2 * 15);
        for r in &rep.records {
            assert!((r.estimate - r.truth).abs() < 1e-9);
        }
    }

    #[test]
    fn direct_baseline_examples() {
        let p = Polynomial::new(vec![0.0, 1.0]).unwrap();
        let e = direct_baseline_eval(&p, 0.7, None, 0).unwrap();
        assert!((e.value - 0.7).abs() < 1e-12);
        let e = direct_baseline_eval(&p, 1.0, Some(256), 3).unwrap();
        assert_eq!(e.value, 1.0);
        assert!(direct_baseline_eval(&Polynomial::new(vec![0.0]).unwrap(), 0.1, None, 0).is_err());
    }
}
