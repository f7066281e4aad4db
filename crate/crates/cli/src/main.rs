mod targets;

use std::fmt;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qpoly::bench::{self, ExperimentConfig, RunReport, ShotScalingConfig, SimulatorKind, DEFAULT_SEED};
use qpoly::compiler::resources;
use qpoly::estimator::point_estimate;
use qpoly::polynomial::{fit, read_samples_csv, FitConfig, FitMethod};
use qpoly::qasm::to_qasm;
use qpoly::sim::dense::DenseSimulator;
use qpoly::sim::stream::{liveness, sample_output_stream};
use qpoly::sim::NoiseModel;
use qpoly::{build_circuit, CompiledProgram, Order, Polynomial};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

/// Environment variable that replaces the built-in default seed.
pub const SEED_ENV: &str = "QPOLY_SEED";

#[derive(Debug)]
pub struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        Self {
            code: 2,
            message: message.into(),
        }
    }

    pub fn runtime(message: impl Into<String>) -> Self {
        Self {
            code: 1,
            message: message.into(),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<qpoly::Error> for CliError {
    fn from(e: qpoly::Error) -> Self {
        match e {
            qpoly::Error::Config(_) | qpoly::Error::EncodingDomain(_) => Self::usage(e.to_string()),
            _ => Self::runtime(e.to_string()),
        }
    }
}

type CliResult<T> = Result<T, CliError>;

#[derive(Parser)]
#[command(
    name = "qpoly",
    version,
    about = "Fit, compile and evaluate polynomials as expectation-value quantum arithmetic circuits",
    after_help = "Every subcommand accepts --config FILE: a JSON object whose keys are the \
                  subcommand's long flag names in snake_case. Explicit flags win over the file.\n\
                  Set QPOLY_SEED to replace the default seed (20240611)."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fit polynomial coefficients to samples or a builtin target.
    Fit(FitArgs),
    /// Compile coefficients into aggregation weights and rotation angles.
    Compile(CompileArgs),
    /// Evaluate a compiled program at one input by simulated shots.
    Evaluate(EvaluateArgs),
    /// Run a benchmark experiment and write report.json and records.csv.
    Bench(BenchArgs),
    /// Write the OpenQASM 3 circuit of a compiled program at one input.
    ExportQasm(QasmArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
enum MethodArg {
    LeastSquares,
    GradientDescent,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum OrderArg {
    Backward,
    Forward,
}

impl From<OrderArg> for Order {
    fn from(o: OrderArg) -> Self {
        match o {
            OrderArg::Backward => Order::Backward,
            OrderArg::Forward => Order::Forward,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum SimArg {
    Dense,
    Stream,
}

impl From<SimArg> for SimulatorKind {
    fn from(s: SimArg) -> Self {
        match s {
            SimArg::Dense => SimulatorKind::Dense,
            SimArg::Stream => SimulatorKind::Stream,
        }
    }
}

#[derive(Args, Serialize, Deserialize, Default)]
#[serde(default, deny_unknown_fields)]
struct FitArgs {
    /// CSV file with an `x,y` header (exclusive with --target).
    #[arg(long)]
    samples: Option<PathBuf>,
    /// Builtin target: poly:<c0,c1,...>, sin (sin(pi x)), exp, tanh (tanh(2x)), runge, abs.
    #[arg(long)]
    target: Option<String>,
    /// Polynomial degree (required).
    #[arg(long)]
    degree: Option<usize>,
    /// Fitting method [default: least_squares].
    #[arg(long, value_enum)]
    method: Option<MethodArg>,
    /// Output coefficient JSON file (required).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Evenly spaced samples of a builtin target on [-1, 1] [default: 101].
    #[arg(long)]
    sample_count: Option<usize>,
    /// Gradient-descent epochs [default: 20000].
    #[arg(long)]
    epochs: Option<usize>,
    /// Gradient-descent step size [default: 0.05].
    #[arg(long)]
    step_size: Option<f64>,
    /// JSON file supplying any of the flags above.
    #[arg(long)]
    #[serde(skip)]
    config: Option<PathBuf>,
}

#[derive(Args, Serialize, Deserialize, Default)]
#[serde(default, deny_unknown_fields)]
struct CompileArgs {
    /// Coefficient JSON file `{"coeffs": [...]}` (required).
    #[arg(long)]
    coeffs: Option<PathBuf>,
    /// Aggregation order [default: backward].
    #[arg(long, value_enum)]
    order: Option<OrderArg>,
    /// Output compiled-program JSON file (required).
    #[arg(long)]
    out: Option<PathBuf>,
    /// JSON file supplying any of the flags above.
    #[arg(long)]
    #[serde(skip)]
    config: Option<PathBuf>,
}

#[derive(Args, Serialize, Deserialize, Default)]
#[serde(default, deny_unknown_fields)]
struct EvaluateArgs {
    /// Compiled-program JSON file (required).
    #[arg(long)]
    program: Option<PathBuf>,
    /// Input in [-1, 1] (required).
    #[arg(long, allow_hyphen_values = true)]
    x: Option<f64>,
    /// Shot count [default: 4096].
    #[arg(long)]
    shots: Option<u64>,
    /// Sampling seed [default: $QPOLY_SEED, else 20240611].
    #[arg(long)]
    seed: Option<u64>,
    /// Simulator [default: dense].
    #[arg(long, value_enum)]
    sim: Option<SimArg>,
    /// Two-qubit Pauli error probability [default: 0].
    #[arg(long)]
    noise_p2: Option<f64>,
    /// One-qubit Pauli error probability [default: 0].
    #[arg(long)]
    noise_p1: Option<f64>,
    /// Live-qubit cap of the stream simulator [default: 8].
    #[arg(long)]
    window_cap: Option<usize>,
    /// JSON file supplying any of the flags above.
    #[arg(long)]
    #[serde(skip)]
    config: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Experiment {
    Table1,
    Stress,
    Shots,
    Noise,
}

#[derive(Args)]
struct BenchArgs {
    /// Experiment preset.
    #[arg(value_enum)]
    experiment: Experiment,
    /// JSON file overriding preset fields (experiment config keys).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory (required).
    #[arg(long)]
    out_dir: Option<PathBuf>,
    /// Master seed [default: config file, $QPOLY_SEED, else 20240611].
    #[arg(long)]
    seed: Option<u64>,
    /// Comma-separated degrees [default: preset].
    #[arg(long, value_delimiter = ',')]
    degrees: Option<Vec<usize>>,
    /// Trials per degree [default: preset].
    #[arg(long)]
    trials: Option<usize>,
    /// Evaluation points per trial [default: preset].
    #[arg(long)]
    points: Option<usize>,
    /// Shots per point [default: preset].
    #[arg(long)]
    shots: Option<u64>,
    /// Simulator [default: preset].
    #[arg(long, value_enum)]
    sim: Option<SimArg>,
    /// Aggregation order [default: preset].
    #[arg(long, value_enum)]
    order: Option<OrderArg>,
    /// Two-qubit Pauli error probability [default: preset].
    #[arg(long)]
    noise_p2: Option<f64>,
    /// One-qubit Pauli error probability [default: preset].
    #[arg(long)]
    noise_p1: Option<f64>,
}

#[derive(Args, Serialize, Deserialize, Default)]
#[serde(default, deny_unknown_fields)]
struct QasmArgs {
    /// Compiled-program JSON file (required).
    #[arg(long)]
    program: Option<PathBuf>,
    /// Input in [-1, 1] (required).
    #[arg(long, allow_hyphen_values = true)]
    x: Option<f64>,
    /// Output .qasm file (required).
    #[arg(long)]
    out: Option<PathBuf>,
    /// JSON file supplying any of the flags above.
    #[arg(long)]
    #[serde(skip)]
    config: Option<PathBuf>,
}

fn read_config(path: &Path) -> CliResult<serde_json::Map<String, Value>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::usage(format!("--config {}: {e}", path.display())))?;
    match serde_json::from_str(&text) {
        Ok(Value::Object(map)) => Ok(map),
        Ok(_) => Err(CliError::usage(format!(
            "--config {}: expected a JSON object",
            path.display()
        ))),
        Err(e) => Err(CliError::usage(format!("--config {}: {e}", path.display()))),
    }
}

/// Fill unset flags from the config file.
fn merge_flags<T: Serialize + DeserializeOwned>(flags: T, config: Option<&Path>) -> CliResult<T> {
    let Some(path) = config else {
        return Ok(flags);
    };
    let mut base = serde_json::to_value(&flags).expect("flags serialize");
    let obj = base.as_object_mut().expect("flags are an object");
    for (k, v) in read_config(path)? {
        match obj.get(&k) {
            Some(Value::Null) => {
                obj.insert(k, v);
            }
            Some(_) => {}
            None => {
                return Err(CliError::usage(format!(
                    "--config {}: unknown key `{k}`",
                    path.display()
                )))
            }
        }
    }
    serde_json::from_value(base)
        .map_err(|e| CliError::usage(format!("--config {}: {e}", path.display())))
}

fn default_seed() -> CliResult<u64> {
    match std::env::var(SEED_ENV) {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| CliError::usage(format!("{SEED_ENV}=`{s}` is not an unsigned 64-bit integer"))),
        Err(_) => Ok(DEFAULT_SEED),
    }
}

fn required<T>(v: Option<T>, flag: &str) -> CliResult<T> {
    v.ok_or_else(|| CliError::usage(format!("{flag} is required")))
}

fn check_x(x: f64) -> CliResult<f64> {
    if x.abs() <= 1.0 {
        Ok(x)
    } else {
        Err(CliError::usage(format!("--x {x} lies outside [-1, 1]")))
    }
}

fn write_file(path: &Path, text: &str, flag: &str) -> CliResult<()> {
    std::fs::write(path, text)
        .map_err(|e| CliError::runtime(format!("{flag} {}: {e}", path.display())))
}

fn load_program(path: &Path) -> CliResult<CompiledProgram> {
    CompiledProgram::from_json_file(path)
        .map_err(|e| CliError::usage(format!("--program {}: {e}", path.display())))
}

/// Up to 15 significant digits, trailing zeros dropped.
fn short(v: f64) -> String {
    let s = format!("{:.*e}", 14, v);
    let parsed: f64 = s.parse().expect("float");
    format!("{parsed}")
}

fn cmd_fit(args: FitArgs) -> CliResult<()> {
    let degree = required(args.degree, "--degree")?;
    let out = required(args.out.clone(), "--out")?;
    let defaults = FitConfig::default();
    let config = FitConfig {
        method: match args.method.unwrap_or(MethodArg::LeastSquares) {
            MethodArg::LeastSquares => FitMethod::LeastSquares,
            MethodArg::GradientDescent => FitMethod::GradientDescent,
        },
        sample_count: args.sample_count.unwrap_or(defaults.sample_count),
        epochs: args.epochs.unwrap_or(defaults.epochs),
        step_size: args.step_size.unwrap_or(defaults.step_size),
        sample_domain: defaults.sample_domain,
    };
    config.validate(degree).map_err(|e| CliError::usage(e.to_string()))?;
    let samples = match (&args.samples, &args.target) {
        (Some(path), None) => read_samples_csv(path)
            .map_err(|e| CliError::usage(format!("--samples {}: {e}", path.display())))?,
        (None, Some(name)) => {
            let f = targets::parse(name)?;
            config.sample_points().into_iter().map(|x| (x, f(x))).collect()
        }
        _ => {
            return Err(CliError::usage(
                "exactly one of --samples or --target is required",
            ))
        }
    };
    let result = fit(&samples, degree, &config).map_err(|e| CliError::runtime(e.to_string()))?;
    let mut text = result.poly.to_json_string()?;
    text.push('\n');
    write_file(&out, &text, "--out")?;
    println!("mse {:e}", result.mse);
    Ok(())
}

fn cmd_compile(args: CompileArgs) -> CliResult<()> {
    let coeffs = required(args.coeffs.clone(), "--coeffs")?;
    let out = required(args.out.clone(), "--out")?;
    let order: Order = args.order.unwrap_or(OrderArg::Backward).into();
    let poly = Polynomial::from_json_file(&coeffs)
        .map_err(|e| CliError::usage(format!("--coeffs {}: {e}", coeffs.display())))?;
    if poly.is_zero() {
        return Err(CliError::runtime(
            "all coefficients are zero: nothing to compile (the estimate would be identically 0)",
        ));
    }
    let prog = CompiledProgram::compile(&poly, order)?;
    let mut text = prog.to_json_string()?;
    text.push('\n');
    write_file(&out, &text, "--out")?;
    let c = build_circuit(&prog, 0.0)?;
    let r = resources(&c);
    println!("C = {}", short(prog.rescale));
    println!("order = {order}, degree = {}", prog.degree());
    println!(
        "qubits = {}, two-qubit gates = {}, one-qubit gates = {}, depth = {}, peak window = {}",
        r.qubits,
        r.two_qubit_gates,
        r.single_qubit_gates,
        r.depth,
        liveness(&c).peak_window
    );
    Ok(())
}

#[derive(Serialize)]
struct EvaluateOutput {
    x: f64,
    estimate: f64,
    stderr: f64,
    truth_if_known: Option<f64>,
}

fn cmd_evaluate(args: EvaluateArgs) -> CliResult<()> {
    let path = required(args.program.clone(), "--program")?;
    let x = check_x(required(args.x, "--x")?)?;
    let shots = args.shots.unwrap_or(4096);
    if shots == 0 {
        return Err(CliError::usage("--shots must be at least 1"));
    }
    let seed = match args.seed {
        Some(s) => s,
        None => default_seed()?,
    };
    let noise = NoiseModel::new(args.noise_p1.unwrap_or(0.0), args.noise_p2.unwrap_or(0.0))
        .map_err(|e| CliError::usage(format!("--noise-p1/--noise-p2: {e}")))?;
    let cap = args.window_cap.unwrap_or(qpoly::sim::stream::DEFAULT_WINDOW_CAP);
    let prog = load_program(&path)?;
    let circuit = build_circuit(&prog, x)?;
    let outcome = match args.sim.unwrap_or(SimArg::Dense) {
        SimArg::Dense => DenseSimulator::default().sample_output(&circuit, shots, seed, Some(&noise))?,
        SimArg::Stream => sample_output_stream(&circuit, cap, shots, seed, Some(&noise))?,
    };
    let est = point_estimate(&outcome, prog.rescale)?;
    let out = EvaluateOutput {
        x,
        estimate: est.value,
        stderr: est.stderr,
        truth_if_known: prog.source.as_ref().map(|p| p.eval(x)),
    };
    println!("{}", serde_json::to_string(&out).expect("serializable"));
    Ok(())
}

fn cmd_export_qasm(args: QasmArgs) -> CliResult<()> {
    let path = required(args.program.clone(), "--program")?;
    let x = check_x(required(args.x, "--x")?)?;
    let out = required(args.out.clone(), "--out")?;
    let prog = load_program(&path)?;
    write_file(&out, &to_qasm(&build_circuit(&prog, x)?)?, "--out")
}

/// Preset, then config file, then flags.
fn experiment_config(args: &BenchArgs) -> CliResult<ExperimentConfig> {
    let preset = match args.experiment {
        Experiment::Table1 => ExperimentConfig::table1(),
        Experiment::Stress => ExperimentConfig::stress(),
        Experiment::Noise => ExperimentConfig::noise_sweep(),
        Experiment::Shots => unreachable!("shots has its own config"),
    };
    let mut cfg: ExperimentConfig = overlay(preset, args.config.as_deref())?;
    let file_has_seed = match &args.config {
        Some(p) => read_config(p)?.contains_key("master_seed"),
        None => false,
    };
    if let Some(s) = args.seed {
        cfg.master_seed = s;
    } else if !file_has_seed {
        cfg.master_seed = default_seed()?;
    }
    if let Some(d) = &args.degrees {
        cfg.degrees = d.clone();
    }
    if let Some(t) = args.trials {
        cfg.trials = t;
    }
    if let Some(p) = args.points {
        cfg.points_per_trial = p;
    }
    if let Some(n) = args.shots {
        cfg.shots = Some(n);
    }
    if let Some(s) = args.sim {
        cfg.simulator = s.into();
    }
    if let Some(o) = args.order {
        cfg.order = o.into();
    }
    if args.noise_p1.is_some() || args.noise_p2.is_some() {
        let base = cfg.noise.unwrap_or_default();
        cfg.noise = Some(NoiseModel {
            p1: args.noise_p1.unwrap_or(base.p1),
            p2: args.noise_p2.unwrap_or(base.p2),
        });
    }
    cfg.validate().map_err(|e| CliError::usage(e.to_string()))?;
    Ok(cfg)
}

fn overlay<T: Serialize + DeserializeOwned>(preset: T, config: Option<&Path>) -> CliResult<T> {
    let Some(path) = config else {
        return Ok(preset);
    };
    let mut base = serde_json::to_value(&preset).expect("preset serializes");
    let obj = base.as_object_mut().expect("preset is an object");
    for (k, v) in read_config(path)? {
        obj.insert(k, v);
    }
    serde_json::from_value(base)
        .map_err(|e| CliError::usage(format!("--config {}: {e}", path.display())))
}

fn print_summary(rep: &RunReport) {
    println!(
        "{:>6} {:>7} {:>9} {:>9} {:>8} {:>7} {:>6} {:>5} {:>6}",
        "degree", "records", "rmse", "predicted", "corr", "pass", "qubits", "2q", "depth"
    );
    let f = |v: Option<f64>, p: usize| v.map_or("-".to_string(), |v| format!("{v:.p$}"));
    for s in &rep.per_degree {
        println!(
            "{:>6} {:>7} {:>9} {:>9} {:>8} {:>7} {:>6} {:>5} {:>6}",
            s.degree,
            s.records,
            f(s.rmse, 5),
            f(s.predicted_rmse, 5),
            f(s.pearson, 5),
            s.pass_rate.map_or("-".into(), |p| format!("{:.1}%", 100.0 * p)),
            s.qubits,
            s.two_qubit_gates,
            s.depth
        );
    }
    for fail in &rep.failures {
        eprintln!("failed: {}", fail.message);
    }
}

fn cmd_bench(args: BenchArgs) -> CliResult<()> {
    let out_dir = required(args.out_dir.clone(), "--out-dir")?;
    if args.experiment == Experiment::Shots {
        let mut cfg: ShotScalingConfig = overlay(ShotScalingConfig::default(), args.config.as_deref())?;
        let file_has_seed = match &args.config {
            Some(p) => read_config(p)?.contains_key("master_seed"),
            None => false,
        };
        cfg.master_seed = match args.seed {
            Some(s) => s,
            None if file_has_seed => cfg.master_seed,
            None => default_seed()?,
        };
        if let Some(p) = args.points {
            cfg.points = p;
        }
        let rep = bench::shot_scaling_experiment(&cfg)?;
        std::fs::create_dir_all(&out_dir)
            .map_err(|e| CliError::runtime(format!("--out-dir {}: {e}", out_dir.display())))?;
        write_file(&out_dir.join("report.json"), &rep.to_json_string()?, "--out-dir")?;
        let mut csv = String::from("shots,rmse\n");
        println!("{:>8} {:>10}", "shots", "rmse");
        for (n, r) in &rep.rmse {
            csv.push_str(&format!("{n},{r}\n"));
            println!("{n:>8} {r:>10.6}");
        }
        write_file(&out_dir.join("records.csv"), &csv, "--out-dir")?;
        println!("slope {:.4}", rep.slope);
        return Ok(());
    }

    let cfg = experiment_config(&args)?;
    let rep = match args.experiment {
        Experiment::Table1 => bench::table1_experiment(&cfg)?,
        Experiment::Stress => bench::stress_experiment(&cfg)?,
        Experiment::Noise => bench::noise_sweep(&cfg)?,
        Experiment::Shots => unreachable!(),
    };
    rep.write_dir(&out_dir)
        .map_err(|e| CliError::runtime(format!("--out-dir {}: {e}", out_dir.display())))?;
    print_summary(&rep);
    let failed = rep.failed_degrees();
    if !failed.is_empty() {
        return Err(CliError::runtime(format!("every point failed for degrees {failed:?}")));
    }
    Ok(())
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Fit(a) => {
            let cfg = a.config.clone();
            cmd_fit(merge_flags(a, cfg.as_deref())?)
        }
        Command::Compile(a) => {
            let cfg = a.config.clone();
            cmd_compile(merge_flags(a, cfg.as_deref())?)
        }
        Command::Evaluate(a) => {
            let cfg = a.config.clone();
            cmd_evaluate(merge_flags(a, cfg.as_deref())?)
        }
        Command::ExportQasm(a) => {
            let cfg = a.config.clone();
            cmd_export_qasm(merge_flags(a, cfg.as_deref())?)
        }
        Command::Bench(a) => cmd_bench(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code)
        }
    }
}
