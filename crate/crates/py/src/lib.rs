//! Python bindings for the polynomial evaluation pipeline.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use qpoly::bench::{self, ExperimentConfig, ShotScalingConfig, SimulatorKind};
use qpoly::compiler::resources;
use qpoly::estimator::point_estimate;
use qpoly::polynomial::{FitConfig, FitMethod};
use qpoly::sim::stream::{sample_output_stream, DEFAULT_WINDOW_CAP};
use qpoly::sim::{DenseSimulator, NoiseModel};
use qpoly::{build_circuit, Error, Order};

fn py_err(e: Error) -> PyErr {
    match e {
        Error::Config(_) | Error::EncodingDomain(_) | Error::InvalidPolynomial(_) | Error::ZeroPolynomial => {
            PyValueError::new_err(e.to_string())
        }
        other => PyRuntimeError::new_err(other.to_string()),
    }
}

#[pyclass(name = "Polynomial", module = "qpoly", frozen, skip_from_py_object)]
struct PyPolynomial {
    inner: qpoly::Polynomial,
}

#[pymethods]
impl PyPolynomial {
    #[new]
    fn new(coeffs: Vec<f64>) -> PyResult<Self> {
        Ok(Self { inner: qpoly::Polynomial::new(coeffs).map_err(py_err)? })
    }

    #[getter]
    fn coeffs(&self) -> Vec<f64> {
        self.inner.coeffs().to_vec()
    }

    #[getter]
    fn degree(&self) -> usize {
        self.inner.degree()
    }

    fn __call__(&self, x: f64) -> f64 {
        self.inner.eval(x)
    }

    fn eval(&self, x: f64) -> f64 {
        self.inner.eval(x)
    }

    fn l1_norm(&self) -> f64 {
        self.inner.l1_norm()
    }

    fn sup_norm(&self) -> f64 {
        self.inner.sup_norm()
    }

    fn to_json(&self) -> PyResult<String> {
        self.inner.to_json_string().map_err(py_err)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(Self { inner: qpoly::Polynomial::from_json_str(text).map_err(py_err)? })
    }

    fn __repr__(&self) -> String {
        format!("Polynomial({:?})", self.inner.coeffs())
    }
}

/// Fit a degree-`degree` polynomial to samples; returns `(poly, mse)`.
#[pyfunction]
#[pyo3(signature = (xs, ys, degree, method = "least_squares", epochs = 20_000, step_size = 0.05))]
fn fit(
    xs: Vec<f64>,
    ys: Vec<f64>,
    degree: usize,
    method: &str,
    epochs: usize,
    step_size: f64,
) -> PyResult<(PyPolynomial, f64)> {
    if xs.len() != ys.len() {
        return Err(PyValueError::new_err("xs and ys differ in length"));
    }
    let method = match method {
        "least_squares" => FitMethod::LeastSquares,
        "gradient_descent" => FitMethod::GradientDescent,
        other => return Err(PyValueError::new_err(format!("unknown fit method `{other}`"))),
    };
    let config = FitConfig { method, epochs, step_size, ..FitConfig::default() };
    let samples: Vec<(f64, f64)> = xs.into_iter().zip(ys).collect();
    let r = qpoly::polynomial::fit(&samples, degree, &config).map_err(py_err)?;
    Ok((PyPolynomial { inner: r.poly }, r.mse))
}

#[pyclass(name = "CompiledProgram", module = "qpoly", frozen)]
struct PyProgram {
    inner: qpoly::CompiledProgram,
}

#[pymethods]
impl PyProgram {
    #[getter]
    fn rescale(&self) -> f64 {
        self.inner.rescale
    }

    #[getter]
    fn order(&self) -> String {
        self.inner.order().to_string()
    }

    #[getter]
    fn degree(&self) -> usize {
        self.inner.degree()
    }

    #[getter]
    fn weights(&self) -> Vec<f64> {
        self.inner.schedule.weights.clone()
    }

    #[getter]
    fn angles(&self) -> Vec<f64> {
        self.inner.schedule.angles.clone()
    }

    fn to_json(&self) -> PyResult<String> {
        self.inner.to_json_string().map_err(py_err)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(Self { inner: qpoly::CompiledProgram::from_json_str(text).map_err(py_err)? })
    }

    /// Gate counts of the circuit at input `x`.
    #[pyo3(signature = (x = 0.0))]
    fn resources<'py>(&self, py: Python<'py>, x: f64) -> PyResult<Bound<'py, PyDict>> {
        let r = resources(&build_circuit(&self.inner, x).map_err(py_err)?);
        let d = PyDict::new(py);
        d.set_item("qubits", r.qubits)?;
        d.set_item("two_qubit_gates", r.two_qubit_gates)?;
        d.set_item("single_qubit_gates", r.single_qubit_gates)?;
        d.set_item("depth", r.depth)?;
        Ok(d)
    }

    fn qasm(&self, x: f64) -> PyResult<String> {
        qpoly::qasm::to_qasm(&build_circuit(&self.inner, x).map_err(py_err)?).map_err(py_err)
    }

    /// Noise-free value `C <Z>` from the state vector.
    fn exact(&self, py: Python<'_>, x: f64) -> PyResult<f64> {
        let circuit = build_circuit(&self.inner, x).map_err(py_err)?;
        let z = py
            .detach(|| DenseSimulator::default().expect_output(&circuit))
            .map_err(py_err)?;
        Ok(self.inner.rescale * z)
    }

    /// Shot-based estimate; returns `(estimate, stderr)`.
    #[pyo3(signature = (x, shots = 4096, seed = bench::DEFAULT_SEED, simulator = "dense", p1 = 0.0, p2 = 0.0, window_cap = DEFAULT_WINDOW_CAP))]
    #[allow(clippy::too_many_arguments)]
    fn estimate(
        &self,
        py: Python<'_>,
        x: f64,
        shots: u64,
        seed: u64,
        simulator: &str,
        p1: f64,
        p2: f64,
        window_cap: usize,
    ) -> PyResult<(f64, f64)> {
        let kind: SimulatorKind = simulator.parse().map_err(py_err)?;
        let noise = NoiseModel::new(p1, p2).map_err(py_err)?;
        let circuit = build_circuit(&self.inner, x).map_err(py_err)?;
        let outcome = py
            .detach(|| match kind {
                SimulatorKind::Dense => {
                    DenseSimulator::default().sample_output(&circuit, shots, seed, Some(&noise))
                }
                SimulatorKind::Stream => sample_output_stream(&circuit, window_cap, shots, seed, Some(&noise)),
            })
            .map_err(py_err)?;
        let e = point_estimate(&outcome, self.inner.rescale).map_err(py_err)?;
        Ok((e.value, e.stderr))
    }

    fn __repr__(&self) -> String {
        format!(
            "CompiledProgram(order={}, degree={}, rescale={})",
            self.inner.order(),
            self.inner.degree(),
            self.inner.rescale
        )
    }
}

#[pyfunction]
#[pyo3(signature = (poly, order = "backward"))]
fn compile(poly: &PyPolynomial, order: &str) -> PyResult<PyProgram> {
    let order: Order = order.parse().map_err(py_err)?;
    Ok(PyProgram {
        inner: qpoly::CompiledProgram::compile(&poly.inner, order).map_err(py_err)?,
    })
}

fn overlay<T>(base: T, overrides: Option<&str>) -> PyResult<T>
where
    T: serde::Serialize + serde::de::DeserializeOwned,
{
    let mut value = serde_json::to_value(base).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    if let Some(text) = overrides {
        let patch: serde_json::Map<String, serde_json::Value> =
            serde_json::from_str(text).map_err(|e| PyValueError::new_err(e.to_string()))?;
        let obj = value.as_object_mut().expect("configs serialize to objects");
        obj.extend(patch);
    }
    serde_json::from_value(value).map_err(|e| PyValueError::new_err(e.to_string()))
}

/// Run a named experiment and return its report as JSON text.
///
/// `config` is a JSON object whose keys replace the preset's.
#[pyfunction]
#[pyo3(signature = (experiment = "table1", config = None))]
fn run_bench(py: Python<'_>, experiment: &str, config: Option<&str>) -> PyResult<String> {
    if experiment == "shots" {
        let cfg: ShotScalingConfig = overlay(ShotScalingConfig::default(), config)?;
        let report = py.detach(|| bench::shot_scaling_experiment(&cfg)).map_err(py_err)?;
        return report.to_json_string().map_err(py_err);
    }
    let cfg: ExperimentConfig = overlay(ExperimentConfig::preset(experiment).map_err(py_err)?, config)?;
    let report = py
        .detach(|| match experiment {
            "stress" => bench::stress_experiment(&cfg),
            "noise" => bench::noise_sweep(&cfg),
            _ => bench::table1_experiment(&cfg),
        })
        .map_err(py_err)?;
    report.to_json_string().map_err(py_err)
}

#[pymodule(name = "qpoly")]
pub fn qpoly_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPolynomial>()?;
    m.add_class::<PyProgram>()?;
    m.add_function(wrap_pyfunction!(fit, m)?)?;
    m.add_function(wrap_pyfunction!(compile, m)?)?;
    m.add_function(wrap_pyfunction!(run_bench, m)?)?;
    m.add("DEFAULT_SEED", bench::DEFAULT_SEED)?;
    Ok(())
}
