//! Real polynomials on `[-1, 1]`: evaluation, classical fitting and
//! normalization ahead of compilation.
//!
//! Normalization divides by the ℓ1 norm `C = Σ|a_k|`. That is the constant
//! under which the convex-weight aggregation in [`crate::compiler`]
//! telescopes to `P(x) / C`. The sup norm `max |P(x)|` is still computed and
//! carried along as `sup_norm_report` so both conventions can be compared.

use std::path::Path;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Grid size for the sup-norm scan.
pub const SUP_GRID_POINTS: usize = 10_001;
/// Golden-section tolerance for the sup-norm refinement.
pub const SUP_TOLERANCE: f64 = 1e-12;

/// A polynomial `a_0 + a_1 x + ... + a_d x^d`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Polynomial {
    coeffs: Vec<f64>,
}

impl Polynomial {
    pub fn new(coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidPolynomial(
                "coefficient list is empty".to_string(),
            ));
        }
        if let Some(k) = coeffs.iter().position(|c| !c.is_finite()) {
            return Err(Error::InvalidPolynomial(format!(
                "coefficient a_{k} is not finite"
            )));
        }
        Ok(Self { coeffs })
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0.0)
    }

    /// Horner evaluation.
    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &a| acc * x + a)
    }

    pub fn l1_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.abs()).sum()
    }

    /// `max_{x in [-1,1]} |P(x)|`, dense grid scan plus golden-section
    /// refinement around the best grid point.
    pub fn sup_norm(&self) -> f64 {
        let f = |x: f64| self.eval(x).abs();
        let n = SUP_GRID_POINTS;
        let step = 2.0 / (n - 1) as f64;
        let grid = |i: usize| -1.0 + i as f64 * step;

        let (best_i, best) = (0..n)
            .map(|i| (i, f(grid(i))))
            .fold((0, f64::NEG_INFINITY), |acc, cur| {
                if cur.1 > acc.1 {
                    cur
                } else {
                    acc
                }
            });

        let lo = grid(best_i.saturating_sub(1));
        let hi = grid((best_i + 1).min(n - 1));
        let refined = golden_section_max(&f, lo, hi, SUP_TOLERANCE);
        best.max(f(refined))
    }

    /// Scale every coefficient by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new(self.coeffs.iter().map(|c| c * factor).collect())
    }

    pub fn from_json_file(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json_str(&text)
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let raw: CoeffFile = serde_json::from_str(text)?;
        Self::new(raw.coeffs)
    }

    /// `{"coeffs": [a_0, ..., a_d]}`
    pub fn to_json_string(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&CoeffFile {
            coeffs: self.coeffs.clone(),
        })?)
    }
}

#[derive(Serialize, Deserialize)]
struct CoeffFile {
    coeffs: Vec<f64>,
}

fn golden_section_max(f: &impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while (b - a).abs() > tol {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    (a + b) / 2.0
}

/// A polynomial rescaled into the encodable range.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormalizedPolynomial {
    pub tilde_coeffs: Vec<f64>,
    /// Rescale constant `C`: multiply the normalized output by this.
    pub scale: f64,
    pub sup_norm_report: f64,
}

impl NormalizedPolynomial {
    pub fn degree(&self) -> usize {
        self.tilde_coeffs.len() - 1
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.tilde_coeffs.iter().rev().fold(0.0, |acc, &a| acc * x + a)
    }
}

/// `C = (1 + epsilon) Σ|a_k|`, `ã_k = a_k / C`.
pub fn normalize(poly: &Polynomial, epsilon: f64) -> Result<NormalizedPolynomial> {
    if !(epsilon >= 0.0 && epsilon.is_finite()) {
        return Err(Error::InvalidPolynomial(format!(
            "normalization epsilon must be finite and >= 0, got {epsilon}"
        )));
    }
    if poly.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let l1 = poly.l1_norm();
    let scale = l1 + epsilon * l1;
    Ok(NormalizedPolynomial {
        tilde_coeffs: poly.coeffs().iter().map(|a| a / scale).collect(),
        scale,
        sup_norm_report: poly.sup_norm(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FitMethod {
    LeastSquares,
    GradientDescent,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitConfig {
    pub method: FitMethod,
    /// Samples drawn when fitting a builtin target function.
    pub sample_count: usize,
    pub epochs: usize,
    pub step_size: f64,
    pub sample_domain: (f64, f64),
}

impl Default for FitConfig {
    fn default() -> Self {
        Self {
            method: FitMethod::LeastSquares,
            sample_count: 101,
            epochs: 20_000,
            step_size: 0.05,
            sample_domain: (-1.0, 1.0),
        }
    }
}

impl FitConfig {
    pub fn validate(&self, degree: usize) -> Result<()> {
        let (lo, hi) = self.sample_domain;
        if !(-1.0 <= lo && lo < hi && hi <= 1.0) {
            return Err(Error::Config(format!(
                "sample domain [{lo}, {hi}] must be a nonempty subinterval of [-1, 1]"
            )));
        }
        if self.sample_count < degree + 1 {
            return Err(Error::Config(format!(
                "sample count {} is below degree + 1 = {}",
                self.sample_count,
                degree + 1
            )));
        }
        if self.method == FitMethod::GradientDescent
            && (self.epochs == 0 || !(self.step_size > 0.0 && self.step_size.is_finite()))
        {
            return Err(Error::Config(
                "gradient descent needs epochs >= 1 and a positive step size".to_string(),
            ));
        }
        Ok(())
    }

    /// `sample_count` evenly spaced points across the sample domain.
    pub fn sample_points(&self) -> Vec<f64> {
        linspace(self.sample_domain.0, self.sample_domain.1, self.sample_count)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitResult {
    pub poly: Polynomial,
    pub mse: f64,
}

/// Evenly spaced points, endpoints included.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![(lo + hi) / 2.0],
        _ => (0..n)
            .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
            .collect(),
    }
}

fn vandermonde(xs: &[f64], degree: usize) -> DMatrix<f64> {
    DMatrix::from_fn(xs.len(), degree + 1, |i, k| xs[i].powi(k as i32))
}

/// Mean squared error of `poly` over the samples.
pub fn mse(poly: &Polynomial, samples: &[(f64, f64)]) -> f64 {
    samples
        .iter()
        .map(|&(x, y)| (poly.eval(x) - y).powi(2))
        .sum::<f64>()
        / samples.len() as f64
}

/// Fit a degree-`degree` polynomial to `(x, y)` samples.
pub fn fit(samples: &[(f64, f64)], degree: usize, config: &FitConfig) -> Result<FitResult> {
    if samples.is_empty() {
        return Err(Error::Fit("no samples".to_string()));
    }
    if samples.len() < degree + 1 {
        return Err(Error::Fit(format!(
            "{} samples cannot determine a degree-{degree} polynomial (need at least {})",
            samples.len(),
            degree + 1
        )));
    }
    if let Some(i) = samples
        .iter()
        .position(|(x, y)| !x.is_finite() || !y.is_finite() || x.abs() > 1.0)
    {
        return Err(Error::Fit(format!(
            "sample {i} is not finite or has x outside [-1, 1]"
        )));
    }
    let coeffs = match config.method {
        FitMethod::LeastSquares => least_squares(samples, degree)?,
        FitMethod::GradientDescent => {
            config.validate(degree).map_err(|e| Error::Fit(e.to_string()))?;
            gradient_descent(samples, degree, config.epochs, config.step_size)?
        }
    };
    let poly = Polynomial::new(coeffs)?;
    let mse = mse(&poly, samples);
    Ok(FitResult { poly, mse })
}

fn distinct_count(xs: &[f64]) -> usize {
    let mut sorted = xs.to_vec();
    sorted.sort_by(f64::total_cmp);
    sorted.dedup();
    sorted.len()
}

fn least_squares(samples: &[(f64, f64)], degree: usize) -> Result<Vec<f64>> {
    let xs: Vec<f64> = samples.iter().map(|s| s.0).collect();
    let distinct = distinct_count(&xs);
    if distinct < degree + 1 {
        return Err(Error::Fit(format!(
            "rank-deficient Vandermonde system: {distinct} distinct x values for degree {degree}"
        )));
    }
    let v = vandermonde(&xs, degree);
    let y = DVector::from_iterator(samples.len(), samples.iter().map(|s| s.1));

    let qr = v.qr();
    let r = qr.r();
    let max_diag = r.diagonal().iter().fold(0.0f64, |m, d| m.max(d.abs()));
    if r.diagonal().iter().any(|d| d.abs() <= 1e-13 * max_diag) {
        return Err(Error::Fit(
            "rank-deficient Vandermonde system (numerically singular R)".to_string(),
        ));
    }
    let qty = qr.q().transpose() * y;
    let sol = r
        .solve_upper_triangular(&qty)
        .ok_or_else(|| Error::Fit("triangular solve failed".to_string()))?;
    Ok(sol.iter().copied().collect())
}

fn gradient_descent(
    samples: &[(f64, f64)],
    degree: usize,
    epochs: usize,
    step_size: f64,
) -> Result<Vec<f64>> {
    let xs: Vec<f64> = samples.iter().map(|s| s.0).collect();
    let v = vandermonde(&xs, degree);
    let vt = v.transpose();
    let y = DVector::from_iterator(samples.len(), samples.iter().map(|s| s.1));
    let m = samples.len() as f64;
    let mut a = DVector::<f64>::zeros(degree + 1);
    for step in 0..epochs {
        let residual = &v * &a - &y;
        let loss = residual.norm_squared() / m;
        if !loss.is_finite() {
            return Err(Error::Divergent { step });
        }
        let grad = (&vt * residual) * (2.0 / m);
        a -= grad * step_size;
    }
    if a.iter().any(|c| !c.is_finite()) {
        return Err(Error::Divergent { step: epochs });
    }
    Ok(a.iter().copied().collect())
}

/// Read `x,y` samples from a CSV file with a header row.
pub fn read_samples_csv(path: impl AsRef<Path>) -> Result<Vec<(f64, f64)>> {
    let mut reader = csv::Reader::from_path(path)?;
    let headers = reader.headers()?.clone();
    if headers.len() != 2 || &headers[0] != "x" || &headers[1] != "y" {
        return Err(Error::Config(format!(
            "sample file header must be `x,y`, found `{}`",
            headers.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let mut out = Vec::new();
    for record in reader.deserialize() {
        let (x, y): (f64, f64) = record?;
        out.push((x, y));
    }
    Ok(out)
}

pub fn write_samples_csv(path: impl AsRef<Path>, samples: &[(f64, f64)]) -> Result<()> {
    let mut writer = csv::Writer::from_path(path)?;
    writer.write_record(["x", "y"])?;
    for &(x, y) in samples {
        writer.write_record([format_sig17(x), format_sig17(y)])?;
    }
    writer.flush()?;
    Ok(())
}

/// Positional decimal with 17 significant digits (round-trips any `f64`).
pub fn format_sig17(value: f64) -> String {
    if value == 0.0 {
        return if value.is_sign_negative() {
            "-0.0000000000000000".to_string()
        } else {
            "0.0000000000000000".to_string()
        };
    }
    let sci = format!("{:.16e}", value);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("exponent");
    let (sign, mantissa) = match mantissa.strip_prefix('-') {
        Some(m) => ("-", m),
        None => ("", mantissa),
    };
    let digits: String = mantissa.chars().filter(|c| *c != '.').collect();
    let body = if exp < 0 {
        format!("0.{}{}", "0".repeat((-exp - 1) as usize), digits)
    } else {
        let int_len = exp as usize + 1;
        if int_len >= digits.len() {
            format!("{}{}.0", digits, "0".repeat(int_len - digits.len()))
        } else {
            format!("{}.{}", &digits[..int_len], &digits[int_len..])
        }
    };
    format!("{sign}{body}")
}
