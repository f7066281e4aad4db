//! Shot counts to rescaled estimates, and recovery metrics.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sim::noise::ShotOutcome;

/// Default pass threshold on the absolute error of the rescaled estimate.
pub const PASS_THRESHOLD: f64 = 0.03;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub stderr: f64,
    pub shots: u64,
    pub rescale: f64,
}

/// `C (n0 - n1) / N` with the binomial standard error `2 C sqrt(p(1-p)/N)`.
pub fn point_estimate(outcome: &ShotOutcome, rescale: f64) -> Result<Estimate> {
    if outcome.shots == 0 || outcome.n0 + outcome.n1 != outcome.shots {
        return Err(Error::Estimator(format!(
            "inconsistent shot outcome n0 = {}, n1 = {}, N = {}",
            outcome.n0, outcome.n1, outcome.shots
        )));
    }
    let n = outcome.shots as f64;
    let p = outcome.n1 as f64 / n;
    Ok(Estimate {
        value: rescale * (outcome.n0 as f64 - outcome.n1 as f64) / n,
        stderr: rescale.abs() * 2.0 * (p * (1.0 - p) / n).sqrt(),
        shots: outcome.shots,
        rescale,
    })
}

/// Noise-free estimate straight from an exact expectation.
pub fn exact_estimate(expect_z: f64, rescale: f64) -> Estimate {
    Estimate {
        value: rescale * expect_z,
        stderr: 0.0,
        shots: 0,
        rescale,
    }
}

/// Analytic shot-noise standard deviation of the rescaled estimate.
pub fn predicted_stderr(expect_z: f64, rescale: f64, shots: u64) -> f64 {
    let p = ((1.0 - expect_z) / 2.0).clamp(0.0, 1.0);
    rescale.abs() * 2.0 * (p * (1.0 - p) / shots as f64).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub rmse: f64,
    /// `None` when either side has zero variance.
    pub pearson: Option<f64>,
    pub pass_rate: f64,
    pub threshold: f64,
    pub count: usize,
}

/// Metrics over `(truth, estimate)` pairs.
pub fn run_metrics(pairs: &[(f64, f64)], threshold: f64) -> Result<Metrics> {
    if pairs.is_empty() {
        return Err(Error::Estimator("no (truth, estimate) pairs".to_string()));
    }
    if !(threshold > 0.0) {
        return Err(Error::Estimator(format!("threshold {threshold} must be positive")));
    }
    let n = pairs.len() as f64;
    let sq: f64 = pairs.iter().map(|(t, e)| (e - t).powi(2)).sum();
    let passed = pairs.iter().filter(|(t, e)| (e - t).abs() < threshold).count();
    Ok(Metrics {
        rmse: (sq / n).sqrt(),
        pearson: pearson(pairs),
        pass_rate: passed as f64 / n,
        threshold,
        count: pairs.len(),
    })
}

/// Sample correlation, clamped to `[-1, 1]`.
pub fn pearson(pairs: &[(f64, f64)]) -> Option<f64> {
    if pairs.len() < 2 {
        return None;
    }
    let n = pairs.len() as f64;
    let mt = pairs.iter().map(|p| p.0).sum::<f64>() / n;
    let me = pairs.iter().map(|p| p.1).sum::<f64>() / n;
    let (mut stt, mut see, mut ste) = (0.0, 0.0, 0.0);
    for &(t, e) in pairs {
        stt += (t - mt) * (t - mt);
        see += (e - me) * (e - me);
        ste += (t - mt) * (e - me);
    }
    if stt == 0.0 || see == 0.0 {
        return None;
    }
    Some((ste / (stt * see).sqrt()).clamp(-1.0, 1.0))
}

/// Least-squares slope of `ln rmse` against `ln N`.
pub fn shot_scaling_fit(samples: &[(u64, f64)]) -> Result<f64> {
    let mut ns: Vec<u64> = samples.iter().map(|s| s.0).collect();
    ns.sort_unstable();
    ns.dedup();
    if ns.len() < 4 {
        return Err(Error::Estimator(format!(
            "need at least 4 distinct shot counts, got {}",
            ns.len()
        )));
    }
    if ns[0] == 0 || (*ns.last().unwrap() as f64) < 100.0 * ns[0] as f64 {
        return Err(Error::Estimator(
            "shot counts must be positive and span at least two decades".to_string(),
        ));
    }
    if let Some(&(n, r)) = samples.iter().find(|s| !(s.1 > 0.0) || !s.1.is_finite()) {
        return Err(Error::Estimator(format!("rmse {r} at N = {n} is not positive")));
    }
    let pts: Vec<(f64, f64)> = samples
        .iter()
        .map(|&(n, r)| ((n as f64).ln(), r.ln()))
        .collect();
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Ok(sxy / sxx)
}
