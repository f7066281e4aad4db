//! Builtin fit targets.

use crate::CliError;

pub const NAMES: &str = "poly:<c0,c1,...>, sin, exp, tanh, runge, abs";

pub fn parse(spec: &str) -> Result<Box<dyn Fn(f64) -> f64>, CliError> {
    if let Some(list) = spec.strip_prefix("poly:") {
        let coeffs = list
            .split(',')
            .map(|s| s.trim().parse::<f64>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| CliError::usage(format!("--target {spec}: bad coefficient list ({e})")))?;
        let poly = qpoly::Polynomial::new(coeffs)
            .map_err(|e| CliError::usage(format!("--target {spec}: {e}")))?;
        return Ok(Box::new(move |x| poly.eval(x)));
    }
    let f: fn(f64) -> f64 = match spec {
        "sin" => |x| (std::f64::consts::PI * x).sin(),
        "exp" => f64::exp,
        "tanh" => |x| (2.0 * x).tanh(),
        "runge" => |x| 1.0 / (1.0 + 25.0 * x * x),
        "abs" => f64::abs,
        other => {
            return Err(CliError::usage(format!(
                "--target `{other}` is not a builtin (choose {NAMES})"
            )))
        }
    };
    Ok(Box::new(f))
}
