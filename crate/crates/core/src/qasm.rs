//! OpenQASM 3.0 emission, plus a line-grammar checker for the emitted
//! subset.
//!
//! Output layout:
//!
//! ```text
//! OPENQASM 3.0;
//! include "stdgates.inc";
//! qubit[3] q;
//! bit c;
//! ry(1.5707963267948966) q[1];
//! cx q[1], q[2];
//! c = measure q[0];
//! ```

use std::fmt::Write as _;

use crate::circuit::{Circuit, Gate};
use crate::error::{Error, Result};
use crate::polynomial::format_sig17;

pub fn to_qasm(circuit: &Circuit) -> Result<String> {
    circuit.validate().map_err(Error::InvalidCircuit)?;
    let mut out = String::new();
    out.push_str("OPENQASM 3.0;\n");
    out.push_str("include \"stdgates.inc\";\n");
    writeln!(out, "qubit[{}] q;", circuit.n_qubits()).unwrap();
    out.push_str("bit c;\n");
    for gate in circuit.gates() {
        match *gate {
            Gate::Ry { qubit, angle } => {
                writeln!(out, "ry({}) q[{qubit}];", format_sig17(angle)).unwrap()
            }
            Gate::Rz { qubit, angle } => {
                writeln!(out, "rz({}) q[{qubit}];", format_sig17(angle)).unwrap()
            }
            Gate::X { qubit } => writeln!(out, "x q[{qubit}];").unwrap(),
            Gate::Cx { control, target } => {
                writeln!(out, "cx q[{control}], q[{target}];").unwrap()
            }
        }
    }
    writeln!(out, "c = measure q[{}];", circuit.measured_qubit()).unwrap();
    Ok(out)
}

/// Check `text` against the grammar of the emitted subset. Returns the
/// first offending line (1-based) on failure.
pub fn check_qasm(text: &str) -> std::result::Result<(), String> {
    if !text.ends_with('\n') || text.ends_with("\n\n") || text.contains('\r') {
        return Err("file must end with exactly one newline and use LF endings".to_string());
    }
    let lines: Vec<&str> = text.lines().collect();
    let fail = |i: usize, why: &str| Err(format!("line {}: {why}: `{}`", i + 1, lines[i]));

    if lines.len() < 5 {
        return Err("file too short".to_string());
    }
    if lines[0] != "OPENQASM 3.0;" {
        return fail(0, "expected version header");
    }
    if lines[1] != "include \"stdgates.inc\";" {
        return fail(1, "expected stdgates include");
    }
    let n_qubits = match lines[2]
        .strip_prefix("qubit[")
        .and_then(|r| r.strip_suffix("] q;"))
        .and_then(parse_index)
    {
        Some(n) if n > 0 => n,
        _ => return fail(2, "expected `qubit[N] q;`"),
    };
    if lines[3] != "bit c;" {
        return fail(3, "expected `bit c;`");
    }
    let last = lines.len() - 1;
    for (i, line) in lines.iter().enumerate().take(last).skip(4) {
        if let Err(why) = check_gate_line(line, n_qubits) {
            return fail(i, &why);
        }
    }
    match lines[last]
        .strip_prefix("c = measure ")
        .and_then(|r| r.strip_suffix(';'))
        .and_then(|r| parse_qubit_ref(r, n_qubits))
    {
        Some(_) => Ok(()),
        None => fail(last, "expected final `c = measure q[i];`"),
    }
}

fn check_gate_line(line: &str, n_qubits: usize) -> std::result::Result<(), String> {
    let body = line
        .strip_suffix(';')
        .ok_or_else(|| "missing semicolon".to_string())?;
    if let Some(rest) = body.strip_prefix("cx ") {
        let (a, b) = rest
            .split_once(", ")
            .ok_or_else(|| "cx needs two comma-separated operands".to_string())?;
        let a = parse_qubit_ref(a, n_qubits).ok_or("bad control operand")?;
        let b = parse_qubit_ref(b, n_qubits).ok_or("bad target operand")?;
        if a == b {
            return Err("cx control equals target".to_string());
        }
        return Ok(());
    }
    if let Some(rest) = body.strip_prefix("x ") {
        parse_qubit_ref(rest, n_qubits).ok_or("bad x operand")?;
        return Ok(());
    }
    for name in ["ry(", "rz("] {
        if let Some(rest) = body.strip_prefix(name) {
            let (angle, operand) = rest
                .split_once(") ")
                .ok_or_else(|| "malformed rotation".to_string())?;
            if !is_decimal_literal(angle) {
                return Err(format!("angle `{angle}` is not a decimal literal"));
            }
            parse_qubit_ref(operand, n_qubits).ok_or("bad rotation operand")?;
            return Ok(());
        }
    }
    Err("unknown statement".to_string())
}

fn parse_index(s: &str) -> Option<usize> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) || (s.len() > 1 && s.starts_with('0'))
    {
        return None;
    }
    s.parse().ok()
}

fn parse_qubit_ref(s: &str, n_qubits: usize) -> Option<usize> {
    let idx = s.strip_prefix("q[")?.strip_suffix(']')?;
    parse_index(idx).filter(|&i| i < n_qubits)
}

fn is_decimal_literal(s: &str) -> bool {
    let s = s.strip_prefix('-').unwrap_or(s);
    match s.split_once('.') {
        Some((int, frac)) => {
            !int.is_empty()
                && !frac.is_empty()
                && int.bytes().all(|b| b.is_ascii_digit())
                && frac.bytes().all(|b| b.is_ascii_digit())
        }
        None => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_x_golden() {
        let mut c = Circuit::new(1, 0);
        c.x(0);
        let text = to_qasm(&c).unwrap();
        assert_eq!(
            text,
            "OPENQASM 3.0;\ninclude \"stdgates.inc\";\nqubit[1] q;\nbit c;\nx q[0];\nc = measure q[0];\n"
        );
        check_qasm(&text).unwrap();
    }

    #[test]
    fn invalid_circuit_is_refused() {
        let mut c = Circuit::new(2, 0);
        c.cx(1, 1);
        match to_qasm(&c) {
            Err(Error::InvalidCircuit(v)) => assert_eq!(v[0].gate_index, Some(0)),
            other => panic!("expected refusal, got {other:?}"),
        }
    }

    #[test]
    fn checker_rejects_malformed_files() {
        let good = "OPENQASM 3.0;\ninclude \"stdgates.inc\";\nqubit[2] q;\nbit c;\nry(0.5000) q[1];\ncx q[0], q[1];\nc = measure q[1];\n";
        check_qasm(good).unwrap();
        let bad = [
            good.replace("ry(0.5000)", "ry(5e-1)"),
            good.replace("q[1];\ncx", "q[2];\ncx"),
            good.replace("cx q[0], q[1]", "cx q[1], q[1]"),
            good.replace("OPENQASM 3.0;", "OPENQASM 2.0;"),
            good.trim_end().to_string(),
            format!("{good}\n"),
            good.replace("bit c;\n", ""),
            good.replace("cx q[0], q[1];", "h q[0];"),
        ];
        for text in bad {
            assert!(check_qasm(&text).is_err(), "accepted:\n{text}");
        }
    }
}
