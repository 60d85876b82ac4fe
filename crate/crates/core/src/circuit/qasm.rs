//! Reader for the OpenQASM 2.0 subset the pipeline consumes: one `qreg`, the
//! gates h/x/y/z/s/sdg/t/tdg/rz/cx/cz, with `measure`, `barrier`, `creg`,
//! headers, and comments ignored.

use super::{Circuit, CircuitError, Gate, Phase, PARSE_MAX_DEN};

/// Parse an OpenQASM 2.0 fragment into a [`Circuit`]. `rz` angles are
/// recovered as exact rational multiples of π when the literal is within
/// 1e-12 of one, otherwise approximated with denominator ≤ 2^20.
pub fn parse_qasm(text: &str) -> Result<Circuit, CircuitError> {
    let mut reg: Option<(String, usize)> = None;
    let mut gates: Vec<Gate> = Vec::new();

    for (line_no, raw_line) in text.lines().enumerate() {
        let line = strip_comment(raw_line);
        for stmt in line.split(';') {
            let stmt = stmt.trim();
            if stmt.is_empty() {
                continue;
            }
            parse_statement(stmt, line_no + 1, &mut reg, &mut gates)?;
        }
    }

    let (_, n) = reg.ok_or(CircuitError::Parse {
        line: 0,
        message: "missing qreg declaration".into(),
    })?;
    Circuit::from_gates(n, gates)
}

fn strip_comment(line: &str) -> &str {
    match line.find("//") {
        Some(pos) => &line[..pos],
        None => line,
    }
}

fn err(line: usize, message: impl Into<String>) -> CircuitError {
    CircuitError::Parse { line, message: message.into() }
}

fn parse_statement(
    stmt: &str,
    line: usize,
    reg: &mut Option<(String, usize)>,
    gates: &mut Vec<Gate>,
) -> Result<(), CircuitError> {
    let (head, rest) = match stmt.find(|c: char| c.is_whitespace() || c == '(') {
        Some(pos) => (&stmt[..pos], stmt[pos..].trim_start()),
        None => (stmt, ""),
    };

    match head.to_ascii_lowercase().as_str() {
        "openqasm" | "include" | "barrier" | "measure" | "creg" => Ok(()),
        "qreg" => {
            if reg.is_some() {
                return Err(err(line, "multiple qreg declarations"));
            }
            let (name, size) = parse_indexed(rest, line)?;
            if size == 0 {
                return Err(err(line, "qreg must have at least one qubit"));
            }
            *reg = Some((name, size));
            Ok(())
        }
        gate => {
            let (_, n) = reg
                .as_ref()
                .ok_or_else(|| err(line, "gate before qreg declaration"))?;
            let n = *n;
            let g = parse_gate(gate, rest, n, line)?;
            gates.push(g);
            Ok(())
        }
    }
}

/// Parse `name[k]` returning the register name and index/size.
fn parse_indexed(s: &str, line: usize) -> Result<(String, usize), CircuitError> {
    let s = s.trim();
    let open = s.find('[').ok_or_else(|| err(line, format!("expected name[k], got {s:?}")))?;
    let close = s.find(']').ok_or_else(|| err(line, format!("expected name[k], got {s:?}")))?;
    if close < open {
        return Err(err(line, format!("malformed index in {s:?}")));
    }
    let name = s[..open].trim().to_string();
    let idx: usize = s[open + 1..close]
        .trim()
        .parse()
        .map_err(|_| err(line, format!("bad index in {s:?}")))?;
    Ok((name, idx))
}

fn parse_gate(
    name: &str,
    rest: &str,
    n_qubits: usize,
    line: usize,
) -> Result<Gate, CircuitError> {
    // split off a parenthesized argument if present: "(expr) q[0]"
    let (param, args) = if let Some(stripped) = rest.strip_prefix('(') {
        let close = stripped
            .find(')')
            .ok_or_else(|| err(line, "unterminated gate parameter"))?;
        (Some(stripped[..close].trim()), stripped[close + 1..].trim())
    } else {
        (None, rest)
    };

    let mut qubits = Vec::new();
    for arg in args.split(',').filter(|a| !a.trim().is_empty()) {
        let (_, idx) = parse_indexed(arg, line)?;
        if idx >= n_qubits {
            return Err(err(line, format!("qubit index {idx} out of range (qreg size {n_qubits})")));
        }
        qubits.push(idx);
    }

    let expect = |count: usize| -> Result<(), CircuitError> {
        if qubits.len() == count {
            Ok(())
        } else {
            Err(err(line, format!("gate {name} expects {count} qubit(s), got {}", qubits.len())))
        }
    };

    let gate = match name {
        "h" => {
            expect(1)?;
            Gate::h(qubits[0])
        }
        "x" => {
            expect(1)?;
            Gate::x(qubits[0])
        }
        "y" => {
            expect(1)?;
            Gate::y(qubits[0])
        }
        "z" => {
            expect(1)?;
            Gate::z(qubits[0])
        }
        "s" => {
            expect(1)?;
            Gate::s(qubits[0])
        }
        "sdg" => {
            expect(1)?;
            Gate::sdg(qubits[0])
        }
        "t" => {
            expect(1)?;
            Gate::t(qubits[0])
        }
        "tdg" => {
            expect(1)?;
            Gate::tdg(qubits[0])
        }
        "rz" | "u1" => {
            expect(1)?;
            let expr = param.ok_or_else(|| err(line, "rz requires an angle parameter"))?;
            Gate::rz(parse_angle(expr, line)?, qubits[0])
        }
        "cx" | "cnot" => {
            expect(2)?;
            if qubits[0] == qubits[1] {
                return Err(err(line, "cx requires distinct qubits"));
            }
            Gate::cx(qubits[0], qubits[1])
        }
        "cz" => {
            expect(2)?;
            if qubits[0] == qubits[1] {
                return Err(err(line, "cz requires distinct qubits"));
            }
            Gate::cz(qubits[0], qubits[1])
        }
        other => return Err(err(line, format!("unknown gate {other:?}"))),
    };
    Ok(gate)
}

/// Evaluate the angle expressions that show up in qasm files:
/// `0.785`, `pi`, `-pi/4`, `3*pi/4`, `0.5*pi`, `7/2`.
fn parse_angle(expr: &str, line: usize) -> Result<Phase, CircuitError> {
    let compact: String = expr.chars().filter(|c| !c.is_whitespace()).collect();
    let (negated, body) = match compact.strip_prefix('-') {
        Some(b) => (true, b),
        None => (false, compact.as_str()),
    };

    // split an optional "/denominator" suffix
    let (lhs, den) = match body.rsplit_once('/') {
        Some((l, d)) => {
            let den: f64 = d
                .parse()
                .map_err(|_| err(line, format!("bad angle denominator in {expr:?}")))?;
            (l, den)
        }
        None => (body, 1.0),
    };

    // lhs is "pi", "k*pi", "pi*k", or a bare numeric literal
    let (coeff, has_pi) = if lhs == "pi" {
        (1.0, true)
    } else if let Some(k) = lhs.strip_suffix("*pi") {
        let k: f64 = k.parse().map_err(|_| err(line, format!("bad angle {expr:?}")))?;
        (k, true)
    } else if let Some(k) = lhs.strip_prefix("pi*") {
        let k: f64 = k.parse().map_err(|_| err(line, format!("bad angle {expr:?}")))?;
        (k, true)
    } else {
        let k: f64 = lhs.parse().map_err(|_| err(line, format!("bad angle {expr:?}")))?;
        (k, false)
    };

    let sign = if negated { -1.0 } else { 1.0 };
    let radians = if has_pi {
        sign * coeff * std::f64::consts::PI / den
    } else {
        sign * coeff / den
    };

    Ok(Phase::try_exact_radians(radians, 1e-12)
        .unwrap_or_else(|| Phase::from_radians(radians, PARSE_MAX_DEN)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn literal_transcription() {
        let c = parse_qasm("qreg q[2]; h q[0]; cx q[0],q[1];").unwrap();
        assert_eq!(c.n_qubits, 2);
        assert_eq!(c.gates, vec![Gate::h(0), Gate::cx(0, 1)]);
    }

    #[test]
    fn empty_body() {
        let c = parse_qasm("qreg q[1];").unwrap();
        assert_eq!(c.n_qubits, 1);
        assert!(c.gates.is_empty());
    }

    #[test]
    fn float_angle_snaps_to_pi_over_4() {
        let c = parse_qasm("qreg q[1]; rz(0.7853981633974483) q[0];").unwrap();
        assert_eq!(c.gates, vec![Gate::rz(Phase::new(1, 4), 0)]);
    }

    #[test]
    fn symbolic_pi_expressions() {
        let c = parse_qasm("qreg q[1]; rz(pi) q[0]; rz(-pi/2) q[0]; rz(3*pi/4) q[0];").unwrap();
        assert_eq!(
            c.gates,
            vec![
                Gate::rz(Phase::new(1, 1), 0),
                Gate::rz(Phase::new(-1, 2), 0),
                Gate::rz(Phase::new(3, 4), 0),
            ]
        );
    }

    #[test]
    fn irrational_angle_kept_as_approximation() {
        let c = parse_qasm("qreg q[1]; rz(0.7) q[0];").unwrap();
        match &c.gates[0] {
            Gate::Rz { phase, .. } => {
                assert!(phase.denom() > 2);
                assert!((phase.radians_concrete() - 0.7).abs() < 1e-5);
            }
            other => panic!("expected rz, got {other:?}"),
        }
    }

    #[test]
    fn header_measure_barrier_comments_ignored() {
        let text = r#"
            OPENQASM 2.0;
            include "qelib1.inc";
            qreg q[2];
            creg c[2];
            h q[0]; // a comment
            barrier q[0], q[1];
            cz q[0], q[1];
            measure q[0] -> c[0];
        "#;
        let c = parse_qasm(text).unwrap();
        assert_eq!(c.gates, vec![Gate::h(0), Gate::cz(0, 1)]);
    }

    #[test]
    fn error_cases() {
        assert!(matches!(
            parse_qasm("h q[0];"),
            Err(CircuitError::Parse { message, .. }) if message.contains("qreg")
        ));
        assert!(parse_qasm("qreg q[2]; foo q[0];").is_err());
        assert!(parse_qasm("qreg q[2]; cx q[1],q[1];").is_err());
        assert!(parse_qasm("qreg q[2]; h q[2];").is_err());
        assert!(parse_qasm("").is_err());
    }
}
