//! Line-oriented circuit text format.
//!
//! ```text
//! # comments start with '#'
//! qubits 3
//! gate SQRTX matrix {"rows":2,"cols":2,"data":[[0.5,0.5],[0.5,-0.5],[0.5,-0.5],[0.5,0.5]]}
//! H 1
//! RZ(pi/4) 2
//! CNOT 1 3
//! SQRTX 2
//! ```
//!
//! The first non-comment line must be `qubits N`. Every following line is
//! either one gate (one time step) or a `gate NAME matrix <json>` declaration
//! of a custom unitary. Angles accept plain numbers and products/quotients
//! involving `pi`, e.g. `-pi/4` or `0.5*pi`.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::fmt::Write as _;

use thiserror::Error;

use super::{builtin_signature, Circuit, GateOp};
use crate::linalg::ComplexMatrix;

/// What went wrong on a line. [`ParseErrorKind::code`] gives a stable
/// machine-readable identifier.
#[derive(Clone, Debug, PartialEq, Error)]
pub enum ParseErrorKind {
    #[error("missing `qubits N` header")]
    MissingHeader,
    #[error("malformed header: {0}")]
    MalformedHeader(String),
    #[error("duplicate `qubits` header")]
    DuplicateHeader,
    #[error("unknown gate {0:?}")]
    UnknownGate(String),
    #[error("target {target} is outside 1..={n}")]
    TargetOutOfRange { target: usize, n: usize },
    #[error("qubit {0} listed twice")]
    DuplicateTarget(usize),
    #[error("malformed number {0:?}")]
    MalformedNumber(String),
    #[error("gate {gate} acts on {expected} qubit(s), got {got}")]
    WrongArity { gate: String, expected: usize, got: usize },
    #[error("gate {gate} takes {expected} parameter(s), got {got}")]
    WrongParamCount { gate: String, expected: usize, got: usize },
    #[error("invalid custom gate: {0}")]
    InvalidCustomGate(String),
    #[error("syntax error: {0}")]
    Syntax(String),
}

impl ParseErrorKind {
    pub fn code(&self) -> &'static str {
        match self {
            ParseErrorKind::MissingHeader => "missing_header",
            ParseErrorKind::MalformedHeader(_) => "malformed_header",
            ParseErrorKind::DuplicateHeader => "duplicate_header",
            ParseErrorKind::UnknownGate(_) => "unknown_gate",
            ParseErrorKind::TargetOutOfRange { .. } => "target_out_of_range",
            ParseErrorKind::DuplicateTarget(_) => "duplicate_target",
            ParseErrorKind::MalformedNumber(_) => "malformed_number",
            ParseErrorKind::WrongArity { .. } => "wrong_arity",
            ParseErrorKind::WrongParamCount { .. } => "wrong_param_count",
            ParseErrorKind::InvalidCustomGate(_) => "invalid_custom_gate",
            ParseErrorKind::Syntax(_) => "syntax",
        }
    }
}

/// A parse failure with its 1-based line number.
#[derive(Clone, Debug, PartialEq, Error)]
#[error("line {line}: {kind} [{}]", kind.code())]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

type LineResult<T> = std::result::Result<T, ParseErrorKind>;

/// Parses the circuit text format into a validated [`Circuit`].
pub fn parse_circuit(text: &str) -> Result<Circuit, ParseError> {
    let mut n: Option<usize> = None;
    let mut customs: HashMap<String, ComplexMatrix> = HashMap::new();
    let mut ops = Vec::new();
    let mut last_line = 1;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let at = |kind| ParseError { line: line_no, kind };
        let mut words = line.split_whitespace();
        let head = words.next().unwrap_or_default();

        if head == "qubits" {
            if n.is_some() {
                return Err(at(ParseErrorKind::DuplicateHeader));
            }
            n = Some(parse_header(words.collect()).map_err(at)?);
            continue;
        }
        let Some(n) = n else {
            return Err(at(ParseErrorKind::MissingHeader));
        };
        if head == "gate" {
            let (name, matrix) = parse_declaration(line).map_err(at)?;
            if customs.contains_key(&name) {
                return Err(at(ParseErrorKind::InvalidCustomGate(format!(
                    "{name} declared twice"
                ))));
            }
            customs.insert(name, matrix);
            continue;
        }
        ops.push(parse_gate_line(line, n, &customs).map_err(at)?);
    }

    match n {
        Some(n) => Ok(Circuit { n, ops }),
        None => Err(ParseError { line: last_line, kind: ParseErrorKind::MissingHeader }),
    }
}

fn parse_header(args: Vec<&str>) -> LineResult<usize> {
    match args.as_slice() {
        [count] => match count.parse::<usize>() {
            Ok(0) => Err(ParseErrorKind::MalformedHeader("qubit count must be positive".into())),
            Ok(n) => Ok(n),
            Err(_) => Err(ParseErrorKind::MalformedNumber(count.to_string())),
        },
        _ => Err(ParseErrorKind::MalformedHeader("expected `qubits N`".into())),
    }
}

fn parse_declaration(line: &str) -> LineResult<(String, ComplexMatrix)> {
    let rest = line["gate".len()..].trim_start();
    let (name, rest) = split_identifier(rest)
        .ok_or_else(|| ParseErrorKind::Syntax("expected a gate name after `gate`".into()))?;
    let json = rest
        .trim_start()
        .strip_prefix("matrix")
        .ok_or_else(|| ParseErrorKind::Syntax("expected `gate NAME matrix <json>`".into()))?;
    if builtin_signature(&name.to_ascii_uppercase()).is_some() {
        return Err(ParseErrorKind::InvalidCustomGate(format!("{name} shadows a built-in gate")));
    }
    let matrix: ComplexMatrix = serde_json::from_str(json.trim())
        .map_err(|e| ParseErrorKind::InvalidCustomGate(e.to_string()))?;
    if !matrix.is_square() || !matrix.rows().is_power_of_two() || matrix.rows() < 2 {
        return Err(ParseErrorKind::InvalidCustomGate(format!(
            "{name} must be 2^k x 2^k with k >= 1"
        )));
    }
    let deviation = matrix.unitarity_deviation();
    if deviation > crate::linalg::DEFAULT_TOL {
        return Err(ParseErrorKind::InvalidCustomGate(format!(
            "{name} is not unitary (deviation {deviation:e})"
        )));
    }
    Ok((name.to_string(), matrix))
}

fn split_identifier(s: &str) -> Option<(&str, &str)> {
    let end = s
        .char_indices()
        .find(|(_, c)| !(c.is_ascii_alphanumeric() || *c == '_'))
        .map_or(s.len(), |(i, _)| i);
    let first = s.chars().next()?;
    if end == 0 || !(first.is_ascii_alphabetic() || first == '_') {
        return None;
    }
    Some((&s[..end], &s[end..]))
}

fn parse_gate_line(
    line: &str,
    n: usize,
    customs: &HashMap<String, ComplexMatrix>,
) -> LineResult<GateOp> {
    let (name, rest) = split_identifier(line)
        .ok_or_else(|| ParseErrorKind::Syntax(format!("expected a gate name in {line:?}")))?;
    let upper = name.to_ascii_uppercase();
    let custom = customs.get(name);
    let signature = builtin_signature(&upper);
    if custom.is_none() && signature.is_none() {
        return Err(ParseErrorKind::UnknownGate(name.to_string()));
    }

    let mut rest = rest.trim_start();
    let mut params = Vec::new();
    if let Some(inner) = rest.strip_prefix('(') {
        let close = inner
            .find(')')
            .ok_or_else(|| ParseErrorKind::Syntax("unclosed parameter list".into()))?;
        for p in inner[..close].split(',') {
            params.push(parse_angle(p).ok_or_else(|| ParseErrorKind::MalformedNumber(p.trim().into()))?);
        }
        rest = &inner[close + 1..];
    }

    let mut targets = Vec::new();
    for word in rest.split_whitespace() {
        let t: usize =
            word.parse().map_err(|_| ParseErrorKind::MalformedNumber(word.to_string()))?;
        if t == 0 || t > n {
            return Err(ParseErrorKind::TargetOutOfRange { target: t, n });
        }
        if targets.contains(&t) {
            return Err(ParseErrorKind::DuplicateTarget(t));
        }
        targets.push(t);
    }

    let (arity, nparams) = match (custom, signature) {
        (Some(m), _) => (m.rows().trailing_zeros() as usize, 0),
        (None, Some(sig)) => sig,
        (None, None) => unreachable!(),
    };
    if params.len() != nparams {
        return Err(ParseErrorKind::WrongParamCount {
            gate: name.to_string(),
            expected: nparams,
            got: params.len(),
        });
    }
    if targets.len() != arity {
        return Err(ParseErrorKind::WrongArity {
            gate: name.to_string(),
            expected: arity,
            got: targets.len(),
        });
    }

    let op = match custom {
        Some(m) => GateOp::custom(name, m.clone(), &targets),
        None => GateOp::builtin(&upper, &targets, &params),
    };
    // Every condition GateOp checks has been checked above.
    op.map_err(|e| ParseErrorKind::Syntax(e.to_string()))
}

/// Parses `[+-] factor ((*|/) factor)*` where a factor is a number or `pi`.
fn parse_angle(text: &str) -> Option<f64> {
    let s = text.trim();
    let (sign, body) = match s.as_bytes().first()? {
        b'-' => (-1.0, &s[1..]),
        b'+' => (1.0, &s[1..]),
        _ => (1.0, s),
    };
    let mut value = 1.0;
    let mut op = '*';
    let mut start = 0;
    let bytes = body.as_bytes();
    for i in 0..=bytes.len() {
        if i < bytes.len() && bytes[i] != b'*' && bytes[i] != b'/' {
            continue;
        }
        let factor = parse_factor(&body[start..i])?;
        value = if op == '*' { value * factor } else { value / factor };
        if i < bytes.len() {
            op = bytes[i] as char;
        }
        start = i + 1;
    }
    let v = sign * value;
    v.is_finite().then_some(v)
}

fn parse_factor(s: &str) -> Option<f64> {
    let s = s.trim();
    if s.eq_ignore_ascii_case("pi") || s == "π" {
        return Some(PI);
    }
    // Reject forms f64::from_str accepts but the format does not.
    if s.is_empty() || s.chars().any(|c| c.is_ascii_alphabetic() && c != 'e' && c != 'E') {
        return None;
    }
    s.parse::<f64>().ok().filter(|v| v.is_finite())
}

/// Serialises a circuit into the text format; [`parse_circuit`] inverts it.
pub fn render_circuit(c: &Circuit) -> String {
    let mut out = String::new();
    writeln!(out, "qubits {}", c.n()).expect("writing to a String");
    let mut declared: Vec<&str> = Vec::new();
    for op in c.ops() {
        if let Some(m) = op.custom_matrix() {
            if !declared.contains(&op.name()) {
                declared.push(op.name());
                let json = serde_json::to_string(m).expect("matrix serialises");
                writeln!(out, "gate {} matrix {json}", op.name()).expect("writing to a String");
            }
        }
    }
    for op in c.ops() {
        writeln!(out, "{op}").expect("writing to a String");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kind(text: &str) -> (usize, &'static str) {
        let err = parse_circuit(text).unwrap_err();
        (err.line, err.kind.code())
    }

    #[test]
    fn bell_text() {
        let c = parse_circuit("qubits 2\nH 1\nCNOT 1 2").unwrap();
        assert_eq!(c.n(), 2);
        assert_eq!(c.ops().len(), 2);
        assert_eq!(c.ops()[0], GateOp::builtin("H", &[1], &[]).unwrap());
        assert_eq!(c.ops()[1], GateOp::builtin("CNOT", &[1, 2], &[]).unwrap());
    }

    #[test]
    fn error_codes_and_lines() {
        assert_eq!(kind("qubits 1\nFOO 1"), (2, "unknown_gate"));
        assert_eq!(kind("qubits 2\nCNOT 1 1"), (2, "duplicate_target"));
        assert_eq!(kind("qubits 2\nX 3"), (2, "target_out_of_range"));
        assert_eq!(kind("qubits 2\nX 0"), (2, "target_out_of_range"));
        assert_eq!(kind("qubits 2\nRX(abc) 1"), (2, "malformed_number"));
        assert_eq!(kind("qubits 2\nX one"), (2, "malformed_number"));
        assert_eq!(kind("# hi\nH 1"), (2, "missing_header"));
        assert_eq!(kind(""), (1, "missing_header"));
        assert_eq!(kind("qubits x"), (1, "malformed_number"));
        assert_eq!(kind("qubits 2\nqubits 2"), (2, "duplicate_header"));
        assert_eq!(kind("qubits 2\nCNOT 1"), (2, "wrong_arity"));
        assert_eq!(kind("qubits 2\nRX 1"), (2, "wrong_param_count"));
        assert_eq!(kind("qubits 2\nH(0.1) 1"), (2, "wrong_param_count"));
        assert_eq!(
            kind("qubits 1\ngate G matrix {\"rows\":2,\"cols\":2,\"data\":[[2,0],[0,0],[0,0],[1,0]]}"),
            (2, "invalid_custom_gate")
        );
        assert_eq!(kind("qubits 1\ngate H matrix {}"), (2, "invalid_custom_gate"));
    }

    #[test]
    fn comments_blank_lines_and_case() {
        let c = parse_circuit("# Bell pair\n\nqubits 2   # two\n  h 1 # first\ncnot 1 2\n").unwrap();
        assert_eq!(c.ops()[0].name(), "H");
        assert_eq!(c.ops()[1].name(), "CNOT");
    }

    #[test]
    fn angle_expressions() {
        let c = parse_circuit("qubits 1\nRZ(pi/4) 1\nRX(-0.5*pi) 1\nRY(1e-3) 1\nPHASE(2*pi/3) 1").unwrap();
        let ps: Vec<f64> = c.ops().iter().map(|o| o.params()[0]).collect();
        assert_eq!(ps, vec![PI / 4.0, -0.5 * PI, 1e-3, 2.0 * PI / 3.0]);
        assert!(parse_angle("pi/0").is_none());
        assert!(parse_angle("inf").is_none());
        assert!(parse_angle("nan").is_none());
        assert!(parse_angle("").is_none());
        assert!(parse_angle("2**pi").is_none());
    }

    #[test]
    fn custom_gate_declaration() {
        let text = "qubits 2\ngate SX matrix {\"rows\":2,\"cols\":2,\"data\":[[0.5,0.5],[0.5,-0.5],[0.5,-0.5],[0.5,0.5]]}\nSX 2\n";
        let c = parse_circuit(text).unwrap();
        assert_eq!(c.ops()[0].name(), "SX");
        assert!(c.ops()[0].custom_matrix().is_some());
        assert_eq!(render_circuit(&c), text);
        assert_eq!(kind("qubits 2\ngate SX matrix {\"rows\":2,\"cols\":2,\"data\":[[0.5,0.5],[0.5,-0.5],[0.5,-0.5],[0.5,0.5]]}\nSX 1 2"), (3, "wrong_arity"));
    }

    #[test]
    fn render_is_parse_inverse_on_examples() {
        let text = "qubits 3\nH 1\nRZ(0.25) 2\nCCNOT 1 2 3\nPHASE(-1.5) 3\n";
        let c = parse_circuit(text).unwrap();
        assert_eq!(render_circuit(&c), text);
    }
}
