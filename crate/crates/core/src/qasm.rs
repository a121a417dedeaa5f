//! OpenQASM 2.0 export and a reader for exactly the emitted subset.
//!
//! CRY is not in `qelib1.inc`'s baseline set, so it is written as
//! `ry(θ/2) t; cx c,t; ry(-θ/2) t; cx c,t;`. The reader keeps that expansion
//! as four gates rather than folding it back.

use std::fmt::Write as _;

use crate::circuit::{Circuit, Gate, RegisterLayout};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QasmDocument {
    pub text: String,
    /// Gate statements, excluding the final `measure`.
    pub gate_line_count: usize,
}

fn range_comment(name: &str, r: std::ops::Range<usize>) -> String {
    if r.is_empty() {
        format!("// {name}: none\n")
    } else {
        format!("// {name}: q[{}]..q[{}]\n", r.start, r.end - 1)
    }
}

pub fn export_qasm(circuit: &Circuit) -> QasmDocument {
    let layout = circuit.layout();
    let n = layout.n();
    let total = layout.total_qubits();
    let mut text = String::new();
    text.push_str("OPENQASM 2.0;\n");
    text.push_str("include \"qelib1.inc\";\n");
    let _ = writeln!(text, "// N-Queens marking circuit, n = {n}");
    text.push_str(&range_comment(
        "system qubits (cell r,c at r*n+c)",
        layout.system_range(),
    ));
    text.push_str(&range_comment(
        "column parity ancillas",
        layout.col_ancilla_range(),
    ));
    text.push_str(&range_comment(
        "diagonal ancillas",
        layout.diag_ancilla_range(),
    ));
    let _ = writeln!(text, "qreg q[{total}];");
    let _ = writeln!(text, "creg c[{total}];");

    let mut gate_line_count = 0;
    let mut emit = |text: &mut String, line: String| {
        text.push_str(&line);
        text.push('\n');
        gate_line_count += 1;
    };
    for g in circuit.gates() {
        match *g {
            Gate::X { target } => emit(&mut text, format!("x q[{target}];")),
            Gate::H { target } => emit(&mut text, format!("h q[{target}];")),
            Gate::Ry { theta, target } => emit(&mut text, format!("ry({theta}) q[{target}];")),
            Gate::Cx { control, target } => {
                emit(&mut text, format!("cx q[{control}],q[{target}];"))
            }
            Gate::Cz { control, target } => {
                emit(&mut text, format!("cz q[{control}],q[{target}];"))
            }
            Gate::Ccx {
                controls: [a, b],
                target,
            } => emit(&mut text, format!("ccx q[{a}],q[{b}],q[{target}];")),
            Gate::Cry {
                theta,
                control,
                target,
            } => {
                let half = theta / 2.0;
                emit(&mut text, format!("ry({half}) q[{target}];"));
                emit(&mut text, format!("cx q[{control}],q[{target}];"));
                emit(&mut text, format!("ry({}) q[{target}];", -half));
                emit(&mut text, format!("cx q[{control}],q[{target}];"));
            }
        }
    }
    text.push_str("measure q -> c;\n");
    QasmDocument {
        text,
        gate_line_count,
    }
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

/// `q[12]` -> 12
fn parse_qubit(tok: &str, line: usize) -> Result<usize> {
    tok.trim()
        .strip_prefix("q[")
        .and_then(|t| t.strip_suffix(']'))
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| parse_err(line, format!("expected q[<index>], found {tok:?}")))
}

fn parse_register(decl: &str, name: &str, line: usize) -> Result<usize> {
    decl.strip_prefix(name)
        .and_then(|t| t.strip_suffix(']'))
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| parse_err(line, format!("malformed register declaration {decl:?}")))
}

/// Reads a program produced by [`export_qasm`].
pub fn parse_qasm_subset(text: &str) -> Result<Circuit> {
    let mut layout: Option<RegisterLayout> = None;
    let mut cbits: Option<usize> = None;
    let mut gates = Vec::new();
    let mut seen_header = false;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split("//").next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let stmt = line
            .strip_suffix(';')
            .ok_or_else(|| parse_err(line_no, "missing ';'"))?
            .trim();
        if !seen_header {
            if stmt != "OPENQASM 2.0" {
                return Err(parse_err(line_no, "expected 'OPENQASM 2.0;' header"));
            }
            seen_header = true;
            continue;
        }
        if stmt == "include \"qelib1.inc\"" {
            continue;
        }
        if let Some(rest) = stmt.strip_prefix("qreg ") {
            let size = parse_register(rest.trim(), "q[", line_no)?;
            let l = RegisterLayout::from_total_qubits(size).ok_or_else(|| {
                parse_err(
                    line_no,
                    format!("{size} qubits is not a solver register size"),
                )
            })?;
            layout = Some(l);
            continue;
        }
        if let Some(rest) = stmt.strip_prefix("creg ") {
            cbits = Some(parse_register(rest.trim(), "c[", line_no)?);
            continue;
        }
        if stmt == "measure q -> c" {
            continue;
        }

        let l = layout.ok_or_else(|| parse_err(line_no, "gate before qreg declaration"))?;
        let (head, args) = stmt
            .split_once(' ')
            .ok_or_else(|| parse_err(line_no, format!("unrecognised statement {stmt:?}")))?;
        let operands = args
            .split(',')
            .map(|t| parse_qubit(t, line_no))
            .collect::<Result<Vec<_>>>()?;
        let (name, angle) = match head.split_once('(') {
            Some((name, rest)) => {
                let value = rest
                    .strip_suffix(')')
                    .and_then(|v| v.trim().parse::<f64>().ok())
                    .ok_or_else(|| parse_err(line_no, format!("bad parameter in {head:?}")))?;
                (name, Some(value))
            }
            None => (head, None),
        };
        let gate = match (name, angle, operands.as_slice()) {
            ("x", None, &[t]) => Gate::X { target: t },
            ("h", None, &[t]) => Gate::H { target: t },
            ("ry", Some(theta), &[t]) => Gate::Ry { theta, target: t },
            ("cx", None, &[c, t]) => Gate::Cx {
                control: c,
                target: t,
            },
            ("cz", None, &[c, t]) => Gate::Cz {
                control: c,
                target: t,
            },
            ("ccx", None, &[a, b, t]) => Gate::Ccx {
                controls: [a, b],
                target: t,
            },
            _ => {
                return Err(parse_err(
                    line_no,
                    format!("unsupported gate statement {stmt:?}"),
                ))
            }
        };
        gate.validate(l.total_qubits())
            .map_err(|e| parse_err(line_no, e.to_string()))?;
        gates.push(gate);
    }

    let layout =
        layout.ok_or_else(|| parse_err(text.lines().count().max(1), "no qreg declaration"))?;
    if let Some(c) = cbits {
        if c != layout.total_qubits() {
            return Err(parse_err(
                1,
                format!("creg size {c} differs from qreg size"),
            ));
        }
    }
    Circuit::new(layout, gates)
}
