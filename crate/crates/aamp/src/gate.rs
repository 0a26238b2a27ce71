//! Gates, circuits and the line-oriented text IR.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Gate vocabulary. Rotation and phase kinds carry an angle in the [`GateOp`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum GateKind {
    X,
    H,
    Ry,
    Rz,
    Ps,
    Cnot,
    Swap,
    Mcps,
    Mcz,
    Mcry,
}

impl GateKind {
    pub fn name(self) -> &'static str {
        match self {
            GateKind::X => "X",
            GateKind::H => "H",
            GateKind::Ry => "RY",
            GateKind::Rz => "RZ",
            GateKind::Ps => "PS",
            GateKind::Cnot => "CNOT",
            GateKind::Swap => "SWAP",
            GateKind::Mcps => "MCPS",
            GateKind::Mcz => "MCZ",
            GateKind::Mcry => "MCRY",
        }
    }

    fn from_name(s: &str) -> Option<Self> {
        Some(match s {
            "X" => GateKind::X,
            "H" => GateKind::H,
            "RY" => GateKind::Ry,
            "RZ" => GateKind::Rz,
            "PS" => GateKind::Ps,
            "CNOT" => GateKind::Cnot,
            "SWAP" => GateKind::Swap,
            "MCPS" => GateKind::Mcps,
            "MCZ" => GateKind::Mcz,
            "MCRY" => GateKind::Mcry,
            _ => return None,
        })
    }

    fn has_angle(self) -> bool {
        matches!(
            self,
            GateKind::Ry | GateKind::Rz | GateKind::Ps | GateKind::Mcps | GateKind::Mcry
        )
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One gate application: kind, optional angle, control and target qubits.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GateOp {
    pub kind: GateKind,
    pub angle: Option<f64>,
    pub controls: Vec<usize>,
    pub targets: Vec<usize>,
}

impl GateOp {
    pub fn x(q: usize) -> Self {
        Self { kind: GateKind::X, angle: None, controls: vec![], targets: vec![q] }
    }

    pub fn h(q: usize) -> Self {
        Self { kind: GateKind::H, angle: None, controls: vec![], targets: vec![q] }
    }

    pub fn ry(q: usize, theta: f64) -> Self {
        Self { kind: GateKind::Ry, angle: Some(theta), controls: vec![], targets: vec![q] }
    }

    pub fn rz(q: usize, theta: f64) -> Self {
        Self { kind: GateKind::Rz, angle: Some(theta), controls: vec![], targets: vec![q] }
    }

    pub fn ps(q: usize, phi: f64) -> Self {
        Self { kind: GateKind::Ps, angle: Some(phi), controls: vec![], targets: vec![q] }
    }

    pub fn cnot(control: usize, target: usize) -> Self {
        Self { kind: GateKind::Cnot, angle: None, controls: vec![control], targets: vec![target] }
    }

    pub fn swap(a: usize, b: usize) -> Self {
        Self { kind: GateKind::Swap, angle: None, controls: vec![], targets: vec![a, b] }
    }

    /// Phase `e^{i phi}` on the all-ones state of `controls + target`.
    pub fn mcps(controls: Vec<usize>, target: usize, phi: f64) -> Self {
        Self { kind: GateKind::Mcps, angle: Some(phi), controls, targets: vec![target] }
    }

    /// Multi-controlled Z; identical to `mcps(.., pi)` under simulation.
    pub fn mcz(controls: Vec<usize>, target: usize) -> Self {
        Self { kind: GateKind::Mcz, angle: None, controls, targets: vec![target] }
    }

    pub fn mcry(controls: Vec<usize>, target: usize, theta: f64) -> Self {
        Self { kind: GateKind::Mcry, angle: Some(theta), controls, targets: vec![target] }
    }

    /// All qubits the gate touches, controls first.
    pub fn touched(&self) -> impl Iterator<Item = usize> + '_ {
        self.controls.iter().chain(self.targets.iter()).copied()
    }

    /// The inverse gate (angles negated; self-inverse kinds unchanged).
    pub fn inverse(&self) -> GateOp {
        let mut op = self.clone();
        if let Some(a) = op.angle {
            op.angle = Some(-a);
        }
        op
    }

    fn expected_targets(&self) -> usize {
        match self.kind {
            GateKind::Swap => 2,
            _ => 1,
        }
    }

    fn validate(&self, n_qubits: usize) -> Result<()> {
        if self.kind.has_angle() != self.angle.is_some() {
            return Err(Error::MalformedGate(format!(
                "{} {} an angle",
                self.kind,
                if self.kind.has_angle() { "requires" } else { "does not take" }
            )));
        }
        if self.targets.len() != self.expected_targets() {
            return Err(Error::MalformedGate(format!(
                "{} takes {} target(s), got {}",
                self.kind,
                self.expected_targets(),
                self.targets.len()
            )));
        }
        let controls_ok = match self.kind {
            GateKind::Cnot => self.controls.len() == 1,
            GateKind::Mcps | GateKind::Mcz | GateKind::Mcry => true,
            _ => self.controls.is_empty(),
        };
        if !controls_ok {
            return Err(Error::MalformedGate(format!(
                "{} has an invalid control list of length {}",
                self.kind,
                self.controls.len()
            )));
        }
        for &q in self.controls.iter().chain(self.targets.iter()) {
            if q >= n_qubits {
                return Err(Error::QubitIndexOutOfBounds { index: q, n_qubits });
            }
        }
        let mut seen = vec![false; n_qubits];
        for q in self.touched() {
            if seen[q] {
                return Err(Error::MalformedGate(format!(
                    "qubit {q} appears more than once in {}",
                    self.kind
                )));
            }
            seen[q] = true;
        }
        Ok(())
    }
}

/// Ordered gate list over a fixed-size register.
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    n_qubits: usize,
    ops: Vec<GateOp>,
}

impl Circuit {
    pub fn new(n_qubits: usize) -> Self {
        Self { n_qubits, ops: Vec::new() }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn ops(&self) -> &[GateOp] {
        &self.ops
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn push(&mut self, op: GateOp) -> Result<()> {
        op.validate(self.n_qubits)?;
        self.ops.push(op);
        Ok(())
    }

    pub fn extend(&mut self, ops: impl IntoIterator<Item = GateOp>) -> Result<()> {
        for op in ops {
            self.push(op)?;
        }
        Ok(())
    }

    /// Appends all ops of `other`, which must have the same register size.
    pub fn append(&mut self, other: &Circuit) -> Result<()> {
        if other.n_qubits != self.n_qubits {
            return Err(Error::DimensionMismatch {
                left: self.n_qubits,
                right: other.n_qubits,
            });
        }
        self.ops.extend_from_slice(&other.ops);
        Ok(())
    }

    /// The inverse circuit: reversed order, each gate inverted.
    pub fn inverse(&self) -> Circuit {
        Circuit {
            n_qubits: self.n_qubits,
            ops: self.ops.iter().rev().map(GateOp::inverse).collect(),
        }
    }

    /// Re-bases a circuit onto a larger register, shifting every qubit index
    /// by `offset`.
    pub fn embed(&self, n_qubits: usize, offset: usize) -> Result<Circuit> {
        if offset + self.n_qubits > n_qubits {
            return Err(Error::QubitIndexOutOfBounds {
                index: offset + self.n_qubits - 1,
                n_qubits,
            });
        }
        let mut out = Circuit::new(n_qubits);
        for op in &self.ops {
            let mut shifted = op.clone();
            for q in shifted.controls.iter_mut().chain(shifted.targets.iter_mut()) {
                *q += offset;
            }
            out.push(shifted)?;
        }
        Ok(out)
    }

    /// Serializes to the line-oriented text IR.
    pub fn to_ir(&self) -> String {
        use std::fmt::Write;
        let mut out = String::new();
        let _ = writeln!(out, "QUBITS {}", self.n_qubits);
        for op in &self.ops {
            let _ = write!(out, "GATE {}", op.kind);
            if let Some(a) = op.angle {
                let _ = write!(out, " {a}");
            }
            let _ = writeln!(
                out,
                " controls=[{}] targets=[{}]",
                join(&op.controls),
                join(&op.targets)
            );
        }
        out
    }

    /// Parses the text IR produced by [`Circuit::to_ir`].
    pub fn from_ir(text: &str) -> Result<Circuit> {
        let mut circuit: Option<Circuit> = None;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut tokens = line.split_whitespace();
            match tokens.next() {
                Some("QUBITS") => {
                    let n = tokens
                        .next()
                        .and_then(|t| t.parse::<usize>().ok())
                        .ok_or_else(|| Error::Parse {
                            line: line_no,
                            message: "expected `QUBITS <n>`".into(),
                        })?;
                    circuit = Some(Circuit::new(n));
                }
                Some("GATE") => {
                    let circuit = circuit.as_mut().ok_or_else(|| Error::Parse {
                        line: line_no,
                        message: "GATE before QUBITS header".into(),
                    })?;
                    let op = parse_gate_line(tokens, line_no)?;
                    circuit.push(op).map_err(|e| Error::Parse {
                        line: line_no,
                        message: e.to_string(),
                    })?;
                }
                Some(other) => {
                    return Err(Error::Parse {
                        line: line_no,
                        message: format!("unknown directive {other:?}"),
                    })
                }
                None => unreachable!(),
            }
        }
        circuit.ok_or_else(|| Error::Parse {
            line: 0,
            message: "missing QUBITS header".into(),
        })
    }
}

fn join(qs: &[usize]) -> String {
    qs.iter()
        .map(|q| q.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn parse_qubit_list(token: &str, key: &str, line: usize) -> Result<Vec<usize>> {
    let body = token
        .strip_prefix(key)
        .and_then(|t| t.strip_prefix('['))
        .and_then(|t| t.strip_suffix(']'))
        .ok_or_else(|| Error::Parse {
            line,
            message: format!("expected `{key}[...]`, got {token:?}"),
        })?;
    if body.is_empty() {
        return Ok(vec![]);
    }
    body.split(',')
        .map(|t| {
            t.trim().parse::<usize>().map_err(|_| Error::Parse {
                line,
                message: format!("invalid qubit index {t:?}"),
            })
        })
        .collect()
}

fn parse_gate_line<'a>(
    mut tokens: impl Iterator<Item = &'a str>,
    line: usize,
) -> Result<GateOp> {
    let kind_tok = tokens.next().ok_or_else(|| Error::Parse {
        line,
        message: "missing gate kind".into(),
    })?;
    let kind = GateKind::from_name(kind_tok).ok_or_else(|| Error::Parse {
        line,
        message: format!("unknown gate kind {kind_tok:?}"),
    })?;
    let mut angle = None;
    let mut next = tokens.next();
    if kind.has_angle() {
        let tok = next.ok_or_else(|| Error::Parse {
            line,
            message: format!("{kind} requires an angle"),
        })?;
        angle = Some(tok.parse::<f64>().map_err(|_| Error::Parse {
            line,
            message: format!("invalid angle {tok:?}"),
        })?);
        next = tokens.next();
    }
    let controls_tok = next.ok_or_else(|| Error::Parse {
        line,
        message: "missing controls=[...]".into(),
    })?;
    let controls = parse_qubit_list(controls_tok, "controls=", line)?;
    let targets_tok = tokens.next().ok_or_else(|| Error::Parse {
        line,
        message: "missing targets=[...]".into(),
    })?;
    let targets = parse_qubit_list(targets_tok, "targets=", line)?;
    Ok(GateOp { kind, angle, controls, targets })
}
