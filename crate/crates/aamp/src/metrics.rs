//! Circuit resource metrics: greedy depth layering, gate tallies, analytic
//! depth formulas, and an ancilla-free decomposition of multi-controlled
//! phase and rotation gates into `{PS, RY, CNOT, ...}`.
//!
//! Depth counts every gate, including multi-controlled ones, as occupying a
//! single time step on all its qubits; a gate's layer is one past the deepest
//! layer among the qubits it touches.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::amplify::{iterations_eqaaa, iterations_qaaa, EXACT_THRESHOLD};
use crate::error::{Error, Result};
use crate::gate::{Circuit, GateKind, GateOp};
use crate::sim::unitary_of;

/// Gate count, depth and per-kind tallies of a circuit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DepthReport {
    pub gate_count: usize,
    pub depth: usize,
    pub per_kind: BTreeMap<String, usize>,
}

/// Incremental greedy layering over a fixed register.
struct LayerTally {
    qubit_layer: Vec<usize>,
    depth: usize,
    gate_count: usize,
    per_kind: BTreeMap<String, usize>,
}

impl LayerTally {
    fn new(n_qubits: usize) -> Self {
        Self {
            qubit_layer: vec![0; n_qubits],
            depth: 0,
            gate_count: 0,
            per_kind: BTreeMap::new(),
        }
    }

    fn push(&mut self, op: &GateOp) {
        let layer = 1 + op.touched().map(|q| self.qubit_layer[q]).max().unwrap_or(0);
        for q in op.touched() {
            self.qubit_layer[q] = layer;
        }
        self.depth = self.depth.max(layer);
        self.gate_count += 1;
        *self.per_kind.entry(op.kind.name().to_string()).or_insert(0) += 1;
    }

    fn finish(self) -> DepthReport {
        DepthReport {
            gate_count: self.gate_count,
            depth: self.depth,
            per_kind: self.per_kind,
        }
    }
}

/// Greedy-layered depth of a circuit.
pub fn circuit_depth(circuit: &Circuit) -> usize {
    depth_report(circuit).depth
}

/// Full resource tally of a circuit.
pub fn depth_report(circuit: &Circuit) -> DepthReport {
    let mut tally = LayerTally::new(circuit.n_qubits());
    for op in circuit.ops() {
        tally.push(op);
    }
    tally.finish()
}

/// Depth of the plain algorithm: `(2r + 1) dep(A) + r (3m + 3)` with
/// `r = iterations_qaaa(p_g)` and `m` the target count.
pub fn analytic_depth_qaaa(dep_a: usize, p_g: f64, m: usize) -> Result<usize> {
    if dep_a == 0 || m == 0 {
        return Err(Error::Domain("dep(A) and target count must be positive".into()));
    }
    let r = iterations_qaaa(p_g)? as usize;
    Ok((2 * r + 1) * dep_a + r * (3 * m + 3))
}

/// Depth of the exact algorithm: `(2J + 3) dep(A) + (J + 1)(3m + 3)`.
pub fn analytic_depth_eqaaa(dep_a: usize, p_g: f64, m: usize) -> Result<usize> {
    if dep_a == 0 || m == 0 {
        return Err(Error::Domain("dep(A) and target count must be positive".into()));
    }
    let j = iterations_eqaaa(p_g)? as usize;
    Ok((2 * j + 3) * dep_a + (j + 1) * (3 * m + 3))
}

/// Per-node inputs of the distributed depth formula.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NodeDepthInput {
    /// Depth of the node's substate preparation circuit.
    pub dep_prep: usize,
    /// Node success probability, fixing `J_j`.
    pub p_local: f64,
    /// Local target count.
    pub m_local: usize,
}

/// Depth of the distributed algorithm, split by phase.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeqaaaDepth {
    pub first_phase: usize,
    pub second_phase: usize,
    pub total: usize,
}

/// Distributed depth formula: nodes run in parallel, so phase 1 costs
/// `dep(A) + max_j (J_j + 1)(3 m_j + 2 dep(A_j) + 3)`; phase 2, entered only
/// below the certainty threshold, costs
/// `(hatJ + 1)(3 m + 2 dep(phase 1) + 3)`.
pub fn analytic_depth_deqaaa(
    dep_a: usize,
    nodes: &[NodeDepthInput],
    p_g_prime: f64,
    m_global: usize,
) -> Result<DeqaaaDepth> {
    if dep_a == 0 || m_global == 0 || nodes.is_empty() {
        return Err(Error::Domain(
            "dep(A), global target count and node list must be nonempty".into(),
        ));
    }
    let mut max_node = 0usize;
    for node in nodes {
        if node.dep_prep == 0 || node.m_local == 0 {
            return Err(Error::Domain("node depth inputs must be positive".into()));
        }
        let j = iterations_eqaaa(node.p_local)? as usize;
        max_node = max_node.max((j + 1) * (3 * node.m_local + 2 * node.dep_prep + 3));
    }
    let first_phase = dep_a + max_node;
    let second_phase = if p_g_prime >= 1.0 - EXACT_THRESHOLD {
        0
    } else {
        let hat_j = iterations_eqaaa(p_g_prime)? as usize;
        (hat_j + 1) * (3 * m_global + 2 * first_phase + 3)
    };
    Ok(DeqaaaDepth { first_phase, second_phase, total: first_phase + second_phase })
}

/// Emits the halving-ladder decomposition of a multi-controlled phase gate:
/// phase `phi` on the all-ones state of `controls + target`, using only PS
/// and CNOT, no ancillas. Gate count `2 * 3^m - 1` for `m` controls.
fn emit_mcps_ladder(controls: &[usize], target: usize, phi: f64, out: &mut impl FnMut(GateOp)) {
    match controls.split_last() {
        None => out(GateOp::ps(target, phi)),
        Some((&last, rest)) => {
            emit_mcps_ladder(rest, last, phi / 2.0, out);
            out(GateOp::cnot(last, target));
            emit_mcps_ladder(rest, target, -phi / 2.0, out);
            out(GateOp::cnot(last, target));
            emit_mcps_ladder(rest, target, phi / 2.0, out);
        }
    }
}

/// The analogous ladder for multi-controlled RY, with RY angle halvings and
/// CNOT conjugation flipping the rotation sign. Gate count `3 * 2^m - 2`.
fn emit_mcry_ladder(controls: &[usize], target: usize, theta: f64, out: &mut impl FnMut(GateOp)) {
    match controls.split_last() {
        None => out(GateOp::ry(target, theta)),
        Some((&last, rest)) => {
            emit_mcry_ladder(rest, target, theta / 2.0, out);
            out(GateOp::cnot(last, target));
            emit_mcry_ladder(rest, target, -theta / 2.0, out);
            out(GateOp::cnot(last, target));
        }
    }
}

/// Streams the decomposition of one gate. Multi-controlled phase and rotation
/// kinds expand through the ladders; every other kind passes through.
pub fn for_each_decomposed_gate(op: &GateOp, out: &mut impl FnMut(GateOp)) {
    match op.kind {
        GateKind::Mcps => {
            emit_mcps_ladder(&op.controls, op.targets[0], op.angle.expect("MCPS angle"), out)
        }
        GateKind::Mcz => {
            emit_mcps_ladder(&op.controls, op.targets[0], std::f64::consts::PI, out)
        }
        GateKind::Mcry => {
            emit_mcry_ladder(&op.controls, op.targets[0], op.angle.expect("MCRY angle"), out)
        }
        _ => out(op.clone()),
    }
}

/// A decomposed multi-controlled phase gate.
#[derive(Debug, Clone)]
pub struct DecompositionResult {
    /// Replacement circuit over `{PS, CNOT}` on `m + 1` qubits, no ancillas.
    pub circuit: Circuit,
    /// The gate that was decomposed.
    pub source: GateOp,
    /// Max entry deviation from the direct gate matrix, up to global phase.
    /// Computed densely for small control counts, `None` beyond.
    pub max_deviation: Option<f64>,
}

/// Control counts up to which [`decompose_mcps`] verifies densely.
pub const MCPS_VERIFY_LIMIT: usize = 6;

/// Decomposes `C^m PS(phi)` (controls `0..m`, target `m`) into PS and CNOT.
///
/// The replacement is verified densely against the direct gate matrix up to
/// [`MCPS_VERIFY_LIMIT`] controls; larger gates are decomposed unverified.
pub fn decompose_mcps(m: usize, phi: f64) -> Result<DecompositionResult> {
    let n = m + 1;
    let controls: Vec<usize> = (0..m).collect();
    let source = if m == 0 {
        GateOp::ps(0, phi)
    } else {
        GateOp::mcps(controls.clone(), m, phi)
    };
    let mut circuit = Circuit::new(n);
    let mut push_err = None;
    emit_mcps_ladder(&controls, m, phi, &mut |op| {
        if push_err.is_none() {
            if let Err(e) = circuit.push(op) {
                push_err = Some(e);
            }
        }
    });
    if let Some(e) = push_err {
        return Err(e);
    }
    let max_deviation = if m <= MCPS_VERIFY_LIMIT {
        let mut direct = Circuit::new(n);
        direct.push(source.clone())?;
        let u_direct = unitary_of(&direct)?;
        let u_decomposed = unitary_of(&circuit)?;
        Some(u_direct.max_diff_up_to_global_phase(&u_decomposed))
    } else {
        None
    };
    Ok(DecompositionResult { circuit, source, max_deviation })
}

/// Expands every multi-controlled gate of `circuit` through the ladders.
pub fn decompose_circuit(circuit: &Circuit) -> Circuit {
    let mut out = Circuit::new(circuit.n_qubits());
    for op in circuit.ops() {
        for_each_decomposed_gate(op, &mut |g| {
            out.push(g).expect("decomposition preserves gate validity");
        });
    }
    out
}

/// Resource tally of the fully decomposed circuit, computed streaming so the
/// expansion is never materialized.
pub fn decomposed_depth_report(circuit: &Circuit) -> DepthReport {
    let mut tally = LayerTally::new(circuit.n_qubits());
    for op in circuit.ops() {
        for_each_decomposed_gate(op, &mut |g| tally.push(&g));
    }
    tally.finish()
}

/// Exact size of the decomposition without walking it: the phase ladder on
/// `m` controls emits `2 * 3^m - 1` gates, the RY ladder `3 * 2^m - 2`.
pub fn decomposed_gate_count(circuit: &Circuit) -> u128 {
    circuit
        .ops()
        .iter()
        .map(|op| {
            let m = op.controls.len() as u32;
            match op.kind {
                GateKind::Mcps | GateKind::Mcz => 2 * 3u128.pow(m) - 1,
                GateKind::Mcry => 3 * 2u128.pow(m) - 2,
                _ => 1,
            }
        })
        .sum()
}
