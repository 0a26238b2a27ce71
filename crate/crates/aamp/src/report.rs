//! Machine-readable run records.
//!
//! Reports are plain serde structs with a fixed field order and no
//! timestamps, so identical runs serialize to byte-identical JSON.

use serde::{Deserialize, Serialize};

use crate::amplify::RunOutcome;
use crate::distributed::DeqaaaOutcome;
use crate::metrics::{decomposed_depth_report, decomposed_gate_count, depth_report, DepthReport};

/// Decomposed tallies are skipped above this streamed-gate budget.
const DECOMPOSE_TALLY_LIMIT: u128 = 200_000_000;

fn decomposed_metrics(circuit: &crate::gate::Circuit) -> Option<DepthReport> {
    (decomposed_gate_count(circuit) <= DECOMPOSE_TALLY_LIMIT)
        .then(|| decomposed_depth_report(circuit))
}

/// Current report schema version.
pub const REPORT_SCHEMA_VERSION: u32 = 1;

/// Per-node record of a distributed run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NodeReport {
    pub node: usize,
    pub n_qubits: usize,
    pub local_targets: Vec<String>,
    pub p_local: f64,
    /// Iterations applied on the node (`J_j + 1`, or 0 when skipped).
    pub iterations: u32,
    pub phase_angle: f64,
    pub prep_depth: usize,
}

/// One finished run, ready for JSON export.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub algorithm: String,
    pub backend: String,
    pub n: usize,
    pub targets: Vec<String>,
    pub p_initial: f64,
    /// Applied iterations of the (global) amplification operator.
    pub iterations: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub phase_angle: Option<f64>,
    pub p_final: f64,
    pub gate_count: usize,
    pub depth: usize,
    pub per_kind: std::collections::BTreeMap<String, usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub decomposed_gate_count: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub decomposed_depth: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p_g_prime: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub phase2_executed: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nodes: Option<Vec<NodeReport>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub shots: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub histogram_path: Option<String>,
}

impl RunReport {
    /// Builds the record of a single-register run. Reports carry both depth
    /// conventions: multi-controlled gates as single steps, and fully
    /// decomposed (skipped only when the expansion would be astronomically
    /// large).
    pub fn from_outcome(outcome: &RunOutcome, targets: Vec<String>) -> Self {
        let metrics = depth_report(&outcome.circuit);
        let decomposed = decomposed_metrics(&outcome.circuit);
        Self {
            schema_version: REPORT_SCHEMA_VERSION,
            algorithm: outcome.algorithm.name().to_string(),
            backend: outcome.backend.name().to_string(),
            n: outcome.final_state.n_qubits(),
            targets,
            p_initial: outcome.p_initial,
            iterations: outcome.iterations,
            phase_angle: outcome.phase_angle,
            p_final: outcome.p_final,
            gate_count: metrics.gate_count,
            depth: metrics.depth,
            per_kind: metrics.per_kind,
            decomposed_gate_count: decomposed.as_ref().map(|d| d.gate_count),
            decomposed_depth: decomposed.as_ref().map(|d| d.depth),
            p_g_prime: None,
            phase2_executed: None,
            nodes: None,
            seed: None,
            shots: None,
            histogram_path: None,
        }
    }

    /// Builds the record of a distributed run.
    pub fn from_deqaaa(outcome: &DeqaaaOutcome, targets: Vec<String>) -> Self {
        let metrics = depth_report(&outcome.circuit);
        let decomposed = decomposed_metrics(&outcome.circuit);
        let nodes = outcome
            .plans
            .iter()
            .map(|plan| NodeReport {
                node: plan.node_index,
                n_qubits: plan.n_qubits,
                local_targets: plan.local_targets.bitstrings(),
                p_local: plan.p_local,
                iterations: if plan.is_certain() { 0 } else { plan.j_iterations + 1 },
                phase_angle: plan.phase_angle,
                prep_depth: depth_report(&plan.prep).depth,
            })
            .collect();
        Self {
            schema_version: REPORT_SCHEMA_VERSION,
            algorithm: "deqaaa".to_string(),
            backend: outcome.backend.name().to_string(),
            n: outcome.final_state.n_qubits(),
            targets,
            p_initial: outcome.p_initial,
            iterations: outcome.hat_iterations(),
            phase_angle: outcome.hat_phase,
            p_final: outcome.p_final,
            gate_count: metrics.gate_count,
            depth: metrics.depth,
            per_kind: metrics.per_kind,
            decomposed_gate_count: decomposed.as_ref().map(|d| d.gate_count),
            decomposed_depth: decomposed.as_ref().map(|d| d.depth),
            p_g_prime: Some(outcome.p_g_prime),
            phase2_executed: Some(outcome.phase2_executed),
            nodes: Some(nodes),
            seed: None,
            shots: None,
            histogram_path: None,
        }
    }

    pub fn with_sampling(mut self, seed: u64, shots: u64, histogram_path: Option<String>) -> Self {
        self.seed = Some(seed);
        self.shots = Some(shots);
        self.histogram_path = histogram_path;
        self
    }

    /// Undecomposed and decomposed tallies as a pair of [`DepthReport`]s.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

/// Both depth conventions of one circuit: multi-controlled gates as single
/// time steps, and fully decomposed.
pub fn dual_metrics(circuit: &crate::gate::Circuit) -> (DepthReport, DepthReport) {
    (depth_report(circuit), decomposed_depth_report(circuit))
}
