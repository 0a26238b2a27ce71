//! Two-phase distributed exact amplitude amplification over a partitioned
//! register.
//!
//! Phase 1 runs an independent exact amplification on every node, each acting
//! on its own contiguous qubit slice of the shared global state: the local
//! oracle phases every global basis state whose slice bits land in the node's
//! projected target set, and the local reflection uses the node substate
//! embedded on the slice. Phase 2, executed only when the global success
//! probability is still below certainty, treats the whole phase-1 evolution
//! as a single preparation operator and applies one more exact amplification
//! over the full register.

use num_complex::Complex64;

use crate::amplify::{
    build_phase_oracle, iterations_eqaaa, phase_angle, phase_targets_in_place,
    reflect_about_state, zero_phase_circuit, Algorithm, Backend, EXACT_THRESHOLD,
};
use crate::error::{Error, Result};
use crate::gate::Circuit;
use crate::prep::{encode_amplitudes, prepare_direct, AmplitudeSpec, Preparation};
use crate::sim::apply_circuit_in_place;
use crate::state::{Distribution, StateVector};
use crate::target::{success_probability, TargetSpec};

/// Sizes of the contiguous qubit slices assigned to each node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    sizes: Vec<usize>,
}

impl Partition {
    /// At least two nodes, every node at least one qubit.
    pub fn new(sizes: Vec<usize>) -> Result<Self> {
        if sizes.len() < 2 {
            return Err(Error::InvalidPartition(format!(
                "need at least 2 nodes, got {}",
                sizes.len()
            )));
        }
        if sizes.contains(&0) {
            return Err(Error::InvalidPartition("node sizes must be positive".into()));
        }
        Ok(Self { sizes })
    }

    pub fn node_count(&self) -> usize {
        self.sizes.len()
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn total_qubits(&self) -> usize {
        self.sizes.iter().sum()
    }

    /// Number of qubits preceding node `j`.
    pub fn offset(&self, j: usize) -> usize {
        self.sizes[..j].iter().sum()
    }

    /// Number of qubits following node `j`.
    pub fn trailing(&self, j: usize) -> usize {
        self.total_qubits() - self.offset(j) - self.sizes[j]
    }

    fn check(&self, n: usize, j: usize) -> Result<()> {
        if self.total_qubits() != n {
            return Err(Error::InvalidPartition(format!(
                "partition covers {} qubits, register has {n}",
                self.total_qubits()
            )));
        }
        if j >= self.node_count() {
            return Err(Error::InvalidPartition(format!(
                "node index {j} out of range for {} nodes",
                self.node_count()
            )));
        }
        Ok(())
    }
}

/// Marginal distribution of node `j`: traces out every other slice.
///
/// `P_j(k) = sum over u < 2^d, v < 2^s of P(u 2^(n-d) + k 2^s + v)` with `d`
/// the offset and `s` the trailing width of the node.
pub fn marginal_distribution(p: &Distribution, partition: &Partition, j: usize) -> Result<Distribution> {
    let n = p.n_bits();
    partition.check(n, j)?;
    let nj = partition.sizes()[j];
    let delta = partition.offset(j);
    let sigma = partition.trailing(j);
    let mut probs = vec![0.0; 1usize << nj];
    for u in 0..(1u64 << delta) {
        for k in 0..(1u64 << nj) {
            let head = (u << (n - delta)) | (k << sigma);
            let mut acc = 0.0;
            for v in 0..(1u64 << sigma) {
                acc += p.probs()[(head | v) as usize];
            }
            probs[k as usize] += acc;
        }
    }
    Distribution::new(nj, probs)
}

/// The canonical real-nonnegative substate of a marginal:
/// amplitudes `sqrt(P_j(x))`.
pub fn substate_of(p_j: &Distribution) -> Result<AmplitudeSpec> {
    AmplitudeSpec::from_probabilities(p_j.probs())
}

/// Projects the global target set onto node `j`'s bit positions,
/// deduplicating collapsed substrings. The projection may cover the node's
/// whole local space.
pub fn project_targets(x_g: &TargetSpec, partition: &Partition, j: usize) -> Result<TargetSpec> {
    let n = x_g.n_bits();
    partition.check(n, j)?;
    let nj = partition.sizes()[j];
    let sigma = partition.trailing(j);
    let mask = (1u64 << nj) - 1;
    TargetSpec::projected(nj, x_g.indices().map(|x| (x >> sigma) & mask))
}

/// One node's share of the first phase.
#[derive(Debug, Clone)]
pub struct NodePlan {
    pub node_index: usize,
    pub qubit_offset: usize,
    pub n_qubits: usize,
    pub local_targets: TargetSpec,
    pub substate: AmplitudeSpec,
    pub p_local: f64,
    /// Iteration parameter `J_j`; the node operator runs `J_j + 1` times.
    pub j_iterations: u32,
    pub phase_angle: f64,
    /// Circuit preparing the substate, in node-local qubit indices.
    pub prep: Circuit,
}

impl NodePlan {
    /// Whether the node's amplification is skipped outright.
    pub fn is_certain(&self) -> bool {
        self.p_local >= 1.0 - EXACT_THRESHOLD
    }

    /// The node's full phase-1 circuit on the global register:
    /// `J_j + 1` repetitions of `[local oracle][prep'][local zero-phase][prep]`.
    pub fn node_circuit(&self, n_total: usize) -> Result<Circuit> {
        let mut circuit = Circuit::new(n_total);
        if self.is_certain() {
            return Ok(circuit);
        }
        let oracle = build_phase_oracle(&self.local_targets, self.phase_angle)?
            .embed(n_total, self.qubit_offset)?;
        let prep = self.prep.embed(n_total, self.qubit_offset)?;
        let prep_inv = prep.inverse();
        let zero = zero_phase_circuit(n_total, self.qubit_offset, self.n_qubits, self.phase_angle)?;
        for _ in 0..=self.j_iterations {
            circuit.append(&oracle)?;
            circuit.append(&prep_inv)?;
            circuit.append(&zero)?;
            circuit.append(&prep)?;
        }
        Ok(circuit)
    }
}

/// Derives node `j`'s marginal, substate, projected targets and exact-run
/// parameters from the global distribution.
pub fn build_node_plan(
    p: &Distribution,
    x_g: &TargetSpec,
    partition: &Partition,
    j: usize,
) -> Result<NodePlan> {
    let marginal = marginal_distribution(p, partition, j)?;
    let local_targets = project_targets(x_g, partition, j)?;
    let p_local = success_probability(&marginal, &local_targets)?;
    if p_local <= 0.0 {
        return Err(Error::InfeasibleNode { node: j });
    }
    let substate = substate_of(&marginal)?;
    let j_iterations = iterations_eqaaa(p_local)?;
    let phi = phase_angle(p_local, j_iterations)?;
    let prep = encode_amplitudes(&substate)?;
    Ok(NodePlan {
        node_index: j,
        qubit_offset: partition.offset(j),
        n_qubits: partition.sizes()[j],
        local_targets,
        substate,
        p_local,
        j_iterations,
        phase_angle: phi,
        prep,
    })
}

/// Plans for every node of the partition.
pub fn build_node_plans(
    p: &Distribution,
    x_g: &TargetSpec,
    partition: &Partition,
) -> Result<Vec<NodePlan>> {
    (0..partition.node_count())
        .map(|j| build_node_plan(p, x_g, partition, j))
        .collect()
}

fn phase_local_targets(state: &mut StateVector, plan: &NodePlan) {
    let n = state.n_qubits();
    let sigma = n - plan.qubit_offset - plan.n_qubits;
    let mask = (1u64 << plan.n_qubits) - 1;
    let factor = Complex64::from_polar(1.0, plan.phase_angle);
    for (g, amp) in state.amplitudes_mut().iter_mut().enumerate() {
        if plan.local_targets.contains((g as u64 >> sigma) & mask) {
            *amp *= factor;
        }
    }
}

/// `I + (e^{i phi} - 1) |sub><sub|` on the node slice, applied across every
/// configuration of the surrounding qubits.
fn reflect_local_substate(state: &mut StateVector, plan: &NodePlan) {
    let n = state.n_qubits();
    let delta = plan.qubit_offset;
    let nj = plan.n_qubits;
    let sigma = n - delta - nj;
    let sub = plan.substate.amplitudes();
    let factor = Complex64::from_polar(1.0, plan.phase_angle) - Complex64::ONE;
    let amps = state.amplitudes_mut();
    for u in 0..(1u64 << delta) {
        for v in 0..(1u64 << sigma) {
            let base = (u << (n - delta)) | v;
            let mut inner = Complex64::ZERO;
            for (k, s) in sub.iter().enumerate() {
                inner += s.conj() * amps[(base | ((k as u64) << sigma)) as usize];
            }
            let coeff = factor * inner;
            for (k, s) in sub.iter().enumerate() {
                amps[(base | ((k as u64) << sigma)) as usize] += coeff * s;
            }
        }
    }
}

/// Applies one node's full amplification (`J_j + 1` iterations) to the global
/// state. Nodes whose local success probability is already certain are left
/// untouched.
pub fn apply_node_amplification(
    state: &StateVector,
    plan: &NodePlan,
    backend: Backend,
) -> Result<StateVector> {
    if plan.qubit_offset + plan.n_qubits > state.n_qubits() {
        return Err(Error::DimensionMismatch {
            left: plan.qubit_offset + plan.n_qubits,
            right: state.n_qubits(),
        });
    }
    let mut out = state.clone();
    if plan.is_certain() {
        return Ok(out);
    }
    match backend {
        Backend::Circuit => {
            let circuit = plan.node_circuit(state.n_qubits())?;
            apply_circuit_in_place(&mut out, &circuit)?;
        }
        Backend::Projector => {
            for _ in 0..=plan.j_iterations {
                phase_local_targets(&mut out, plan);
                reflect_local_substate(&mut out, plan);
            }
        }
    }
    Ok(out)
}

/// Phase 1: every node's amplification in ascending node order. The node
/// operators act on disjoint slices and commute, so the order is immaterial.
pub fn phase_one(state: &StateVector, plans: &[NodePlan], backend: Backend) -> Result<StateVector> {
    let mut out = state.clone();
    for plan in plans {
        out = apply_node_amplification(&out, plan, backend)?;
    }
    Ok(out)
}

/// Global success probability of a state on the target set.
pub fn compute_pg_prime(state: &StateVector, x_g: &TargetSpec) -> Result<f64> {
    success_probability(&state.exact_distribution(), x_g)
}

/// Full record of a distributed run.
#[derive(Debug, Clone)]
pub struct DeqaaaOutcome {
    pub backend: Backend,
    pub plans: Vec<NodePlan>,
    pub p_initial: f64,
    /// Global success probability after phase 1.
    pub p_g_prime: f64,
    /// Phase-2 iteration parameter; `None` when phase 2 was skipped.
    pub hat_j: Option<u32>,
    pub hat_phase: Option<f64>,
    pub phase2_executed: bool,
    pub p_final: f64,
    pub final_state: StateVector,
    /// Circuit of phase 1 alone (preparation plus all node operators).
    pub phase1_circuit: Circuit,
    /// Complete realized circuit.
    pub circuit: Circuit,
}

impl DeqaaaOutcome {
    pub fn algorithm(&self) -> Algorithm {
        Algorithm::Deqaaa
    }

    /// Phase-2 iterations applied.
    pub fn hat_iterations(&self) -> u32 {
        if self.phase2_executed {
            self.hat_j.expect("phase 2 ran") + 1
        } else {
            0
        }
    }
}

/// Runs the two-phase distributed algorithm with a caller-supplied
/// preparation.
pub fn deqaaa_run_prepared(
    prep: &Preparation,
    x_g: &TargetSpec,
    partition: &Partition,
    backend: Backend,
) -> Result<DeqaaaOutcome> {
    let n = prep.spec.n_qubits();
    if x_g.n_bits() != n {
        return Err(Error::DimensionMismatch { left: x_g.n_bits(), right: n });
    }
    partition.check(n, 0)?;

    // Plan parameters always come from the spec's exact distribution so both
    // backends share identical angles and iteration counts.
    let direct = prepare_direct(&prep.spec);
    let p_global = direct.exact_distribution();
    let p_initial = success_probability(&p_global, x_g)?;
    if p_initial <= 0.0 {
        return Err(Error::ZeroTargetOverlap);
    }
    let plans = build_node_plans(&p_global, x_g, partition)?;

    let mut phase1_circuit = Circuit::new(n);
    phase1_circuit.append(&prep.circuit)?;
    for plan in &plans {
        phase1_circuit.append(&plan.node_circuit(n)?)?;
    }

    let psi1 = match backend {
        Backend::Circuit => {
            let mut state = StateVector::zero(n)?;
            apply_circuit_in_place(&mut state, &phase1_circuit)?;
            state
        }
        Backend::Projector => phase_one(&direct, &plans, backend)?,
    };
    let p_g_prime = compute_pg_prime(&psi1, x_g)?;

    let mut circuit = phase1_circuit.clone();
    let (final_state, hat_j, hat_phase, phase2_executed) = if p_g_prime >= 1.0 - EXACT_THRESHOLD {
        (psi1.clone(), None, None, false)
    } else {
        let hat_j = iterations_eqaaa(p_g_prime)?;
        let hat_phi = phase_angle(p_g_prime, hat_j)?;
        let oracle = build_phase_oracle(x_g, hat_phi)?;
        let b_inv = phase1_circuit.inverse();
        let zero = zero_phase_circuit(n, 0, n, hat_phi)?;
        for _ in 0..=hat_j {
            circuit.append(&oracle)?;
            circuit.append(&b_inv)?;
            circuit.append(&zero)?;
            circuit.append(&phase1_circuit)?;
        }
        let state = match backend {
            Backend::Circuit => {
                let mut state = psi1.clone();
                for _ in 0..=hat_j {
                    apply_circuit_in_place(&mut state, &oracle)?;
                    apply_circuit_in_place(&mut state, &b_inv)?;
                    apply_circuit_in_place(&mut state, &zero)?;
                    apply_circuit_in_place(&mut state, &phase1_circuit)?;
                }
                state
            }
            Backend::Projector => {
                let mut state = psi1.clone();
                for _ in 0..=hat_j {
                    phase_targets_in_place(&mut state, x_g, hat_phi);
                    state = reflect_about_state(&state, &psi1, hat_phi)?;
                }
                state
            }
        };
        (state, Some(hat_j), Some(hat_phi), true)
    };

    let p_final = compute_pg_prime(&final_state, x_g)?;
    Ok(DeqaaaOutcome {
        backend,
        plans,
        p_initial,
        p_g_prime,
        hat_j,
        hat_phase,
        phase2_executed,
        p_final,
        final_state,
        phase1_circuit,
        circuit,
    })
}

/// Runs the distributed algorithm, synthesizing the global preparation
/// circuit from the amplitude spec.
pub fn deqaaa_run(
    initial: &AmplitudeSpec,
    x_g: &TargetSpec,
    partition: &Partition,
    backend: Backend,
) -> Result<DeqaaaOutcome> {
    deqaaa_run_prepared(&Preparation::from_spec(initial.clone())?, x_g, partition, backend)
}
