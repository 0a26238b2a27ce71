//! Single-register amplitude amplification.
//!
//! Two algorithms over a common skeleton: the plain variant repeats
//! `Q = A S_0 A' S_f` (phase flips, near-certain success) and the exact
//! variant repeats `EQ = A R_0 A' R_f` with a tuned rotation angle so the
//! final state lands on the target subspace with probability 1. Both run on
//! either of two interchangeable backends: an explicit gate circuit, or
//! projector arithmetic on the state vector.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gate::{Circuit, GateOp};
use crate::prep::{prepare_direct, AmplitudeSpec, Preparation};
use crate::sim::apply_circuit_in_place;
use crate::state::{qubit_bit, StateVector};
use crate::target::{success_probability, TargetSpec};

/// Success probabilities at or above `1 - EXACT_THRESHOLD` count as certain;
/// amplification loops exit early instead of applying degenerate iterations.
pub const EXACT_THRESHOLD: f64 = 1e-9;

/// How a run realizes its operators.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Backend {
    /// Explicit gate sequences, executed by the simulator.
    Circuit,
    /// Rank-one projector updates on the raw state vector.
    Projector,
}

impl Backend {
    pub fn name(self) -> &'static str {
        match self {
            Backend::Circuit => "circuit",
            Backend::Projector => "projector",
        }
    }
}

/// Which amplification algorithm a run executed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    Qaaa,
    Eqaaa,
    Deqaaa,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Qaaa => "qaaa",
            Algorithm::Eqaaa => "eqaaa",
            Algorithm::Deqaaa => "deqaaa",
        }
    }
}

/// Validates a success probability, absorbing floating-point overshoot of 1.
fn checked_probability(p: f64) -> Result<f64> {
    if !p.is_finite() || p <= 0.0 || p > 1.0 + 1e-9 {
        return Err(Error::Domain(format!(
            "success probability must lie in (0, 1], got {p}"
        )));
    }
    Ok(p.min(1.0))
}

/// `floor` with a one-sided tolerance so expressions whose exact value is an
/// integer do not lose an iteration to rounding (e.g. p = 1/4 puts
/// `pi/(4 asin(1/2)) - 1/2` exactly at 1).
fn floor_tol(x: f64) -> f64 {
    (x + 1e-9).floor()
}

/// Iteration count of the plain algorithm: `floor(pi / (4 asin(sqrt(p))))`.
pub fn iterations_qaaa(p_g: f64) -> Result<u32> {
    let p_g = checked_probability(p_g)?;
    let theta = p_g.sqrt().asin();
    Ok(floor_tol(std::f64::consts::PI / (4.0 * theta)) as u32)
}

/// Iteration parameter of the exact algorithm:
/// `floor(pi / (4 asin(sqrt(p))) - 1/2)`, clamped at zero. The operator is
/// applied `J + 1` times.
pub fn iterations_eqaaa(p: f64) -> Result<u32> {
    let p = checked_probability(p)?;
    let theta = p.sqrt().asin();
    let j = floor_tol(std::f64::consts::PI / (4.0 * theta) - 0.5);
    Ok(j.max(0.0) as u32)
}

/// Phase angle `2 asin(sin(pi / (4J + 6)) / sqrt(p))` of the exact rotation.
///
/// Requires `sin(pi / (4J + 6)) <= sqrt(p)`, which holds whenever
/// `J >= iterations_eqaaa(p)`.
pub fn phase_angle(p: f64, j: u32) -> Result<f64> {
    let p = checked_probability(p)?;
    let ratio = (std::f64::consts::PI / (4.0 * j as f64 + 6.0)).sin() / p.sqrt();
    if ratio > 1.0 + 1e-12 {
        return Err(Error::Domain(format!(
            "phase angle undefined: sin(pi/(4J+6)) / sqrt(p) = {ratio} > 1"
        )));
    }
    Ok(2.0 * ratio.min(1.0).asin())
}

/// Iteration plan of the plain algorithm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QaaaPlan {
    pub p_g: f64,
    pub r: u32,
}

impl QaaaPlan {
    pub fn new(p_g: f64) -> Result<Self> {
        Ok(Self { p_g, r: iterations_qaaa(p_g)? })
    }
}

/// Iteration plan of the exact algorithm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EqaaaPlan {
    pub p: f64,
    pub j: u32,
    pub phi: f64,
}

impl EqaaaPlan {
    pub fn new(p: f64) -> Result<Self> {
        let j = iterations_eqaaa(p)?;
        Ok(Self { p, j, phi: phase_angle(p, j)? })
    }
}

/// Closed-form success probability of the plain algorithm after `r`
/// iterations: `sin^2((2r + 1) asin(sqrt(p_g)))`.
pub fn predicted_success_qaaa(p_g: f64, r: u32) -> Result<f64> {
    let p_g = checked_probability(p_g)?;
    let theta = p_g.sqrt().asin();
    Ok(((2.0 * r as f64 + 1.0) * theta).sin().powi(2))
}

/// Bloch-style description of one exact-operator application: a rotation by
/// `alpha` about the unit axis `(n_x, n_y, n_z)`, with `omega` the total
/// angle separating the initial state from the target subspace.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotationGeometry {
    pub alpha: f64,
    pub beta: f64,
    pub n_x: f64,
    pub n_y: f64,
    pub n_z: f64,
    pub omega: f64,
}

/// Rotation geometry of `EQ` for success probability `p_g` and phase `phi`.
pub fn rotation_geometry(p_g: f64, phi: f64) -> Result<RotationGeometry> {
    let p_g = checked_probability(p_g)?;
    if !(0.0..=std::f64::consts::PI).contains(&phi) {
        return Err(Error::Domain(format!("phi must lie in [0, pi], got {phi}")));
    }
    let theta = p_g.sqrt().asin();
    let half_phi = phi / 2.0;
    let sin_beta = half_phi.sin() * theta.sin();
    let beta = sin_beta.asin();
    let cos_beta = beta.cos();
    let n_x = theta.cos() * half_phi.cos() / cos_beta;
    let n_y = theta.cos() * half_phi.sin() / cos_beta;
    let n_z = theta.sin() * half_phi.cos() / cos_beta;
    let omega = 2.0 * (std::f64::consts::FRAC_PI_2 - (half_phi.sin() * p_g.sqrt()).asin());
    Ok(RotationGeometry { alpha: 4.0 * beta, beta, n_x, n_y, n_z, omega })
}

/// Appends one X-conjugated multi-controlled phase block selecting the local
/// bit pattern `bits` on qubits `[offset, offset + width)` of an `n`-qubit
/// register. With `phi = pi` the core gate is emitted as MCZ.
pub(crate) fn push_phase_block(
    circuit: &mut Circuit,
    bits: u64,
    width: usize,
    offset: usize,
    phi: f64,
) -> Result<()> {
    let zeros: Vec<usize> = (0..width)
        .filter(|&q| qubit_bit(bits, q, width) == 0)
        .map(|q| offset + q)
        .collect();
    for &q in &zeros {
        circuit.push(GateOp::x(q))?;
    }
    let controls: Vec<usize> = (offset..offset + width - 1).collect();
    let target = offset + width - 1;
    if phi == std::f64::consts::PI {
        circuit.push(GateOp::mcz(controls, target))?;
    } else {
        circuit.push(GateOp::mcps(controls, target, phi))?;
    }
    for &q in &zeros {
        circuit.push(GateOp::x(q))?;
    }
    Ok(())
}

/// Serial per-target oracle: each target contributes one
/// `[X layer][multi-controlled phase][X layer]` block, targets in ascending
/// index order. Acting on a basis state the result multiplies by `e^{i phi}`
/// exactly when the state is in the target set.
pub fn build_phase_oracle(targets: &TargetSpec, phi: f64) -> Result<Circuit> {
    let n = targets.n_bits();
    let mut circuit = Circuit::new(n);
    for t in targets.indices() {
        push_phase_block(&mut circuit, t, n, 0, phi)?;
    }
    Ok(circuit)
}

/// The conditional-phase oracle on the all-zero state of a qubit slice:
/// `X` layer, multi-controlled phase, `X` layer.
pub(crate) fn zero_phase_circuit(total: usize, offset: usize, width: usize, phi: f64) -> Result<Circuit> {
    let mut circuit = Circuit::new(total);
    push_phase_block(&mut circuit, 0, width, offset, phi)?;
    Ok(circuit)
}

/// `state + (e^{i phi} - 1) <psi|state> psi`: the projector realization of
/// the conjugated zero-state rotation `A R_0 A'`.
pub fn reflect_about_state(state: &StateVector, psi: &StateVector, phi: f64) -> Result<StateVector> {
    if state.dim() != psi.dim() {
        return Err(Error::DimensionMismatch { left: state.dim(), right: psi.dim() });
    }
    let factor = Complex64::from_polar(1.0, phi) - Complex64::ONE;
    let inner = psi.inner(state)?;
    let coeff = factor * inner;
    let amps = state
        .amplitudes()
        .iter()
        .zip(psi.amplitudes())
        .map(|(s, p)| s + coeff * p)
        .collect();
    StateVector::from_amplitudes(amps)
}

/// Multiplies the amplitudes of all target basis states by `e^{i phi}`.
pub(crate) fn phase_targets_in_place(state: &mut StateVector, targets: &TargetSpec, phi: f64) {
    let factor = Complex64::from_polar(1.0, phi);
    let amps = state.amplitudes_mut();
    for x in targets.indices() {
        amps[x as usize] *= factor;
    }
}

/// Everything a finished single-register run reports.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub algorithm: Algorithm,
    pub backend: Backend,
    pub p_initial: f64,
    /// Iterations actually applied (zero when the run exits early).
    pub iterations: u32,
    /// Phase angle of the exact rotation; `None` for the plain algorithm.
    pub phase_angle: Option<f64>,
    pub p_final: f64,
    pub final_state: StateVector,
    /// The realized circuit, also assembled on the projector backend so that
    /// resource metrics do not depend on the execution path.
    pub circuit: Circuit,
}

struct OracleSpec<'a> {
    targets: &'a TargetSpec,
    phi: f64,
}

/// Shared driver for both single-register algorithms: applies
/// `prep . [oracle, prep', zero-phase, prep] x iterations`.
fn run_amplification(
    prep: &Preparation,
    backend: Backend,
    iterations: u32,
    oracle: OracleSpec<'_>,
    reflection_phi: f64,
) -> Result<(StateVector, Circuit)> {
    let n = prep.spec.n_qubits();
    let oracle_circuit = build_phase_oracle(oracle.targets, oracle.phi)?;
    let prep_inv = prep.circuit.inverse();
    let zero_phase = zero_phase_circuit(n, 0, n, reflection_phi)?;

    let mut full = Circuit::new(n);
    full.append(&prep.circuit)?;
    for _ in 0..iterations {
        full.append(&oracle_circuit)?;
        full.append(&prep_inv)?;
        full.append(&zero_phase)?;
        full.append(&prep.circuit)?;
    }

    let state = match backend {
        Backend::Circuit => {
            let mut state = StateVector::zero(n)?;
            apply_circuit_in_place(&mut state, &full)?;
            state
        }
        Backend::Projector => {
            let psi0 = prepare_direct(&prep.spec);
            let mut state = psi0.clone();
            for _ in 0..iterations {
                phase_targets_in_place(&mut state, oracle.targets, oracle.phi);
                state = reflect_about_state(&state, &psi0, reflection_phi)?;
            }
            state
        }
    };
    Ok((state, full))
}

/// Runs the plain algorithm: `r` applications of `Q` on the prepared state.
pub fn qaaa_run_prepared(
    prep: &Preparation,
    targets: &TargetSpec,
    backend: Backend,
) -> Result<RunOutcome> {
    let p_initial = initial_success(prep, targets)?;
    let plan = QaaaPlan::new(p_initial)?;
    let (final_state, circuit) = run_amplification(
        prep,
        backend,
        plan.r,
        OracleSpec { targets, phi: std::f64::consts::PI },
        std::f64::consts::PI,
    )?;
    let p_final = success_probability(&final_state.exact_distribution(), targets)?;
    Ok(RunOutcome {
        algorithm: Algorithm::Qaaa,
        backend,
        p_initial,
        iterations: plan.r,
        phase_angle: None,
        p_final,
        final_state,
        circuit,
    })
}

/// Runs the exact algorithm: `J + 1` applications of `EQ`, skipped entirely
/// when the initial success probability is already certain.
pub fn eqaaa_run_prepared(
    prep: &Preparation,
    targets: &TargetSpec,
    backend: Backend,
) -> Result<RunOutcome> {
    let p_initial = initial_success(prep, targets)?;
    let plan = EqaaaPlan::new(p_initial)?;
    let iterations = if p_initial >= 1.0 - EXACT_THRESHOLD { 0 } else { plan.j + 1 };
    let (final_state, circuit) = run_amplification(
        prep,
        backend,
        iterations,
        OracleSpec { targets, phi: plan.phi },
        plan.phi,
    )?;
    let p_final = success_probability(&final_state.exact_distribution(), targets)?;
    Ok(RunOutcome {
        algorithm: Algorithm::Eqaaa,
        backend,
        p_initial,
        iterations,
        phase_angle: Some(plan.phi),
        p_final,
        final_state,
        circuit,
    })
}

/// Convenience wrappers that synthesize the preparation circuit from the spec.
pub fn qaaa_run(initial: &AmplitudeSpec, targets: &TargetSpec, backend: Backend) -> Result<RunOutcome> {
    qaaa_run_prepared(&Preparation::from_spec(initial.clone())?, targets, backend)
}

pub fn eqaaa_run(initial: &AmplitudeSpec, targets: &TargetSpec, backend: Backend) -> Result<RunOutcome> {
    eqaaa_run_prepared(&Preparation::from_spec(initial.clone())?, targets, backend)
}

fn initial_success(prep: &Preparation, targets: &TargetSpec) -> Result<f64> {
    if prep.spec.n_qubits() != targets.n_bits() {
        return Err(Error::DimensionMismatch {
            left: prep.spec.n_qubits(),
            right: targets.n_bits(),
        });
    }
    let p = success_probability(&prepare_direct(&prep.spec).exact_distribution(), targets)?;
    if p <= 0.0 {
        return Err(Error::ZeroTargetOverlap);
    }
    Ok(p)
}
