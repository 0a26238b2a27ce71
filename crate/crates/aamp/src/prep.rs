//! State preparation: amplitude specifications, a rotation-tree encoder that
//! realizes them as circuits, and a direct path used as a cross-check oracle.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gate::{Circuit, GateOp};
use crate::state::{bitstring_to_index, qubit_bit, StateVector, MAX_STATE_QUBITS};

/// Norm tolerance accepted without explicit normalization.
pub const NORM_TOL: f64 = 1e-9;

/// Weights and angles below this are treated as exact zeros by the encoder.
const ZERO_TOL: f64 = 1e-14;

/// A target amplitude vector for an `n`-qubit register.
#[derive(Debug, Clone, PartialEq)]
pub struct AmplitudeSpec {
    n_qubits: usize,
    amps: Vec<Complex64>,
}

impl AmplitudeSpec {
    /// Wraps amplitudes that must already be unit-norm within [`NORM_TOL`].
    pub fn new(amps: Vec<Complex64>) -> Result<Self> {
        let spec = Self::raw(amps)?;
        let norm = spec.norm();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized { norm, tol: NORM_TOL });
        }
        Ok(spec)
    }

    /// Wraps amplitudes, rescaling them to unit norm.
    pub fn new_normalized(amps: Vec<Complex64>) -> Result<Self> {
        let mut spec = Self::raw(amps)?;
        let norm = spec.norm();
        if !norm.is_finite() || norm < 1e-300 {
            return Err(Error::NotNormalizable { norm });
        }
        for a in &mut spec.amps {
            *a /= norm;
        }
        Ok(spec)
    }

    fn raw(amps: Vec<Complex64>) -> Result<Self> {
        let len = amps.len();
        if !len.is_power_of_two() || len < 2 {
            return Err(Error::DimensionMismatch { left: len, right: 2 });
        }
        let n_qubits = len.trailing_zeros() as usize;
        if n_qubits > MAX_STATE_QUBITS {
            return Err(Error::QubitCountOutOfRange { n: n_qubits, min: 1, max: MAX_STATE_QUBITS });
        }
        if amps.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(Error::Domain("amplitudes must be finite".into()));
        }
        Ok(Self { n_qubits, amps })
    }

    /// Real nonnegative amplitudes from a probability vector (square roots).
    pub fn from_probabilities(probs: &[f64]) -> Result<Self> {
        Self::new_normalized(
            probs
                .iter()
                .map(|&p| Complex64::new(p.max(0.0).sqrt(), 0.0))
                .collect(),
        )
    }

    /// The uniform superposition over `n` qubits.
    pub fn uniform(n: usize) -> Result<Self> {
        if !(1..=MAX_STATE_QUBITS).contains(&n) {
            return Err(Error::QubitCountOutOfRange { n, min: 1, max: MAX_STATE_QUBITS });
        }
        let amp = Complex64::new(1.0 / ((1usize << n) as f64).sqrt(), 0.0);
        Self::new(vec![amp; 1 << n])
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn is_real_nonnegative(&self) -> bool {
        self.amps.iter().all(|a| a.im.abs() <= ZERO_TOL && a.re >= -ZERO_TOL)
    }

    /// Parses the CSV interchange format, one `bitstring,real,imag` row per
    /// basis state. Missing rows default to zero amplitude.
    pub fn from_csv(text: &str, auto_normalize: bool) -> Result<Self> {
        let mut width: Option<usize> = None;
        let mut rows: Vec<(u64, Complex64)> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if line_no == 1 && line.to_ascii_lowercase().starts_with("bitstring") {
                continue;
            }
            let mut parts = line.split(',');
            let bits = parts.next().unwrap_or("").trim();
            let (x, w) = bitstring_to_index(bits).map_err(|_| Error::Parse {
                line: line_no,
                message: format!("invalid bit string {bits:?}"),
            })?;
            match width {
                None => width = Some(w),
                Some(prev) if prev != w => {
                    return Err(Error::Parse {
                        line: line_no,
                        message: format!("mixed bit widths {prev} and {w}"),
                    })
                }
                _ => {}
            }
            let re = parse_field(parts.next(), line_no, "real")?;
            let im = parse_field(parts.next(), line_no, "imag")?;
            rows.push((x, Complex64::new(re, im)));
        }
        let n = width.ok_or_else(|| Error::Parse {
            line: 0,
            message: "no amplitude rows found".into(),
        })?;
        let mut amps = vec![Complex64::ZERO; 1usize << n];
        for (x, a) in rows {
            amps[x as usize] = a;
        }
        if auto_normalize {
            Self::new_normalized(amps)
        } else {
            Self::new(amps)
        }
    }

    /// CSV export matching [`AmplitudeSpec::from_csv`].
    pub fn to_csv(&self) -> String {
        use std::fmt::Write;
        let mut out = String::from("bitstring,real,imag\n");
        for (x, a) in self.amps.iter().enumerate() {
            let _ = writeln!(
                out,
                "{},{},{}",
                crate::state::index_to_bitstring(x as u64, self.n_qubits),
                a.re,
                a.im
            );
        }
        out
    }
}

fn parse_field(tok: Option<&str>, line: usize, what: &str) -> Result<f64> {
    tok.map(str::trim)
        .and_then(|t| t.parse::<f64>().ok())
        .ok_or_else(|| Error::Parse {
            line,
            message: format!("missing or invalid {what} component"),
        })
}

/// Copies the normalized amplitudes straight into a state vector.
///
/// This bypasses circuit synthesis entirely and serves as the oracle the
/// encoder is checked against.
pub fn prepare_direct(spec: &AmplitudeSpec) -> StateVector {
    StateVector::from_amplitudes(spec.amplitudes().to_vec())
        .expect("spec dimensions are validated on construction")
}

/// Builds a circuit that maps |0...0> to the spec's amplitudes.
///
/// Magnitudes are realized by a binary rotation tree: one multi-controlled RY
/// per nonzero prefix branch, controls conditioned on the prefix bits via X
/// conjugation, branches emitted in ascending prefix order. Complex inputs
/// get a trailing diagonal layer of per-basis-state MCPS blocks, so the
/// prepared state matches the spec without any global-phase freedom.
pub fn encode_amplitudes(spec: &AmplitudeSpec) -> Result<Circuit> {
    let n = spec.n_qubits();
    let probs: Vec<f64> = spec.amplitudes().iter().map(|a| a.norm_sqr()).collect();

    // weights[k][v] = total probability of the length-k prefix v
    let mut weights: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    weights.push(probs.clone());
    for k in (0..n).rev() {
        let child = &weights[weights.len() - 1];
        let mut level = Vec::with_capacity(1 << k);
        for v in 0..(1usize << k) {
            level.push(child[2 * v] + child[2 * v + 1]);
        }
        weights.push(level);
    }
    weights.reverse(); // weights[k] now indexed by prefix length k

    let mut circuit = Circuit::new(n);
    for k in 0..n {
        for v in 0..(1usize << k) {
            let w = weights[k][v];
            if w <= ZERO_TOL {
                continue; // dead branch, subtree skipped
            }
            let w0 = weights[k + 1][2 * v];
            let w1 = weights[k + 1][2 * v + 1];
            let theta = 2.0 * w1.sqrt().atan2(w0.sqrt());
            if theta.abs() <= ZERO_TOL {
                continue;
            }
            let zeros: Vec<usize> = (0..k).filter(|&i| (v >> (k - 1 - i)) & 1 == 0).collect();
            for &q in &zeros {
                circuit.push(GateOp::x(q))?;
            }
            if k == 0 {
                circuit.push(GateOp::ry(0, theta))?;
            } else {
                circuit.push(GateOp::mcry((0..k).collect(), k, theta))?;
            }
            for &q in &zeros {
                circuit.push(GateOp::x(q))?;
            }
        }
    }

    // diagonal phase layer, skipped entirely for real-nonnegative inputs
    for (x, a) in spec.amplitudes().iter().enumerate() {
        if a.norm() <= ZERO_TOL {
            continue;
        }
        let lambda = a.arg();
        if lambda.abs() <= ZERO_TOL {
            continue;
        }
        let zeros: Vec<usize> = (0..n).filter(|&q| qubit_bit(x as u64, q, n) == 0).collect();
        for &q in &zeros {
            circuit.push(GateOp::x(q))?;
        }
        if n == 1 {
            circuit.push(GateOp::ps(0, lambda))?;
        } else {
            circuit.push(GateOp::mcps((0..n - 1).collect(), n - 1, lambda))?;
        }
        for &q in &zeros {
            circuit.push(GateOp::x(q))?;
        }
    }

    Ok(circuit)
}

/// An amplitude spec together with a circuit that prepares it.
///
/// The amplification engines depend on the preparation operator only through
/// the state it produces, so any circuit whose action on |0...0> matches the
/// spec is a valid realization.
#[derive(Debug, Clone)]
pub struct Preparation {
    pub spec: AmplitudeSpec,
    pub circuit: Circuit,
}

impl Preparation {
    /// Synthesizes the circuit with [`encode_amplitudes`].
    pub fn from_spec(spec: AmplitudeSpec) -> Result<Self> {
        let circuit = encode_amplitudes(&spec)?;
        Ok(Self { spec, circuit })
    }

    /// Pairs a spec with a caller-supplied circuit, checking that the circuit
    /// actually prepares the spec (up to global phase, 1e-9 per amplitude).
    pub fn with_circuit(spec: AmplitudeSpec, circuit: Circuit) -> Result<Self> {
        if circuit.n_qubits() != spec.n_qubits() {
            return Err(Error::DimensionMismatch {
                left: circuit.n_qubits(),
                right: spec.n_qubits(),
            });
        }
        let zero = StateVector::zero(spec.n_qubits())?;
        let prepared = crate::sim::apply_circuit(&zero, &circuit)?;
        let dist = prepare_direct(&spec).global_phase_distance(&prepared)?;
        if dist > 1e-9 {
            return Err(Error::Domain(format!(
                "circuit does not prepare the given amplitudes (deviation {dist:.3e})"
            )));
        }
        Ok(Self { spec, circuit })
    }

    /// The uniform superposition prepared by one layer of H gates.
    pub fn uniform(n: usize) -> Result<Self> {
        let spec = AmplitudeSpec::uniform(n)?;
        let mut circuit = Circuit::new(n);
        for q in 0..n {
            circuit.push(GateOp::h(q))?;
        }
        Ok(Self { spec, circuit })
    }
}
