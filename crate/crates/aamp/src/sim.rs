//! Gate application kernels and dense unitary assembly.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gate::{Circuit, GateKind, GateOp};
use crate::state::{StateVector, MAX_UNITARY_QUBITS};

/// Applies `circuit` to a copy of `state`, gate by gate in order.
pub fn apply_circuit(state: &StateVector, circuit: &Circuit) -> Result<StateVector> {
    let mut out = state.clone();
    apply_circuit_in_place(&mut out, circuit)?;
    Ok(out)
}

/// In-place variant of [`apply_circuit`].
pub fn apply_circuit_in_place(state: &mut StateVector, circuit: &Circuit) -> Result<()> {
    if state.n_qubits() != circuit.n_qubits() {
        return Err(Error::DimensionMismatch {
            left: state.n_qubits(),
            right: circuit.n_qubits(),
        });
    }
    let n = state.n_qubits();
    for op in circuit.ops() {
        apply_gate(state.amplitudes_mut(), n, op)?;
    }
    Ok(())
}

/// Applies a single gate to a raw amplitude slice of a `n`-qubit register.
pub(crate) fn apply_gate(amps: &mut [Complex64], n: usize, op: &GateOp) -> Result<()> {
    for q in op.touched() {
        if q >= n {
            return Err(Error::QubitIndexOutOfBounds { index: q, n_qubits: n });
        }
    }
    match op.kind {
        GateKind::X => {
            let u = [Complex64::ZERO, Complex64::ONE, Complex64::ONE, Complex64::ZERO];
            single_qubit(amps, n, op.targets[0], &op.controls, u);
        }
        GateKind::H => {
            let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
            single_qubit(amps, n, op.targets[0], &op.controls, [h, h, h, -h]);
        }
        GateKind::Ry | GateKind::Mcry => {
            let t = op.angle.expect("RY carries an angle") / 2.0;
            let (c, s) = (Complex64::new(t.cos(), 0.0), Complex64::new(t.sin(), 0.0));
            single_qubit(amps, n, op.targets[0], &op.controls, [c, -s, s, c]);
        }
        GateKind::Rz => {
            let t = op.angle.expect("RZ carries an angle") / 2.0;
            let u = [
                Complex64::from_polar(1.0, -t),
                Complex64::ZERO,
                Complex64::ZERO,
                Complex64::from_polar(1.0, t),
            ];
            single_qubit(amps, n, op.targets[0], &op.controls, u);
        }
        GateKind::Ps | GateKind::Mcps => {
            let phi = op.angle.expect("PS carries an angle");
            // exp(i*pi) carries a ~1e-16 imaginary residue; keep MCPS(pi)
            // bit-identical to MCZ.
            let factor = if phi.abs() == std::f64::consts::PI {
                -Complex64::ONE
            } else {
                Complex64::from_polar(1.0, phi)
            };
            conditional_phase(amps, n, op, factor);
        }
        GateKind::Mcz => {
            conditional_phase(amps, n, op, -Complex64::ONE);
        }
        GateKind::Cnot => {
            let u = [Complex64::ZERO, Complex64::ONE, Complex64::ONE, Complex64::ZERO];
            single_qubit(amps, n, op.targets[0], &op.controls, u);
        }
        GateKind::Swap => {
            swap_qubits(amps, n, op.targets[0], op.targets[1]);
        }
    }
    Ok(())
}

fn mask_of(qs: &[usize], n: usize) -> u64 {
    qs.iter().fold(0u64, |m, &q| m | crate::state::qubit_mask(q, n))
}

/// 2x2 update on amplitude pairs selected by the target bit mask, restricted
/// to indices where all control bits are set. `u = [u00, u01, u10, u11]`.
fn single_qubit(amps: &mut [Complex64], n: usize, target: usize, controls: &[usize], u: [Complex64; 4]) {
    let tmask = crate::state::qubit_mask(target, n) as usize;
    let cmask = mask_of(controls, n) as usize;
    for i in 0..amps.len() {
        if i & tmask == 0 && i & cmask == cmask {
            let j = i | tmask;
            let a0 = amps[i];
            let a1 = amps[j];
            amps[i] = u[0] * a0 + u[1] * a1;
            amps[j] = u[2] * a0 + u[3] * a1;
        }
    }
}

/// Multiplies amplitudes whose controls and targets are all 1 by `factor`.
fn conditional_phase(amps: &mut [Complex64], n: usize, op: &GateOp, factor: Complex64) {
    let ones = (mask_of(&op.controls, n) | mask_of(&op.targets, n)) as usize;
    for (i, a) in amps.iter_mut().enumerate() {
        if i & ones == ones {
            *a *= factor;
        }
    }
}

fn swap_qubits(amps: &mut [Complex64], n: usize, a: usize, b: usize) {
    let ma = crate::state::qubit_mask(a, n) as usize;
    let mb = crate::state::qubit_mask(b, n) as usize;
    for i in 0..amps.len() {
        if i & ma != 0 && i & mb == 0 {
            amps.swap(i, i ^ ma ^ mb);
        }
    }
}

/// Dense complex matrix in row-major order.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseUnitary {
    dim: usize,
    data: Vec<Complex64>,
}

impl DenseUnitary {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.dim + col]
    }

    /// Maximum absolute entry difference.
    pub fn max_abs_diff(&self, other: &DenseUnitary) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Maximum entry difference after aligning the global phase of `other`,
    /// using the largest-magnitude entry of `self` as the reference.
    pub fn max_diff_up_to_global_phase(&self, other: &DenseUnitary) -> f64 {
        assert_eq!(self.dim, other.dim);
        let (k, a) = self
            .data
            .iter()
            .enumerate()
            .max_by(|(_, x), (_, y)| x.norm_sqr().total_cmp(&y.norm_sqr()))
            .expect("matrix is non-empty");
        let b = other.data[k];
        if a.norm() < 1e-14 || b.norm() < 1e-14 {
            return self.max_abs_diff(other);
        }
        let phase = (a / b) / (a / b).norm();
        self.data
            .iter()
            .zip(&other.data)
            .map(|(x, y)| (x - y * phase).norm())
            .fold(0.0, f64::max)
    }
}

/// The exact matrix of `circuit`, assembled column by column.
pub fn unitary_of(circuit: &Circuit) -> Result<DenseUnitary> {
    let n = circuit.n_qubits();
    if !(1..=MAX_UNITARY_QUBITS).contains(&n) {
        return Err(Error::QubitCountOutOfRange { n, min: 1, max: MAX_UNITARY_QUBITS });
    }
    let dim = 1usize << n;
    let mut data = vec![Complex64::ZERO; dim * dim];
    let mut col = vec![Complex64::ZERO; dim];
    for c in 0..dim {
        col.fill(Complex64::ZERO);
        col[c] = Complex64::ONE;
        for op in circuit.ops() {
            apply_gate(&mut col, n, op)?;
        }
        for r in 0..dim {
            data[r * dim + c] = col[r];
        }
    }
    Ok(DenseUnitary { dim, data })
}
