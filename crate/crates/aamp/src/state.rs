//! State vectors, probability distributions and measurement histograms.
//!
//! Basis indices use the convention that qubit 0 is the MOST significant bit
//! of the index. A 4-qubit basis state written `1000` is index 8.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest register simulated as a dense state vector.
pub const MAX_STATE_QUBITS: usize = 24;

/// Largest register for which dense unitaries are assembled.
pub const MAX_UNITARY_QUBITS: usize = 10;

/// Bit mask selecting qubit `q` of an `n`-qubit basis index (qubit 0 = MSB).
#[inline]
pub fn qubit_mask(q: usize, n: usize) -> u64 {
    1u64 << (n - 1 - q)
}

/// Value of qubit `q` in basis index `x` of an `n`-qubit register.
#[inline]
pub fn qubit_bit(x: u64, q: usize, n: usize) -> u64 {
    (x >> (n - 1 - q)) & 1
}

/// Renders a basis index as an `n`-bit string, qubit 0 first.
pub fn index_to_bitstring(x: u64, n: usize) -> String {
    let mut s = String::with_capacity(n);
    for q in 0..n {
        let _ = write!(s, "{}", qubit_bit(x, q, n));
    }
    s
}

/// Parses a bit string into `(index, width)`.
pub fn bitstring_to_index(s: &str) -> Result<(u64, usize)> {
    if s.is_empty() || s.len() > 63 {
        return Err(Error::Parse {
            line: 0,
            message: format!("bit string must have 1..=63 bits, got {:?}", s),
        });
    }
    let mut x = 0u64;
    for c in s.chars() {
        x = (x << 1)
            | match c {
                '0' => 0,
                '1' => 1,
                other => {
                    return Err(Error::Parse {
                        line: 0,
                        message: format!("invalid bit {:?} in {:?}", other, s),
                    })
                }
            };
    }
    Ok((x, s.len()))
}

/// Dense complex state of an `n`-qubit register.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// The all-zero computational basis state |0...0>.
    pub fn zero(n_qubits: usize) -> Result<Self> {
        if !(1..=MAX_STATE_QUBITS).contains(&n_qubits) {
            return Err(Error::QubitCountOutOfRange {
                n: n_qubits,
                min: 1,
                max: MAX_STATE_QUBITS,
            });
        }
        let mut amps = vec![Complex64::ZERO; 1usize << n_qubits];
        amps[0] = Complex64::ONE;
        Ok(Self { n_qubits, amps })
    }

    /// Wraps an amplitude vector whose length must be a power of two.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let len = amps.len();
        if !len.is_power_of_two() || len < 2 {
            return Err(Error::DimensionMismatch { left: len, right: 2 });
        }
        let n_qubits = len.trailing_zeros() as usize;
        if n_qubits > MAX_STATE_QUBITS {
            return Err(Error::QubitCountOutOfRange {
                n: n_qubits,
                min: 1,
                max: MAX_STATE_QUBITS,
            });
        }
        Ok(Self { n_qubits, amps })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub(crate) fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    /// L2 norm of the amplitude vector.
    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Exact measurement distribution: `probs[x] = |amps[x]|^2`.
    pub fn exact_distribution(&self) -> Distribution {
        Distribution {
            n_bits: self.n_qubits,
            probs: self.amps.iter().map(|a| a.norm_sqr()).collect(),
        }
    }

    /// Largest per-amplitude deviation from `other` after aligning global phase.
    ///
    /// The aligning phase is taken from the largest-magnitude amplitude of `self`.
    pub fn global_phase_distance(&self, other: &StateVector) -> Result<f64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        let (k, _) = self
            .amps
            .iter()
            .enumerate()
            .max_by(|(_, a), (_, b)| a.norm_sqr().total_cmp(&b.norm_sqr()))
            .expect("state is non-empty");
        let a = self.amps[k];
        let b = other.amps[k];
        if a.norm() < 1e-14 || b.norm() < 1e-14 {
            // No usable reference amplitude; fall back to raw distance.
            return Ok(self
                .amps
                .iter()
                .zip(&other.amps)
                .map(|(x, y)| (x - y).norm())
                .fold(0.0, f64::max));
        }
        let phase = (a / b) / (a / b).norm();
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(x, y)| (x - y * phase).norm())
            .fold(0.0, f64::max))
    }
}

/// Exact probability distribution over `2^n_bits` outcomes.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    n_bits: usize,
    probs: Vec<f64>,
}

impl Distribution {
    pub fn new(n_bits: usize, probs: Vec<f64>) -> Result<Self> {
        if probs.len() != 1usize << n_bits {
            return Err(Error::DimensionMismatch {
                left: probs.len(),
                right: 1usize << n_bits,
            });
        }
        if probs.iter().any(|p| !p.is_finite() || *p < 0.0) {
            return Err(Error::Domain("probabilities must be finite and nonnegative".into()));
        }
        Ok(Self { n_bits, probs })
    }

    pub fn n_bits(&self) -> usize {
        self.n_bits
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn total(&self) -> f64 {
        self.probs.iter().sum()
    }

    /// CSV export, one `bitstring,value` row per outcome.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("bitstring,value\n");
        for (x, p) in self.probs.iter().enumerate() {
            let _ = writeln!(out, "{},{}", index_to_bitstring(x as u64, self.n_bits), p);
        }
        out
    }
}

/// Counts of sampled measurement outcomes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Histogram {
    shots: u64,
    counts: BTreeMap<u64, u64>,
}

impl Histogram {
    pub fn new(shots: u64, counts: BTreeMap<u64, u64>) -> Result<Self> {
        let sum: u64 = counts.values().sum();
        if sum != shots {
            return Err(Error::Domain(format!(
                "histogram counts sum to {sum}, expected {shots}"
            )));
        }
        Ok(Self { shots, counts })
    }

    pub fn shots(&self) -> u64 {
        self.shots
    }

    pub fn counts(&self) -> &BTreeMap<u64, u64> {
        &self.counts
    }

    /// Normalizes counts into a distribution over `n_bits` outcomes.
    pub fn to_distribution(&self, n_bits: usize) -> Result<Distribution> {
        let mut probs = vec![0.0; 1usize << n_bits];
        for (&x, &c) in &self.counts {
            let slot = probs.get_mut(x as usize).ok_or(Error::DimensionMismatch {
                left: x as usize,
                right: 1usize << n_bits,
            })?;
            *slot = c as f64 / self.shots as f64;
        }
        Distribution::new(n_bits, probs)
    }

    /// CSV export, one `bitstring,value` row per observed outcome.
    pub fn to_csv(&self, n_bits: usize) -> String {
        let mut out = String::from("bitstring,value\n");
        for (&x, &c) in &self.counts {
            let _ = writeln!(out, "{},{}", index_to_bitstring(x, n_bits), c);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_state_has_unit_amplitude_at_origin() {
        for n in [1usize, 2, 4] {
            let s = StateVector::zero(n).unwrap();
            assert_eq!(s.dim(), 1 << n);
            assert_eq!(s.amplitudes()[0], Complex64::ONE);
            assert!(s.amplitudes()[1..].iter().all(|a| *a == Complex64::ZERO));
        }
    }

    #[test]
    fn zero_state_rejects_out_of_range_sizes() {
        assert!(StateVector::zero(0).is_err());
        assert!(StateVector::zero(MAX_STATE_QUBITS + 1).is_err());
    }

    #[test]
    fn bit_order_uses_qubit_zero_as_msb() {
        assert_eq!(index_to_bitstring(8, 4), "1000");
        assert_eq!(index_to_bitstring(14, 4), "1110");
        assert_eq!(bitstring_to_index("1000").unwrap(), (8, 4));
        assert_eq!(qubit_bit(8, 0, 4), 1);
        assert_eq!(qubit_bit(8, 3, 4), 0);
    }

    #[test]
    fn bitstring_roundtrip_is_a_bijection() {
        for n in 1..=12usize {
            for x in 0..(1u64 << n) {
                let s = index_to_bitstring(x, n);
                assert_eq!(bitstring_to_index(&s).unwrap(), (x, n));
            }
        }
    }

    #[test]
    fn histogram_counts_must_sum_to_shots() {
        let mut counts = BTreeMap::new();
        counts.insert(0u64, 3u64);
        counts.insert(2u64, 1u64);
        assert!(Histogram::new(4, counts.clone()).is_ok());
        assert!(Histogram::new(5, counts).is_err());
    }

    #[test]
    fn csv_exports_list_bitstring_value_rows() {
        let d = Distribution::new(1, vec![0.25, 0.75]).unwrap();
        assert_eq!(d.to_csv(), "bitstring,value\n0,0.25\n1,0.75\n");
        let mut counts = BTreeMap::new();
        counts.insert(2u64, 5u64);
        let h = Histogram::new(5, counts).unwrap();
        assert_eq!(h.to_csv(2), "bitstring,value\n10,5\n");
    }

    #[test]
    fn bell_distribution_squares_amplitudes() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let s = StateVector::from_amplitudes(vec![
            Complex64::new(h, 0.0),
            Complex64::ZERO,
            Complex64::ZERO,
            Complex64::new(h, 0.0),
        ])
        .unwrap();
        let d = s.exact_distribution();
        assert!((d.probs()[0] - 0.5).abs() < 1e-15);
        assert!((d.probs()[3] - 0.5).abs() < 1e-15);
    }
}
