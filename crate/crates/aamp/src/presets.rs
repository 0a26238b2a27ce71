//! Built-in experiment states.

use num_complex::Complex64;

use crate::error::Result;
use crate::prep::{AmplitudeSpec, Preparation};

/// The 16 amplitudes of the bundled 4-qubit example state (`paper4q`).
///
/// Published to four decimals, so the raw vector is normalized on load.
#[allow(clippy::approx_constant)] // 0.3180 happens to sit near 1/pi
pub const PAPER4Q_AMPLITUDES: [f64; 16] = [
    0.1506, 0.1908, 0.3120, 0.1788, 0.2055, 0.2719, 0.2793, 0.2273, 0.3164, 0.2719, 0.3180,
    0.2207, 0.1860, 0.2572, 0.3046, 0.2200,
];

/// The `paper4q` preset as an amplitude spec.
pub fn paper4q_spec() -> AmplitudeSpec {
    AmplitudeSpec::new_normalized(
        PAPER4Q_AMPLITUDES
            .iter()
            .map(|&a| Complex64::new(a, 0.0))
            .collect(),
    )
    .expect("the bundled amplitude list is normalizable")
}

/// The `paper4q` preset with its rotation-tree preparation circuit.
pub fn paper4q() -> Preparation {
    Preparation::from_spec(paper4q_spec()).expect("the bundled state encodes cleanly")
}

/// The `uniform:n` preset, prepared by a single layer of H gates.
pub fn uniform(n: usize) -> Result<Preparation> {
    Preparation::uniform(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::target::{success_probability, TargetSpec};

    #[test]
    fn paper4q_success_probability_matches_published_value() {
        let spec = paper4q_spec();
        let dist = crate::prep::prepare_direct(&spec).exact_distribution();
        let targets = TargetSpec::from_indices(4, [8, 14]).unwrap();
        let p = success_probability(&dist, &targets).unwrap();
        assert!((p - 0.1929).abs() < 5e-4, "p = {p}");
    }

    #[test]
    fn paper4q_circuit_prepares_the_published_expansion() {
        let prep = paper4q();
        let zero = crate::state::StateVector::zero(4).unwrap();
        let state = crate::sim::apply_circuit(&zero, &prep.circuit).unwrap();
        // exact against the normalized spec, 4-decimal against the raw list
        for (a, b) in state.amplitudes().iter().zip(prep.spec.amplitudes()) {
            assert!((a - b).norm() < 1e-10);
        }
        for (a, raw) in state.amplitudes().iter().zip(PAPER4Q_AMPLITUDES) {
            assert!((a.re - raw).abs() < 1e-3 && a.im.abs() < 1e-12);
        }
        let dist = state.exact_distribution();
        assert!((dist.probs()[8] - 0.3164f64.powi(2)).abs() < 1e-4);
        assert!((dist.probs()[14] - 0.3046f64.powi(2)).abs() < 1e-4);
    }
}
