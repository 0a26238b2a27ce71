//! Shared generators for the integration suites.

use aamp::prep::AmplitudeSpec;
use aamp::target::TargetSpec;
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// One standard normal draw (Box-Muller).
pub fn normal(rng: &mut ChaCha8Rng) -> f64 {
    let u1: f64 = rng.random::<f64>().max(1e-12);
    let u2: f64 = rng.random();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

/// Haar-like random complex unit vector on `n` qubits.
pub fn random_complex_state(rng: &mut ChaCha8Rng, n: usize) -> AmplitudeSpec {
    let amps: Vec<Complex64> = (0..(1usize << n))
        .map(|_| Complex64::new(normal(rng), normal(rng)))
        .collect();
    AmplitudeSpec::new_normalized(amps).expect("normal draws are normalizable")
}

/// Random real-nonnegative unit vector on `n` qubits.
pub fn random_real_state(rng: &mut ChaCha8Rng, n: usize) -> AmplitudeSpec {
    let amps: Vec<Complex64> = (0..(1usize << n))
        .map(|_| Complex64::new(normal(rng).abs(), 0.0))
        .collect();
    AmplitudeSpec::new_normalized(amps).expect("normal draws are normalizable")
}

/// Random nonempty proper target set with at most `max_len` elements.
pub fn random_targets(rng: &mut ChaCha8Rng, n: usize, max_len: usize) -> TargetSpec {
    let space = 1u64 << n;
    let len = rng.random_range(1..=max_len.min(space as usize - 1));
    let mut picked = std::collections::BTreeSet::new();
    while picked.len() < len {
        picked.insert(rng.random_range(0..space));
    }
    TargetSpec::from_indices(n, picked).expect("set is nonempty and proper")
}

/// Random partition of `n` qubits into `2..=n` positive parts.
pub fn random_partition(rng: &mut ChaCha8Rng, n: usize) -> Vec<usize> {
    let t = rng.random_range(2..=n);
    let mut cuts = std::collections::BTreeSet::new();
    while cuts.len() < t - 1 {
        cuts.insert(rng.random_range(1..n));
    }
    let mut sizes = Vec::with_capacity(t);
    let mut prev = 0;
    for &c in &cuts {
        sizes.push(c - prev);
        prev = c;
    }
    sizes.push(n - prev);
    sizes
}
