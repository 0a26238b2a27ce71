//! Seeded measurement sampling and distribution divergence.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::state::{Distribution, Histogram, StateVector};

/// Draws `shots` i.i.d. samples from the exact distribution of `state`.
///
/// Sampling is inverse-CDF over a ChaCha8 stream seeded with `seed`, drawn
/// sequentially, so identical `(state, shots, seed)` inputs produce identical
/// histograms on every platform and thread count.
pub fn sample(state: &StateVector, shots: u64, seed: u64) -> Result<Histogram> {
    if shots == 0 {
        return Err(Error::Domain("shots must be at least 1".into()));
    }
    let dist = state.exact_distribution();
    let mut cdf = Vec::with_capacity(dist.probs().len());
    let mut acc = 0.0;
    for &p in dist.probs() {
        acc += p;
        cdf.push(acc);
    }
    let total = acc;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts: BTreeMap<u64, u64> = BTreeMap::new();
    for _ in 0..shots {
        let u: f64 = rng.random::<f64>() * total;
        let idx = cdf.partition_point(|&c| c <= u).min(cdf.len() - 1);
        *counts.entry(idx as u64).or_insert(0) += 1;
    }
    Histogram::new(shots, counts)
}

/// Kullback-Leibler divergence `D(approx || exact)` in nats.
///
/// Terms with `approx(x) = 0` contribute zero; any outcome with
/// `approx(x) > 0` but `exact(x) = 0` makes the divergence infinite.
pub fn kl_divergence(approx: &Distribution, exact: &Distribution) -> Result<f64> {
    if approx.n_bits() != exact.n_bits() {
        return Err(Error::DimensionMismatch {
            left: approx.n_bits(),
            right: exact.n_bits(),
        });
    }
    let mut div = 0.0;
    for (&a, &e) in approx.probs().iter().zip(exact.probs()) {
        if a <= 0.0 {
            continue;
        }
        if e <= 0.0 {
            return Ok(f64::INFINITY);
        }
        div += a * (a / e).ln();
    }
    Ok(div)
}
