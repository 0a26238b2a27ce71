//! Target sets: the marked basis states of a search instance.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::state::{bitstring_to_index, index_to_bitstring, Distribution};

/// A nonempty, proper set of `n_bits`-wide basis indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TargetSpec {
    n_bits: usize,
    targets: BTreeSet<u64>,
}

impl TargetSpec {
    pub fn from_indices(n_bits: usize, indices: impl IntoIterator<Item = u64>) -> Result<Self> {
        let spec = Self::projected(n_bits, indices)?;
        if spec.targets.len() as u64 >= 1u64 << n_bits {
            return Err(Error::InvalidTargets(
                "target set must not cover the whole space".into(),
            ));
        }
        Ok(spec)
    }

    /// Like [`TargetSpec::from_indices`] but permits the set to cover the
    /// whole space, which happens when a global target set is projected onto
    /// a narrow node slice (such a node is already certain and its
    /// amplification is skipped).
    pub fn projected(n_bits: usize, indices: impl IntoIterator<Item = u64>) -> Result<Self> {
        if n_bits == 0 || n_bits > 63 {
            return Err(Error::InvalidTargets(format!("unsupported width {n_bits}")));
        }
        let space = 1u64 << n_bits;
        let targets: BTreeSet<u64> = indices.into_iter().collect();
        if targets.is_empty() {
            return Err(Error::InvalidTargets("target set is empty".into()));
        }
        if let Some(&bad) = targets.iter().find(|&&x| x >= space) {
            return Err(Error::InvalidTargets(format!(
                "index {bad} does not fit in {n_bits} bits"
            )));
        }
        Ok(Self { n_bits, targets })
    }

    pub fn from_bitstrings<S: AsRef<str>>(strings: &[S]) -> Result<Self> {
        let mut width = None;
        let mut indices = Vec::new();
        for s in strings {
            let (x, w) = bitstring_to_index(s.as_ref())?;
            match width {
                None => width = Some(w),
                Some(prev) if prev != w => {
                    return Err(Error::InvalidTargets(format!(
                        "mixed target widths {prev} and {w}"
                    )))
                }
                _ => {}
            }
            indices.push(x);
        }
        let n_bits = width.ok_or_else(|| Error::InvalidTargets("target set is empty".into()))?;
        Self::from_indices(n_bits, indices)
    }

    pub fn n_bits(&self) -> usize {
        self.n_bits
    }

    pub fn len(&self) -> usize {
        self.targets.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, x: u64) -> bool {
        self.targets.contains(&x)
    }

    /// Target indices in ascending order.
    pub fn indices(&self) -> impl Iterator<Item = u64> + '_ {
        self.targets.iter().copied()
    }

    pub fn bitstrings(&self) -> Vec<String> {
        self.targets
            .iter()
            .map(|&x| index_to_bitstring(x, self.n_bits))
            .collect()
    }
}

/// Total probability mass the distribution assigns to the targets.
pub fn success_probability(dist: &Distribution, targets: &TargetSpec) -> Result<f64> {
    if dist.n_bits() != targets.n_bits() {
        return Err(Error::DimensionMismatch {
            left: dist.n_bits(),
            right: targets.n_bits(),
        });
    }
    Ok(targets.indices().map(|x| dist.probs()[x as usize]).sum())
}
