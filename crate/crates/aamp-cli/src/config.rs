//! Run configuration: a TOML key-value tree, with command-line flags taking
//! precedence over file values.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use aamp::prep::AmplitudeSpec;
use aamp::presets;
use aamp::state::index_to_bitstring;
use aamp::target::TargetSpec;
use aamp::Preparation;

use crate::CliError;

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "AAMP_OUT_DIR";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AlgorithmChoice {
    Qaaa,
    Eqaaa,
    Deqaaa,
}

impl std::str::FromStr for AlgorithmChoice {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "qaaa" => Ok(Self::Qaaa),
            "eqaaa" => Ok(Self::Eqaaa),
            "deqaaa" => Ok(Self::Deqaaa),
            other => Err(format!("unknown algorithm {other:?} (expected qaaa|eqaaa|deqaaa)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BackendChoice {
    Circuit,
    Projector,
}

impl std::str::FromStr for BackendChoice {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "circuit" => Ok(Self::Circuit),
            "projector" => Ok(Self::Projector),
            other => Err(format!("unknown backend {other:?} (expected circuit|projector)")),
        }
    }
}

impl From<BackendChoice> for aamp::amplify::Backend {
    fn from(b: BackendChoice) -> Self {
        match b {
            BackendChoice::Circuit => aamp::amplify::Backend::Circuit,
            BackendChoice::Projector => aamp::amplify::Backend::Projector,
        }
    }
}

/// A target entry: decimal index, bit string, or a raw command-line token
/// whose reading is settled once the register width is known (an all-0/1
/// token of exactly the register width is a bit string, anything else is
/// decimal).
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum TargetEntry {
    Decimal(u64),
    Bits(String),
}

#[derive(Debug, Clone)]
pub enum TargetToken {
    Entry(TargetEntry),
    Raw(String),
}

impl From<TargetEntry> for TargetToken {
    fn from(e: TargetEntry) -> Self {
        TargetToken::Entry(e)
    }
}

/// File-level run configuration. Every field is optional so flags can fill
/// the gaps.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunFileConfig {
    pub algorithm: Option<AlgorithmChoice>,
    pub state: Option<String>,
    pub targets: Option<Vec<TargetEntry>>,
    pub partition: Option<Vec<usize>>,
    pub shots: Option<u64>,
    pub seed: Option<u64>,
    pub backend: Option<BackendChoice>,
    pub decompose: Option<bool>,
    pub bit_reverse: Option<bool>,
    /// Normalize amplitude files that are not unit norm.
    pub normalize: Option<bool>,
    pub report: Option<PathBuf>,
    pub histogram: Option<PathBuf>,
}

impl RunFileConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::config(format!("cannot read {}: {e}", path.display())))?;
        toml::from_str(&text)
            .map_err(|e| CliError::config(format!("bad config {}: {e}", path.display())))
    }
}

/// Fully resolved run configuration.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub algorithm: AlgorithmChoice,
    pub state: String,
    pub targets: Vec<TargetToken>,
    pub partition: Option<Vec<usize>>,
    pub shots: Option<u64>,
    pub seed: u64,
    pub backend: BackendChoice,
    pub decompose: bool,
    pub bit_reverse: bool,
    pub normalize: bool,
    pub report: PathBuf,
    pub histogram: Option<PathBuf>,
}

impl RunConfig {
    /// Validates cross-field constraints (partition presence, shot counts).
    pub fn validate(&self) -> Result<(), CliError> {
        match (self.algorithm, &self.partition) {
            (AlgorithmChoice::Deqaaa, None) => {
                Err(CliError::config("deqaaa requires a partition".into()))
            }
            (AlgorithmChoice::Deqaaa, Some(_)) => Ok(()),
            (_, Some(_)) => Err(CliError::config(
                "partition is only meaningful for deqaaa".into(),
            )),
            _ => Ok(()),
        }?;
        if self.targets.is_empty() {
            return Err(CliError::config("no targets given".into()));
        }
        if self.shots == Some(0) {
            return Err(CliError::config("shots must be at least 1".into()));
        }
        Ok(())
    }
}

/// Joins a path with the `AAMP_OUT_DIR` directory when it is relative.
pub fn resolve_output(path: &Path) -> PathBuf {
    if path.is_absolute() {
        return path.to_path_buf();
    }
    match std::env::var_os(OUT_DIR_ENV) {
        Some(dir) => Path::new(&dir).join(path),
        None => path.to_path_buf(),
    }
}

/// Resolves a state source string into a preparation.
///
/// Recognized forms: `paper4q`, `uniform:<n>`, `file:<path>` (or a bare path
/// to a `bitstring,real,imag` CSV).
pub fn resolve_state(source: &str, normalize: bool) -> Result<Preparation, CliError> {
    if source == "paper4q" {
        return Ok(presets::paper4q());
    }
    if let Some(n) = source.strip_prefix("uniform:") {
        let n: usize = n
            .parse()
            .map_err(|_| CliError::config(format!("bad qubit count in {source:?}")))?;
        return presets::uniform(n).map_err(CliError::from);
    }
    let path = source.strip_prefix("file:").unwrap_or(source);
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::config(format!("cannot read state file {path}: {e}")))?;
    let spec = AmplitudeSpec::from_csv(&text, normalize)?;
    Preparation::from_spec(spec).map_err(CliError::from)
}

/// Renders a basis index as a bit string under the configured readout order.
pub fn render_index(x: u64, n: usize, bit_reverse: bool) -> String {
    let s = index_to_bitstring(x, n);
    if bit_reverse {
        s.chars().rev().collect()
    } else {
        s
    }
}

/// Parses target entries into a target set over `n` bits. Decimal entries are
/// read in the configured bit order: with `bit_reverse`, decimal 8 on four
/// qubits selects the string `0001`.
pub fn resolve_targets(
    entries: &[TargetToken],
    n: usize,
    bit_reverse: bool,
) -> Result<TargetSpec, CliError> {
    let mut strings = Vec::with_capacity(entries.len());
    for token in entries {
        let entry = match token {
            TargetToken::Entry(e) => e.clone(),
            TargetToken::Raw(tok) => {
                if tok.len() == n && tok.chars().all(|c| c == '0' || c == '1') {
                    TargetEntry::Bits(tok.clone())
                } else if let Ok(d) = tok.parse::<u64>() {
                    TargetEntry::Decimal(d)
                } else {
                    return Err(CliError::config(format!("bad target entry {tok:?}")));
                }
            }
        };
        match entry {
            TargetEntry::Decimal(d) => {
                if d >= (1u64 << n) {
                    return Err(CliError::config(format!(
                        "target {d} does not fit in {n} bits"
                    )));
                }
                strings.push(render_index(d, n, bit_reverse));
            }
            TargetEntry::Bits(s) => {
                if s.len() != n {
                    return Err(CliError::config(format!(
                        "target {s:?} has width {}, state has {n} qubits",
                        s.len()
                    )));
                }
                strings.push(s);
            }
        }
    }
    TargetSpec::from_bitstrings(&strings).map_err(CliError::from)
}
