//! Dense state-vector simulation and amplitude amplification engines.
//!
//! The crate provides:
//!
//! - a deterministic `2^n` state-vector simulator with seeded measurement
//!   sampling ([`sim`], [`sample`]),
//! - rotation-tree amplitude encoding ([`prep`]),
//! - plain and exact amplitude amplification with interchangeable circuit and
//!   projector backends ([`amplify`]),
//! - the two-phase distributed exact variant over partitioned registers
//!   ([`distributed`]),
//! - circuit resource metrics: depth layering, analytic depth formulas and an
//!   ancilla-free decomposition of multi-controlled phase gates ([`metrics`]).
//!
//! Basis indices are read with qubit 0 as the most significant bit, so the
//! 4-qubit string `1000` is index 8.

pub mod amplify;
pub mod distributed;
pub mod error;
pub mod gate;
pub mod metrics;
pub mod prep;
pub mod presets;
pub mod report;
pub mod sample;
pub mod sim;
pub mod state;
pub mod target;

pub use error::{Error, Result};
pub use gate::{Circuit, GateKind, GateOp};
pub use prep::{AmplitudeSpec, Preparation};
pub use state::{Distribution, Histogram, StateVector};
pub use target::TargetSpec;
