//! # avgfid
//!
//! Average gate fidelity of a noisy operation on a d-dimensional quantum
//! system, computed in closed form from an orthogonal unitary operator basis
//! and cross-checked by independent routes:
//!
//! - [`fidelity`]: entanglement fidelity, the Horodecki relation, the
//!   basis-sum gate-fidelity formula and its qubit Pauli form.
//! - [`haar`]: Haar sampling and Monte Carlo estimators of the defining
//!   integrals, including the empirical twirl.
//! - [`experiment`]: the same fidelity estimated from simulated state
//!   tomography on a spanning set of preparation states.
//! - [`channel`], [`basis`], [`linalg`]: Kraus channels, shift/clock bases,
//!   and the dense complex linear algebra underneath.
//! - [`spec`]: the JSON channel/gate file formats and report writer used by
//!   the `avgfid` binary.

pub mod basis;
pub mod channel;
pub mod cli;
pub mod error;
pub mod experiment;
pub mod fidelity;
pub mod haar;
pub mod linalg;
pub mod spec;

#[cfg(test)]
mod test_util;

pub use basis::{shift_clock_basis, validate_basis, UnitaryOperatorBasis};
pub use channel::{compose, depolarizing, exact_twirl, random_channel, unitary_channel, DepolarizingParams, QuantumChannel};
pub use error::{Error, Result};
pub use experiment::{estimate_fidelity_experiment, Shots};
pub use fidelity::{average_fidelity, average_gate_fidelity, entanglement_fidelity, FidelityMethod, FidelityValue};
pub use haar::{mc_average_gate_fidelity, McEstimate};
pub use linalg::{ComplexMatrix, DensityMatrix, PureState};
pub use num_complex::Complex64;
