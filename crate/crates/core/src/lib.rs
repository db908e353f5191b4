//! Repeated amplitude- and phase-damping channels on two-qubit density
//! matrices, with l1-norm coherence tracking and frozen-coherence decisions.
//!
//! Every evolved quantity is available along two independent routes: the
//! iterated Kraus map ([`channels::apply_n`]) and closed-form expressions in
//! the input entries ([`channels::closed_form_ad`],
//! [`coherence::analytic_coherence_ad`]).
//!
//! Two-qubit matrices use the basis order `|00>, |01>, |10>, |11>` throughout;
//! the first tensor factor is the first subsystem.

pub mod channels;
pub mod coherence;
pub mod error;
pub mod qmat;
pub mod states;
pub mod structure;
pub mod sweeper;

pub use error::{Error, Result, ValidationError};

/// Tolerance for validating density matrices.
pub const TOL_STRUCT: f64 = 1e-9;

/// Tolerance for comparing closed-form results against the iterated map.
pub const TOL_ORACLE: f64 = 1e-12;

/// Tolerance, in radians, for argument comparison of complex entries.
pub const TOL_ARG: f64 = 1e-9;
