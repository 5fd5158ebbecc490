//! Security analysis of the three-state time-bin BB84 protocol with a
//! simplified receiver: collective-attack oracles, phase-error estimators,
//! one-decoy finite-key bounds, an honest-channel simulator and a key-rate
//! optimizer.

// `!(x > 0.0)` style guards reject NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod channel;
pub mod config;
pub mod counts;
pub mod decoy;
pub mod error;
pub mod keyrate;
pub mod optimize;
pub mod phase_error;
pub mod quantum;
pub mod sweep;
pub mod verify;

pub use error::{Error, Result};
