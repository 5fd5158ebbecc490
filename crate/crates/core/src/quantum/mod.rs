//! Single-photon states, collective attacks and Bob's measurement models.
//!
//! Eve's collective attack maps Alice's Z-basis inputs to
//!
//! ```text
//! U |i>|phi> = |0>|phi_i^0> + |1>|phi_i^1> + |vac>|phi_i^vac>,   i in {0, 1}
//! ```
//!
//! with unnormalized ancilla vectors `phi_i^j`. Every probability in this
//! module is a squared norm of a Bob-side component of that state, so the
//! functions here double as the ground-truth oracle for the estimators in
//! [`crate::phase_error`].

mod attack;
mod measurement;
mod povm;

pub use attack::{Component, EveAttack, DEFAULT_ANCILLA_DIM, UNITARITY_TOL};
pub use measurement::{
    cond_prob_simple, cond_prob_timebin_direct, cond_prob_timebin_paper, CondProbTable, Convention, SimpleTable,
};
pub use povm::{povm_elements, povm_prob, PovmSet};

use nalgebra::DVector;
use num_complex::Complex64;

/// Amplitude vector in Eve's ancilla space.
pub type ComplexVector = DVector<Complex64>;

/// States Alice can prepare. `XMinus` exists only for the ideal-case oracle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PreparedState {
    Z0,
    Z1,
    XPlus,
    XMinus,
}

impl PreparedState {
    pub const ALL: [PreparedState; 4] = [Self::Z0, Self::Z1, Self::XPlus, Self::XMinus];
    /// The three states used by the protocol.
    pub const PROTOCOL: [PreparedState; 3] = [Self::Z0, Self::Z1, Self::XPlus];

    /// Rejects `XMinus`; returns the index into protocol-indexed arrays.
    pub fn protocol_index(self) -> crate::Result<usize> {
        match self {
            Self::Z0 => Ok(0),
            Self::Z1 => Ok(1),
            Self::XPlus => Ok(2),
            Self::XMinus => Err(crate::Error::ForbiddenState),
        }
    }

    pub(crate) fn index(self) -> usize {
        self as usize
    }

    pub fn is_z(self) -> bool {
        matches!(self, Self::Z0 | Self::Z1)
    }

    /// Coefficients of the state on (|0>, |1>).
    pub(crate) fn amplitudes(self) -> (f64, f64) {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        match self {
            Self::Z0 => (1.0, 0.0),
            Self::Z1 => (0.0, 1.0),
            Self::XPlus => (h, h),
            Self::XMinus => (h, -h),
        }
    }
}

/// Outcomes of the simplified polarization-style receiver: a Z measurement or
/// a single projection onto |->.
///
/// `BPlus` is not measured by the protocol. It is kept so the ideal phase
/// error can be evaluated directly from amplitudes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SimpleOutcome {
    B0,
    B1,
    BMinus,
    BPlus,
    NoDetect,
}

/// Outcomes on the monitoring line of the time-bin receiver.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TimebinOutcome {
    T0,
    T1,
    T2,
    NoDetect,
}

impl TimebinOutcome {
    pub const ALL: [TimebinOutcome; 4] = [Self::T0, Self::T1, Self::T2, Self::NoDetect];
    pub const MONITORED: [TimebinOutcome; 3] = [Self::T0, Self::T1, Self::T2];

    pub(crate) fn index(self) -> usize {
        self as usize
    }
}
