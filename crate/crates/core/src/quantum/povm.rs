//! Monitoring-line POVM on the single-photon time-bin subspace.
//!
//! Basis order is `(|0,0>, |1,0>, |0,1>)`: vacuum, photon early, photon late.
//! Bob's qubit is embedded as `|0> -> |1,0>`, `|1> -> |0,1>`, `|vac> -> |0,0>`.

use nalgebra::Matrix3;
use num_complex::Complex64;

use super::{EveAttack, PreparedState, TimebinOutcome};

type CMatrix3 = Matrix3<Complex64>;

#[derive(Debug, Clone, PartialEq)]
pub struct PovmSet {
    pub t0: CMatrix3,
    pub t1: CMatrix3,
    pub t2: CMatrix3,
    pub no_detect: CMatrix3,
}

fn real(m: Matrix3<f64>) -> CMatrix3 {
    m.map(Complex64::from)
}

impl PovmSet {
    pub fn element(&self, b: TimebinOutcome) -> &CMatrix3 {
        match b {
            TimebinOutcome::T0 => &self.t0,
            TimebinOutcome::T1 => &self.t1,
            TimebinOutcome::T2 => &self.t2,
            TimebinOutcome::NoDetect => &self.no_detect,
        }
    }

    pub fn sum(&self) -> CMatrix3 {
        self.t0 + self.t1 + self.t2 + self.no_detect
    }

    /// Identity minus the three monitored elements.
    pub fn remainder(&self) -> CMatrix3 {
        CMatrix3::identity() - self.t0 - self.t1 - self.t2
    }

    /// Smallest eigenvalue over all four elements.
    pub fn min_eigenvalue(&self) -> f64 {
        TimebinOutcome::ALL
            .iter()
            .flat_map(|b| {
                self.element(*b)
                    .symmetric_eigenvalues()
                    .iter()
                    .copied()
                    .collect::<Vec<_>>()
            })
            .fold(f64::INFINITY, f64::min)
    }

    /// Largest `|M - M^dagger|` entry over all four elements.
    pub fn hermiticity_residual(&self) -> f64 {
        TimebinOutcome::ALL
            .iter()
            .map(|b| {
                let m = self.element(*b);
                (m - m.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max)
            })
            .fold(0.0, f64::max)
    }
}

/// The four monitoring-line elements with the printed coefficients.
pub fn povm_elements() -> PovmSet {
    let q = 0.25;
    let t0 = Matrix3::new(0.0, 0.0, 0.0, 0.0, q, 0.0, 0.0, 0.0, 0.0);
    let t1 = Matrix3::new(0.0, 0.0, 0.0, 0.0, q, -q, 0.0, -q, q);
    let t2 = Matrix3::new(0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, q);
    // 1/2 * identity + 1/2 |0,0><0,0| + 1/4 (|0,1><1,0| + |1,0><0,1|)
    let no_detect = Matrix3::identity() * 0.5
        + Matrix3::new(0.5, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0)
        + Matrix3::new(0.0, 0.0, 0.0, 0.0, 0.0, q, 0.0, q, 0.0);
    PovmSet {
        t0: real(t0),
        t1: real(t1),
        t2: real(t2),
        no_detect: real(no_detect),
    }
}

/// Bob's reduced state in the `(|0,0>, |1,0>, |0,1>)` basis.
pub(crate) fn reduced_state(attack: &EveAttack, a: PreparedState) -> CMatrix3 {
    let [c0, c1, cv] = attack.bob_components(a);
    // basis index -> Eve vector attached to it
    let comps = [&cv, &c0, &c1];
    CMatrix3::from_fn(|m, n| comps[n].dotc(comps[m]))
}

/// `tr(M_b rho_B)`.
pub fn povm_prob(attack: &EveAttack, a: PreparedState, b: TimebinOutcome) -> f64 {
    let rho = reduced_state(attack, a);
    (povm_elements().element(b) * rho).trace().re
}
