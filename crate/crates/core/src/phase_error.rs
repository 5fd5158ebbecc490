//! Phase-error-rate estimators.
//!
//! [`ex_ideal`] evaluates the four ideal X-basis probabilities straight from
//! the attack amplitudes and is the reference for every other estimator:
//!
//! * [`ex_eq2`]: simplified receiver, one `|->` projection plus the Z basis;
//! * [`ex_eq7`]: time-bin monitoring line only;
//! * [`ex_eq12`]: the time-bin form rewritten on joint probabilities of the
//!   efficient (overlapping) encoding.
//!
//! The three restricted estimators share the shape `A + max(0, B)`;
//! [`PhaseErrorEstimate`] keeps both pieces so the clamp argument can be
//! checked against the oracle.

use crate::quantum::{
    cond_prob_simple, Component, CondProbTable, Convention, EveAttack, PreparedState, SimpleOutcome, TimebinOutcome,
};
use crate::{Error, Result};

/// Selects between the corrected and the as-printed form of a formula whose
/// printed version fails its oracle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FormulaVariant {
    #[default]
    Corrected,
    AsPrinted,
}

/// `leading + max(0, clamp_argument)` before any range clamping.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseErrorEstimate {
    pub leading: f64,
    pub clamp_argument: f64,
}

impl PhaseErrorEstimate {
    pub fn raw(&self) -> f64 {
        self.leading + self.clamp_argument.max(0.0)
    }

    /// Raw value clamped to `[0, 1]`.
    pub fn value(&self) -> f64 {
        self.raw().clamp(0.0, 1.0)
    }
}

/// `(p(-|+) + p(+|-)) / (p(-|+) + p(+|+) + p(+|-) + p(-|-))`
pub fn ex_ideal(attack: &EveAttack) -> Result<f64> {
    use PreparedState::{XMinus, XPlus};
    use SimpleOutcome::{BMinus, BPlus};
    let mp = cond_prob_simple(attack, XPlus, BMinus);
    let pm = cond_prob_simple(attack, XMinus, BPlus);
    let pp = cond_prob_simple(attack, XPlus, BPlus);
    let mm = cond_prob_simple(attack, XMinus, BMinus);
    let den = mp + pp + pm + mm;
    if !(den > 0.0) {
        return Err(Error::NoStatistics("no X-basis detections"));
    }
    Ok((mp + pm) / den)
}

/// Ideal phase error in terms of ancilla overlaps:
/// `1/2 - Re(<phi_0^0|phi_1^1> + <phi_0^1|phi_1^0>) / S` with `S` the total
/// non-vacuum weight. `AsPrinted` evaluates `1 - 2 Re(..) / S`, which
/// disagrees with the probability ratio (it gives 1 on intercept-resend).
pub fn ex_ideal_closed_form(attack: &EveAttack, variant: FormulaVariant) -> Result<f64> {
    use Component::{One, Zero};
    let total: f64 = [(0, Zero), (0, One), (1, Zero), (1, One)]
        .iter()
        .map(|&(i, j)| attack.phi(i, j).norm_squared())
        .sum();
    if !(total > 0.0) {
        return Err(Error::NoStatistics("all ancilla weight is in the vacuum"));
    }
    let cross = (attack.overlap(0, Zero, 1, One) + attack.overlap(0, One, 1, Zero)).re;
    Ok(match variant {
        FormulaVariant::Corrected => 0.5 - cross / total,
        FormulaVariant::AsPrinted => 1.0 - 2.0 * cross / total,
    })
}

/// Probabilities available to the simplified receiver.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimpleProbSet {
    /// `z[i][j] = p(i|j)`: Bob's Z outcome `i` for Alice's Z input `j`.
    pub z: [[f64; 2]; 2],
    /// `p(-|+)`
    pub minus_given_plus: f64,
    /// `p(-|j)` for `j` in {0, 1}.
    pub minus_given_z: [f64; 2],
    /// `p(i|+)` for `i` in {0, 1}.
    pub z_given_plus: [f64; 2],
}

impl SimpleProbSet {
    pub fn from_attack(attack: &EveAttack) -> Self {
        use PreparedState::{XPlus, Z0, Z1};
        use SimpleOutcome::{BMinus, B0, B1};
        let p = |a, b| cond_prob_simple(attack, a, b);
        Self {
            z: [[p(Z0, B0), p(Z1, B0)], [p(Z0, B1), p(Z1, B1)]],
            minus_given_plus: p(XPlus, BMinus),
            minus_given_z: [p(Z0, BMinus), p(Z1, BMinus)],
            z_given_plus: [p(XPlus, B0), p(XPlus, B1)],
        }
    }

    fn z_total(&self) -> f64 {
        self.z.iter().flatten().sum()
    }
}

/// Phase error from the simplified receiver's probabilities.
pub fn ex_eq2(probs: &SimpleProbSet) -> Result<PhaseErrorEstimate> {
    let sz = probs.z_total();
    if !(sz > 0.0) {
        return Err(Error::NoStatistics("no Z-basis detections"));
    }
    let side: f64 = (0..2).map(|i| probs.minus_given_z[i] + probs.z_given_plus[i]).sum();
    Ok(PhaseErrorEstimate {
        leading: probs.minus_given_plus / sz,
        clamp_argument: 1.0 + (probs.minus_given_plus - side) / sz,
    })
}

/// Monitoring-line probabilities `p(t_j|i)` for `i` in {0, 1, +}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimebinProbSet {
    pub convention: Convention,
    /// `p[i][j] = p(t_j | i)`, rows ordered 0, 1, +.
    pub p: [[f64; 3]; 3],
}

impl TimebinProbSet {
    pub fn from_table(table: &CondProbTable) -> Self {
        let mut p = [[0.0; 3]; 3];
        for (i, a) in PreparedState::PROTOCOL.iter().enumerate() {
            for (j, b) in TimebinOutcome::MONITORED.iter().enumerate() {
                p[i][j] = table.get(*a, *b);
            }
        }
        Self {
            convention: table.convention,
            p,
        }
    }

    /// PaperScaled probabilities of `attack`.
    pub fn from_attack(attack: &EveAttack) -> Self {
        Self::from_table(&CondProbTable::from_attack(attack, Convention::PaperScaled))
    }

    /// `p(t_1|0) + p(t_1|1)`
    pub fn t1_given_z(&self) -> f64 {
        self.p[0][1] + self.p[1][1]
    }

    /// `p(t_0|+) + p(t_2|+)`
    pub fn side_given_plus(&self) -> f64 {
        self.p[2][0] + self.p[2][2]
    }

    /// `sum_{i in {0,1}} sum_{j in {0,2}} p(t_j|i)`
    pub fn side_given_z(&self) -> f64 {
        self.p[0][0] + self.p[0][2] + self.p[1][0] + self.p[1][2]
    }
}

/// Phase error from monitoring-line statistics only. Expects the
/// `PaperScaled` convention.
pub fn ex_eq7(probs: &TimebinProbSet) -> Result<PhaseErrorEstimate> {
    if probs.convention != Convention::PaperScaled {
        return Err(Error::param(
            "convention",
            "the monitoring-line estimator takes PaperScaled tables",
        ));
    }
    let side = probs.side_given_z();
    if !(side > 0.0) {
        return Err(Error::NoStatistics("no side-peak detections for Z inputs"));
    }
    let t1_plus = probs.p[2][1];
    Ok(PhaseErrorEstimate {
        leading: t1_plus / (2.0 * side),
        clamp_argument: 1.0 + (0.5 * (t1_plus - probs.t1_given_z()) - probs.side_given_plus()) / side,
    })
}

/// `alpha = p_z^2 / (4 (1 - p_z))`
pub fn alpha(p_z: f64) -> f64 {
    p_z * p_z / (4.0 * (1.0 - p_z))
}

/// `beta = p_z / 4`
pub fn beta(p_z: f64) -> f64 {
    p_z / 4.0
}

/// Weight of the `p(e,+,+)` term. A `(+,+)` pair carries `p(+)^2`, so the
/// weight that cancels it against the `(0,0)`/`(1,1)` normalization is
/// `alpha / (1 - p_z)`; the printed form reuses `alpha`.
pub fn plus_pair_weight(p_z: f64, variant: FormulaVariant) -> f64 {
    match variant {
        FormulaVariant::Corrected => alpha(p_z) / (1.0 - p_z),
        FormulaVariant::AsPrinted => alpha(p_z),
    }
}

/// Weight of the mixed-pair term `p(e,0,+) + p(e,+,1)`, whose patterns
/// carry `p(0) p(+)`. The printed form reuses `alpha`.
pub fn mixed_pair_weight(p_z: f64, variant: FormulaVariant) -> f64 {
    match variant {
        FormulaVariant::Corrected => p_z / (2.0 * (1.0 - p_z)),
        FormulaVariant::AsPrinted => alpha(p_z),
    }
}

/// Basis-choice probabilities `[p(0), p(1), p(+)]`.
pub fn state_probabilities(p_z: f64) -> [f64; 3] {
    [p_z / 2.0, p_z / 2.0, 1.0 - p_z]
}

pub(crate) fn check_p_z(p_z: f64) -> Result<()> {
    if p_z > 0.0 && p_z < 1.0 {
        Ok(())
    } else {
        Err(Error::param("p_z", format!("{p_z} is outside (0, 1)")))
    }
}

/// Joint probabilities of the efficient encoding.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JointProbSet {
    /// `p(e,i,i)` for `i` in {0, 1, +}.
    pub early_same: [f64; 3],
    /// `p(l,j)` for `j` in {0, 1, +}.
    pub late: [f64; 3],
    /// `p(e,0,+)`
    pub early_0plus: f64,
    /// `p(e,+,1)`
    pub early_plus1: f64,
    pub p_z: f64,
}

impl JointProbSet {
    /// Joint probabilities from single-round conditionals, with
    /// `p(e|j,j') = p(t_2|j) + p(t_0|j')` and `p(l|j) = p(t_1|j)`.
    pub fn from_conditional(probs: &TimebinProbSet, p_z: f64) -> Result<Self> {
        check_p_z(p_z)?;
        let ps = state_probabilities(p_z);
        let early = |prev: usize, cur: usize| probs.p[prev][2] + probs.p[cur][0];
        Ok(Self {
            early_same: std::array::from_fn(|i| early(i, i) * ps[i] * ps[i]),
            late: std::array::from_fn(|j| probs.p[j][1] * ps[j]),
            early_0plus: early(0, 2) * ps[0] * ps[2],
            early_plus1: early(2, 1) * ps[2] * ps[1],
            p_z,
        })
    }
}

/// Phase error on joint probabilities of the efficient encoding.
pub fn ex_eq12(probs: &JointProbSet, variant: FormulaVariant) -> Result<PhaseErrorEstimate> {
    check_p_z(probs.p_z)?;
    let se = probs.early_same[0] + probs.early_same[1];
    if !(se > 0.0) {
        return Err(Error::NoStatistics("no early-bin detections for Z pairs"));
    }
    let a = alpha(probs.p_z);
    let lead = 0.5 * a * probs.late[2] / se;
    let late_z = probs.late[0] + probs.late[1];
    Ok(PhaseErrorEstimate {
        leading: lead,
        clamp_argument: 1.0 + lead
            - (beta(probs.p_z) * late_z + plus_pair_weight(probs.p_z, variant) * probs.early_same[2]) / se,
    })
}

/// Expected number of monitored photons in absolute time slot `slot` when
/// `rounds` are sent back to back with the efficient encoding. Round `m`
/// puts its `t_0, t_1, t_2` into slots `2m, 2m+1, 2m+2`. PaperScaled.
fn slot_occupation(attack: &EveAttack, rounds: &[PreparedState], slot: usize) -> f64 {
    rounds
        .iter()
        .enumerate()
        .filter_map(|(m, a)| {
            let offset = slot.checked_sub(2 * m)?;
            let b = *TimebinOutcome::MONITORED.get(offset)?;
            Some(2.0 * crate::quantum::cond_prob_timebin_direct(attack, *a, b))
        })
        .sum()
}

/// `(p(t_0|j) + p(t_2|j), p(e|j,j))`, PaperScaled. The right side is read
/// off the shared early slot of two identical consecutive rounds.
pub fn pair_sum_identity(attack: &EveAttack, j: PreparedState) -> (f64, f64) {
    let table = crate::quantum::cond_prob_timebin_paper;
    let left = table(attack, j, TimebinOutcome::T0) + table(attack, j, TimebinOutcome::T2);
    (left, slot_occupation(attack, &[j, j], 2))
}

/// `(p(t_0|+) + p(t_2|+), p(e|0,+) + p(e|+,1))`, PaperScaled.
///
/// Equality needs `|0>` to leave `t_2` empty and `|1>` to leave `t_0` empty,
/// i.e. an attack without Z bit flips; otherwise the right side exceeds the
/// left by `p(t_2|0) + p(t_0|1)`.
pub fn equivalent_side_relation(attack: &EveAttack) -> (f64, f64) {
    use PreparedState::{XPlus, Z0, Z1};
    let table = crate::quantum::cond_prob_timebin_paper;
    let left = table(attack, XPlus, TimebinOutcome::T0) + table(attack, XPlus, TimebinOutcome::T2);
    let right = slot_occupation(attack, &[Z0, XPlus], 2) + slot_occupation(attack, &[XPlus, Z1], 2);
    (left, right)
}
