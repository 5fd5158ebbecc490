use num_complex::Complex64;

use super::{ComplexVector, Component, EveAttack, PreparedState, SimpleOutcome, TimebinOutcome};

/// Normalization of monitoring-line probabilities.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Convention {
    /// Squared norms of the interferometer output amplitudes; each row sums to 1.
    Direct,
    /// The closed-form ancilla expressions, which carry an overall factor 2
    /// on every monitored outcome. Ratios built from them are unaffected.
    PaperScaled,
}

/// `p(b|a)` for the simplified receiver: a projection onto `|b>` of the
/// Bob-side state, summed over Eve's ancilla. Not weighted by basis choice.
pub fn cond_prob_simple(attack: &EveAttack, a: PreparedState, b: SimpleOutcome) -> f64 {
    let [c0, c1, cv] = attack.bob_components(a);
    match b {
        SimpleOutcome::B0 => c0.norm_squared(),
        SimpleOutcome::B1 => c1.norm_squared(),
        SimpleOutcome::BMinus => 0.5 * (&c0 - &c1).norm_squared(),
        SimpleOutcome::BPlus => 0.5 * (&c0 + &c1).norm_squared(),
        SimpleOutcome::NoDetect => cv.norm_squared(),
    }
}

/// Output modes of the unbalanced interferometer for one input state:
/// monitored port `t0, t1, t2`, unmonitored port `r0, r1, r2`, then vacuum.
fn interferometer_modes(attack: &EveAttack, a: PreparedState) -> [ComplexVector; 7] {
    let [c0, c1, cv] = attack.bob_components(a);
    let half = Complex64::from(0.5);
    [
        &c0 * half,
        (&c1 - &c0) * half,
        -&c1 * half,
        &c0 * half,
        (&c0 + &c1) * half,
        &c1 * half,
        cv,
    ]
}

/// Monitoring-line probability from the interferometer amplitudes. Any
/// projection onto the unmonitored port counts as no detection.
pub fn cond_prob_timebin_direct(attack: &EveAttack, a: PreparedState, b: TimebinOutcome) -> f64 {
    let modes = interferometer_modes(attack, a);
    match b {
        TimebinOutcome::T0 => modes[0].norm_squared(),
        TimebinOutcome::T1 => modes[1].norm_squared(),
        TimebinOutcome::T2 => modes[2].norm_squared(),
        TimebinOutcome::NoDetect => modes[3..].iter().map(|m| m.norm_squared()).sum(),
    }
}

/// Monitoring-line probabilities written directly in terms of ancilla
/// overlaps (`PaperScaled` convention).
///
/// The `|->` row is not part of the closed form; it is obtained from the
/// `|+>` expressions with `phi_1` replaced by `-phi_1`.
pub fn cond_prob_timebin_paper(attack: &EveAttack, a: PreparedState, b: TimebinOutcome) -> f64 {
    use Component::{One as C1, Vacuum as CV, Zero as C0};
    let ip = |i: usize, j: Component, k: usize, l: Component| attack.overlap(i, j, k, l);
    let nrm = |i: usize, j: Component| ip(i, j, i, j).re;
    let re = |i: usize, j: Component, k: usize, l: Component| ip(i, j, k, l).re;
    match a {
        PreparedState::Z0 | PreparedState::Z1 => {
            let i = if a == PreparedState::Z0 { 0 } else { 1 };
            match b {
                TimebinOutcome::T0 => 0.5 * nrm(i, C0),
                TimebinOutcome::T1 => 0.5 * (nrm(i, C0) + nrm(i, C1) - 2.0 * re(i, C0, i, C1)),
                TimebinOutcome::T2 => 0.5 * nrm(i, C1),
                TimebinOutcome::NoDetect => nrm(i, CV),
            }
        }
        PreparedState::XPlus | PreparedState::XMinus => {
            let s = if a == PreparedState::XPlus { 1.0 } else { -1.0 };
            match b {
                TimebinOutcome::T0 => 0.25 * (nrm(0, C0) + nrm(1, C0) + 2.0 * s * re(0, C0, 1, C0)),
                TimebinOutcome::T1 => {
                    0.25 * (nrm(0, C0) + nrm(1, C0) + nrm(0, C1) + nrm(1, C1) - 2.0 * re(0, C0, 0, C1)
                        + 2.0 * s * re(0, C0, 1, C0)
                        - 2.0 * s * re(0, C0, 1, C1)
                        - 2.0 * s * re(0, C1, 1, C0)
                        + 2.0 * s * re(0, C1, 1, C1)
                        - 2.0 * re(1, C0, 1, C1))
                }
                TimebinOutcome::T2 => 0.25 * (nrm(0, C1) + nrm(1, C1) + 2.0 * s * re(0, C1, 1, C1)),
                TimebinOutcome::NoDetect => 0.5 * (nrm(0, CV) + nrm(1, CV) + 2.0 * s * re(0, CV, 1, CV)),
            }
        }
    }
}

/// Monitoring-line table `p(b|a)` for all four preparations.
#[derive(Debug, Clone, PartialEq)]
pub struct CondProbTable {
    pub convention: Convention,
    entries: [[f64; 4]; 4],
}

impl CondProbTable {
    pub fn from_attack(attack: &EveAttack, convention: Convention) -> Self {
        let f = match convention {
            Convention::Direct => cond_prob_timebin_direct,
            Convention::PaperScaled => cond_prob_timebin_paper,
        };
        let mut entries = [[0.0; 4]; 4];
        for a in PreparedState::ALL {
            for b in TimebinOutcome::ALL {
                entries[a.index()][b.index()] = f(attack, a, b);
            }
        }
        Self { convention, entries }
    }

    pub fn get(&self, a: PreparedState, b: TimebinOutcome) -> f64 {
        self.entries[a.index()][b.index()]
    }

    /// Sum over all outcomes for one preparation.
    pub fn row_sum(&self, a: PreparedState) -> f64 {
        self.entries[a.index()].iter().sum()
    }
}

/// Every `p(b|a)` of the simplified receiver, including the oracle-only
/// `|->` preparation and `|+>` projection.
#[derive(Debug, Clone, PartialEq)]
pub struct SimpleTable {
    entries: [[f64; 5]; 4],
}

impl SimpleTable {
    const OUTCOMES: [SimpleOutcome; 5] = [
        SimpleOutcome::B0,
        SimpleOutcome::B1,
        SimpleOutcome::BMinus,
        SimpleOutcome::BPlus,
        SimpleOutcome::NoDetect,
    ];

    pub fn from_attack(attack: &EveAttack) -> Self {
        let mut entries = [[0.0; 5]; 4];
        for a in PreparedState::ALL {
            for (k, b) in Self::OUTCOMES.iter().enumerate() {
                entries[a.index()][k] = cond_prob_simple(attack, a, *b);
            }
        }
        Self { entries }
    }

    pub fn get(&self, a: PreparedState, b: SimpleOutcome) -> f64 {
        let k = Self::OUTCOMES.iter().position(|o| *o == b).unwrap();
        self.entries[a.index()][k]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use PreparedState::*;
    use TimebinOutcome::*;

    const TOL: f64 = 1e-12;

    #[test]
    fn simple_receiver_canonical_values() {
        let id = EveAttack::identity(1).unwrap();
        assert_abs_diff_eq!(cond_prob_simple(&id, XPlus, SimpleOutcome::BMinus), 0.0, epsilon = TOL);
        let ir = EveAttack::intercept_resend();
        assert_abs_diff_eq!(cond_prob_simple(&ir, XPlus, SimpleOutcome::BMinus), 0.5, epsilon = TOL);
        assert_abs_diff_eq!(cond_prob_simple(&ir, Z0, SimpleOutcome::B0), 1.0, epsilon = TOL);
        assert_abs_diff_eq!(cond_prob_simple(&ir, Z0, SimpleOutcome::B1), 0.0, epsilon = TOL);
        let pf = EveAttack::phase_flip(2).unwrap();
        assert_abs_diff_eq!(cond_prob_simple(&pf, XPlus, SimpleOutcome::BMinus), 1.0, epsilon = TOL);
        let id4 = EveAttack::identity(4).unwrap();
        assert_abs_diff_eq!(cond_prob_simple(&id4, Z0, SimpleOutcome::B0), 1.0, epsilon = TOL);
    }

    #[test]
    fn direct_timebin_values() {
        let id = EveAttack::identity(1).unwrap();
        assert_abs_diff_eq!(cond_prob_timebin_direct(&id, XPlus, T1), 0.0, epsilon = TOL);
        assert_abs_diff_eq!(cond_prob_timebin_direct(&id, XPlus, T0), 0.125, epsilon = TOL);
        assert_abs_diff_eq!(cond_prob_timebin_direct(&id, Z0, T0), 0.25, epsilon = TOL);
    }

    #[test]
    fn paper_timebin_values() {
        let id = EveAttack::identity(1).unwrap();
        assert_abs_diff_eq!(cond_prob_timebin_paper(&id, Z0, T0), 0.5, epsilon = TOL);
        assert_abs_diff_eq!(cond_prob_timebin_paper(&id, XPlus, T0), 0.25, epsilon = TOL);
    }

    #[test]
    fn direct_rows_are_normalized() {
        for seed in 0..100 {
            let a = EveAttack::sample(1 + (seed as usize % 5), 0.5, seed).unwrap();
            let t = CondProbTable::from_attack(&a, Convention::Direct);
            for s in PreparedState::ALL {
                assert_abs_diff_eq!(t.row_sum(s), 1.0, epsilon = 1e-10);
                for b in TimebinOutcome::ALL {
                    let p = t.get(s, b);
                    assert!((0.0..=1.0 + 1e-12).contains(&p));
                }
            }
            let st = SimpleTable::from_attack(&a);
            for s in PreparedState::ALL {
                let z =
                    st.get(s, SimpleOutcome::B0) + st.get(s, SimpleOutcome::B1) + st.get(s, SimpleOutcome::NoDetect);
                let x = st.get(s, SimpleOutcome::BPlus)
                    + st.get(s, SimpleOutcome::BMinus)
                    + st.get(s, SimpleOutcome::NoDetect);
                assert_abs_diff_eq!(z, 1.0, epsilon = 1e-10);
                assert_abs_diff_eq!(x, 1.0, epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn paper_scale_is_twice_direct() {
        for seed in 0..1000 {
            let a = EveAttack::sample(1 + (seed as usize % 8), (seed % 10) as f64 * 0.09, seed).unwrap();
            for s in PreparedState::ALL {
                for b in TimebinOutcome::MONITORED {
                    let d = cond_prob_timebin_direct(&a, s, b);
                    let p = cond_prob_timebin_paper(&a, s, b);
                    assert_abs_diff_eq!(p, 2.0 * d, epsilon = TOL);
                }
            }
        }
    }
}
