//! Verification suites: estimators against the amplitude oracle, and decoy
//! bounds against photon-number-resolved Monte Carlo.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::channel::{simulate_counts, ChannelParams, SimulationMode, SourceConfig, SourceMode, TruthLedger};
use crate::counts::{ObservedCounts, Symbol};
use crate::decoy::{
    d0_upper_from_01, d0_z_lower, d0_z_upper_from_errors, d1_lower, d1_upper, FiniteKeyEpsilons, IntensitySettings,
};
use crate::phase_error::{
    ex_eq12, ex_eq2, ex_eq7, ex_ideal, FormulaVariant, JointProbSet, SimpleProbSet, TimebinProbSet,
};
use crate::quantum::{
    cond_prob_simple, cond_prob_timebin_direct, povm_elements, povm_prob, EveAttack, PreparedState, SimpleOutcome,
    TimebinOutcome,
};
use crate::{Error, Result};

/// One measured quantity with its pass threshold (`value <= threshold`).
#[derive(Debug, Clone, PartialEq)]
pub struct Metric {
    pub name: &'static str,
    pub value: f64,
    pub threshold: f64,
}

impl Metric {
    pub fn passed(&self) -> bool {
        self.value <= self.threshold
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub metrics: Vec<Metric>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.metrics.iter().all(Metric::passed)
    }

    pub fn get(&self, name: &str) -> Option<&Metric> {
        self.metrics.iter().find(|m| m.name == name)
    }
}

/// Pair-weight values used for the joint-probability reduction.
pub const REDUCTION_P_Z: [f64; 3] = [0.3, 0.5, 0.9];

/// Random attack number `i` of a suite: ancilla dimension 1-8 and loss
/// weight in `[0, 0.9]`, both drawn from `seed`.
pub fn suite_attack(seed: u64, i: usize) -> Result<EveAttack> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (i as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
    let dim = rng.random_range(1..=8usize);
    let loss = rng.random_range(0.0..=0.9);
    EveAttack::sample(dim, loss, rng.random())
}

#[derive(Default, Clone, Copy)]
struct Maxima {
    eq2: f64,
    eq7: f64,
    m_arg: f64,
    eq12: f64,
    povm: f64,
    skipped: usize,
}

impl Maxima {
    fn merge(self, o: Self) -> Self {
        Self {
            eq2: self.eq2.max(o.eq2),
            eq7: self.eq7.max(o.eq7),
            m_arg: self.m_arg.max(o.m_arg),
            eq12: self.eq12.max(o.eq12),
            povm: self.povm.max(o.povm),
            skipped: self.skipped + o.skipped,
        }
    }
}

fn attack_errors(attack: &EveAttack) -> Result<Maxima> {
    let ideal = match ex_ideal(attack) {
        Ok(v) => v,
        Err(Error::NoStatistics(_)) => {
            return Ok(Maxima {
                skipped: 1,
                ..Default::default()
            })
        }
        Err(e) => return Err(e),
    };
    let simple = SimpleProbSet::from_attack(attack);
    let eq2 = ex_eq2(&simple)?;
    let sz: f64 = simple.z.iter().flatten().sum();
    let m_oracle = cond_prob_simple(attack, PreparedState::XMinus, SimpleOutcome::BPlus) / sz;
    let tb = TimebinProbSet::from_attack(attack);
    let eq7 = ex_eq7(&tb)?;
    let mut eq12 = 0.0f64;
    for p_z in REDUCTION_P_Z {
        let joint = JointProbSet::from_conditional(&tb, p_z)?;
        eq12 = eq12.max((ex_eq12(&joint, FormulaVariant::Corrected)?.raw() - eq7.raw()).abs());
    }
    let mut povm = 0.0f64;
    for a in PreparedState::ALL {
        for b in TimebinOutcome::ALL {
            povm = povm.max((povm_prob(attack, a, b) - cond_prob_timebin_direct(attack, a, b)).abs());
        }
    }
    Ok(Maxima {
        eq2: (eq2.raw() - ideal).abs(),
        eq7: (eq7.raw() - ideal).abs(),
        m_arg: (eq2.clamp_argument - m_oracle).abs(),
        eq12,
        povm,
        skipped: 0,
    })
}

/// Compares every restricted estimator with the ideal phase error over
/// `attacks` random collective attacks, and checks the POVM.
pub fn verify_estimators(attacks: usize, seed: u64) -> Result<Report> {
    let m = (0..attacks)
        .into_par_iter()
        .map(|i| suite_attack(seed, i).and_then(|a| attack_errors(&a)))
        .try_reduce(Maxima::default, |a, b| Ok(a.merge(b)))?;

    let mut canonical = 0.0f64;
    for (attack, expect) in [
        (EveAttack::identity(2)?, 0.0),
        (EveAttack::intercept_resend(), 0.5),
        (EveAttack::phase_flip(2)?, 1.0),
    ] {
        let tb = TimebinProbSet::from_attack(&attack);
        let mut values = vec![
            ex_ideal(&attack)?,
            ex_eq2(&SimpleProbSet::from_attack(&attack))?.value(),
            ex_eq7(&tb)?.value(),
        ];
        for p_z in REDUCTION_P_Z {
            values.push(ex_eq12(&JointProbSet::from_conditional(&tb, p_z)?, FormulaVariant::Corrected)?.value());
        }
        for v in values {
            canonical = canonical.max((v - expect).abs());
        }
    }

    let p = povm_elements();
    let completeness = (p.sum() - nalgebra::Matrix3::identity())
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max);
    Ok(Report {
        metrics: vec![
            Metric {
                name: "attacks_without_detections",
                value: m.skipped as f64,
                threshold: attacks as f64 / 10.0,
            },
            Metric {
                name: "max_abs_ex_eq2_minus_ideal",
                value: m.eq2,
                threshold: 1e-10,
            },
            Metric {
                name: "max_abs_ex_eq7_minus_ideal",
                value: m.eq7,
                threshold: 1e-10,
            },
            Metric {
                name: "max_abs_eq2_clamp_arg_minus_oracle",
                value: m.m_arg,
                threshold: 1e-10,
            },
            Metric {
                name: "max_abs_ex_eq12_minus_eq7",
                value: m.eq12,
                threshold: 1e-10,
            },
            Metric {
                name: "max_abs_canonical_error",
                value: canonical,
                threshold: 1e-10,
            },
            Metric {
                name: "povm_completeness_residual",
                value: completeness,
                threshold: 1e-12,
            },
            Metric {
                name: "povm_negative_eigenvalue",
                value: (-p.min_eigenvalue()).max(0.0),
                threshold: 1e-12,
            },
            Metric {
                name: "povm_hermiticity_residual",
                value: p.hermiticity_residual(),
                threshold: 1e-12,
            },
            Metric {
                name: "max_abs_povm_minus_amplitude",
                value: m.povm,
                threshold: 1e-12,
            },
        ],
    })
}

/// Decoy bounds checked by [`verify_bounds`], in report order.
pub const BOUND_NAMES: [&str; 16] = [
    "z_d1_lower",
    "z_d1_upper",
    "z_d0_lower",
    "z_d0_upper",
    "early_zz_d1_lower",
    "early_zz_d1_upper",
    "early_zz_d0_upper",
    "early_mixed_d1_lower",
    "early_mixed_d1_upper",
    "early_mixed_d0_upper",
    "late_z_d1_lower",
    "late_z_d1_upper",
    "late_z_d0_upper",
    "late_plus_d1_lower",
    "late_plus_d1_upper",
    "late_plus_d0_upper",
];

/// `true` for every bound of one Monte Carlo run that is violated by the
/// photon-number truth, in [`BOUND_NAMES`] order.
pub fn bound_violations(
    counts: &ObservedCounts,
    truth: &TruthLedger,
    settings: &IntensitySettings,
    eps: f64,
    vacuum_term: FormulaVariant,
) -> Result<[bool; 16]> {
    use Symbol::{One, Plus, Zero};
    let two = |f: &dyn Fn(&crate::counts::IntensityCounts) -> f64| -> [f64; 2] {
        let v = counts.by_intensity(f);
        [v[0], v[1]]
    };
    let n_e01 = counts.total(|c| c.early[0][1]);
    let p01 = counts.pattern_prob(Zero, One);
    let ps = counts.state_probs;
    let sum = |cells: &[[u64; 3]]| -> [u64; 3] {
        let mut out = [0; 3];
        for c in cells {
            for k in 0..3 {
                out[k] += c[k];
            }
        }
        out
    };

    let mut out = Vec::with_capacity(16);
    let mut check = |observed: [f64; 2], truth: [u64; 3], d0: f64, with_d0_lower: bool| -> Result<()> {
        let (vac, single) = (truth[0] as f64, truth[1] as f64);
        let lo = d1_lower(observed, settings, eps, d0, vacuum_term)?.value;
        let hi = d1_upper(observed, settings, eps).value;
        out.push(single < lo);
        out.push(single > hi);
        if with_d0_lower {
            out.push(vac < d0_z_lower(observed, settings, eps).value);
        }
        out.push(vac > d0);
        Ok(())
    };

    let z = two(&|c| c.z_detections);
    let z_err = two(&|c| c.z_errors);
    check(
        z,
        truth.z_detections,
        d0_z_upper_from_errors(z_err, settings, eps),
        true,
    )?;

    let zz_p = counts.pattern_prob(Zero, Zero) + counts.pattern_prob(One, One);
    check(
        two(&|c| c.early[0][0] + c.early[1][1]),
        sum(&[truth.early[0][0], truth.early[1][1]]),
        d0_upper_from_01(n_e01, zz_p, p01, eps)?,
        false,
    )?;
    let mixed_p = counts.pattern_prob(Zero, Plus) + counts.pattern_prob(Plus, One);
    check(
        two(&|c| c.early[0][2] + c.early[2][1]),
        sum(&[truth.early[0][2], truth.early[2][1]]),
        d0_upper_from_01(n_e01, mixed_p, p01, eps)?,
        false,
    )?;
    check(
        two(&|c| c.late[0] + c.late[1]),
        sum(&[truth.late[0], truth.late[1]]),
        d0_upper_from_01(n_e01, ps[0] + ps[1], p01, eps)?,
        false,
    )?;
    check(
        two(&|c| c.late[2]),
        truth.late[2],
        d0_upper_from_01(n_e01, ps[2], p01, eps)?,
        false,
    )?;
    Ok(out.try_into().expect("sixteen bounds"))
}

/// Monte Carlo setup for [`verify_bounds`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundsCheck {
    pub settings: IntensitySettings,
    pub p_z: f64,
    pub rounds: u64,
    pub trials: usize,
    pub seed: u64,
    pub vacuum_term: FormulaVariant,
}

/// Violation counts per bound over seeded Monte Carlo runs. A bound passes
/// when its empirical violation rate is at most the Hoeffding `epsilon`.
pub fn verify_bounds(channel: &ChannelParams, check: &BoundsCheck, eps: &FiniteKeyEpsilons) -> Result<Report> {
    let BoundsCheck {
        settings,
        p_z,
        rounds,
        trials,
        seed,
        vacuum_term,
    } = *check;
    settings.require_decoy()?;
    let source = SourceConfig::new(SourceMode::WcpDecoy(settings), p_z, rounds)?;
    let hits = (0..trials)
        .into_par_iter()
        .map(|i| {
            let sim = simulate_counts(
                channel,
                &source.with_seed(seed.wrapping_add(i as u64)),
                SimulationMode::MonteCarlo,
            );
            let truth = sim.truth.expect("Monte Carlo keeps a truth ledger");
            bound_violations(&sim.counts, &truth, &settings, eps.hoeffding, vacuum_term).map(|v| v.map(u64::from))
        })
        .try_reduce(|| [0u64; 16], |a, b| Ok(std::array::from_fn(|k| a[k] + b[k])))?;
    Ok(Report {
        metrics: BOUND_NAMES
            .iter()
            .zip(hits)
            .map(|(&name, h)| Metric {
                name,
                value: h as f64 / trials as f64,
                threshold: eps.hoeffding,
            })
            .collect(),
    })
}
