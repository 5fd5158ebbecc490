//! One-decoy finite-key statistics.
//!
//! Observed counts `n_k` at intensity `k` are turned into Hoeffding-corrected
//! "yield" estimates `n_k^± = e^k / p_k (n_k ± sqrt(n/2 ln(1/eps)))`, which
//! then bound the vacuum (`D0`) and single-photon (`D1`) contributions of an
//! event class. Natural logs are used for every Hoeffding/`delta` term and
//! base-2 logs for entropies and the composable epsilon terms.

use crate::counts::{ObservedCounts, Symbol};
use crate::phase_error::{alpha, beta, check_p_z, mixed_pair_weight, FormulaVariant, PhaseErrorEstimate};
use crate::{Error, Result};

/// Signal and decoy intensities of the one-decoy source.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntensitySettings {
    pub mu1: f64,
    pub mu2: f64,
    pub p_mu1: f64,
}

impl IntensitySettings {
    pub fn new(mu1: f64, mu2: f64, p_mu1: f64) -> Result<Self> {
        if !(mu1 > 0.0 && mu1.is_finite()) {
            return Err(Error::param("mu1", "must be positive"));
        }
        if !(mu2 >= 0.0 && mu2 < mu1) {
            return Err(Error::param("mu2", "must satisfy 0 <= mu2 < mu1"));
        }
        if !(p_mu1 > 0.0 && p_mu1 < 1.0) {
            return Err(Error::param("p_mu1", "must lie in (0, 1)"));
        }
        Ok(Self { mu1, mu2, p_mu1 })
    }

    pub fn p_mu2(&self) -> f64 {
        1.0 - self.p_mu1
    }

    /// `[(mu1, p_mu1), (mu2, p_mu2)]`
    pub fn levels(&self) -> [(f64, f64); 2] {
        [(self.mu1, self.p_mu1), (self.mu2, self.p_mu2())]
    }

    /// Total probability of emitting `n` photons.
    pub fn tau(&self, n: u32) -> f64 {
        tau_n(&self.levels(), n)
    }

    pub(crate) fn require_decoy(&self) -> Result<()> {
        if self.mu2 > 0.0 {
            Ok(())
        } else {
            Err(Error::param("mu2", "the single-photon lower bound needs mu2 > 0"))
        }
    }
}

/// `sum_k p_k e^{-k} k^n / n!` over `(k, p_k)` pairs.
pub fn tau_n(levels: &[(f64, f64)], n: u32) -> f64 {
    let fact: f64 = (1..=n).map(f64::from).product();
    levels
        .iter()
        .map(|&(k, p)| p * (-k).exp() * k.powi(n as i32) / fact)
        .sum()
}

/// Security parameters. `hoeffding` is the failure probability spent on
/// each Hoeffding or `delta` application.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FiniteKeyEpsilons {
    pub sec: f64,
    pub cor: f64,
    pub hoeffding: f64,
}

impl FiniteKeyEpsilons {
    /// Splits `eps_sec` evenly over the 19 estimation events.
    pub fn new(sec: f64, cor: f64) -> Result<Self> {
        for (name, v) in [("eps_sec", sec), ("eps_cor", cor)] {
            if !(v > 0.0 && v < 1.0) {
                return Err(Error::param(name, "must lie in (0, 1)"));
            }
        }
        Ok(Self {
            sec,
            cor,
            hoeffding: sec / 19.0,
        })
    }

    /// Overrides the per-bound failure probability; 1 disables all
    /// Hoeffding corrections.
    pub fn with_hoeffding(mut self, eps: f64) -> Result<Self> {
        if !(eps > 0.0 && eps <= 1.0) {
            return Err(Error::param("hoeffding_eps", "must lie in (0, 1]"));
        }
        self.hoeffding = eps;
        Ok(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

/// `e^k / p_k (n_k ± sqrt(n_total/2 ln(1/eps)))`. The minus branch may go
/// negative; callers clamp.
pub fn n_k_pm(n_k: f64, n_total: f64, k: f64, p_k: f64, eps: f64, sign: Sign) -> f64 {
    let dev = hoeffding_deviation(n_total, eps);
    let s = match sign {
        Sign::Plus => 1.0,
        Sign::Minus => -1.0,
    };
    k.exp() / p_k * (n_k + s * dev)
}

fn hoeffding_deviation(n: f64, eps: f64) -> f64 {
    (n / 2.0 * (1.0 / eps).ln()).max(0.0).sqrt()
}

/// `sqrt(n ln(1/eps) / 2)`
pub fn delta(n: f64, eps: f64) -> f64 {
    hoeffding_deviation(n, eps)
}

/// A bound before and after clamping at zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Clamped {
    pub raw: f64,
    pub value: f64,
}

impl Clamped {
    fn at_zero(raw: f64) -> Self {
        Self {
            raw,
            value: raw.max(0.0),
        }
    }

    pub fn was_clamped(&self) -> bool {
        self.raw < 0.0
    }
}

/// Upper bound on vacuum-caused events of a pattern with probability
/// `p_target`, from early-bin detections of `|0>|1>` pairs (which only
/// vacuum can produce under perfect preparation).
pub fn d0_upper_from_01(n_e01: f64, p_target: f64, p_01: f64, eps: f64) -> Result<f64> {
    if !(p_01 > 0.0) {
        return Err(Error::param("p_01", "pattern |0>|1> is never sent"));
    }
    let scaled = p_target / p_01 * n_e01;
    Ok(scaled + delta(scaled, eps))
}

/// Hoeffding-corrected `[n_mu1^+, n_mu2^-]` for per-intensity counts.
pub fn corrected_pair(counts: [f64; 2], settings: &IntensitySettings, eps: f64) -> (f64, f64) {
    let total = counts[0] + counts[1];
    let plus1 = n_k_pm(counts[0], total, settings.mu1, settings.p_mu1, eps, Sign::Plus);
    let minus2 = n_k_pm(counts[1], total, settings.mu2, settings.p_mu2(), eps, Sign::Minus);
    (plus1, minus2)
}

/// Lower bound on single-photon events among `counts = [n_mu1, n_mu2]`.
///
/// The vacuum contribution `d0_upper / tau_0` is subtracted. `AsPrinted`
/// adds it instead, which no longer bounds the single-photon events from
/// below.
///
/// The result is capped at [`d1_upper`]. The two only cross when the decoy
/// yields more detections per photon than the signal, which the Poisson
/// model rules out whenever both bounds hold.
pub fn d1_lower(
    counts: [f64; 2],
    settings: &IntensitySettings,
    eps: f64,
    d0_upper: f64,
    vacuum_term: FormulaVariant,
) -> Result<Clamped> {
    settings.require_decoy()?;
    let (mu1, mu2) = (settings.mu1, settings.mu2);
    let (plus1, minus2) = corrected_pair(counts, settings, eps);
    let vac = (mu1 * mu1 - mu2 * mu2) / (mu1 * mu1) * (d0_upper / settings.tau(0));
    let vac = match vacuum_term {
        FormulaVariant::Corrected => -vac,
        FormulaVariant::AsPrinted => vac,
    };
    let pre = settings.tau(1) * mu1 / (mu2 * (mu1 - mu2));
    let raw = pre * (minus2 - mu2 * mu2 / (mu1 * mu1) * plus1 + vac);
    let upper = d1_upper(counts, settings, eps).value;
    Ok(Clamped {
        raw,
        value: raw.min(upper).max(0.0),
    })
}

/// Upper bound on single-photon events among `counts = [n_mu1, n_mu2]`.
pub fn d1_upper(counts: [f64; 2], settings: &IntensitySettings, eps: f64) -> Clamped {
    let (plus1, minus2) = corrected_pair(counts, settings, eps);
    Clamped::at_zero(settings.tau(1) / (settings.mu1 - settings.mu2) * (plus1 - minus2))
}

/// Lower bound on vacuum events in the Z-basis data line.
pub fn d0_z_lower(counts: [f64; 2], settings: &IntensitySettings, eps: f64) -> Clamped {
    let total = counts[0] + counts[1];
    let plus1 = n_k_pm(counts[0], total, settings.mu1, settings.p_mu1, eps, Sign::Plus);
    let minus2 = n_k_pm(counts[1], total, settings.mu2, settings.p_mu2(), eps, Sign::Minus);
    Clamped::at_zero(settings.tau(0) / (settings.mu1 - settings.mu2) * (settings.mu1 * minus2 - settings.mu2 * plus1))
}

/// Upper bound on vacuum events in the Z-basis data line from the bit
/// errors `[m_mu1, m_mu2]`: a vacuum detection is an error with probability
/// 1/2, so `D0 <= 2 tau_0 m_mu2^+`.
pub fn d0_z_upper_from_errors(errors: [f64; 2], settings: &IntensitySettings, eps: f64) -> f64 {
    let total = errors[0] + errors[1];
    2.0 * settings.tau(0) * n_k_pm(errors[1], total, settings.mu2, settings.p_mu2(), eps, Sign::Plus)
}

/// Single-photon bounds entering the phase-error upper bound.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PhaseBoundInputs {
    /// Upper bound on `n(l,+)`.
    pub late_plus_upper: f64,
    /// Lower bound on `n(l,0) + n(l,1)`.
    pub late_z_lower: f64,
    /// Lower bound on `n(e,00) + n(e,11)`.
    pub early_zz_lower: f64,
    /// Lower bound on `n(e,0+) + n(e,+1)`.
    pub early_mixed_lower: f64,
}

/// Phase-error upper bound from single-photon count bounds.
pub fn ex_upper_from_bounds(
    b: &PhaseBoundInputs,
    p_z: f64,
    pair_weights: FormulaVariant,
) -> Result<PhaseErrorEstimate> {
    check_p_z(p_z)?;
    if !(b.early_zz_lower > 0.0) {
        return Err(Error::NoStatistics("single-photon early-bin Z-pair bound is zero"));
    }
    let lead = 0.5 * alpha(p_z) * b.late_plus_upper / b.early_zz_lower;
    Ok(PhaseErrorEstimate {
        leading: lead,
        clamp_argument: 1.0 + lead
            - beta(p_z) * b.late_z_lower / b.early_zz_lower
            - mixed_pair_weight(p_z, pair_weights) * b.early_mixed_lower / b.early_zz_lower,
    })
}

/// Options for the finite-key pipeline.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecoyOptions {
    pub vacuum_term: FormulaVariant,
    pub pair_weights: FormulaVariant,
}

impl Default for DecoyOptions {
    fn default() -> Self {
        Self {
            vacuum_term: FormulaVariant::Corrected,
            pair_weights: FormulaVariant::Corrected,
        }
    }
}

/// Monitoring-line single-photon bounds computed from decoy counts.
pub fn phase_bound_inputs(
    counts: &ObservedCounts,
    settings: &IntensitySettings,
    eps: f64,
    options: DecoyOptions,
) -> Result<PhaseBoundInputs> {
    use Symbol::{One, Plus, Zero};
    if counts.per_intensity.len() != 2 {
        return Err(Error::param("counts", "decoy analysis needs two intensities"));
    }
    let two = |f: &dyn Fn(&crate::counts::IntensityCounts) -> f64| -> [f64; 2] {
        let v = counts.by_intensity(f);
        [v[0], v[1]]
    };
    let ps = counts.state_probs;
    let n_e01 = counts.total(|c| c.early[0][1]);
    let p01 = counts.pattern_prob(Zero, One);

    let zz = two(&|c| c.early[0][0] + c.early[1][1]);
    let d0_zz = d0_upper_from_01(
        n_e01,
        counts.pattern_prob(Zero, Zero) + counts.pattern_prob(One, One),
        p01,
        eps,
    )?;
    let lz = two(&|c| c.late[0] + c.late[1]);
    let d0_lz = d0_upper_from_01(n_e01, ps[0] + ps[1], p01, eps)?;
    let mixed = two(&|c| c.early[0][2] + c.early[2][1]);
    let d0_mixed = d0_upper_from_01(
        n_e01,
        counts.pattern_prob(Zero, Plus) + counts.pattern_prob(Plus, One),
        p01,
        eps,
    )?;
    let late_plus = two(&|c| c.late[2]);

    let v = options.vacuum_term;
    Ok(PhaseBoundInputs {
        late_plus_upper: d1_upper(late_plus, settings, eps).value,
        late_z_lower: d1_lower(lz, settings, eps, d0_lz, v)?.value,
        early_zz_lower: d1_lower(zz, settings, eps, d0_zz, v)?.value,
        early_mixed_lower: d1_lower(mixed, settings, eps, d0_mixed, v)?.value,
    })
}

/// Upper bound on the single-photon phase error from decoy counts, with
/// the single-photon bounds it was built from. The estimate is not yet
/// clamped to `[0, 1/2]`.
pub fn ex_upper_decoy(
    counts: &ObservedCounts,
    settings: &IntensitySettings,
    p_z: f64,
    eps: f64,
    options: DecoyOptions,
) -> Result<(PhaseErrorEstimate, PhaseBoundInputs)> {
    let inputs = phase_bound_inputs(counts, settings, eps, options)?;
    Ok((ex_upper_from_bounds(&inputs, p_z, options.pair_weights)?, inputs))
}

/// Finite-size correction from the monitoring-line phase error to the
/// key-generation basis:
/// `sqrt((c+d)(1-b)b / (c d ln 2) * log2((c+d) / (c d (1-b) b) * 21^2 / a^2))`.
///
/// `b` outside `(0, 1)` gives the limit 0. A negative radicand (huge
/// samples) also gives 0.
pub fn gamma(a: f64, b: f64, c: f64, d: f64) -> Result<f64> {
    if !(a > 0.0) {
        return Err(Error::InfeasibleCorrection(format!("a = {a} must be positive")));
    }
    if !(c > 0.0 && d > 0.0) {
        return Err(Error::InfeasibleCorrection(format!(
            "sample sizes must be positive (c = {c}, d = {d})"
        )));
    }
    if !(b > 0.0 && b < 1.0) {
        return Ok(0.0);
    }
    let spread = (1.0 - b) * b;
    let arg = (c + d) / (c * d * spread) * (21.0 * 21.0) / (a * a);
    let radicand = (c + d) * spread / (c * d * std::f64::consts::LN_2) * arg.log2();
    Ok(radicand.max(0.0).sqrt())
}

/// `h(x) = -x log2 x - (1-x) log2 (1-x)`, with `h(0) = h(1) = 0`.
pub fn binary_entropy(x: f64) -> f64 {
    if x <= 0.0 || x >= 1.0 {
        return 0.0;
    }
    -x * x.log2() - (1.0 - x) * (1.0 - x).log2()
}

/// Bits leaked by error correction: `f * n_z * h(qber)`.
pub fn lambda_ec(n_z: f64, qber: f64, efficiency: f64) -> f64 {
    efficiency * n_z * binary_entropy(qber.clamp(0.0, 0.5))
}

/// Terms of the secret key length formula.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KeyLengthInputs {
    pub d0_z_lower: f64,
    pub d1_z_lower: f64,
    pub ez_upper: f64,
    pub lambda_ec: f64,
}

/// `D0_Z + D1_Z (1 - h(e_z)) - lambda_EC - 6 log2(19/eps_sec) - log2(2/eps_cor)`,
/// floored to whole bits and clamped at 0. `e_z` above 1/2 counts as 1/2.
pub fn key_length(inputs: &KeyLengthInputs, eps: &FiniteKeyEpsilons) -> f64 {
    let ez = inputs.ez_upper.clamp(0.0, 0.5);
    let raw = inputs.d0_z_lower + inputs.d1_z_lower * (1.0 - binary_entropy(ez))
        - inputs.lambda_ec
        - 6.0 * (19.0 / eps.sec).log2()
        - (2.0 / eps.cor).log2();
    raw.floor().max(0.0)
}

#[cfg(test)]
#[allow(clippy::excessive_precision)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use proptest::prelude::*;

    fn settings() -> IntensitySettings {
        IntensitySettings::new(0.5, 0.1, 0.7).unwrap()
    }

    #[test]
    fn intensity_validation() {
        assert!(IntensitySettings::new(0.5, 0.5, 0.5).is_err());
        assert!(IntensitySettings::new(0.0, 0.0, 0.5).is_err());
        assert!(IntensitySettings::new(0.5, 0.1, 1.0).is_err());
        let no_decoy = IntensitySettings::new(0.5, 0.0, 0.5).unwrap();
        assert!(d1_lower([1.0, 1.0], &no_decoy, 0.1, 0.0, FormulaVariant::Corrected).is_err());
    }

    #[test]
    fn tau_values() {
        assert_relative_eq!(tau_n(&[(0.3, 1.0)], 0), (-0.3f64).exp(), max_relative = 1e-15);
        // mpmath, 40 digits
        assert_relative_eq!(settings().tau(0), 0.6960226872096312684719, max_relative = 1e-14);
        assert_relative_eq!(settings().tau(1), 0.2394308534405004854563, max_relative = 1e-14);
    }

    #[test]
    fn hoeffding_corrections() {
        assert_eq!(n_k_pm(0.0, 0.0, 0.5, 0.7, 1e-9, Sign::Plus), 0.0);
        assert_eq!(n_k_pm(0.0, 0.0, 0.5, 0.7, 1e-9, Sign::Minus), 0.0);
        assert_relative_eq!(
            n_k_pm(40.0, 90.0, 0.5, 0.7, 1.0, Sign::Minus),
            0.5f64.exp() * 40.0 / 0.7,
            max_relative = 1e-14
        );
        // mpmath, 40 digits
        assert_relative_eq!(
            n_k_pm(1000.0, 2000.0, 0.5, 0.7, 1e-9, Sign::Plus),
            2694.377461261478414723,
            max_relative = 1e-13
        );
        assert_relative_eq!(
            n_k_pm(1000.0, 2000.0, 0.5, 0.7, 1e-9, Sign::Minus),
            2016.254740738887719131,
            max_relative = 1e-13
        );
    }

    #[test]
    fn delta_values() {
        assert_eq!(delta(0.0, 1e-9), 0.0);
        assert_eq!(delta(100.0, 1.0), 0.0);
        assert_relative_eq!(delta(200.0, 1e-9), 45.52281388155439052589, max_relative = 1e-14);
    }

    #[test]
    fn vacuum_bound_from_01_pairs() {
        assert_eq!(d0_upper_from_01(0.0, 0.2, 0.1, 1e-9).unwrap(), 0.0);
        assert_relative_eq!(
            d0_upper_from_01(100.0, 0.1, 0.1, 1e-9).unwrap(),
            100.0 + delta(100.0, 1e-9)
        );
        assert!(d0_upper_from_01(1.0, 0.1, 0.0, 1e-9).is_err());
    }

    #[test]
    fn empty_counts_give_zero_bounds() {
        let s = settings();
        assert_eq!(
            d1_lower([0.0, 0.0], &s, 1e-9, 0.0, FormulaVariant::Corrected)
                .unwrap()
                .value,
            0.0
        );
        assert_eq!(d1_upper([0.0, 0.0], &s, 1.0).value, 0.0);
    }

    #[test]
    fn gamma_values() {
        assert_eq!(gamma(1e-9, 0.0, 1e5, 1e5).unwrap(), 0.0);
        assert!(gamma(1e-9, 1e-12, 1e5, 1e5).unwrap() < 1e-4);
        // mpmath, 40 digits
        assert_relative_eq!(
            gamma(1e-9, 0.05, 1e5, 1e5).unwrap(),
            0.008866964120643640795885,
            max_relative = 1e-12
        );
        assert!(gamma(1e-9, 0.05, 0.0, 1e5).is_err());
        assert!(gamma(0.0, 0.05, 1.0, 1e5).is_err());
    }

    #[test]
    fn entropy_endpoints() {
        assert_eq!(binary_entropy(0.5), 1.0);
        assert_eq!(binary_entropy(0.0), 0.0);
        assert_eq!(binary_entropy(1.0), 0.0);
    }

    #[test]
    fn key_length_clamps() {
        let eps = FiniteKeyEpsilons::new(1e-9, 1e-9).unwrap();
        let zero = KeyLengthInputs {
            d0_z_lower: 0.0,
            d1_z_lower: 0.0,
            ez_upper: 0.0,
            lambda_ec: 0.0,
        };
        assert_eq!(key_length(&zero, &eps), 0.0);
        let high = KeyLengthInputs {
            d1_z_lower: 1e6,
            ez_upper: 0.8,
            ..zero
        };
        assert_eq!(key_length(&high, &eps), 0.0);
        let good = KeyLengthInputs {
            d1_z_lower: 1e6,
            ez_upper: 0.02,
            ..zero
        };
        let want = 1e6 * (1.0 - binary_entropy(0.02)) - 6.0 * (19e9f64).log2() - (2e9f64).log2();
        assert_abs_diff_eq!(key_length(&good, &eps), want.floor());
    }

    #[test]
    fn phase_bound_first_term_vanishes_without_late_plus() {
        let b = PhaseBoundInputs {
            late_plus_upper: 0.0,
            late_z_lower: 100.0,
            early_zz_lower: 100.0,
            early_mixed_lower: 10.0,
        };
        let e = ex_upper_from_bounds(&b, 0.5, FormulaVariant::Corrected).unwrap();
        assert_eq!(e.leading, 0.0);
        let none = PhaseBoundInputs::default();
        assert!(matches!(
            ex_upper_from_bounds(&none, 0.5, FormulaVariant::Corrected),
            Err(Error::NoStatistics(_))
        ));
    }

    proptest! {
        #[test]
        fn corrections_bracket_the_point_estimate(
            n1 in 0u32..100_000, n2 in 0u32..100_000,
            mu1 in 0.05f64..1.0, ratio in 0.01f64..0.99, p in 0.01f64..0.99,
            eps in 1e-12f64..1.0,
        ) {
            let s = IntensitySettings::new(mu1, mu1 * ratio, p).unwrap();
            let counts = [n1 as f64, n2 as f64];
            let total = counts[0] + counts[1];
            for (i, (k, pk)) in s.levels().into_iter().enumerate() {
                let mid = k.exp() * counts[i] / pk;
                let lo = n_k_pm(counts[i], total, k, pk, eps, Sign::Minus);
                let hi = n_k_pm(counts[i], total, k, pk, eps, Sign::Plus);
                prop_assert!(lo <= mid * (1.0 + 1e-12) && mid <= hi * (1.0 + 1e-12));
            }
            let lo = d1_lower(counts, &s, eps, 0.0, FormulaVariant::Corrected).unwrap().value;
            let hi = d1_upper(counts, &s, eps).value;
            prop_assert!(lo <= hi + 1e-9 * hi.abs().max(1.0), "lo={} hi={}", lo, hi);
        }

        #[test]
        fn key_length_monotone(
            d0 in 0.0f64..1e5, d1 in 0.0f64..1e7, ez in 0.0f64..0.5, lam in 0.0f64..1e6,
            bump in 0.0f64..1e4, dez in 0.0f64..0.1, sec in 1e-15f64..1e-2,
        ) {
            let eps = FiniteKeyEpsilons::new(sec, 1e-9).unwrap();
            let base = KeyLengthInputs { d0_z_lower: d0, d1_z_lower: d1, ez_upper: ez, lambda_ec: lam };
            let l = key_length(&base, &eps);
            let worse_ez = KeyLengthInputs { ez_upper: ez + dez, ..base };
            let worse_ec = KeyLengthInputs { lambda_ec: lam + bump, ..base };
            let more_d0 = KeyLengthInputs { d0_z_lower: d0 + bump, ..base };
            let more_d1 = KeyLengthInputs { d1_z_lower: d1 + bump, ..base };
            prop_assert!(key_length(&worse_ez, &eps) <= l);
            prop_assert!(key_length(&worse_ec, &eps) <= l);
            prop_assert!(key_length(&more_d0, &eps) >= l);
            prop_assert!(key_length(&more_d1, &eps) >= l);
            let tighter = FiniteKeyEpsilons::new(sec / 10.0, 1e-9).unwrap();
            prop_assert!(key_length(&base, &tighter) <= l);
        }

        #[test]
        fn gamma_is_symmetric(b in 0.001f64..0.5, c in 1.0f64..1e9, d in 1.0f64..1e9) {
            let g1 = gamma(1e-9, b, c, d).unwrap();
            let g2 = gamma(1e-9, b, d, c).unwrap();
            prop_assert!((g1 - g2).abs() <= 1e-12 * g1.max(1.0));
        }
    }
}
