//! Secret key length from observed counts.

use crate::channel::{
    simulate_counts, single_photon_reference_counts, ChannelParams, SimulationMode, SourceConfig, SourceMode,
};
use crate::counts::{Bb84Counts, ObservedCounts};
use crate::decoy::{
    corrected_pair, d0_z_lower, d0_z_upper_from_errors, d1_lower, ex_upper_decoy, ex_upper_from_bounds, gamma,
    key_length, lambda_ec, DecoyOptions, FiniteKeyEpsilons, IntensitySettings, KeyLengthInputs, PhaseBoundInputs,
};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalysisOptions {
    /// Error-correction inefficiency `f` in `lambda_EC = f n_Z h(QBER)`.
    pub ec_efficiency: f64,
    pub decoy: DecoyOptions,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        Self {
            ec_efficiency: 1.16,
            decoy: DecoyOptions::default(),
        }
    }
}

/// Every intermediate of a key-length evaluation. Fields that do not apply
/// to a protocol stay 0.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct KeyRateBreakdown {
    pub rounds: u64,
    pub n_z: f64,
    pub qber_z: f64,
    /// `n_{Z,mu1}^+`
    pub n_z_mu1_plus: f64,
    /// `n_{Z,mu2}^-`
    pub n_z_mu2_minus: f64,
    pub d0_z_lower: f64,
    pub d0_z_upper: f64,
    pub d1_z_lower: f64,
    pub phase_inputs: PhaseBoundInputs,
    /// Phase-error bound before clamping.
    pub ex_raw: f64,
    /// Phase-error bound clamped to `[0, 1/2]`.
    pub ex_upper: f64,
    pub gamma: f64,
    /// `min(ex_upper + gamma, 1/2)`
    pub ez_upper: f64,
    pub lambda_ec: f64,
    pub key_length: f64,
    /// Why the key length was forced to 0, if it was.
    pub abort: Option<String>,
}

impl KeyRateBreakdown {
    pub fn rate(&self) -> f64 {
        if self.rounds == 0 {
            0.0
        } else {
            self.key_length / self.rounds as f64
        }
    }

    fn aborted(mut self, e: Error) -> Self {
        self.key_length = 0.0;
        self.abort = Some(e.to_string());
        self
    }

    fn finish(
        mut self,
        ex: f64,
        sample_z: f64,
        sample_x: f64,
        eps: &FiniteKeyEpsilons,
        opts: &AnalysisOptions,
    ) -> Self {
        self.ex_raw = ex;
        self.ex_upper = ex.clamp(0.0, 0.5);
        self.lambda_ec = lambda_ec(self.n_z, self.qber_z, opts.ec_efficiency);
        self.gamma = match gamma(eps.sec, self.ex_upper, sample_z, sample_x) {
            Ok(g) => g,
            Err(e) => return self.aborted(e),
        };
        self.ez_upper = (self.ex_upper + self.gamma).min(0.5);
        self.key_length = key_length(
            &KeyLengthInputs {
                d0_z_lower: self.d0_z_lower,
                d1_z_lower: self.d1_z_lower,
                ez_upper: self.ez_upper,
                lambda_ec: self.lambda_ec,
            },
            eps,
        );
        self
    }
}

fn check_ec(opts: &AnalysisOptions) -> Result<()> {
    if opts.ec_efficiency >= 1.0 {
        Ok(())
    } else {
        Err(Error::param("ec_efficiency", "must be >= 1"))
    }
}

/// Key length of the three-state protocol with a one-decoy source.
pub fn analyze_decoy(
    counts: &ObservedCounts,
    settings: &IntensitySettings,
    p_z: f64,
    eps: &FiniteKeyEpsilons,
    opts: &AnalysisOptions,
) -> Result<KeyRateBreakdown> {
    check_ec(opts)?;
    counts.validate()?;
    if counts.per_intensity.len() != 2 {
        return Err(Error::param("counts", "decoy analysis needs two intensities"));
    }
    let h = eps.hoeffding;
    let det = [
        counts.per_intensity[0].z_detections,
        counts.per_intensity[1].z_detections,
    ];
    let err = [counts.per_intensity[0].z_errors, counts.per_intensity[1].z_errors];
    let (plus1, minus2) = corrected_pair(det, settings, h);
    let d0_upper = d0_z_upper_from_errors(err, settings, h);
    let mut b = KeyRateBreakdown {
        rounds: counts.rounds,
        n_z: counts.z_detections(),
        qber_z: counts.qber_z(),
        n_z_mu1_plus: plus1,
        n_z_mu2_minus: minus2,
        d0_z_lower: d0_z_lower(det, settings, h).value,
        d0_z_upper: d0_upper,
        d1_z_lower: d1_lower(det, settings, h, d0_upper, opts.decoy.vacuum_term)?.value,
        ..Default::default()
    };
    let (ex, inputs) = match ex_upper_decoy(counts, settings, p_z, h, opts.decoy) {
        Ok(v) => v,
        Err(e @ Error::NoStatistics(_)) => return Ok(b.aborted(e)),
        Err(e) => return Err(e),
    };
    b.phase_inputs = inputs;
    if !(b.d1_z_lower > 0.0) {
        return Ok(b.aborted(Error::NoStatistics("no single-photon Z detections")));
    }
    let (z, x) = (b.d1_z_lower, inputs.early_zz_lower);
    Ok(b.finish(ex.value(), z, x, eps, opts))
}

/// Key length of the three-state protocol with an ideal single-photon
/// source. Every detection is a single-photon event, so the observed counts
/// enter the phase-error formula directly and only `gamma` accounts for
/// finite statistics, as in [`analyze_bb84`].
pub fn analyze_single_photon(
    counts: &ObservedCounts,
    p_z: f64,
    eps: &FiniteKeyEpsilons,
    opts: &AnalysisOptions,
) -> Result<KeyRateBreakdown> {
    check_ec(opts)?;
    counts.validate()?;
    let inputs = PhaseBoundInputs {
        late_plus_upper: counts.total(|c| c.late[2]),
        late_z_lower: counts.total(|c| c.late[0] + c.late[1]),
        early_zz_lower: counts.total(|c| c.early[0][0] + c.early[1][1]),
        early_mixed_lower: counts.total(|c| c.early[0][2] + c.early[2][1]),
    };
    let mut b = KeyRateBreakdown {
        rounds: counts.rounds,
        n_z: counts.z_detections(),
        qber_z: counts.qber_z(),
        phase_inputs: inputs,
        ..Default::default()
    };
    b.d1_z_lower = b.n_z;
    let ex = match ex_upper_from_bounds(&inputs, p_z, opts.decoy.pair_weights) {
        Ok(v) => v,
        Err(e @ Error::NoStatistics(_)) => return Ok(b.aborted(e)),
        Err(e) => return Err(e),
    };
    if !(b.n_z > 0.0) {
        return Ok(b.aborted(Error::NoStatistics("no Z detections")));
    }
    let (z, x) = (b.n_z, inputs.early_zz_lower);
    Ok(b.finish(ex.value(), z, x, eps, opts))
}

/// Key length of four-state BB84 with an ideal single-photon source, where
/// the X-basis error rate estimates the phase error directly.
pub fn analyze_bb84(counts: &Bb84Counts, eps: &FiniteKeyEpsilons, opts: &AnalysisOptions) -> Result<KeyRateBreakdown> {
    check_ec(opts)?;
    let b = KeyRateBreakdown {
        rounds: counts.rounds,
        n_z: counts.z_detections,
        qber_z: counts.qber_z(),
        d1_z_lower: counts.z_detections,
        ..Default::default()
    };
    if !(counts.z_detections > 0.0 && counts.x_detections > 0.0) {
        return Ok(b.aborted(Error::NoStatistics("no sifted detections")));
    }
    let (z, x) = (b.n_z, counts.x_detections);
    Ok(b.finish(counts.qber_x(), z, x, eps, opts))
}

/// Which protocol to evaluate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Protocol {
    /// Three-state time-bin protocol with a one-decoy weak coherent source.
    Decoy(IntensitySettings),
    /// Three-state time-bin protocol with an ideal single-photon source.
    SinglePhoton,
    /// Four-state BB84 with an ideal single-photon source.
    Bb84,
}

/// Fixed protocol settings shared by every evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProtocolParams {
    pub rounds: u64,
    pub eps: FiniteKeyEpsilons,
    pub options: AnalysisOptions,
}

impl ProtocolParams {
    pub fn new(rounds: u64, eps: FiniteKeyEpsilons) -> Self {
        Self {
            rounds,
            eps,
            options: AnalysisOptions::default(),
        }
    }
}

/// Key length for the expected counts of an honest channel.
pub fn expected_key_rate(
    channel: &ChannelParams,
    protocol: Protocol,
    p_z: f64,
    params: &ProtocolParams,
) -> Result<KeyRateBreakdown> {
    let mode = match protocol {
        Protocol::Decoy(s) => SourceMode::WcpDecoy(s),
        Protocol::SinglePhoton | Protocol::Bb84 => SourceMode::SinglePhoton,
    };
    let source = SourceConfig::new(mode, p_z, params.rounds)?;
    match protocol {
        Protocol::Decoy(s) => {
            let counts = simulate_counts(channel, &source, SimulationMode::Expected).counts;
            analyze_decoy(&counts, &s, p_z, &params.eps, &params.options)
        }
        Protocol::SinglePhoton => {
            let counts = simulate_counts(channel, &source, SimulationMode::Expected).counts;
            analyze_single_photon(&counts, p_z, &params.eps, &params.options)
        }
        Protocol::Bb84 => {
            let r = single_photon_reference_counts(channel, &source)?;
            analyze_bb84(&r.bb84, &params.eps, &params.options)
        }
    }
}
