//! Honest-channel surrogate producing detection statistics.
//!
//! Each round Alice sends `|0>`, `|1>` or `|+>` at one of the source
//! intensities. Bob splits the light passively: a fraction `p_zB` goes to
//! the data line (arrival time in the early or late bin), the rest to the
//! monitoring interferometer. The monitoring line has two windows per
//! round: the early window of round `m` overlaps `t_2` of round `m - 1`
//! with `t_0` of round `m`, and the late window holds `t_1` of round `m`.
//! With the two data-line windows this gives four dark-count windows per
//! round.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};

use crate::counts::{early_bin_source, Bb84Counts, IntensityCounts, ObservedCounts, PairSource, Symbol};
use crate::decoy::IntensitySettings;
use crate::phase_error::{check_p_z, state_probabilities};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelParams {
    pub attenuation_db: f64,
    /// Dark-count probability per detection window.
    pub p_dc: f64,
    /// Misalignment error probability.
    pub e_mis: f64,
    pub det_eff: f64,
}

impl ChannelParams {
    pub fn new(attenuation_db: f64, p_dc: f64, e_mis: f64, det_eff: f64) -> Result<Self> {
        if !(attenuation_db >= 0.0) {
            return Err(Error::param("attenuation_db", "must be >= 0"));
        }
        if !(0.0..1.0).contains(&p_dc) {
            return Err(Error::param("p_dc", "must lie in [0, 1)"));
        }
        if !(0.0..=0.5).contains(&e_mis) {
            return Err(Error::param("e_mis", "must lie in [0, 1/2]"));
        }
        if !(det_eff > 0.0 && det_eff <= 1.0) {
            return Err(Error::param("det_eff", "must lie in (0, 1]"));
        }
        Ok(Self {
            attenuation_db,
            p_dc,
            e_mis,
            det_eff,
        })
    }

    /// 1% intrinsic error, dark counts 1e-10 per window, ideal detectors.
    pub fn reference_profile(attenuation_db: f64) -> Result<Self> {
        Self::new(attenuation_db, 1e-10, 0.01, 1.0)
    }

    pub fn with_attenuation(self, attenuation_db: f64) -> Result<Self> {
        Self::new(attenuation_db, self.p_dc, self.e_mis, self.det_eff)
    }

    /// `det_eff * 10^(-attenuation_db / 10)`
    pub fn transmittance(&self) -> f64 {
        self.det_eff * 10f64.powf(-self.attenuation_db / 10.0)
    }

    pub fn visibility(&self) -> f64 {
        1.0 - 2.0 * self.e_mis
    }
}

/// How Bob's passive splitter divides light between the two lines.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BasisSplit {
    /// Data-line fraction equals Alice's `p_z`.
    #[default]
    Coupled,
    /// 50/50 split.
    Balanced,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SourceMode {
    SinglePhoton,
    WcpDecoy(IntensitySettings),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SourceConfig {
    pub mode: SourceMode,
    pub p_z: f64,
    pub rounds: u64,
    pub seed: u64,
    pub basis_split: BasisSplit,
}

impl SourceConfig {
    pub fn new(mode: SourceMode, p_z: f64, rounds: u64) -> Result<Self> {
        check_p_z(p_z)?;
        if rounds == 0 {
            return Err(Error::param("rounds", "must be positive"));
        }
        Ok(Self {
            mode,
            p_z,
            rounds,
            seed: 0,
            basis_split: BasisSplit::Coupled,
        })
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_basis_split(mut self, split: BasisSplit) -> Self {
        self.basis_split = split;
        self
    }

    /// Fraction of Bob's light sent to the data line.
    pub fn p_zb(&self) -> f64 {
        match self.basis_split {
            BasisSplit::Coupled => self.p_z,
            BasisSplit::Balanced => 0.5,
        }
    }

    pub fn state_probs(&self) -> [f64; 3] {
        state_probabilities(self.p_z)
    }

    /// `(mean photon number, probability)` per intensity. A single-photon
    /// source has one level with exactly one photon.
    pub fn levels(&self) -> Vec<(f64, f64)> {
        match self.mode {
            SourceMode::SinglePhoton => vec![(1.0, 1.0)],
            SourceMode::WcpDecoy(s) => s.levels().to_vec(),
        }
    }

    fn is_poisson(&self) -> bool {
        matches!(self.mode, SourceMode::WcpDecoy(_))
    }
}

/// Mean photon numbers reaching each detection slot for one pulse.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct BinIntensities {
    /// Data line, bin matching the bit (for `|+>`: either bin, split evenly
    /// between `data_correct` and `data_wrong`).
    pub data_correct: f64,
    pub data_wrong: f64,
    pub t0: f64,
    pub t1: f64,
    pub t2: f64,
}

/// Per-slot mean photon numbers for a pulse of mean `k` after transmittance
/// `eta`. For a single photon (`k = 1`) these are landing probabilities.
pub fn expected_bin_intensities(state: Symbol, k: f64, eta: f64, p_zb: f64, e_mis: f64) -> BinIntensities {
    let data = k * eta * p_zb;
    let mon = k * eta * (1.0 - p_zb);
    let (data_correct, data_wrong) = match state {
        Symbol::Plus => (data / 2.0, data / 2.0),
        _ => (data * (1.0 - e_mis), data * e_mis),
    };
    let (t0, t1, t2) = match state {
        Symbol::Zero => (mon / 4.0, mon / 4.0, 0.0),
        Symbol::One => (0.0, mon / 4.0, mon / 4.0),
        Symbol::Plus => (mon / 8.0, mon / 4.0 * 2.0 * e_mis, mon / 8.0),
    };
    BinIntensities {
        data_correct,
        data_wrong,
        t0,
        t1,
        t2,
    }
}

/// Probability that no photon reaches a slot with mean `m`.
fn absent(poisson: bool, m: f64) -> f64 {
    if poisson {
        (-m).exp()
    } else {
        1.0 - m
    }
}

/// `(detection, error)` probabilities of the two-window data line.
/// Double clicks are resolved by a fair coin.
fn data_line_probs(poisson: bool, correct: f64, wrong: f64, p_dc: f64) -> (f64, f64) {
    let (none, c_only, w_only, both) = if poisson {
        let (ac, aw) = ((-correct).exp(), (-wrong).exp());
        (ac * aw, (1.0 - ac) * aw, ac * (1.0 - aw), (1.0 - ac) * (1.0 - aw))
    } else {
        (1.0 - correct - wrong, correct, wrong, 0.0)
    };
    let d = p_dc;
    let no_click = none * (1.0 - d) * (1.0 - d);
    let wrong_only = w_only * (1.0 - d) + none * d * (1.0 - d);
    let double = both + c_only * d + w_only * d + none * d * d;
    (1.0 - no_click, wrong_only + 0.5 * double)
}

fn window_click(no_photon: f64, p_dc: f64) -> f64 {
    1.0 - no_photon * (1.0 - p_dc)
}

/// Photon-number attribution of detections: `[vacuum, single, multi]`
/// per event class, summed over intensities.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TruthLedger {
    pub z_detections: [u64; 3],
    pub z_errors: [u64; 3],
    pub late: [[u64; 3]; 3],
    pub early: [[[u64; 3]; 3]; 3],
}

impl TruthLedger {
    fn bucket(photons: u32) -> usize {
        photons.min(2) as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SimulationMode {
    /// Expectation values, not rounded.
    Expected,
    /// Seeded per-round sampling with photon-number bookkeeping.
    MonteCarlo,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Simulation {
    pub counts: ObservedCounts,
    pub truth: Option<TruthLedger>,
}

pub fn simulate_counts(channel: &ChannelParams, source: &SourceConfig, mode: SimulationMode) -> Simulation {
    match mode {
        SimulationMode::Expected => Simulation {
            counts: expected_counts(channel, source),
            truth: None,
        },
        SimulationMode::MonteCarlo => {
            let (counts, truth) = monte_carlo(channel, source);
            Simulation {
                counts,
                truth: Some(truth),
            }
        }
    }
}

fn expected_counts(channel: &ChannelParams, source: &SourceConfig) -> ObservedCounts {
    let n = source.rounds as f64;
    let pairs = n - 1.0;
    let ps = source.state_probs();
    let levels = source.levels();
    let poisson = source.is_poisson();
    let eta = channel.transmittance();
    let bins = |s: Symbol, k: f64| expected_bin_intensities(s, k, eta, source.p_zb(), channel.e_mis);

    let mut out = ObservedCounts::new(source.rounds, ps, levels.len());
    for (idx, &(k, pk)) in levels.iter().enumerate() {
        let mut det = 0.0;
        let mut err = 0.0;
        for s in [Symbol::Zero, Symbol::One] {
            let b = bins(s, k);
            let (d, e) = data_line_probs(poisson, b.data_correct, b.data_wrong, channel.p_dc);
            det += ps[s as usize] * d;
            err += ps[s as usize] * e;
        }
        let c = &mut out.per_intensity[idx];
        c.sent = n * pk;
        c.z_detections = n * pk * det;
        c.z_errors = n * pk * err;
        for s in Symbol::ALL {
            let late = window_click(absent(poisson, bins(s, k).t1), channel.p_dc);
            c.late[s as usize] = n * pk * ps[s as usize] * late;
        }
    }

    // Pair events: accumulate over both intensities of the pair and credit
    // the intensity of the pulse that feeds the early bin.
    let mut early = vec![[[0.0f64; 3]; 3]; levels.len()];
    for prev in Symbol::ALL {
        for cur in Symbol::ALL {
            let pat = ps[prev as usize] * ps[cur as usize];
            for (ip, &(kp, pp)) in levels.iter().enumerate() {
                for (ic, &(kc, pc)) in levels.iter().enumerate() {
                    let none = absent(poisson, bins(prev, kp).t2) * absent(poisson, bins(cur, kc).t0);
                    let click = window_click(none, channel.p_dc);
                    let label = match early_bin_source(prev, cur) {
                        PairSource::Previous => ip,
                        PairSource::Current => ic,
                    };
                    early[label][prev as usize][cur as usize] += pairs * pat * pp * pc * click;
                }
            }
        }
    }
    for (c, e) in out.per_intensity.iter_mut().zip(early) {
        c.early = e;
    }
    out
}

/// Per-photon routing table for one symbol: cumulative probabilities of
/// `[data_correct, data_wrong, t0, t1, t2]`; anything beyond is lost.
fn routing_table(channel: &ChannelParams, p_zb: f64, s: Symbol) -> [f64; 5] {
    let b = expected_bin_intensities(s, 1.0, channel.transmittance(), p_zb, channel.e_mis);
    let mut acc = 0.0;
    [b.data_correct, b.data_wrong, b.t0, b.t1, b.t2].map(|p| {
        acc += p;
        acc
    })
}

#[derive(Clone, Copy, Default)]
struct Pulse {
    symbol: usize,
    level: usize,
    photons: u32,
    t2: bool,
}

fn monte_carlo(channel: &ChannelParams, source: &SourceConfig) -> (ObservedCounts, TruthLedger) {
    let mut rng = ChaCha8Rng::seed_from_u64(source.seed);
    let ps = source.state_probs();
    let levels = source.levels();
    let poissons: Vec<Option<Poisson<f64>>> = levels
        .iter()
        .map(|&(k, _)| {
            if source.is_poisson() && k > 0.0 {
                Some(Poisson::new(k).expect("validated intensity"))
            } else {
                None
            }
        })
        .collect();
    let level_cdf0 = levels[0].1;
    let state_cdf = [ps[0], ps[0] + ps[1]];
    let routes = Symbol::ALL.map(|s| routing_table(channel, source.p_zb(), s));

    // Dark counts: one draw decides whether any of the four windows fires;
    // the windows are then resolved sequentially conditioned on that.
    let d = channel.p_dc;
    let any_dark = 1.0 - (1.0 - d).powi(4);
    let first_given_any: [f64; 4] = std::array::from_fn(|i| {
        if d > 0.0 {
            d / (1.0 - (1.0 - d).powi(4 - i as i32))
        } else {
            0.0
        }
    });

    let mut counts = ObservedCounts::new(source.rounds, ps, levels.len());
    let mut truth = TruthLedger::default();
    let mut prev: Option<Pulse> = None;

    for _ in 0..source.rounds {
        let u: f64 = rng.random();
        let symbol = if u < state_cdf[0] {
            0
        } else if u < state_cdf[1] {
            1
        } else {
            2
        };
        let level = if levels.len() > 1 && rng.random::<f64>() >= level_cdf0 {
            1
        } else {
            0
        };
        let photons = match &poissons[level] {
            Some(p) => p.sample(&mut rng) as u32,
            None if source.is_poisson() => 0,
            None => 1,
        };
        let mut hits = [false; 5];
        let route = &routes[symbol];
        for _ in 0..photons {
            let r: f64 = rng.random();
            if let Some(slot) = route.iter().position(|&c| r < c) {
                hits[slot] = true;
            }
        }
        let mut dark = [false; 4];
        if d > 0.0 && rng.random::<f64>() < any_dark {
            let mut seen = false;
            for (i, w) in dark.iter_mut().enumerate() {
                let p = if seen { d } else { first_given_any[i] };
                *w = rng.random::<f64>() < p;
                seen |= *w;
            }
        }
        let [dark_c, dark_w, dark_e, dark_l] = dark;
        let bucket = TruthLedger::bucket(photons);
        let c: &mut IntensityCounts = &mut counts.per_intensity[level];
        c.sent += 1.0;

        if symbol < 2 {
            let correct = hits[0] || dark_c;
            let wrong = hits[1] || dark_w;
            if correct || wrong {
                c.z_detections += 1.0;
                truth.z_detections[bucket] += 1;
                let error = if correct && wrong { rng.random::<bool>() } else { wrong };
                if error {
                    c.z_errors += 1.0;
                    truth.z_errors[bucket] += 1;
                }
            }
        }
        if hits[3] || dark_l {
            c.late[symbol] += 1.0;
            truth.late[symbol][bucket] += 1;
        }
        if let Some(p) = prev {
            if p.t2 || hits[2] || dark_e {
                let (lvl, n) = match early_bin_source(Symbol::from_index(p.symbol), Symbol::from_index(symbol)) {
                    PairSource::Previous => (p.level, p.photons),
                    PairSource::Current => (level, photons),
                };
                counts.per_intensity[lvl].early[p.symbol][symbol] += 1.0;
                truth.early[p.symbol][symbol][TruthLedger::bucket(n)] += 1;
            }
        }
        prev = Some(Pulse {
            symbol,
            level,
            photons,
            t2: hits[4],
        });
    }
    (counts, truth)
}

/// Expected counts for the single-photon comparison: the three-state
/// scheme and a four-state BB84 with the same basis choice, passive split
/// and noise. In BB84 the X basis is read on a two-detector line like the
/// data line.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceCounts {
    pub three_state: ObservedCounts,
    pub bb84: Bb84Counts,
}

pub fn single_photon_reference_counts(channel: &ChannelParams, source: &SourceConfig) -> Result<ReferenceCounts> {
    if source.mode != SourceMode::SinglePhoton {
        return Err(Error::param("mode", "reference counts need a single-photon source"));
    }
    let three_state = expected_counts(channel, source);
    let n = source.rounds as f64;
    let eta = channel.transmittance();
    let e = channel.e_mis;
    let line = |frac: f64| data_line_probs(false, eta * frac * (1.0 - e), eta * frac * e, channel.p_dc);
    let (z_det, z_err) = line(source.p_zb());
    let (x_det, x_err) = line(1.0 - source.p_zb());
    let (pz, px) = (source.p_z, 1.0 - source.p_z);
    Ok(ReferenceCounts {
        three_state,
        bb84: Bb84Counts {
            rounds: source.rounds,
            z_detections: n * pz * z_det,
            z_errors: n * pz * z_err,
            x_detections: n * px * x_det,
            x_errors: n * px * x_err,
        },
    })
}
