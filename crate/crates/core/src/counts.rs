//! Detection statistics consumed by the finite-key bounds.

use crate::{Error, Result};

/// Protocol states in count-table order.
pub const STATE_NAMES: [&str; 3] = ["0", "1", "+"];

/// Index of a protocol state in count tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Symbol {
    Zero = 0,
    One = 1,
    Plus = 2,
}

impl Symbol {
    pub const ALL: [Symbol; 3] = [Self::Zero, Self::One, Self::Plus];

    pub fn from_index(i: usize) -> Self {
        Self::ALL[i]
    }
}

/// Counts for one source intensity. Pair events are attributed to the
/// intensity of the pulse that feeds the shared early bin (see
/// [`early_bin_source`]).
///
/// Sampled runs hold whole numbers; expected-value runs hold the
/// unrounded expectations.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct IntensityCounts {
    /// Rounds sent at this intensity.
    pub sent: f64,
    /// Data-line detections for Z-basis preparations.
    pub z_detections: f64,
    /// Data-line bit errors for Z-basis preparations.
    pub z_errors: f64,
    /// `n(l, j)`: late-bin monitoring detections.
    pub late: [f64; 3],
    /// `n(e, j_prev, j_cur)`: early-bin monitoring detections of a pair.
    pub early: [[f64; 3]; 3],
}

/// Which pulse of a pair `(prev, cur)` the early bin of `cur` is
/// attributed to. The early bin collects `t_2` of the previous pulse and
/// `t_0` of the current one; a `|1>` pulse has no `t_0` component, so its
/// early bin is fed by the previous pulse.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairSource {
    Previous,
    Current,
}

pub fn early_bin_source(_prev: Symbol, cur: Symbol) -> PairSource {
    if cur == Symbol::One {
        PairSource::Previous
    } else {
        PairSource::Current
    }
}

/// Observed detection counts per intensity plus the pattern probabilities
/// needed to rescale pair events.
#[derive(Debug, Clone, PartialEq)]
pub struct ObservedCounts {
    pub rounds: u64,
    /// `[p(0), p(1), p(+)]`
    pub state_probs: [f64; 3],
    /// One entry per intensity (`[mu1, mu2]`), or a single entry for a
    /// single-photon source.
    pub per_intensity: Vec<IntensityCounts>,
}

impl ObservedCounts {
    pub fn new(rounds: u64, state_probs: [f64; 3], intensities: usize) -> Self {
        Self {
            rounds,
            state_probs,
            per_intensity: vec![IntensityCounts::default(); intensities],
        }
    }

    /// Counts are finite and non-negative, and no class exceeds the rounds
    /// sent at its intensity.
    pub fn validate(&self) -> Result<()> {
        let total: f64 = self.per_intensity.iter().map(|c| c.sent).sum();
        if total > self.rounds as f64 * (1.0 + 1e-12) {
            return Err(Error::param("counts", "more rounds per intensity than rounds sent"));
        }
        for c in &self.per_intensity {
            let all = || {
                [c.sent, c.z_detections, c.z_errors]
                    .into_iter()
                    .chain(c.late)
                    .chain(c.early.iter().flatten().copied())
            };
            if all().any(|v| !(v.is_finite() && v >= 0.0)) {
                return Err(Error::param("counts", "counts must be finite and non-negative"));
            }
            let biggest = all().skip(1).fold(0.0, f64::max);
            if biggest > c.sent * (1.0 + 1e-12) || c.z_errors > c.z_detections {
                return Err(Error::param("counts", "a count exceeds the rounds sent"));
            }
        }
        Ok(())
    }

    pub fn pattern_prob(&self, prev: Symbol, cur: Symbol) -> f64 {
        self.state_probs[prev as usize] * self.state_probs[cur as usize]
    }

    /// Per-intensity values of a counting functional.
    pub fn by_intensity(&self, f: impl Fn(&IntensityCounts) -> f64) -> Vec<f64> {
        self.per_intensity.iter().map(f).collect()
    }

    pub fn total(&self, f: impl Fn(&IntensityCounts) -> f64) -> f64 {
        self.per_intensity.iter().map(f).sum()
    }

    pub fn z_detections(&self) -> f64 {
        self.total(|c| c.z_detections)
    }

    pub fn z_errors(&self) -> f64 {
        self.total(|c| c.z_errors)
    }

    /// Data-line bit error rate, or 0 with no detections.
    pub fn qber_z(&self) -> f64 {
        let n = self.z_detections();
        if n > 0.0 {
            self.z_errors() / n
        } else {
            0.0
        }
    }
}

/// Sifted statistics of a standard four-state BB84 run.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Bb84Counts {
    pub rounds: u64,
    pub z_detections: f64,
    pub z_errors: f64,
    pub x_detections: f64,
    pub x_errors: f64,
}

impl Bb84Counts {
    pub fn qber_z(&self) -> f64 {
        ratio(self.z_errors, self.z_detections)
    }

    pub fn qber_x(&self) -> f64 {
        ratio(self.x_errors, self.x_detections)
    }
}

fn ratio(a: f64, b: f64) -> f64 {
    if b > 0.0 {
        a / b
    } else {
        0.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pair_attribution() {
        use Symbol::*;
        assert_eq!(early_bin_source(Zero, Zero), PairSource::Current);
        assert_eq!(early_bin_source(One, One), PairSource::Previous);
        assert_eq!(early_bin_source(Zero, Plus), PairSource::Current);
        assert_eq!(early_bin_source(Plus, One), PairSource::Previous);
    }

    #[test]
    fn validation_catches_overflowing_counts() {
        let mut c = ObservedCounts::new(10, [0.25, 0.25, 0.5], 1);
        c.per_intensity[0].sent = 10.0;
        c.per_intensity[0].z_detections = 4.0;
        c.per_intensity[0].z_errors = 1.0;
        assert!(c.validate().is_ok());
        c.per_intensity[0].late[2] = 11.0;
        assert!(c.validate().is_err());
        c.per_intensity[0].late[2] = -1.0;
        assert!(c.validate().is_err());
        c.per_intensity[0].late[2] = 0.0;
        c.per_intensity[0].z_errors = 5.0;
        assert!(c.validate().is_err());
    }

    #[test]
    fn qber_handles_empty() {
        let c = ObservedCounts::new(0, [0.25, 0.25, 0.5], 2);
        assert_eq!(c.qber_z(), 0.0);
        assert_eq!(Bb84Counts::default().qber_x(), 0.0);
    }
}
