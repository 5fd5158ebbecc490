//! Run configuration: flat `key = value` files with later overrides.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::channel::ChannelParams;
use crate::decoy::{DecoyOptions, FiniteKeyEpsilons, IntensitySettings};
use crate::keyrate::{AnalysisOptions, ProtocolParams};
use crate::optimize::ParamSpace;
use crate::phase_error::FormulaVariant;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunMode {
    SinglePhoton,
    WcpDecoy,
    VerifyBounds,
    VerifyEstimators,
}

impl RunMode {
    pub fn name(&self) -> &'static str {
        match self {
            Self::SinglePhoton => "single-photon",
            Self::WcpDecoy => "wcp-decoy",
            Self::VerifyBounds => "verify-bounds",
            Self::VerifyEstimators => "verify-estimators",
        }
    }
}

impl FromStr for RunMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "single-photon" => Ok(Self::SinglePhoton),
            "wcp-decoy" => Ok(Self::WcpDecoy),
            "verify-bounds" => Ok(Self::VerifyBounds),
            "verify-estimators" => Ok(Self::VerifyEstimators),
            _ => Err(Error::Config {
                field: "mode".into(),
                reason: format!("unknown mode `{s}`"),
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub mode: RunMode,
    pub att_start: f64,
    pub att_stop: f64,
    pub att_step: f64,
    pub rounds: u64,
    pub eps_sec: f64,
    pub eps_cor: f64,
    /// Per-bound Hoeffding failure probability; `eps_sec / 19` when unset.
    pub eps_hoeffding: Option<f64>,
    pub e_mis: f64,
    pub p_dc: f64,
    pub det_eff: f64,
    pub ec_efficiency: f64,
    /// Sign of the vacuum term in the single-photon lower bound.
    pub vacuum_term: FormulaVariant,
    /// Weights of the pair terms in the decoy phase-error bound.
    pub pair_weights: FormulaVariant,
    pub optimize: bool,
    pub mu1: f64,
    pub mu2: f64,
    pub p_mu1: f64,
    pub p_z: f64,
    /// Add the single-photon three-state and BB84 columns to each row.
    pub reference: bool,
    pub grid: usize,
    pub refinements: usize,
    pub seed: u64,
    /// Random attacks for `verify-estimators`.
    pub attacks: usize,
    /// Seeded runs for `verify-bounds`.
    pub trials: usize,
    pub out: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            mode: RunMode::WcpDecoy,
            att_start: 0.0,
            att_stop: 80.0,
            att_step: 2.0,
            rounds: 100_000_000,
            eps_sec: 1e-9,
            eps_cor: 1e-9,
            eps_hoeffding: None,
            e_mis: 0.01,
            p_dc: 1e-10,
            det_eff: 1.0,
            ec_efficiency: 1.16,
            vacuum_term: FormulaVariant::Corrected,
            pair_weights: FormulaVariant::Corrected,
            optimize: true,
            mu1: 0.5,
            mu2: 0.1,
            p_mu1: 0.7,
            p_z: 0.8,
            reference: false,
            grid: 8,
            refinements: 2,
            seed: 1,
            attacks: 1000,
            trials: 200,
            out: None,
        }
    }
}

fn parse<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value.parse().map_err(|_| Error::Config {
        field: key.into(),
        reason: format!("cannot parse `{value}`"),
    })
}

fn parse_bool(key: &str, value: &str) -> Result<bool> {
    match value {
        "true" | "yes" | "on" | "1" => Ok(true),
        "false" | "no" | "off" | "0" => Ok(false),
        _ => Err(Error::Config {
            field: key.into(),
            reason: format!("expected true or false, got `{value}`"),
        }),
    }
}

fn parse_variant(key: &str, value: &str) -> Result<FormulaVariant> {
    match value {
        "corrected" => Ok(FormulaVariant::Corrected),
        "printed" => Ok(FormulaVariant::AsPrinted),
        _ => Err(config_err(key, format!("expected corrected or printed, got `{value}`"))),
    }
}

fn config_err(field: &str, reason: impl std::fmt::Display) -> Error {
    Error::Config {
        field: field.into(),
        reason: reason.to_string(),
    }
}

impl RunConfig {
    /// Sets one field from its textual form.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let v = value.trim();
        match key.trim() {
            "mode" => self.mode = v.parse()?,
            "att_start" => self.att_start = parse(key, v)?,
            "att_stop" => self.att_stop = parse(key, v)?,
            "att_step" => self.att_step = parse(key, v)?,
            "rounds" => {
                self.rounds = parse::<f64>(key, v).and_then(|x| {
                    if x >= 1.0 && x.fract() == 0.0 && x <= u64::MAX as f64 {
                        Ok(x as u64)
                    } else {
                        Err(config_err(key, "must be a positive whole number"))
                    }
                })?
            }
            "eps_sec" => self.eps_sec = parse(key, v)?,
            "eps_cor" => self.eps_cor = parse(key, v)?,
            "eps_hoeffding" => self.eps_hoeffding = Some(parse(key, v)?),
            "e_mis" => self.e_mis = parse(key, v)?,
            "p_dc" => self.p_dc = parse(key, v)?,
            "det_eff" => self.det_eff = parse(key, v)?,
            "ec_efficiency" => self.ec_efficiency = parse(key, v)?,
            "vacuum_term" => self.vacuum_term = parse_variant(key, v)?,
            "pair_weights" => self.pair_weights = parse_variant(key, v)?,
            "optimize" => self.optimize = parse_bool(key, v)?,
            "mu1" => self.mu1 = parse(key, v)?,
            "mu2" => self.mu2 = parse(key, v)?,
            "p_mu1" => self.p_mu1 = parse(key, v)?,
            "p_z" => self.p_z = parse(key, v)?,
            "reference" => self.reference = parse_bool(key, v)?,
            "grid" => self.grid = parse(key, v)?,
            "refinements" => self.refinements = parse(key, v)?,
            "seed" => self.seed = parse(key, v)?,
            "attacks" => self.attacks = parse(key, v)?,
            "trials" => self.trials = parse(key, v)?,
            "out" => self.out = Some(PathBuf::from(v)),
            other => return Err(config_err(other, "unknown key")),
        }
        Ok(())
    }

    /// Applies a `key = value` document. `#` starts a comment.
    pub fn apply_str(&mut self, text: &str) -> Result<()> {
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| config_err(&format!("line {}", n + 1), "expected key = value"))?;
            self.set(k, v)?;
        }
        Ok(())
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text =
            std::fs::read_to_string(path).map_err(|e| config_err("config", format!("{}: {e}", path.display())))?;
        let mut c = Self::default();
        c.apply_str(&text)?;
        Ok(c)
    }

    /// Checks every field against the ranges of the modules it feeds.
    pub fn validate(&self) -> Result<()> {
        let wrap = |field: &str, r: Result<()>| {
            r.map_err(|e| match e {
                Error::InvalidParameter { name, reason } => config_err(name, reason),
                other => config_err(field, other),
            })
        };
        if !(self.att_step > 0.0) {
            return Err(config_err("att_step", "must be positive"));
        }
        if !(self.att_start >= 0.0 && self.att_stop >= self.att_start) {
            return Err(config_err("att_stop", "need 0 <= att_start <= att_stop"));
        }
        wrap("channel", self.channel(self.att_start).map(|_| ()))?;
        wrap("eps", self.epsilons().map(|_| ()))?;
        if self.ec_efficiency < 1.0 {
            return Err(config_err("ec_efficiency", "must be >= 1"));
        }
        if !(self.p_z > 0.0 && self.p_z < 1.0) {
            return Err(config_err("p_z", "must lie in (0, 1)"));
        }
        wrap("intensities", self.intensities().map(|_| ()))?;
        if self.mu2 <= 0.0 {
            return Err(config_err("mu2", "the one-decoy bounds need mu2 > 0"));
        }
        wrap("space", self.space().validate())?;
        if self.attacks == 0 {
            return Err(config_err("attacks", "must be positive"));
        }
        if self.trials == 0 {
            return Err(config_err("trials", "must be positive"));
        }
        Ok(())
    }

    pub fn channel(&self, attenuation_db: f64) -> Result<ChannelParams> {
        ChannelParams::new(attenuation_db, self.p_dc, self.e_mis, self.det_eff)
    }

    pub fn epsilons(&self) -> Result<FiniteKeyEpsilons> {
        let e = FiniteKeyEpsilons::new(self.eps_sec, self.eps_cor)?;
        match self.eps_hoeffding {
            Some(h) => e.with_hoeffding(h),
            None => Ok(e),
        }
    }

    pub fn intensities(&self) -> Result<IntensitySettings> {
        IntensitySettings::new(self.mu1, self.mu2, self.p_mu1)
    }

    pub fn protocol_params(&self) -> Result<ProtocolParams> {
        let mut p = ProtocolParams::new(self.rounds, self.epsilons()?);
        p.options = AnalysisOptions {
            ec_efficiency: self.ec_efficiency,
            decoy: DecoyOptions {
                vacuum_term: self.vacuum_term,
                pair_weights: self.pair_weights,
            },
        };
        Ok(p)
    }

    pub fn space(&self) -> ParamSpace {
        ParamSpace {
            grid: self.grid,
            refinements: self.refinements,
            ..Default::default()
        }
    }

    /// Attenuation points of the sweep, `start + i * step` up to `stop`.
    pub fn attenuations(&self) -> Vec<f64> {
        let n = ((self.att_stop - self.att_start) / self.att_step + 1e-9).floor() as usize;
        (0..=n).map(|i| self.att_start + i as f64 * self.att_step).collect()
    }
}
