//! Per-round key rate maximization over source parameters.
//!
//! A coarse grid over the box is searched first; the best grid point then
//! seeds Nelder-Mead runs in coordinates scaled to the unit box, each run
//! starting with a simplex half the size of the previous one. Points
//! outside the box are clamped onto it before evaluation.

use rayon::prelude::*;

use crate::channel::ChannelParams;
use crate::decoy::IntensitySettings;
use crate::keyrate::{expected_key_rate, KeyRateBreakdown, Protocol, ProtocolParams};
use crate::{Error, Result};

/// Which protocol the optimizer tunes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Target {
    /// Three-state protocol with a one-decoy source: `mu1`, `mu2`, `p_mu1`, `p_z`.
    Decoy,
    /// Three-state protocol with a single-photon source: `p_z` only.
    SinglePhoton,
    /// Four-state BB84 with a single-photon source: `p_z` only.
    Bb84,
}

/// Closed search interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub const fn new(lo: f64, hi: f64) -> Self {
        Self { lo, hi }
    }

    fn at(&self, t: f64) -> f64 {
        self.lo + t.clamp(0.0, 1.0) * (self.hi - self.lo)
    }

    fn check(&self, name: &'static str, open_lo: f64, open_hi: f64) -> Result<()> {
        if self.lo > open_lo && self.hi < open_hi && self.lo <= self.hi {
            Ok(())
        } else {
            Err(Error::param(
                name,
                format!(
                    "range [{}, {}] must lie inside ({open_lo}, {open_hi})",
                    self.lo, self.hi
                ),
            ))
        }
    }
}

/// Search box. `mu2` is searched as the ratio `mu2 / mu1`, which keeps
/// `mu2 < mu1` everywhere in the box.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParamSpace {
    pub mu1: Interval,
    pub mu2_ratio: Interval,
    pub p_mu1: Interval,
    pub p_z: Interval,
    /// Grid points per axis.
    pub grid: usize,
    /// Nelder-Mead rounds after the grid.
    pub refinements: usize,
    /// Iteration cap per Nelder-Mead round.
    pub max_iters: u64,
}

impl Default for ParamSpace {
    fn default() -> Self {
        Self {
            mu1: Interval::new(0.05, 1.0),
            mu2_ratio: Interval::new(0.02, 0.9),
            p_mu1: Interval::new(0.05, 0.95),
            p_z: Interval::new(0.3, 0.999),
            grid: 8,
            refinements: 2,
            max_iters: 150,
        }
    }
}

impl ParamSpace {
    pub fn validate(&self) -> Result<()> {
        if self.grid == 0 {
            return Err(Error::param("grid", "needs at least one point per axis"));
        }
        self.mu1.check("mu1", 0.0, 1.0 + 1e-12)?;
        self.mu2_ratio.check("mu2_ratio", 0.0, 1.0)?;
        self.p_mu1.check("p_mu1", 0.0, 1.0)?;
        self.p_z.check("p_z", 0.0, 1.0)
    }

    fn axes(&self, target: Target) -> Vec<Interval> {
        match target {
            Target::Decoy => vec![self.mu1, self.mu2_ratio, self.p_mu1, self.p_z],
            Target::SinglePhoton | Target::Bb84 => vec![self.p_z],
        }
    }
}

/// A candidate parameter set. `mu1`, `mu2` and `p_mu1` are 0 for the
/// single-photon targets.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ParamPoint {
    pub mu1: f64,
    pub mu2: f64,
    pub p_mu1: f64,
    pub p_z: f64,
}

impl ParamPoint {
    fn key(&self) -> [f64; 4] {
        [self.mu1, self.mu2, self.p_mu1, self.p_z]
    }

    pub fn protocol(&self, target: Target) -> Result<Protocol> {
        Ok(match target {
            Target::Decoy => Protocol::Decoy(IntensitySettings::new(self.mu1, self.mu2, self.p_mu1)?),
            Target::SinglePhoton => Protocol::SinglePhoton,
            Target::Bb84 => Protocol::Bb84,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Optimum {
    pub point: ParamPoint,
    pub breakdown: KeyRateBreakdown,
    pub evaluations: usize,
}

struct Objective<'a> {
    channel: &'a ChannelParams,
    params: &'a ProtocolParams,
    target: Target,
    axes: Vec<Interval>,
}

impl Objective<'_> {
    fn point(&self, unit: &[f64]) -> ParamPoint {
        let v: Vec<f64> = self.axes.iter().zip(unit).map(|(a, &t)| a.at(t)).collect();
        match self.target {
            Target::Decoy => ParamPoint {
                mu1: v[0],
                mu2: v[0] * v[1],
                p_mu1: v[2],
                p_z: v[3],
            },
            _ => ParamPoint {
                p_z: v[0],
                ..Default::default()
            },
        }
    }

    fn evaluate(&self, point: &ParamPoint) -> Result<KeyRateBreakdown> {
        expected_key_rate(self.channel, point.protocol(self.target)?, point.p_z, self.params)
    }

    fn rate(&self, unit: &[f64]) -> f64 {
        self.evaluate(&self.point(unit)).map(|b| b.rate()).unwrap_or(0.0)
    }
}

/// Nelder-Mead maximization of `f` from `simplex` (d + 1 vertices),
/// with the standard coefficients. Returns the best vertex, its value and
/// the number of evaluations.
fn nelder_mead(f: impl Fn(&[f64]) -> f64, simplex: Vec<Vec<f64>>, max_iters: u64) -> (Vec<f64>, f64, usize) {
    let d = simplex.len() - 1;
    let mut evals = 0;
    let mut eval = |x: &[f64]| {
        evals += 1;
        f(x)
    };
    let mut pts: Vec<(Vec<f64>, f64)> = simplex
        .into_iter()
        .map(|x| {
            let v = eval(&x);
            (x, v)
        })
        .collect();
    let lerp = |a: &[f64], b: &[f64], t: f64| -> Vec<f64> { a.iter().zip(b).map(|(x, y)| x + t * (y - x)).collect() };
    for _ in 0..max_iters {
        // best first; ties keep their order so the run is deterministic
        pts.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap_or(std::cmp::Ordering::Equal));
        if (pts[0].1 - pts[d].1).abs() <= 1e-15 * pts[0].1.abs().max(1e-300) && pts[0].1 > 0.0 {
            break;
        }
        let centroid: Vec<f64> = (0..d)
            .map(|k| pts[..d].iter().map(|p| p.0[k]).sum::<f64>() / d as f64)
            .collect();
        let worst = pts[d].clone();
        let refl = lerp(&centroid, &worst.0, -1.0);
        let fr = eval(&refl);
        if fr > pts[0].1 {
            let exp = lerp(&centroid, &worst.0, -2.0);
            let fe = eval(&exp);
            pts[d] = if fe > fr { (exp, fe) } else { (refl, fr) };
        } else if fr > pts[d - 1].1 {
            pts[d] = (refl, fr);
        } else {
            let (target, ft) = if fr > worst.1 {
                (refl, fr)
            } else {
                (worst.0.clone(), worst.1)
            };
            let con = lerp(&centroid, &target, 0.5);
            let fc = eval(&con);
            if fc > ft {
                pts[d] = (con, fc);
            } else {
                let best = pts[0].0.clone();
                for p in pts.iter_mut().skip(1) {
                    p.0 = lerp(&best, &p.0, 0.5);
                    p.1 = eval(&p.0);
                }
            }
        }
    }
    pts.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap_or(std::cmp::Ordering::Equal));
    let (x, v) = pts.swap_remove(0);
    (x, v, evals)
}

/// Higher rate wins; equal rates go to the lexicographically smaller point.
fn prefer_first(a: (f64, &ParamPoint), b: (f64, &ParamPoint)) -> bool {
    match a.0.partial_cmp(&b.0) {
        Some(std::cmp::Ordering::Greater) => true,
        Some(std::cmp::Ordering::Less) => false,
        _ => a.1.key() <= b.1.key(),
    }
}

fn grid_nodes(n: usize) -> Vec<f64> {
    if n == 1 {
        vec![0.5]
    } else {
        (0..n).map(|i| i as f64 / (n - 1) as f64).collect()
    }
}

/// Maximizes `l / N` on the expected counts of `channel`.
pub fn optimize(
    channel: &ChannelParams,
    target: Target,
    params: &ProtocolParams,
    space: &ParamSpace,
) -> Result<Optimum> {
    space.validate()?;
    let obj = Objective {
        channel,
        params,
        target,
        axes: space.axes(target),
    };
    let dims = obj.axes.len();
    let nodes = grid_nodes(space.grid);
    let total = nodes.len().pow(dims as u32);
    let unit_of = |mut idx: usize| -> Vec<f64> {
        let mut u = vec![0.0; dims];
        for d in (0..dims).rev() {
            u[d] = nodes[idx % nodes.len()];
            idx /= nodes.len();
        }
        u
    };

    let best_grid = (0..total)
        .into_par_iter()
        .map(|i| {
            let u = unit_of(i);
            (obj.rate(&u), obj.point(&u), u)
        })
        .reduce_with(|a, b| if prefer_first((a.0, &a.1), (b.0, &b.1)) { a } else { b })
        .expect("grid is non-empty");
    let mut evaluations = total;
    let (mut best_rate, mut best_unit) = (best_grid.0, best_grid.2);

    if best_rate > 0.0 {
        let mut step = if space.grid > 1 {
            1.0 / (space.grid - 1) as f64
        } else {
            0.25
        };
        for _ in 0..space.refinements {
            let mut simplex = vec![best_unit.clone()];
            for d in 0..dims {
                let mut v = best_unit.clone();
                // step inward so the simplex stays inside the box
                v[d] = if v[d] + step <= 1.0 { v[d] + step } else { v[d] - step };
                simplex.push(v);
            }
            let (p, _, n) = nelder_mead(|u| obj.rate(u), simplex, space.max_iters);
            evaluations += n + 1;
            let p: Vec<f64> = p.iter().map(|t| t.clamp(0.0, 1.0)).collect();
            let r = obj.rate(&p);
            if r > best_rate {
                best_rate = r;
                best_unit = p;
            }
            step /= 2.0;
        }
    }

    let point = obj.point(&best_unit);
    let breakdown = obj.evaluate(&point)?;
    Ok(Optimum {
        point,
        breakdown,
        evaluations,
    })
}
