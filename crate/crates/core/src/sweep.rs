//! Attenuation sweeps and their CSV form.

use std::io::Write;

use rayon::prelude::*;

use crate::config::{RunConfig, RunMode};
use crate::keyrate::{expected_key_rate, KeyRateBreakdown, Protocol};
use crate::optimize::{optimize, ParamPoint, Target};
use crate::{Error, Result};

/// Bumped whenever a column is added, removed or reinterpreted.
pub const SCHEMA_VERSION: u32 = 1;

const COLUMNS: [&str; 26] = [
    "schema_version",
    "attenuation_db",
    "mode",
    "mu1",
    "mu2",
    "p_mu1",
    "p_z",
    "key_length",
    "key_rate",
    "ex_upper",
    "ez_upper",
    "qber_z",
    "n_z",
    "n_z_mu1_plus",
    "n_z_mu2_minus",
    "d0_z_lower",
    "d0_z_upper",
    "d1_z_lower",
    "late_plus_upper",
    "late_z_lower",
    "early_zz_lower",
    "early_mixed_lower",
    "ex_raw",
    "gamma",
    "lambda_ec",
    "status",
];

const REFERENCE_COLUMNS: [&str; 4] = [
    "ref_three_state_p_z",
    "ref_three_state_rate",
    "ref_bb84_p_z",
    "ref_bb84_rate",
];

/// Best (or fixed) point of one protocol at one attenuation.
#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub point: ParamPoint,
    pub breakdown: KeyRateBreakdown,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub attenuation_db: f64,
    pub target: Target,
    pub main: Evaluation,
    /// Single-photon three-state and BB84 curves at the same attenuation.
    pub reference: Option<(Evaluation, Evaluation)>,
}

fn evaluate(config: &RunConfig, attenuation_db: f64, target: Target) -> Result<Evaluation> {
    let channel = config.channel(attenuation_db)?;
    let params = config.protocol_params()?;
    if config.optimize {
        let o = optimize(&channel, target, &params, &config.space())?;
        return Ok(Evaluation {
            point: o.point,
            breakdown: o.breakdown,
        });
    }
    let point = match target {
        Target::Decoy => ParamPoint {
            mu1: config.mu1,
            mu2: config.mu2,
            p_mu1: config.p_mu1,
            p_z: config.p_z,
        },
        Target::SinglePhoton | Target::Bb84 => ParamPoint {
            p_z: config.p_z,
            ..Default::default()
        },
    };
    let protocol: Protocol = point.protocol(target)?;
    Ok(Evaluation {
        point,
        breakdown: expected_key_rate(&channel, protocol, point.p_z, &params)?,
    })
}

/// One row per attenuation point, in attenuation order.
pub fn run_sweep(config: &RunConfig) -> Result<Vec<SweepRow>> {
    config.validate()?;
    let target = match config.mode {
        RunMode::SinglePhoton => Target::SinglePhoton,
        RunMode::WcpDecoy => Target::Decoy,
        m => {
            return Err(Error::Config {
                field: "mode".into(),
                reason: format!("`{}` is not a sweep mode", m.name()),
            })
        }
    };
    config
        .attenuations()
        .into_par_iter()
        .map(|att| {
            let main = evaluate(config, att, target)?;
            let reference = if config.reference {
                Some((
                    evaluate(config, att, Target::SinglePhoton)?,
                    evaluate(config, att, Target::Bb84)?,
                ))
            } else {
                None
            };
            Ok(SweepRow {
                attenuation_db: att,
                target,
                main,
                reference,
            })
        })
        .collect()
}

/// Shortest decimal string that parses back to `x`.
pub fn format_f64(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 || (1e-5..1e16).contains(&a) || !x.is_finite() {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

fn mode_name(t: Target) -> &'static str {
    match t {
        Target::Decoy => RunMode::WcpDecoy.name(),
        Target::SinglePhoton => RunMode::SinglePhoton.name(),
        Target::Bb84 => "bb84",
    }
}

fn row_fields(row: &SweepRow) -> Vec<String> {
    let f = format_f64;
    let p = &row.main.point;
    let b = &row.main.breakdown;
    let decoy = row.target == Target::Decoy;
    let opt = |v: f64| if decoy { f(v) } else { String::new() };
    let mut out = vec![
        SCHEMA_VERSION.to_string(),
        f(row.attenuation_db),
        mode_name(row.target).to_string(),
        opt(p.mu1),
        opt(p.mu2),
        opt(p.p_mu1),
        f(p.p_z),
        f(b.key_length),
        f(b.rate()),
        f(b.ex_upper),
        f(b.ez_upper),
        f(b.qber_z),
        f(b.n_z),
        opt(b.n_z_mu1_plus),
        opt(b.n_z_mu2_minus),
        opt(b.d0_z_lower),
        opt(b.d0_z_upper),
        f(b.d1_z_lower),
        f(b.phase_inputs.late_plus_upper),
        f(b.phase_inputs.late_z_lower),
        f(b.phase_inputs.early_zz_lower),
        f(b.phase_inputs.early_mixed_lower),
        f(b.ex_raw),
        f(b.gamma),
        f(b.lambda_ec),
        b.abort.clone().unwrap_or_else(|| "ok".into()),
    ];
    if let Some((three, bb84)) = &row.reference {
        out.extend([
            f(three.point.p_z),
            f(three.breakdown.rate()),
            f(bb84.point.p_z),
            f(bb84.breakdown.rate()),
        ]);
    }
    out
}

fn csv_writer<W: Write>(w: W) -> csv::Writer<W> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(w)
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(e.to_string())
}

/// Writes the header and one record per row.
pub fn write_csv<W: Write>(rows: &[SweepRow], w: W) -> Result<()> {
    let mut out = csv_writer(w);
    let with_ref = rows.first().is_some_and(|r| r.reference.is_some());
    let mut header: Vec<&str> = COLUMNS.to_vec();
    if with_ref {
        header.extend(REFERENCE_COLUMNS);
    }
    out.write_record(&header).map_err(csv_err)?;
    for r in rows {
        out.write_record(row_fields(r)).map_err(csv_err)?;
    }
    out.flush()?;
    Ok(())
}

/// Writes a verification report as `metric,value,threshold,status`.
pub fn write_report_csv<W: Write>(report: &crate::verify::Report, w: W) -> Result<()> {
    let mut out = csv_writer(w);
    out.write_record(["schema_version", "metric", "value", "threshold", "status"])
        .map_err(csv_err)?;
    for m in &report.metrics {
        out.write_record([
            SCHEMA_VERSION.to_string(),
            m.name.to_string(),
            format_f64(m.value),
            format_f64(m.threshold),
            if m.passed() { "pass" } else { "fail" }.to_string(),
        ])
        .map_err(csv_err)?;
    }
    out.flush()?;
    Ok(())
}

pub fn sweep_csv(config: &RunConfig) -> Result<String> {
    let rows = run_sweep(config)?;
    let mut buf = Vec::new();
    write_csv(&rows, &mut buf)?;
    Ok(String::from_utf8(buf).expect("csv output is UTF-8"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shortest_round_trip() {
        for x in [0.1, 1e-10, 123456.789, 2.5e-7, 6.02e23, -0.0, 1.0 / 3.0, 100.0] {
            let s = format_f64(x);
            assert_eq!(s.parse::<f64>().unwrap(), x, "{s}");
        }
        assert_eq!(format_f64(0.1), "0.1");
        assert_eq!(format_f64(1e-10), "1e-10");
        assert_eq!(format_f64(100.0), "100");
    }

    #[test]
    fn header_and_rows() {
        let c = RunConfig {
            mode: RunMode::SinglePhoton,
            att_start: 0.0,
            att_stop: 4.0,
            att_step: 2.0,
            optimize: false,
            reference: true,
            ..Default::default()
        };
        let text = sweep_csv(&c).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 4);
        assert!(lines[0].starts_with("schema_version,attenuation_db,mode"));
        assert!(lines[0].ends_with("ref_bb84_rate"));
        assert!(lines[1].starts_with("1,0,single-photon,,,,0.8,"));
        assert!(!text.contains('\r'));
        let n = lines[0].split(',').count();
        assert!(lines.iter().all(|l| l.split(',').count() == n));
    }

    #[test]
    fn verify_modes_are_not_sweeps() {
        let c = RunConfig {
            mode: RunMode::VerifyEstimators,
            ..Default::default()
        };
        assert!(matches!(run_sweep(&c), Err(Error::Config { .. })));
    }
}
