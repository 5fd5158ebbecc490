use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use timebin_qkd::config::{RunConfig, RunMode};
use timebin_qkd::sweep::{run_sweep, write_csv, write_report_csv};
use timebin_qkd::verify::{verify_bounds, verify_estimators, BoundsCheck, Report};
use timebin_qkd::Error;

/// Key-rate sweeps and verification suites for three-state time-bin BB84.
#[derive(Parser, Debug)]
#[command(name = "tbqkd", version, allow_negative_numbers = true)]
struct Cli {
    /// key = value configuration file
    #[arg(long)]
    config: Option<PathBuf>,
    /// single-photon, wcp-decoy, verify-bounds or verify-estimators
    #[arg(long)]
    mode: Option<String>,
    #[arg(long, value_name = "DB")]
    att_start: Option<String>,
    #[arg(long, value_name = "DB")]
    att_stop: Option<String>,
    #[arg(long, value_name = "DB")]
    att_step: Option<String>,
    /// Rounds N (accepts 1e8)
    #[arg(long)]
    rounds: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    /// Optimize source parameters per point (`--optimize false` to use fixed ones)
    #[arg(long, num_args = 0..=1, default_missing_value = "true", value_name = "BOOL")]
    optimize: Option<String>,
    /// Output CSV path; stdout when absent
    #[arg(long)]
    out: Option<PathBuf>,
    /// Any other config key, e.g. `--set e_mis=0.02`
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
}

fn build_config(cli: &Cli) -> Result<RunConfig, Error> {
    let mut c = match &cli.config {
        Some(p) => RunConfig::from_file(p)?,
        None => RunConfig::default(),
    };
    for kv in &cli.set {
        let (k, v) = kv.split_once('=').ok_or_else(|| Error::Config {
            field: kv.clone(),
            reason: "expected KEY=VALUE".into(),
        })?;
        c.set(k, v)?;
    }
    let flags = [
        ("mode", &cli.mode),
        ("att_start", &cli.att_start),
        ("att_stop", &cli.att_stop),
        ("att_step", &cli.att_step),
        ("rounds", &cli.rounds),
        ("seed", &cli.seed),
        ("optimize", &cli.optimize),
    ];
    for (k, v) in flags {
        if let Some(v) = v {
            c.set(k, v)?;
        }
    }
    if let Some(p) = &cli.out {
        c.out = Some(p.clone());
    }
    c.validate()?;
    Ok(c)
}

fn open_output(c: &RunConfig) -> Result<Box<dyn Write>, Error> {
    match &c.out {
        Some(p) => File::create(p)
            .map(|f| Box::new(BufWriter::new(f)) as Box<dyn Write>)
            .map_err(|e| Error::Config {
                field: "out".into(),
                reason: format!("{}: {e}", p.display()),
            }),
        None => Ok(Box::new(io::stdout().lock())),
    }
}

fn summarize(report: &Report) {
    for m in &report.metrics {
        eprintln!(
            "{:<36} {:>12.3e}  (<= {:.1e})  {}",
            m.name,
            m.value,
            m.threshold,
            if m.passed() { "ok" } else { "FAIL" }
        );
    }
}

fn run(c: &RunConfig) -> Result<bool, Error> {
    let out = open_output(c)?;
    match c.mode {
        RunMode::SinglePhoton | RunMode::WcpDecoy => {
            let rows = run_sweep(c)?;
            write_csv(&rows, out)?;
            Ok(true)
        }
        RunMode::VerifyEstimators => {
            let r = verify_estimators(c.attacks, c.seed)?;
            summarize(&r);
            write_report_csv(&r, out)?;
            Ok(r.passed())
        }
        RunMode::VerifyBounds => {
            let check = BoundsCheck {
                settings: c.intensities()?,
                p_z: c.p_z,
                rounds: c.rounds,
                trials: c.trials,
                seed: c.seed,
                vacuum_term: c.vacuum_term,
            };
            let r = verify_bounds(&c.channel(c.att_start)?, &check, &c.epsilons()?)?;
            summarize(&r);
            write_report_csv(&r, out)?;
            Ok(r.passed())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            // usage errors are config errors; 2 is reserved for failed verification
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let config = match build_config(&cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("tbqkd: {e}");
            return ExitCode::from(1);
        }
    };
    match run(&config) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("tbqkd: verification failed");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("tbqkd: {e}");
            ExitCode::from(1)
        }
    }
}
