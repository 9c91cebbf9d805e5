//! Batch command-line front end.

pub mod config;
pub mod sweep;
pub mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exciton::modes::PolarizationPhases;
use crate::fockspace::Chain;
use crate::moment::fission::{fission_action_check, fission_scan};
use crate::moment::formulas::be_match;
use crate::spin_ladder::{classify, summarize};
use crate::thermo::thermal::{build_thermal_state, commutator_report, ThermalPair, ThermalStateSpec};
pub use config::ExperimentConfig;
pub use sweep::{run_sweep, Observable};
pub use verify::{run_verify, VerifyReport};

#[derive(Debug, Parser)]
#[command(name = "ternary", version, about = "Exciton chain identities, sweeps and reports")]
pub struct Cli {
    /// TOML experiment configuration
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Output file; stdout when absent
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Default tolerance for every check
    #[arg(long, global = true)]
    pub tolerance: Option<f64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the identity suite and write a JSON report
    Verify {
        #[arg(long = "L")]
        sites: Option<usize>,
    },
    /// Tabulate an observable over the configured grid as CSV
    Sweep {
        /// excited, absorbed, spin_gap, fission, dc, ac, entropy, packings or curie
        observable: Option<String>,
        #[arg(long = "L")]
        sites: Option<usize>,
    },
    /// Chain-level fission action check
    Fission {
        #[arg(long = "L", default_value_t = 6)]
        sites: usize,
        #[arg(long, default_value_t = 2.0)]
        lambda_tilde: f64,
        #[arg(long, default_value_t = 0.1)]
        lambda2: f64,
        /// Injection site; every admissible site when absent
        #[arg(long)]
        r: Option<usize>,
        #[arg(long, default_value_t = 1e-4)]
        tail_limit: f64,
    },
    /// Enumerate maximal spin-ladder configurations
    SpinEnum {
        #[arg(long, default_value_t = 6)]
        rungs: usize,
    },
    /// Build a thermal product state and report commutator residuals
    Thermal {
        #[arg(long = "L")]
        sites: Option<usize>,
        #[arg(long, default_value_t = 2.0)]
        beta: f64,
        #[arg(long, default_value_t = 1e-4)]
        tail_limit: f64,
    },
}

#[derive(Serialize)]
struct SpinEnumOutput {
    summary: crate::spin_ladder::EnumerationSummary,
    representatives: Vec<(String, crate::spin_ladder::Classification)>,
}

#[derive(Serialize)]
struct ThermalOutput {
    seed: u64,
    assignments: crate::moment::formulas::BeMatch,
    state: crate::thermo::thermal::ThermalReport,
    commutator: crate::thermo::thermal::CommutatorReport,
}

fn load_config(cli: &Cli) -> Result<ExperimentConfig> {
    let mut config = match &cli.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig::default(),
    };
    if let Some(seed) = cli.seed {
        config.seed = seed;
    }
    if let Some(out) = &cli.out {
        config.out = Some(out.clone());
    }
    if let Some(tol) = cli.tolerance {
        config.tolerance.insert("default".into(), tol);
    }
    Ok(config)
}

fn emit(config: &ExperimentConfig, text: &str) -> Result<()> {
    match &config.out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn round_floats(v: &mut serde_json::Value) {
    match v {
        serde_json::Value::Number(n) if n.is_f64() => {
            if let Some(x) = n.as_f64().and_then(|x| serde_json::Number::from_f64(config::sig12(x))) {
                *n = x;
            }
        }
        serde_json::Value::Array(items) => items.iter_mut().for_each(round_floats),
        serde_json::Value::Object(map) => map.values_mut().for_each(round_floats),
        _ => {}
    }
}

/// Pretty JSON with every float cut to 12 significant digits.
pub fn json<T: Serialize>(value: &T) -> Result<String> {
    let mut v = serde_json::to_value(value)?;
    round_floats(&mut v);
    Ok(serde_json::to_string_pretty(&v)? + "\n")
}

/// Executes one parsed command; the returned flag is the overall verdict.
pub fn execute(cli: &Cli) -> Result<bool> {
    let mut config = load_config(cli)?;
    match &cli.command {
        Command::Verify { sites } => {
            if let Some(l) = sites {
                config.sites = *l;
            }
            let report = run_verify(&config)?;
            emit(&config, &json(&report)?)?;
            Ok(report.pass)
        }
        Command::Sweep { observable, sites } => {
            if let Some(l) = sites {
                config.sites = *l;
            }
            let name = observable
                .clone()
                .or_else(|| config.observable.clone())
                .ok_or_else(|| Error::Config("no observable given".into()))?;
            let csv = run_sweep(&config, name.parse()?)?;
            emit(&config, &csv)?;
            Ok(true)
        }
        Command::Fission {
            sites,
            lambda_tilde,
            lambda2,
            r,
            tail_limit,
        } => {
            config.sites = *sites;
            config.check_memory()?;
            let reports = match r {
                Some(r) => vec![fission_action_check(*sites, *lambda_tilde, *lambda2, *r, *tail_limit)?],
                None => fission_scan(*sites, *lambda_tilde, *lambda2, *tail_limit)?,
            };
            emit(&config, &json(&reports)?)?;
            Ok(true)
        }
        Command::SpinEnum { rungs } => {
            let summary = summarize(*rungs)?;
            let representatives = summary
                .representatives
                .iter()
                .map(|c| (c.text_art(), classify(c)))
                .collect();
            emit(&config, &json(&SpinEnumOutput { summary, representatives })?)?;
            Ok(true)
        }
        Command::Thermal { sites, beta, tail_limit } => {
            if let Some(l) = sites {
                config.sites = *l;
            }
            config.validate()?;
            config.check_memory()?;
            let l = config.sites;
            let odd: Vec<usize> = config.modes.iter().copied().filter(|y| y % 2 == 1).collect();
            let matched = be_match(*beta, &odd)?;
            let pairs: Vec<ThermalPair> = matched
                .assignments
                .iter()
                .map(|a| ThermalPair {
                    y: a.y,
                    lambda: Complex64::new(a.lambda_sq.sqrt(), 0.0),
                    lambda_tilde_next: (a.y + 1 < l).then(|| Complex64::new(a.lambda_tilde_next_sq.sqrt(), 0.0)),
                })
                .collect();
            let mut modes: Vec<usize> = pairs
                .iter()
                .flat_map(|p| std::iter::once(p.y).chain(p.lambda_tilde_next.map(|_| p.y + 1)))
                .collect();
            modes.sort_unstable();
            let phases = PolarizationPhases::random(config.seed, &modes);
            let spec = ThermalStateSpec {
                pairs,
                phases: phases.clone(),
                tail_limit: *tail_limit,
            };
            let (_, state) = build_thermal_state(&spec, l)?;
            let commutator = commutator_report(Chain::new(l)?, &modes, &phases)?;
            let out = ThermalOutput {
                seed: config.seed,
                assignments: matched,
                state,
                commutator,
            };
            emit(&config, &json(&out)?)?;
            Ok(true)
        }
    }
}

/// Entry point shared by the binary.
pub fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
