//! Command-line scenario runner.
//!
//! ```text
//! gravcat --config run.toml [--out DIR] [--format csv|json] [--threads N] [--seed S] [--validate]
//! gravcat --defaults rotor-simulate    # print a complete config for a scenario
//! ```
//!
//! Output files go to `<out>/<scenario>[-<table>].<ext>` plus
//! `<out>/<scenario>-summary.json`. Failures print one JSON object on stderr
//! and exit nonzero: 2 for config problems, 1 for runtime errors.

pub mod config;
pub mod output;
pub mod scenarios;

use std::fs;
use std::path::PathBuf;

use clap::Parser;
use serde::Serialize;
use serde_json::json;

pub use config::{parse_config, ConfigError, Format, Parameters, Scenario, ScenarioConfig};
pub use output::{Artifact, Cell, Header, Table};
pub use scenarios::{run_scenario, validate};

#[derive(Debug, Clone, Parser)]
#[command(name = "gravcat", version, about = "Gravitational cat-state scenario runner")]
pub struct Args {
    /// Scenario config (TOML).
    #[arg(long, required_unless_present = "defaults")]
    pub config: Option<PathBuf>,
    /// Output directory; overrides `[output] path`.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Overrides `[output] format`.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Worker threads for parallel scenarios (default: all cores).
    #[arg(long)]
    pub threads: Option<usize>,
    /// Overrides the scenario's seed, where it has one.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Check the config and print warnings without running.
    #[arg(long)]
    pub validate: bool,
    /// Print the default config of a scenario and exit.
    #[arg(long, value_name = "SCENARIO", conflicts_with = "config")]
    pub defaults: Option<String>,
}

/// What identifies a run's data: the output path is excluded so the same
/// run written to two places carries the same header.
#[derive(Serialize)]
struct Resolved<'a> {
    scenario: Scenario,
    parameters: &'a Parameters,
    format: Format,
}

#[derive(Debug)]
pub struct CliError {
    pub exit_code: i32,
    pub kind: &'static str,
    pub message: String,
    pub details: serde_json::Value,
}

impl CliError {
    fn new(exit_code: i32, kind: &'static str, message: impl Into<String>) -> Self {
        Self { exit_code, kind, message: message.into(), details: serde_json::Value::Null }
    }

    pub fn to_json(&self) -> String {
        let mut v = json!({ "error": { "kind": self.kind, "message": self.message } });
        if !self.details.is_null() {
            v["error"]["details"] = self.details.clone();
        }
        v.to_string()
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        let mut err = CliError::new(2, "config", e.to_string());
        if let ConfigError::UnknownKeys(keys) = &e {
            err.details = json!({ "unknown_keys": keys });
        }
        err
    }
}

impl From<crate::Error> for CliError {
    fn from(e: crate::Error) -> Self {
        CliError::new(1, "runtime", e.to_string())
    }
}

/// Result of a successful invocation.
#[derive(Debug, Clone, PartialEq)]
pub enum Outcome {
    Written(Vec<PathBuf>),
    Validated(Vec<String>),
    Defaults(String),
}

fn apply_overrides(config: &mut ScenarioConfig, args: &Args) {
    if let Some(out) = &args.out {
        config.output.path = Some(out.to_string_lossy().into_owned());
    }
    if let Some(f) = args.format {
        config.output.format = Some(f);
    }
    if let (Some(seed), Parameters::RotorLyapunov(p)) = (args.seed, &mut config.parameters) {
        p.seed = seed;
    }
}

fn defaults_toml(name: &str) -> Result<String, CliError> {
    let scenario = Scenario::ALL
        .into_iter()
        .find(|s| s.name() == name)
        .ok_or_else(|| CliError::new(2, "usage", format!("unknown scenario {name}")))?;
    let c = ScenarioConfig::defaults(scenario);
    let mut doc = toml::Table::new();
    doc.insert("scenario".into(), toml::Value::String(scenario.name().into()));
    let params = toml::Value::try_from(&c.parameters).map_err(|e| CliError::new(1, "runtime", e.to_string()))?;
    doc.insert("parameters".into(), params);
    toml::to_string(&doc).map_err(|e| CliError::new(1, "runtime", e.to_string()))
}

/// Runs one invocation without touching the process exit status.
pub fn run(args: &Args) -> Result<Outcome, CliError> {
    if let Some(name) = &args.defaults {
        return defaults_toml(name).map(Outcome::Defaults);
    }
    if args.threads == Some(0) {
        return Err(CliError::new(2, "usage", "--threads must be at least 1"));
    }
    let path = args.config.as_ref().ok_or_else(|| CliError::new(2, "usage", "--config is required"))?;
    let text =
        fs::read_to_string(path).map_err(|e| CliError::new(2, "io", format!("cannot read {}: {e}", path.display())))?;
    let mut config = parse_config(&text)?;
    apply_overrides(&mut config, args);
    if args.validate {
        return Ok(Outcome::Validated(validate(&config)));
    }
    for w in validate(&config) {
        log::warn!("{w}");
    }

    let format = config.output.format.unwrap_or_default();
    let dir = PathBuf::from(config.output.path.clone().unwrap_or_else(|| "output".into()));
    let header = Header::new(&Resolved { scenario: config.scenario, parameters: &config.parameters, format });

    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = args.threads {
        pool = pool.num_threads(n);
    }
    let pool = pool.build().map_err(|e| CliError::new(1, "runtime", e.to_string()))?;
    let artifact = pool.install(|| run_scenario(&config))?;

    let written = output::write_artifact(&dir, config.scenario.name(), format, &header, &artifact)
        .map_err(|e| CliError::new(1, "io", format!("cannot write to {}: {e}", dir.display())))?;
    Ok(Outcome::Written(written))
}

/// Binary entry point: prints results and returns the exit status.
pub fn main_with(args: Args) -> i32 {
    match run(&args) {
        Ok(Outcome::Written(paths)) => {
            for p in paths {
                println!("{}", p.display());
            }
            0
        }
        Ok(Outcome::Validated(warnings)) => {
            println!("{}", json!({ "valid": true, "warnings": warnings }));
            0
        }
        Ok(Outcome::Defaults(text)) => {
            print!("{text}");
            0
        }
        Err(e) => {
            eprintln!("{}", e.to_json());
            e.exit_code
        }
    }
}
