use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum CommandKind {
    Basis,
    Encode,
    Decode,
    Measure,
    Interfere,
    Decompose,
    Rod,
    Chsh,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
}

/// A fully resolved run description.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub command: CommandKind,
    pub parameters: Map<String, Value>,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub shots: Option<u64>,
    pub workers: usize,
    pub output_format: OutputFormat,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output_path: Option<PathBuf>,
}

/// Config file contents before flags and defaults are applied.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    command: Option<CommandKind>,
    #[serde(default)]
    parameters: Map<String, Value>,
    seed: Option<u64>,
    shots: Option<u64>,
    workers: Option<usize>,
    output_format: Option<OutputFormat>,
    output_path: Option<PathBuf>,
}

/// Values given on the command line; each one beats the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub command: Option<CommandKind>,
    pub parameters: Map<String, Value>,
    pub seed: Option<u64>,
    pub shots: Option<u64>,
    pub workers: Option<usize>,
    pub output_format: Option<OutputFormat>,
    pub output_path: Option<PathBuf>,
}

impl CommandKind {
    pub fn name(self) -> &'static str {
        match self {
            CommandKind::Basis => "basis",
            CommandKind::Encode => "encode",
            CommandKind::Decode => "decode",
            CommandKind::Measure => "measure",
            CommandKind::Interfere => "interfere",
            CommandKind::Decompose => "decompose",
            CommandKind::Rod => "rod",
            CommandKind::Chsh => "chsh",
        }
    }
}

pub fn read_json(path: &Path) -> Result<Value> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io { path: path.display().to_string(), message: e.to_string() })?;
    serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

/// Parses a `key=value` flag; the value is read as JSON when it parses,
/// otherwise kept as a string.
pub fn parse_assignment(s: &str) -> Result<(String, Value)> {
    let (k, v) = s.split_once('=').ok_or_else(|| CliError::Config(format!("expected KEY=VALUE, got `{s}`")))?;
    if k.is_empty() {
        return Err(CliError::Config(format!("empty key in `{s}`")));
    }
    let value = serde_json::from_str(v).unwrap_or_else(|_| Value::String(v.to_string()));
    Ok((k.to_string(), value))
}

/// Merges an optional config file with flag overrides. The seed falls back
/// to `env_seed` (the `BLOCH_SEED` variable), then to 0.
pub fn parse_config(file: Option<&Path>, overrides: Overrides, env_seed: Option<&str>) -> Result<ExperimentConfig> {
    let base: FileConfig = match file {
        Some(p) => serde_json::from_value(read_json(p)?).map_err(|e| CliError::Config(e.to_string()))?,
        None => FileConfig::default(),
    };
    parse_merged(base, overrides, env_seed)
}

/// Same as [`parse_config`] with the file contents given inline.
pub fn parse_config_str(text: &str, overrides: Overrides, env_seed: Option<&str>) -> Result<ExperimentConfig> {
    let base: FileConfig = serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
    parse_merged(base, overrides, env_seed)
}

fn parse_merged(base: FileConfig, overrides: Overrides, env_seed: Option<&str>) -> Result<ExperimentConfig> {
    let command = overrides.command.or(base.command).ok_or_else(|| CliError::Config("no command given".into()))?;
    let env_seed = env_seed
        .map(|s| {
            s.trim()
                .parse::<u64>()
                .map_err(|_| CliError::Config(format!("BLOCH_SEED `{s}` is not a 64-bit unsigned integer")))
        })
        .transpose()?;
    let mut parameters = base.parameters;
    parameters.extend(overrides.parameters);
    let cfg = ExperimentConfig {
        command,
        parameters,
        seed: overrides.seed.or(base.seed).or(env_seed).unwrap_or(0),
        shots: overrides.shots.or(base.shots),
        workers: overrides.workers.or(base.workers).unwrap_or(1),
        output_format: overrides.output_format.or(base.output_format).unwrap_or_default(),
        output_path: overrides.output_path.or(base.output_path),
    };
    if cfg.workers == 0 {
        return Err(CliError::Config("workers must be at least 1".into()));
    }
    if cfg.shots == Some(0) {
        return Err(CliError::Config("shots must be at least 1".into()));
    }
    Ok(cfg)
}
