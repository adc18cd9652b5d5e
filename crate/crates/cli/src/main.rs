use std::path::PathBuf;
use std::process::ExitCode;

use bloch_cli::config::read_json;
use bloch_cli::{parse_assignment, parse_config, CliError, CommandKind, OutputFormat, Overrides};
use clap::error::ErrorKind;
use clap::Parser;

/// Generalized Bloch-vector experiments.
#[derive(Debug, Parser)]
#[command(name = "bloch", version)]
struct Args {
    /// Experiment to run; may also come from the config file.
    #[arg(value_enum)]
    command: Option<CommandKind>,

    /// JSON config file.
    #[arg(long)]
    config: Option<PathBuf>,

    /// RNG seed (falls back to BLOCH_SEED, then 0).
    #[arg(long)]
    seed: Option<u64>,

    #[arg(long)]
    shots: Option<u64>,

    #[arg(long)]
    workers: Option<usize>,

    #[arg(long, value_enum)]
    format: Option<OutputFormat>,

    /// Write output here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,

    /// Command parameter, value parsed as JSON when possible. Repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,

    /// JSON file holding the state matrix.
    #[arg(long)]
    state: Option<PathBuf>,

    /// JSON file holding the observable matrix.
    #[arg(long)]
    observable: Option<PathBuf>,

    /// Shorthand for `--set mode=...`.
    #[arg(long)]
    mode: Option<String>,

    /// Shorthand for `--set optimal=true`.
    #[arg(long)]
    optimal: bool,
}

fn overrides(args: Args) -> Result<(Option<PathBuf>, Overrides), CliError> {
    let mut o = Overrides {
        command: args.command,
        seed: args.seed,
        shots: args.shots,
        workers: args.workers,
        output_format: args.format,
        output_path: args.output,
        ..Default::default()
    };
    for s in &args.set {
        let (k, v) = parse_assignment(s)?;
        o.parameters.insert(k, v);
    }
    if let Some(p) = &args.state {
        o.parameters.insert("state".into(), read_json(p)?);
    }
    if let Some(p) = &args.observable {
        o.parameters.insert("observable".into(), read_json(p)?);
    }
    if let Some(m) = &args.mode {
        let (_, v) = parse_assignment(&format!("mode={m}"))?;
        o.parameters.insert("mode".into(), v);
    }
    if args.optimal {
        o.parameters.insert("optimal".into(), true.into());
    }
    Ok((args.config, o))
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => return fail(CliError::Config(e.to_string().trim().to_string())),
    };
    let env_seed = std::env::var("BLOCH_SEED").ok();
    let result = overrides(args)
        .and_then(|(file, o)| parse_config(file.as_deref(), o, env_seed.as_deref()))
        .and_then(bloch_cli::run);
    match result {
        Ok(Some(text)) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Ok(None) => ExitCode::SUCCESS,
        Err(e) => fail(e),
    }
}

fn fail(e: CliError) -> ExitCode {
    println!("{}", e.to_json());
    ExitCode::from(e.exit_code() as u8)
}
