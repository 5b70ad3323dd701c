//! Command-line front end: `bound`, `sweep`, `interferometer`, `ecs` and `verify`.

mod commands;
pub mod output;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::Value;

use crate::error::Error;

pub const DEFAULT_SEED: u64 = 20_240_601;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "qfibound",
    version,
    about = "Lower bounds on the quantum Fisher information of noisy channels",
    args_override_self = true
)]
pub struct Cli {
    /// Write the table to PATH instead of standard output
    #[arg(long, global = true, display_order = 100, value_name = "PATH")]
    pub output: Option<PathBuf>,
    #[arg(long, global = true, display_order = 100, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Seed for randomized suites
    #[arg(long, global = true, display_order = 100, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// JSON object of flag values (kebab-case keys); explicit flags win
    #[arg(long, global = true, display_order = 100, value_name = "PATH")]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// F↓ and the exact QFI for N probes through a qubit channel
    Bound(BoundArgs),
    /// Optimal interrogation times and precision scaling over N
    Sweep(SweepArgs),
    /// Optimal Fock-pair subspace of the lossy interferometer
    Interferometer(InterferometerArgs),
    /// Entangled coherent states under photon loss
    Ecs(EcsArgs),
    /// Run the seeded self-check suites
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ChannelKind {
    Unitary,
    Dephasing,
    Depolarizing,
    AmplitudeDamping,
    PhaseCovariant,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StateChoice {
    Ghz,
    File,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LayoutChoice {
    Swapped,
    Diagonal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormChoice {
    Truncated,
    Exponential,
}

#[derive(Debug, Args)]
#[command(args_override_self = true)]
pub struct BoundArgs {
    #[arg(long, value_enum, default_value_t = ChannelKind::Dephasing)]
    pub channel: ChannelKind,
    /// Noise strength of the named channels
    #[arg(long, default_value_t = 0.0)]
    pub gamma: f64,
    /// Number of probes
    #[arg(long = "N", default_value_t = 1)]
    pub n: usize,
    /// Interrogation time
    #[arg(long, default_value_t = 1.0)]
    pub t: f64,
    /// Frequency at which the derivative is taken
    #[arg(long, default_value_t = 0.0)]
    pub omega: f64,
    #[arg(long, value_enum, default_value_t = StateChoice::Ghz)]
    pub state: StateChoice,
    /// JSON file {"re": [[..]], "im": [[..]]} used with --state file
    #[arg(long, value_name = "PATH")]
    pub state_file: Option<PathBuf>,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub k: f64,
    #[arg(long, default_value_t = 1.0)]
    pub eta_par: f64,
    #[arg(long, default_value_t = 1.0)]
    pub eta_perp: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub theta: f64,
    #[arg(long, value_enum, default_value_t = LayoutChoice::Swapped)]
    pub layout: LayoutChoice,
}

#[derive(Debug, Args)]
#[command(args_override_self = true)]
pub struct SweepArgs {
    #[arg(long, default_value_t = 0.5)]
    pub alpha_perp: f64,
    #[arg(long, default_value_t = 1.0)]
    pub beta_perp: f64,
    #[arg(long, default_value_t = 0.0)]
    pub alpha_par: f64,
    #[arg(long, default_value_t = 1.0)]
    pub beta_par: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub alpha_k: f64,
    #[arg(long, default_value_t = 1.0)]
    pub beta_k: f64,
    #[arg(long, value_enum, default_value_t = FormChoice::Exponential)]
    pub form: FormChoice,
    /// Probe counts, comma separated and increasing
    #[arg(
        long = "N",
        value_delimiter = ',',
        num_args = 1..,
        action = clap::ArgAction::Set,
        default_values_t = [8usize, 16, 32, 64, 128, 256, 512, 1024]
    )]
    pub n: Vec<usize>,
    /// Total time budget
    #[arg(long = "T", default_value_t = 1.0)]
    pub total_time: f64,
}

#[derive(Debug, Args)]
#[command(args_override_self = true)]
pub struct InterferometerArgs {
    /// Total photon number
    #[arg(long = "N", default_value_t = 20)]
    pub n: usize,
    /// Transmissivities, comma separated (default 0.5, 0.55, …, 1.0)
    #[arg(long, value_delimiter = ',', num_args = 1.., action = clap::ArgAction::Set)]
    pub eta: Vec<f64>,
    /// Probe a single Gram diagonal entry (requires --m)
    #[arg(long, requires = "m")]
    pub k: Option<usize>,
    #[arg(long, requires = "k")]
    pub m: Option<usize>,
}

#[derive(Debug, Args)]
#[command(args_override_self = true)]
pub struct EcsArgs {
    /// Mean photon numbers |α|² per coherent branch, comma separated
    #[arg(
        long,
        value_delimiter = ',',
        num_args = 1..,
        action = clap::ArgAction::Set,
        default_values_t = [1.0f64, 2.0, 4.0]
    )]
    pub alpha_sq: Vec<f64>,
    #[arg(
        long,
        value_delimiter = ',',
        num_args = 1..,
        action = clap::ArgAction::Set,
        default_values_t = [0.8f64, 0.9, 1.0]
    )]
    pub eta: Vec<f64>,
    /// Also evaluate the truncated two-mode density-matrix route
    #[arg(long)]
    pub oracle: bool,
    /// Fock truncation per mode (default: chosen from |α|²)
    #[arg(long)]
    pub n_max: Option<usize>,
}

#[derive(Debug, Args)]
#[command(args_override_self = true)]
pub struct VerifyArgs {
    #[arg(long, hide = true)]
    pub inject_corruption: bool,
}

/// Failure of a command, carrying its exit status.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Domain(Error),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Domain(e) if e.is_resource_error() => 3,
            CliError::Io(_) => 3,
            _ => 2,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(s) | CliError::Io(s) => f.write_str(s),
            CliError::Domain(e) => write!(f, "{e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Domain(e)
    }
}

const VALUE_GLOBALS: [&str; 4] = ["--output", "--format", "--seed", "--config"];

fn subcommand_position(args: &[OsString]) -> Option<usize> {
    let mut i = 1;
    while i < args.len() {
        let tok = args[i].to_string_lossy();
        if VALUE_GLOBALS.contains(&tok.as_ref()) {
            i += 2;
            continue;
        }
        if !tok.starts_with('-') {
            return Some(i);
        }
        i += 1;
    }
    None
}

fn config_tokens(path: &PathBuf) -> Result<Vec<OsString>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
    let value: Value = serde_json::from_str(&text)
        .map_err(|e| CliError::Usage(format!("config {}: {e}", path.display())))?;
    let Value::Object(map) = value else {
        return Err(CliError::Usage(
            "config file must hold a JSON object".into(),
        ));
    };
    let mut tokens = Vec::new();
    for (key, v) in map {
        if key == "config" {
            continue;
        }
        let flag = format!("--{key}");
        let scalar = |v: &Value| -> Result<String, CliError> {
            match v {
                Value::Number(n) => Ok(n.to_string()),
                Value::String(s) => Ok(s.clone()),
                other => Err(CliError::Usage(format!(
                    "config key '{key}': unsupported value {other}"
                ))),
            }
        };
        match &v {
            Value::Null | Value::Bool(false) => {}
            Value::Bool(true) => tokens.push(flag.into()),
            Value::Array(items) => {
                let parts = items.iter().map(scalar).collect::<Result<Vec<_>, _>>()?;
                tokens.push(flag.into());
                tokens.push(parts.join(",").into());
            }
            other => {
                tokens.push(flag.into());
                tokens.push(scalar(other)?.into());
            }
        }
    }
    Ok(tokens)
}

/// Places config-file tokens ahead of every command-line token, so flags
/// given explicitly override them.
fn merge_config(args: &[OsString], path: &PathBuf) -> Result<Vec<OsString>, CliError> {
    let pos =
        subcommand_position(args).ok_or_else(|| CliError::Usage("missing subcommand".into()))?;
    let mut merged = vec![args[0].clone(), args[pos].clone()];
    merged.extend(config_tokens(path)?);
    merged.extend(args[1..pos].iter().cloned());
    merged.extend(args[pos + 1..].iter().cloned());
    Ok(merged)
}

fn parse(args: &[OsString]) -> Result<Cli, clap::Error> {
    Cli::try_parse_from(args)
}

/// Runs the tool and returns its exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match parse(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let cli = match &cli.config {
        None => cli,
        Some(path) => {
            let merged = match merge_config(&args, path) {
                Ok(m) => m,
                Err(e) => {
                    eprintln!("error: {e}");
                    return e.exit_code();
                }
            };
            match parse(&merged) {
                Ok(c) => c,
                Err(e) => {
                    let _ = e.print();
                    return e.exit_code();
                }
            }
        }
    };
    match commands::execute(&cli) {
        Ok((report, status)) => {
            let text = match cli.format {
                Format::Csv => report.to_csv(),
                Format::Json => report.to_json(),
            };
            let written = match &cli.output {
                Some(path) => std::fs::write(path, text)
                    .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display()))),
                None => {
                    use std::io::Write;
                    let mut out = std::io::stdout().lock();
                    out.write_all(text.as_bytes())
                        .and_then(|_| out.flush())
                        .map_err(|e| CliError::Io(e.to_string()))
                }
            };
            match written {
                Ok(()) => status,
                Err(e) => {
                    eprintln!("error: {e}");
                    e.exit_code()
                }
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
