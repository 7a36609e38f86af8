//! `satake`: command-line access to the toolkit. Every command prints a single
//! JSON document on standard output; diagnostics go to standard error.
//!
//! Exit codes: `0` success, `1` a computation or check failed, `2` usage error.

mod commands;
mod parse;

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{error::ErrorKind, Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use satake_core::lie::{Group, GroupSpec};
use satake_core::{Error, Tolerances};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug)]
pub enum CliError {
    /// Malformed or inconsistent input.
    Usage(String),
    /// The computation itself failed.
    Failure(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidInput(_)
            | Error::DimensionMismatch(..)
            | Error::UnknownRoot(_)
            | Error::UnsupportedGroup(_)
            | Error::InvalidCartanData(_)
            | Error::WrongGroup(_)
            | Error::IncompatibleWindows(..) => CliError::Usage(e.to_string()),
            _ => CliError::Failure(e.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "satake", version, about = "Degenerating subgroups, the Oshima space and its groupoids")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Global {
    /// Group name (`sl2r`, `sl3r`, ...), a JSON group spec, or a path to one.
    #[arg(long, global = true)]
    group: Option<String>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long = "tol-alg", global = true)]
    tol_alg: Option<f64>,
    #[arg(long = "tol-fact", global = true)]
    tol_fact: Option<f64>,
    /// Spaces per indentation level; 0 prints compact JSON.
    #[arg(long = "json-indent", global = true)]
    json_indent: Option<usize>,
    /// JSON file with any of the keys group, seed, tol_alg, tol_fact, json_indent.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    group: Option<String>,
    seed: Option<u64>,
    tol_alg: Option<f64>,
    tol_fact: Option<f64>,
    json_indent: Option<usize>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Emit {
    Basis,
    Sample,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Restricted roots, root spaces and the Cartan matrix.
    Roots,
    /// Parabolic data for a subset of simple roots.
    Parabolic {
        /// `a1,a2`, one-based; empty for the empty subset.
        #[arg(long, default_value = "")]
        subset: String,
    },
    /// The subalgebra h_t or a sampled net of H_t.
    Deform {
        #[arg(long, allow_hyphen_values = true)]
        t: String,
        #[arg(long, value_enum, default_value = "basis")]
        emit: Emit,
        #[arg(long, default_value_t = 10.0)]
        radius: f64,
        #[arg(long = "net-step", default_value_t = 0.05)]
        net_step: f64,
        /// Largest number of sample points printed.
        #[arg(long = "max-points", default_value_t = 200)]
        max_points: usize,
    },
    /// Window distances along a path t_n → t_I.
    FellLimit {
        #[arg(long, default_value = "t=2^-n")]
        path: String,
        #[arg(long, default_value_t = 10)]
        steps: u32,
        /// Subset I of the limit t_I.
        #[arg(long, default_value = "")]
        limit: String,
        #[arg(long, default_value_t = 10.0)]
        radius: f64,
        #[arg(long = "net-step", default_value_t = 0.05)]
        net_step: f64,
        /// Print CSV rows instead of JSON.
        #[arg(long)]
        csv: bool,
    },
    /// Orbit class, Satake membership and chart coordinates of [[g, t]].
    Orbit {
        #[arg(long, allow_hyphen_values = true)]
        t: String,
        /// Rows separated by `;`. Defaults to the identity.
        #[arg(long, allow_hyphen_values = true)]
        g: Option<String>,
    },
    /// The image g·(it) of [[g, t]] on the Riemann sphere (sl2r only).
    Sphere {
        #[arg(long, allow_hyphen_values = true)]
        g: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        t: String,
    },
    /// arrow2 ∘ arrow1 in the Oshima groupoid.
    Compose {
        /// JSON `{"gamma": [[..]], "g": [[..]], "t": [..]}`.
        #[arg(long)]
        arrow1: String,
        #[arg(long)]
        arrow2: String,
    },
    /// Coset labels of an arrow over the orbit X_I.
    Reduce {
        #[arg(long, default_value = "")]
        orbit: String,
        /// Defaults to the unit arrow at [[e, t_I]].
        #[arg(long)]
        arrow: Option<String>,
        /// A second arrow whose labels are compared with the first.
        #[arg(long)]
        other: Option<String>,
    },
    /// The model b-groupoid.
    Bmodel(commands::BmodelArgs),
    /// Run the seeded property suite.
    Verify {
        #[arg(long = "fault-inject")]
        fault_inject: Option<String>,
    },
}

/// Settings shared by every command after merging flags and config.
pub struct Settings {
    pub group: Group,
    pub seed: u64,
    pub indent: usize,
}

fn load_group(text: &str, tol: Tolerances) -> Result<Group, CliError> {
    let trimmed = text.trim();
    let spec = if trimmed.starts_with('{') {
        GroupSpec::from_json(trimmed)?
    } else if trimmed.ends_with(".json") {
        let body = fs::read_to_string(trimmed).map_err(|e| CliError::Usage(format!("{trimmed}: {e}")))?;
        GroupSpec::from_json(&body)?
    } else {
        GroupSpec::from_name(trimmed)?
    };
    Ok(Group::new(&spec, tol)?)
}

fn settings(global: &Global) -> Result<Settings, CliError> {
    let config = match &global.config {
        Some(path) => {
            let body = fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
            serde_json::from_str(&body).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?
        }
        None => ConfigFile::default(),
    };
    let mut tol = Tolerances::default();
    if let Some(x) = global.tol_alg.or(config.tol_alg) {
        tol.alg = x;
    }
    if let Some(x) = global.tol_fact.or(config.tol_fact) {
        tol.fact = x;
    }
    if !(tol.alg > 0.0 && tol.fact > 0.0) {
        return Err(CliError::Usage("tolerances must be positive".into()));
    }
    let name = global.group.clone().or(config.group).unwrap_or_else(|| "sl2r".into());
    Ok(Settings {
        group: load_group(&name, tol)?,
        seed: global.seed.or(config.seed).unwrap_or(satake_core::verify::DEFAULT_SEED),
        indent: global.json_indent.or(config.json_indent).unwrap_or(2),
    })
}

pub fn render(value: &serde_json::Value, indent: usize) -> String {
    if indent == 0 {
        return value.to_string();
    }
    let pad = vec![b' '; indent];
    let mut out = Vec::new();
    let formatter = serde_json::ser::PrettyFormatter::with_indent(&pad);
    let mut ser = serde_json::Serializer::with_formatter(&mut out, formatter);
    serde::Serialize::serialize(value, &mut ser).expect("JSON values serialize");
    String::from_utf8(out).expect("JSON is UTF-8")
}

/// Output text and whether the command succeeded.
pub struct Output {
    pub text: String,
    pub ok: bool,
}

fn run(cli: Cli) -> Result<Output, CliError> {
    let s = settings(&cli.global)?;
    match cli.command {
        Command::Roots => commands::roots(&s),
        Command::Parabolic { subset } => commands::parabolic(&s, &subset),
        Command::Deform {
            t,
            emit,
            radius,
            net_step,
            max_points,
        } => commands::deform(&s, &t, emit, radius, net_step, max_points),
        Command::FellLimit {
            path,
            steps,
            limit,
            radius,
            net_step,
            csv,
        } => commands::fell_limit(&s, &path, steps, &limit, radius, net_step, csv),
        Command::Orbit { t, g } => commands::orbit(&s, &t, g.as_deref()),
        Command::Sphere { g, t } => commands::sphere(&s, g.as_deref(), &t),
        Command::Compose { arrow1, arrow2 } => commands::compose(&s, &arrow1, &arrow2),
        Command::Reduce { orbit, arrow, other } => commands::reduce(&s, &orbit, arrow.as_deref(), other.as_deref()),
        Command::Bmodel(args) => commands::bmodel(&s, &args),
        Command::Verify { fault_inject } => commands::verify(&s, fault_inject),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(2),
            };
        }
    };
    match run(cli) {
        Ok(out) => {
            // A closed pipe (e.g. `| head`) is not an error worth reporting.
            let _ = writeln!(io::stdout(), "{}", out.text);
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Failure(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
