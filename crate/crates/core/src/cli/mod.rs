//! Command-line interface: argument parsing, report assembly and exit codes.

mod commands;
mod export;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::Error;
use crate::group::{Variant, DEFAULT_GUARD, DEFAULT_ORACLE_BOUND};

pub use commands::{cmd_family, cmd_invariants, cmd_witness};
pub use export::{cmd_export, elements_text, gap_script, presentation_text, table_csv};

pub const SCHEMA_VERSION: u32 = 1;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "mipcheck", version, about = "Verify the modular isomorphism counterexample family")]
pub struct Cli {
    #[command(flatten)]
    pub config: RunConfig,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct RunConfig {
    /// Seed for sampled checks.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Number of sampled basis pairs in multiplicativity checks.
    #[arg(long, global = true, default_value_t = 1024)]
    pub sample_size: usize,
    /// Largest group order handed to the brute-force isomorphism oracle.
    #[arg(long, global = true, env = "MIPCHECK_ORACLE_BOUND", default_value_t = DEFAULT_ORACLE_BOUND)]
    pub oracle_bound: usize,
    /// Largest ambient order that may be enumerated.
    #[arg(long, global = true, env = "MIPCHECK_GUARD", default_value_t = DEFAULT_GUARD)]
    pub guard: usize,
    /// Write the JSON report here instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Check multiplicativity on all basis pairs (|G| <= 512).
    #[arg(long, global = true)]
    pub exhaustive: bool,
    /// Include wall-clock timing (makes reports run-dependent).
    #[arg(long, global = true)]
    #[serde(skip)]
    pub timing: bool,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct FamilyArgs {
    #[arg(long, default_value_t = 2)]
    pub p: u32,
    #[arg(long, default_value = "dihedral")]
    pub variant: Variant,
    #[arg(long)]
    pub n: u32,
    #[arg(long)]
    pub m: u32,
    #[arg(long)]
    pub k: u32,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build G and H and verify their structure and non-isomorphism.
    Family {
        #[command(flatten)]
        params: FamilyArgs,
        /// Also compare the dihedral, semidihedral and quaternion variants.
        #[arg(long)]
        variants: bool,
    },
    /// Certify an isomorphism F2G -> F2H through a unit beta.
    Witness {
        #[command(flatten)]
        params: FamilyArgs,
        /// standard | k3 | general
        #[arg(long, default_value = "standard")]
        beta: String,
        /// Central unit for --beta general: one | c-top | index:I
        #[arg(long, default_value = "one")]
        zeta: String,
        /// Element x~ for --beta general: x | index:I
        #[arg(long, default_value = "x")]
        x_tilde: String,
    },
    /// Compute the algebra-determined invariants.
    Invariants {
        #[arg(long, default_value_t = 2)]
        p: u32,
        #[arg(long, default_value = "dihedral")]
        variant: Variant,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        m: u32,
        #[arg(long, default_value_t = 1)]
        k: u32,
        /// Report G and H and compare them.
        #[arg(long)]
        pair: bool,
        /// K from a table: maxclass:P:K or a CSV file path.
        #[arg(long)]
        table: Option<String>,
        /// Indices of s and s1 in a CSV table.
        #[arg(long, value_delimiter = ',')]
        table_gens: Option<Vec<u32>>,
    },
    /// Write multiplication tables, presentations and a GAP script.
    Export {
        #[command(flatten)]
        params: FamilyArgs,
        /// Output directory.
        #[arg(long)]
        dir: PathBuf,
    },
}

/// Failure modes of a command, mapped to exit codes.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(std::io::Error),
    Internal(Error),
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParameters(_)
            | Error::NotPrime(_)
            | Error::GuardExceeded { .. }
            | Error::OracleBoundExceeded { .. }
            | Error::InvalidTable(_)
            | Error::Precondition(_) => CliError::Usage(e.to_string()),
            other => CliError::Internal(other),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Io(_) => EXIT_IO,
            CliError::Internal(_) => EXIT_FAIL,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
            CliError::Internal(e) => write!(f, "error: {e}"),
        }
    }
}

/// Outcome of a command: the report body and whether every check passed.
pub struct Outcome {
    pub pass: bool,
    pub body: Value,
}

/// Wraps a command body in the versioned report envelope.
pub fn envelope(command: Value, outcome: &Outcome, elapsed: Option<f64>) -> Value {
    let mut v = json!({
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "pass": outcome.pass,
        "result": outcome.body,
    });
    if let Some(secs) = elapsed {
        v["timing"] = json!({"seconds": secs});
    }
    v
}

fn write_report(config: &RunConfig, report: &Value) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(report).expect("reports serialize");
    text.push('\n');
    match &config.output {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn dispatch(cli: &Cli) -> Result<(Value, Outcome), CliError> {
    let cfg = &cli.config;
    let common = serde_json::to_value(cfg).expect("config serializes");
    let echo = |name: &str, extra: Value| {
        let mut v = json!({"name": name, "config": common.clone()});
        v["config"].as_object_mut().unwrap().remove("output");
        v["args"] = extra;
        v
    };
    match &cli.command {
        Command::Family { params, variants } => {
            let e = echo("family", json!({"params": params, "variants": variants}));
            Ok((e, cmd_family(cfg, params, *variants)?))
        }
        Command::Witness { params, beta, zeta, x_tilde } => {
            let e = echo("witness", json!({"params": params, "beta": beta, "zeta": zeta, "x_tilde": x_tilde}));
            Ok((e, cmd_witness(cfg, params, beta, zeta, x_tilde)?))
        }
        Command::Invariants { p, variant, n, m, k, pair, table, table_gens } => {
            let e = echo(
                "invariants",
                json!({"p": p, "variant": variant, "n": n, "m": m, "k": k, "pair": pair, "table": table, "table_gens": table_gens}),
            );
            let params = FamilyArgs { p: *p, variant: *variant, n: *n, m: *m, k: *k };
            Ok((e, cmd_invariants(cfg, &params, *pair, table.as_deref(), table_gens.as_deref())?))
        }
        Command::Export { params, dir } => {
            let e = echo("export", json!({"params": params, "dir": dir}));
            Ok((e, cmd_export(cfg, params, dir)?))
        }
    }
}

/// Parses arguments, runs one command and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let _ = e.print();
            return code;
        }
    };
    let start = Instant::now();
    match dispatch(&cli) {
        Ok((echo, outcome)) => {
            let elapsed = cli.config.timing.then(|| start.elapsed().as_secs_f64());
            let report = envelope(echo, &outcome, elapsed);
            if let Err(e) = write_report(&cli.config, &report) {
                eprintln!("{e}");
                return e.exit_code();
            }
            if outcome.pass {
                EXIT_PASS
            } else {
                EXIT_FAIL
            }
        }
        Err(e) => {
            eprintln!("{e}");
            e.exit_code()
        }
    }
}
