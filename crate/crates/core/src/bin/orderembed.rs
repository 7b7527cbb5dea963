use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use orderembed::{explain, run, Error, ScenarioConfig};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Text,
}

/// Decide which conjugacy classes of orders in a central simple algebra admit
/// an embedding of a ring of integers.
#[derive(Parser, Debug)]
#[command(name = "orderembed", version)]
struct Cli {
    /// Scenario file (JSON, schema orderembed.scenario/v1).
    #[arg(long)]
    config: PathBuf,

    /// Norm sampling bound; overrides the config.
    #[arg(long)]
    bound: Option<u64>,

    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Cross-check against Steinitz classes of lattices.
    #[arg(long)]
    check_oracle: bool,

    /// Seed for polynomial factorization over finite fields.
    #[arg(long)]
    seed: Option<u64>,
}

fn fail(err: &Error) -> ExitCode {
    let body = serde_json::json!({ "error": err.code(), "message": err.to_string() });
    eprintln!("{body}");
    ExitCode::from(err.exit_code() as u8)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut config = match ScenarioConfig::load(&cli.config) {
        Ok(c) => c,
        Err(e) => return fail(&e),
    };
    if let Some(b) = cli.bound {
        config.sampling_bound = b;
    }
    if let Some(s) = cli.seed {
        config.seed = Some(s);
    }
    config.oracle |= cli.check_oracle;

    let doc = match run(&config) {
        Ok(d) => d,
        Err(e) => return fail(&e),
    };
    match cli.format {
        Format::Json => println!("{}", doc.to_json()),
        Format::Text => print!("{}", explain(&doc)),
    }
    if doc.oracle_mismatch() {
        eprintln!("oracle mismatch");
    }
    ExitCode::from(doc.exit_code() as u8)
}
