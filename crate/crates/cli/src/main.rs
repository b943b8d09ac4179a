use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use maxsep_cli::{load_json, run, write_output, CliError, Command, RunConfig};
use maxsep_core::arith::rational;
use maxsep_core::Mode;

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Verb {
    BuildStrict,
    ExtendExcision,
    ExtendNonstrict,
    ChooseClosed,
    Oracle,
    FixtureCheck,
    ExtractChoice,
}

impl From<Verb> for Command {
    fn from(v: Verb) -> Command {
        match v {
            Verb::BuildStrict => Command::BuildStrict,
            Verb::ExtendExcision => Command::ExtendExcision,
            Verb::ExtendNonstrict => Command::ExtendNonstrict,
            Verb::ChooseClosed => Command::ChooseClosed,
            Verb::Oracle => Command::Oracle,
            Verb::FixtureCheck => Command::FixtureCheck,
            Verb::ExtractChoice => Command::ExtractChoice,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Strict,
    Nonstrict,
}

/// Construct and certify maximal δ-separated sets.
///
/// Exit status: 0 when every certificate holds, 2 when a certificate
/// fails, 1 on input or usage errors.
#[derive(Debug, Parser)]
#[command(name = "maxsep", version)]
struct Args {
    command: Verb,
    /// Space document: a JSON file, or inline JSON.
    #[arg(long)]
    space: String,
    /// Separation radius, a positive rational such as 1 or 3/2.
    #[arg(long, default_value = "1")]
    delta: String,
    #[arg(long, value_enum, default_value = "strict")]
    mode: ModeArg,
    /// Dense indices considered; defaults to the whole finite enumeration.
    #[arg(long)]
    horizon: Option<usize>,
    /// Cap on the size of a greedy result; defaults to the horizon.
    #[arg(long)]
    max_size: Option<usize>,
    /// Selector steps.
    #[arg(long, default_value_t = 8)]
    steps: usize,
    /// Seed set (or set to certify): a JSON file, or inline JSON.
    #[arg(long)]
    seed: Option<String>,
    /// Closed set for choose-closed: a JSON file, or inline JSON.
    #[arg(long)]
    closed: Option<String>,
    /// Write the result here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Seed for `{"type": "random", "n": N}` spaces.
    #[arg(long)]
    rng_seed: Option<u64>,
}

fn config(args: Args) -> Result<RunConfig, CliError> {
    let mut config = RunConfig::new(args.command.into(), load_json(&args.space, "space")?);
    config.delta = rational::parse(&args.delta)?;
    config.mode = match args.mode {
        ModeArg::Strict => Mode::Strict,
        ModeArg::Nonstrict => Mode::Nonstrict,
    };
    config.horizon = args.horizon;
    config.max_size = args.max_size;
    config.steps = args.steps;
    config.seed = args.seed.as_deref().map(|s| load_json(s, "seed")).transpose()?;
    config.closed = args.closed.as_deref().map(|s| load_json(s, "closed set")).transpose()?;
    config.rng_seed = args.rng_seed;
    config.out = args.out;
    Ok(config)
}

fn main() -> ExitCode {
    let args = Args::parse();
    let result = config(args).and_then(|config| {
        let outcome = run(&config)?;
        match &config.out {
            Some(path) => write_output(path, &outcome)?,
            None => print!("{}", outcome.render()),
        }
        if let Some(failures) = outcome.document.get("failures").and_then(|f| f.as_array()) {
            for f in failures {
                eprintln!("failed: {}", f.as_str().unwrap_or_default());
            }
        }
        Ok(outcome.exit_code())
    });
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
