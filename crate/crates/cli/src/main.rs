use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use elliskit::catalog::EXAMPLES;
use elliskit::{analyze, caps_from_env, run_example, run_suite, CliError, Report, Suite, SuiteConfig};

#[derive(Parser)]
#[command(name = "elliskit", version, about = "Enveloping semigroups and orbital relations of finite flows")]
struct Cli {
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Full pipeline on one flow or ambit, optionally with a relation.
    Analyze {
        flow: PathBuf,
        #[arg(long)]
        relation: Option<PathBuf>,
    },
    /// Enveloping semigroup and its minimal-ideal structure.
    Ellis { flow: PathBuf },
    /// Group-like verdict and quotient identification.
    Grouplike {
        ambit: PathBuf,
        #[arg(long)]
        relation: PathBuf,
    },
    /// Orbital and, on request, weakly orbital verdicts.
    Orbital {
        flow: PathBuf,
        #[arg(long)]
        relation: PathBuf,
        #[arg(long)]
        decide_weak: bool,
        /// Largest group order for subgroup enumeration.
        #[arg(long)]
        max_group_order: Option<usize>,
    },
    /// Agreeability and closedness equivalences for a scenario file.
    Structured { scenario: PathBuf },
    /// Seeded verification suite.
    Verify {
        #[arg(long, value_parser = parse_suite)]
        suite: Suite,
        #[arg(long, default_value_t = 100)]
        instances: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 6)]
        max_points: usize,
        #[arg(long, default_value_t = 24)]
        max_group_order: usize,
        /// Deliberately break one check to exercise failure reporting.
        #[arg(long)]
        corrupt_check: bool,
    },
    /// Bundled fixture.
    Example {
        #[arg(required_unless_present = "list")]
        name: Option<String>,
        #[arg(long)]
        list: bool,
    },
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    Suite::parse(s).ok_or_else(|| {
        let names: Vec<&str> = Suite::ALL.iter().map(|s| s.name()).collect();
        format!("unknown suite `{s}`; expected one of {}", names.join(", "))
    })
}

fn run(cli: Cli) -> Result<Option<Report>, CliError> {
    let mut caps = caps_from_env()?;
    let report = match cli.command {
        Command::Analyze { flow, relation } => analyze::analyze(&flow, relation.as_deref(), &caps)?,
        Command::Ellis { flow } => analyze::ellis(&flow, &caps)?,
        Command::Grouplike { ambit, relation } => analyze::grouplike(&ambit, &relation, &caps)?,
        Command::Orbital { flow, relation, decide_weak, max_group_order } => {
            if let Some(q) = max_group_order {
                caps.max_enumeration_order = q;
            }
            analyze::orbital(&flow, &relation, decide_weak, &caps)?
        }
        Command::Structured { scenario } => analyze::structured(&scenario, &caps)?,
        Command::Verify { suite, instances, seed, max_points, max_group_order, corrupt_check } => {
            let cfg = SuiteConfig { suite, instances, seed, max_points, max_group_order, caps, corrupt: corrupt_check };
            run_suite(&cfg)
        }
        Command::Example { list: true, .. } => {
            for (name, about) in EXAMPLES {
                println!("{name:<22} {about}");
            }
            return Ok(None);
        }
        Command::Example { name, .. } => run_example(name.as_deref().unwrap_or_default(), &caps)?,
    };
    Ok(Some(report))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = cli.format;
    match run(cli) {
        Ok(None) => ExitCode::SUCCESS,
        Ok(Some(report)) => {
            match format {
                Format::Text => print!("{}", report.to_text()),
                Format::Json => println!("{}", report.to_json()),
            }
            ExitCode::from(report.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
