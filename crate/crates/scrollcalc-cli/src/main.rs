mod commands;
mod output;
mod scenario;

use clap::{Parser, Subcommand, ValueEnum};
use commands::Failure;
use scenario::Scenario;
use scrollcalc::QuantifierDomain;
use serde_json::{json, Value};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "scrollcalc", version, about = "Divisor-class calculus on ruled surfaces and scrolls")]
struct Cli {
    /// Scenario file (JSON)
    #[arg(long, global = true)]
    scenario: Option<PathBuf>,
    /// Write the report here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long = "quantifier-domain", global = true, value_enum, default_value_t = Domain::NamedGeneric)]
    quantifier_domain: Domain,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum Domain {
    Named,
    #[value(name = "named+generic")]
    NamedGeneric,
}

impl From<Domain> for QuantifierDomain {
    fn from(d: Domain) -> Self {
        match d {
            Domain::Named => QuantifierDomain::Named,
            Domain::NamedGeneric => QuantifierDomain::NamedAndGeneric,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Dimensions, base locus, ampleness and singularities of a system
    Classify {
        #[arg(long)]
        surface: String,
        #[arg(long)]
        system: String,
    },
    /// Apply elementary transformations and trace the invariants
    Transform {
        #[arg(long)]
        surface: String,
        /// Comma-separated POINT:POSITION list; without it the surface's own
        /// chain is replayed
        #[arg(long)]
        steps: Option<String>,
    },
    /// Project the scroll from points on it and follow (d, N, i)
    Project {
        #[arg(long)]
        surface: String,
        #[arg(long)]
        system: String,
        #[arg(long, default_value_t = 1)]
        count: usize,
        /// Project from a point on this fiber instead of fresh general ones
        #[arg(long)]
        center: Option<String>,
        #[arg(long)]
        position: Option<String>,
    },
    /// Speciality ledger and the cone and directrix verdicts
    Report {
        #[arg(long)]
        surface: String,
        #[arg(long)]
        system: String,
        /// Comma-separated DEGREE:SPAN projection cycles to append
        #[arg(long)]
        cycles: Option<String>,
    },
    /// Run every invariant and oracle check on the scenario
    Verify,
    /// Run the scenario's scripts in order
    Run,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let Some(path) = cli.scenario.as_ref() else {
        eprintln!("error: --scenario is required");
        return ExitCode::from(1);
    };
    let sc = match Scenario::load(path) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("scenario error: {e}");
            return ExitCode::from(1);
        }
    };
    let domain: QuantifierDomain = cli.quantifier_domain.into();
    let mut all_passed = true;
    let (name, result) = match &cli.command {
        Command::Classify { surface, system } => ("classify", commands::classify(&sc, Some(surface), Some(system), domain)),
        Command::Transform { surface, steps } => ("transform", commands::transform(&sc, Some(surface), steps.as_deref())),
        Command::Project {
            surface,
            system,
            count,
            center,
            position,
        } => (
            "project",
            commands::project(&sc, Some(surface), Some(system), *count, center.as_deref(), position.as_deref(), domain),
        ),
        Command::Report { surface, system, cycles } => {
            ("report", commands::report(&sc, Some(surface), Some(system), cycles.as_deref(), domain))
        }
        Command::Verify => (
            "verify",
            commands::verify(&sc, domain).map(|(v, ok)| {
                all_passed = ok;
                v
            }),
        ),
        Command::Run => ("run", run_all(&sc, domain)),
    };
    let value = match result {
        Ok(v) => v,
        Err(Failure::Scenario(e)) => {
            eprintln!("scenario error: {e}");
            return ExitCode::from(1);
        }
        Err(Failure::Math(e)) => {
            eprintln!("precondition failed: {e}");
            return ExitCode::from(2);
        }
    };
    let doc = output::document(name, sc.file.description.as_deref(), domain, value);
    let text = match cli.format {
        Format::Json => serde_json::to_string_pretty(&doc).expect("json") + "\n",
        Format::Text => output::to_text(&doc),
    };
    match &cli.out {
        Some(p) => {
            if let Err(e) = std::fs::write(p, text) {
                eprintln!("cannot write {}: {e}", p.display());
                return ExitCode::from(1);
            }
        }
        None => print!("{text}"),
    }
    if all_passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(3)
    }
}

fn run_all(sc: &Scenario, domain: QuantifierDomain) -> Result<Value, Failure> {
    let mut results = Vec::new();
    for script in &sc.file.scripts {
        let v = commands::run_script(sc, script, domain)?;
        results.push(json!({ "command": script.command, "result": v }));
    }
    Ok(Value::Array(results))
}
