mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rydfermi::scenario::{validate_file, Scenario};
use rydfermi::Error;

/// Rydberg-Fermi plaquette simulations driven by a scenario file.
#[derive(Debug, Parser)]
#[command(name = "rydfermi", version)]
struct Cli {
    /// Cap on worker threads.
    #[arg(long, global = true, value_name = "N")]
    threads: Option<usize>,

    /// Treat p-wave resonance proximity as an error.
    #[arg(long, global = true)]
    strict: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, clap::Args)]
struct RunArgs {
    /// Scenario file (TOML).
    scenario: PathBuf,

    /// Output directory; overrides `output.directory`.
    #[arg(short, long, value_name = "DIR")]
    output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Radial wavefunction table of the Rydberg level(s).
    Wavefunction(RunArgs),
    /// V_RF over a plane through the Rydberg core.
    SuperpositionMap(RunArgs),
    /// Potential-energy curves of the coupled Rydberg manifold.
    Pec(RunArgs),
    /// Spin-dependent lattice potentials and qubit modes.
    Lattice(RunArgs),
    /// Franck-Condon table and effective F.
    FranckCondon(RunArgs),
    /// Site-averaged <1|V_RF|1> and <0|V_RF|0> of a plaquette atom.
    SiteInteraction(RunArgs),
    /// Simulate the configured gate protocol.
    Gate(RunArgs),
    /// Closed-form error budget.
    Budget(RunArgs),
    /// Curve over one scalar key.
    Sweep(RunArgs),
    /// Check a scenario and list every problem.
    Validate { scenario: PathBuf },
}

const EXIT_CONFIG: u8 = 2;
const EXIT_NUMERICAL: u8 = 3;
const EXIT_IO: u8 = 4;

fn exit_code(e: &Error) -> u8 {
    if e.is_config() {
        EXIT_CONFIG
    } else if matches!(e, Error::Io(_)) {
        EXIT_IO
    } else {
        EXIT_NUMERICAL
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if n == 0 {
            eprintln!("error: --threads must be >= 1");
            return ExitCode::from(EXIT_CONFIG);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("warning: could not size the thread pool: {e}");
        }
    }
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn run(cli: &Cli) -> rydfermi::Result<()> {
    let (name, args) = match &cli.command {
        Command::Validate { scenario } => return validate(scenario),
        Command::Wavefunction(a) => ("wavefunction", a),
        Command::SuperpositionMap(a) => ("superposition-map", a),
        Command::Pec(a) => ("pec", a),
        Command::Lattice(a) => ("lattice", a),
        Command::FranckCondon(a) => ("franck-condon", a),
        Command::SiteInteraction(a) => ("site-interaction", a),
        Command::Gate(a) => ("gate", a),
        Command::Budget(a) => ("budget", a),
        Command::Sweep(a) => ("sweep", a),
    };
    let bytes = std::fs::read(&args.scenario)?;
    let scenario = Scenario::load(&args.scenario)?;
    let ctx = commands::Context::new(cli.strict);
    let artifacts = commands::run(name, &scenario, &ctx)?;
    let dir = args
        .output
        .clone()
        .or_else(|| scenario.output.directory.clone())
        .unwrap_or_else(|| PathBuf::from("rydfermi-output"));
    let manifest = output::write(
        &dir,
        &scenario.output.prefix,
        name,
        &args.scenario,
        &bytes,
        &artifacts,
    )?;
    for f in &manifest.files {
        println!("{}", dir.join(&f.name).display());
    }
    println!("{}", dir.join(output::MANIFEST).display());
    Ok(())
}

fn validate(path: &PathBuf) -> rydfermi::Result<()> {
    let diags = validate_file(path)?;
    if diags.is_empty() {
        println!("ok");
        return Ok(());
    }
    for d in &diags {
        println!("{d}");
    }
    let first = diags.into_iter().next().expect("nonempty");
    Err(first.into_error())
}
