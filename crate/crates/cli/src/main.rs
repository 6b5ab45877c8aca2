//! `cheb`: orbit scans, S-integrality sweeps and desk-scale theorem checks
//! for the Chebyshev maps, with JSON and CSV reports.
//!
//! Exit status is 0 when every check passes, 2 when some check fails and 1
//! on a usage or input error.

mod commands;
mod report;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use commands::*;
use report::Outcome;

const EXIT_VIOLATION: u8 = 2;
const EXIT_USAGE: u8 = 1;

#[derive(Parser, Debug)]
#[command(name = "cheb", version, about = "Chebyshev dynamics experiment harness")]
struct Cli {
    /// Report format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Json)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Minimal polynomial and conjugates of the orbit of 2cos(2 pi / N).
    Orbit(OrbitArgs),
    /// The map T_d and the forward orbit of a rational point.
    Cheb(ChebArgs),
    /// Weil height.
    Height(HeightArgs),
    /// Canonical height against the Weil height.
    CanonicalHeight(CanonicalHeightArgs),
    /// S-integrality of one orbit relative to beta.
    Sintegral(SIntegralArgs),
    /// All S-integral orbits with N <= Nmax.
    Scan(ScanArgs),
    /// Discrepancy of orbit averages of the proximity function.
    Equidist(EquidistArgs),
    /// Angle lower bounds from linear forms in two logarithms.
    Baker(BakerArgs),
    /// p-adic near points of beta among the orbits.
    Cor33(Cor33Args),
    /// Seeded exceptional-orbit count over sampled beta.
    Theorem2(Theorem2Args),
}

fn run(command: &Command) -> cheb_core::Result<Outcome> {
    match command {
        Command::Orbit(a) => orbit(a),
        Command::Cheb(a) => cheb(a),
        Command::Height(a) => height(a),
        Command::CanonicalHeight(a) => canonical_height(a),
        Command::Sintegral(a) => sintegral(a),
        Command::Scan(a) => scan(a),
        Command::Equidist(a) => equidist(a),
        Command::Baker(a) => baker(a),
        Command::Cor33(a) => cor33(a),
        Command::Theorem2(a) => theorem2(a),
    }
}

fn emit(outcome: &Outcome, format: Format, w: impl Write) -> io::Result<()> {
    match format {
        Format::Json => outcome.write_json(w),
        Format::Csv => {
            for n in &outcome.notes {
                eprintln!("{n}");
            }
            outcome.write_csv(w).map_err(io::Error::other)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_USAGE) } else { ExitCode::SUCCESS };
        }
    };
    let outcome = match run(&cli.command) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    let written = match &cli.output {
        Some(path) => File::create(path).and_then(|f| {
            let mut w = BufWriter::new(f);
            emit(&outcome, cli.format, &mut w)?;
            w.flush()
        }),
        None => emit(&outcome, cli.format, io::stdout().lock()),
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return ExitCode::from(EXIT_USAGE);
    }
    for c in outcome.checks.iter().filter(|c| !c.pass) {
        eprintln!("check failed: {} (lhs {}, rhs {})", c.name, c.lhs, c.rhs);
    }
    if outcome.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_VIOLATION)
    }
}
