use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;
use std::process::ExitCode;

use chaosdet::commands::{self, GenArgs, Outcome, PairArgs, VerifyArgs};
use chaosdet::output::{emit, Format};
use chaosdet::{Error, Result};
use clap::{Parser, Subcommand};

/// Expected Malliavin determinants of pairs of multiple Wiener-Ito integrals.
#[derive(Parser)]
#[command(version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a random unit-norm symmetric tensor file.
    Gen(GenArgs),
    /// Covariance determinant, every E det Lambda route and the density verdict.
    Report(PairArgs),
    /// Run the identity checks over a grid; exits 1 if any fails.
    Verify(VerifyArgs),
    /// Monte Carlo estimate of E det Lambda.
    Mc(PairArgs),
    /// Density verdict for a same-order pair (orders up to 4).
    Density(PairArgs),
}

fn write_to(out: Option<&Path>, body: impl FnOnce(&mut dyn Write) -> Result<()>) -> Result<()> {
    match out {
        Some(p) => {
            let f = File::create(p).map_err(|source| Error::Io { path: p.into(), source })?;
            let mut w = BufWriter::new(f);
            body(&mut w)?;
            w.flush()?;
        }
        None => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            body(&mut w)?;
            w.flush()?;
        }
    }
    Ok(())
}

fn print(outcome: Outcome, format: Format, out: Option<&Path>) -> Result<bool> {
    write_to(out, |w| emit(&outcome.records, format, w))?;
    Ok(outcome.success)
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Gen(a) => {
            let text = commands::gen(&a)?;
            write_to(a.common.out.as_deref(), |w| Ok(w.write_all(text.as_bytes())?))?;
            Ok(true)
        }
        Command::Report(a) => print(commands::report(&a)?, a.common.format, a.common.out.as_deref()),
        Command::Verify(a) => print(commands::verify(&a)?, a.common.format, a.common.out.as_deref()),
        Command::Mc(a) => print(commands::mc(&a)?, a.common.format, a.common.out.as_deref()),
        Command::Density(a) => print(commands::density(&a)?, a.common.format, a.common.out.as_deref()),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Error::Output(e)) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
