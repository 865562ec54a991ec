//! `ncpii`: command line front end for the hierarchy, Lax pair, Airy,
//! Fredholm and identity-verification pipelines.

mod args;
mod exit;
mod run;

use std::fs;
use std::io::Write;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use crate::args::{Cli, Command};
use crate::exit::Failure;
use crate::run::Artifact;

fn dispatch(cli: &Cli) -> Result<Artifact, Failure> {
    match &cli.command {
        Command::Lenard(a) => run::lenard_cmd(a),
        Command::Hierarchy(a) => run::hierarchy_cmd(a),
        Command::Lax(a) => run::lax_cmd(a),
        Command::Airy(a) => run::airy_cmd(a),
        Command::Fredholm(a) => run::fredholm_cmd(a),
        Command::VerifyIdentity(a) => run::verify_cmd(a),
        Command::Selftest => run::selftest_cmd(),
    }
}

fn emit(cli: &Cli, text: &str) -> Result<(), Failure> {
    match &cli.output {
        Some(path) => {
            fs::write(path, text).map_err(|e| Failure::io(format!("{}: {e}", path.display())))
        }
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
            Ok(())
        }
    }
}

fn fail(f: &Failure) -> ExitCode {
    eprintln!("{}", f.line());
    ExitCode::from(f.exit as u8)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let first = e.to_string();
            let first = first.lines().next().unwrap_or("invalid arguments");
            let first = first.trim_start_matches("error: ");
            return fail(&Failure::bad_flags(first));
        }
    };
    match dispatch(&cli) {
        Ok(art) => {
            if let Err(f) = emit(&cli, &art.text) {
                return fail(&f);
            }
            match art.failure {
                Some(f) => fail(&f),
                None => ExitCode::SUCCESS,
            }
        }
        Err(f) => fail(&f),
    }
}
