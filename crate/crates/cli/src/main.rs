//! `faceqa` command-line tool.
//!
//! ```text
//! faceqa segment portrait.png
//! faceqa compare ref.png dist.png --regions face,body,full
//! faceqa sweep portrait.png --out sweep.csv
//! ```
//!
//! Exit codes: 0 success, 1 usage, 2 I/O, 3 shape or size, 4 no face.

mod args;
mod commands;
mod config;
mod error;

use std::io::Write;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use args::{Cli, Command};
use error::exit;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => exit::OK,
                _ => exit::USAGE,
            };
            return ExitCode::from(code as u8);
        }
    };

    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let result = match &cli.command {
        Command::Segment(a) => commands::segment(a, &mut out),
        Command::Compare(a) => commands::compare(a, &mut out),
        Command::Sweep(a) => commands::sweep(a, &mut out),
    };
    let _ = out.flush();
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("faceqa: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
