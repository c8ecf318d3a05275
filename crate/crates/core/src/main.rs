use std::process::ExitCode;

use clap::Parser;
use tradenet::cli::{run, Cli};

fn main() -> ExitCode {
    run(Cli::parse())
}
