use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    wildstream_cli::run(wildstream_cli::Cli::parse())
}
