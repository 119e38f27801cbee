use std::process::ExitCode;

use clap::Parser;
use qverify_cli::args::Cli;

fn main() -> ExitCode {
    ExitCode::from(qverify_cli::run(Cli::parse()))
}
