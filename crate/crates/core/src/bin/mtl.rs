// SPDX-License-Identifier: Apache-2.0

use std::process::ExitCode;

use clap::Parser;
use mtl::cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    ExitCode::from(run(&cli, &mut std::io::stdout().lock(), &mut std::io::stderr().lock()))
}
