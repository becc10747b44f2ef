// SPDX-License-Identifier: Apache-2.0

use clap::Parser;

fn main() {
    let config = moment_space_cli::RunConfig::parse();
    std::process::exit(moment_space_cli::run(&config));
}
