use clap::Parser;
use quadfam::cli::{run, RunConfig};

fn main() {
    std::process::exit(run(RunConfig::parse()));
}
