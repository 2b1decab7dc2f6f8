//! Runs a scenario file (quantum or box-world) and prints the report.
//!
//! cargo run --example check_scenario -- scenarios/singlet_xz.json

use std::path::PathBuf;

use steercert::commands::{cmd_check, Options};

fn main() {
    let path = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("scenarios/singlet_xz.json"));
    match cmd_check(&path, &Options::default()) {
        Ok(report) => {
            print!("{}", report.summary());
            println!("{}", report.to_json().expect("report serializes"));
        }
        Err(e) => {
            eprintln!("{}: {e}", path.display());
            std::process::exit(if e.is_input_error() { 1 } else { 2 });
        }
    }
}
