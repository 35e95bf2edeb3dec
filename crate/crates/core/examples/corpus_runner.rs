//! Run a corpus manifest and print its TAP report.
//!
//! cargo run --example corpus_runner -- corpus/manifest.txt

use std::path::PathBuf;
use std::process::ExitCode;

use gctt::corpus::{load_manifest, run_cases, uncovered_topics};

fn main() -> ExitCode {
    let path = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("corpus/manifest.txt"));
    let cases = match load_manifest(&path) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::from(3);
        }
    };
    let report = run_cases(&cases);
    print!("{}", report.tap());
    let missing = uncovered_topics(&cases);
    if !missing.is_empty() {
        eprintln!("uncovered topics: {}", missing.join(", "));
    }
    println!("# {}/{} passed", report.passed(), cases.len());
    if report.all_passed() && missing.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
