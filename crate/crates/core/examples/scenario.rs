//! Run a scenario script and print its transcript and audit.
//!
//! Usage: cargo run --example scenario [script] [seed]

use qubobs::run_scenario;

const DEFAULT: &str = "\
epr a b
gate H a
measure a
audit
";

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let script = match args.next() {
        Some(path) => std::fs::read_to_string(path)?,
        None => DEFAULT.to_string(),
    };
    let seed = args.next().map(|s| s.parse()).transpose()?.unwrap_or(0);
    let out = run_scenario(&script, seed, None)?;
    print!("{}\n{}", out.transcript, out.audit);
    Ok(())
}
