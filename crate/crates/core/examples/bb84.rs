//! BB84 with and without an intercept-resend listener.

use qubobs::protocols::{bb84_run, Bb84Params};

fn main() -> qubobs::Result<()> {
    let kit = bb84_run(&Bb84Params::default())?;
    print!("{}", kit.transcript());

    for eve_present in [false, true] {
        let run = bb84_run(&Bb84Params { rounds: 4000, eve_present, seed: 1, sample_fraction: 0.5 })?;
        println!(
            "eve={eve_present}: sifted {} of 4000, qber {:.3}, audit breakdowns {}",
            run.sifted_count(),
            run.qber.unwrap_or(f64::NAN),
            run.audit.breakdowns
        );
    }
    Ok(())
}
