//! Hadamard splits slices; cancelling opposite slices is exact only sometimes.

use qubobs::verifier::{audit_run_from, audit_table};
use qubobs::{Gate, RealState, Step};

fn main() -> qubobs::Result<()> {
    let h = Step::Gate { gate: Gate::H, target: 0 };
    let cases = [
        ("|0> through H twice", RealState::basis(1, 0)?, vec![h.clone(), h.clone(), Step::Cancel]),
        ("|+> through H", RealState::qubit(0.5f64.sqrt(), 0.5f64.sqrt())?, vec![h.clone(), Step::Cancel]),
        ("2/3 : 1/3 through H", RealState::qubit((2.0f64 / 3.0).sqrt(), (1.0f64 / 3.0).sqrt())?, vec![h]),
    ];
    for (label, start, script) in cases {
        println!("{label}");
        match audit_run_from(&start, &script) {
            Ok(reports) => print!("{}", audit_table(&reports)),
            Err(e) => println!("  {e}"),
        }
        println!();
    }
    Ok(())
}
