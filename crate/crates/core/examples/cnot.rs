//! Controlled-NOT recolors only the regions whose control ring is orange.

use qubobs::{DiskSystem, Gate, RealState};

fn main() -> qubobs::Result<()> {
    let plus = RealState::qubit(0.5f64.sqrt(), 0.5f64.sqrt())?;
    let disk = DiskSystem::encode(&plus.tensor(&RealState::basis(1, 0)?)?);
    println!("before");
    print!("{disk}");
    let entangled = disk.apply_controlled(&Gate::X, 0, 1)?;
    println!("after CNOT 0 -> 1");
    print!("{entangled}");
    println!("decoded {}", entangled.decode()?);
    Ok(())
}
