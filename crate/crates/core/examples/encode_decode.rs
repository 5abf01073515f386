//! Encode a few states as disks and read them back.

use qubobs::{DiskSystem, RealState};

fn main() -> qubobs::Result<()> {
    let states = [
        RealState::qubit(0.6, -0.8)?,
        RealState::normalized(vec![1.0, 0.0, 0.0, -1.0])?,
        RealState::normalized(vec![0.5, -0.5, 0.5, 0.5, 0.0, 1.0, 0.0, 0.0])?,
    ];
    for state in &states {
        let disk = DiskSystem::encode(state);
        println!("state   {state}");
        print!("{disk}");
        println!("decoded {}\n", disk.decode()?);
    }
    Ok(())
}
