//! Two single-qubit disks plus the angle between them fix a two-qubit state.

use qubobs::{AlignedPair, DiskSystem};

fn main() -> qubobs::Result<()> {
    let (s3, s6) = (1.0 / 3f64.sqrt(), 1.0 / 6f64.sqrt());
    let (disk, pair) = DiskSystem::encode_pair([s3, s6, s3, s6])?;
    println!("P = {:.4}, P' = {:.4}, theta = {:.4}", pair.p, pair.pp, pair.theta);
    print!("{disk}");

    // Same marginals, different overlap: from uncorrelated to fully correlated.
    for theta in [0.0, 0.25, 0.5] {
        let pair = AlignedPair::new(0.5, 0.5, theta)?;
        println!("theta {theta:.2}: areas {:?} -> {}", pair.areas(), pair.state()?);
    }
    Ok(())
}
