//! Spin the window over the outer ring of a two-qubit disk.

use qubobs::{Color, DiskSystem, Region, Sign};

fn main() -> qubobs::Result<()> {
    use Color::{Blue as B, Orange as O};
    let disk = DiskSystem::new(
        2,
        [(0.1, [B, B]), (0.3, [B, O]), (0.2, [O, O]), (0.4, [O, B])]
            .into_iter()
            .map(|(f, c)| Region::new(f, c.to_vec(), Sign::Plus))
            .collect(),
    )?;
    for draw in [0.05, 0.25, 0.5, 0.9] {
        let reading = disk.spin_window(&[0], draw)?;
        let o = &reading.outcomes[0];
        println!(
            "window at {draw:.2}: outer {:?} with p = {:.2}, inner left with",
            o.color, reading.probability
        );
        print!("{}", reading.residual.project(1)?);
    }
    Ok(())
}
