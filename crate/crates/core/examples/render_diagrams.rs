//! Write side-by-side and stacked SVGs of an entangled pair after a Hadamard.
//!
//! Usage: cargo run --example render_diagrams [out_dir]

use std::f64::consts::FRAC_1_SQRT_2 as S2;

use qubobs::{render_svg, render_text, DiskSystem, Gate, Layout, RenderSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::args().nth(1).unwrap_or_else(|| "diagrams".into());
    std::fs::create_dir_all(&dir)?;
    let (pair, _) = DiskSystem::encode_pair([S2, 0.0, S2, 0.0])?;
    let disk = pair.apply_gate(&Gate::H, 0)?;
    println!("{}", render_text(&disk));
    for (name, layout) in [("side.svg", Layout::SideBySide), ("stacked.svg", Layout::Stacked)] {
        let svg = render_svg(&disk, &RenderSpec { layout, window_angle: Some(0.3), ..Default::default() })?;
        std::fs::write(format!("{dir}/{name}"), svg)?;
        println!("wrote {dir}/{name}");
    }
    Ok(())
}
