//! Classical-stage and full teleportation of a signed qubit.

use qubobs::protocols::{correction_table, teleport_classical, teleport_full_branch};

fn main() -> qubobs::Result<()> {
    print!("{}", teleport_classical(0.7, 0.4)?.transcript());
    println!();

    let (alpha, beta) = (0.72f64.sqrt(), -(0.28f64.sqrt()));
    for m_inner in 0..2 {
        for m_outer in 0..2 {
            let t = teleport_full_branch(alpha, beta, m_inner, m_outer)?;
            let fix: Vec<&str> =
                correction_table()[m_inner as usize][m_outer as usize].iter().map(|c| c.name()).collect();
            println!("outcome {m_inner}{m_outer} fix [{}] -> Bob holds {}", fix.join(" "), t.bob_final_exact);
        }
    }
    Ok(())
}
