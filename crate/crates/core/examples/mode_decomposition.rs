//! Splits a qutrit state into modes of coherence and shows that a time
//! translation only rotates each mode by its own phase.

use modeflow::linalg::c;
use modeflow::qstate::{mode_decompose, mode_l1, time_translate, DensityMatrix, HamiltonianSpec};

fn main() -> modeflow::Result<()> {
    // Equidistant ladder: |1⟩⟨0| and |2⟩⟨1| share the ω = 1 mode.
    let h = HamiltonianSpec::equidistant(3, 1.0)?;
    let rho = DensityMatrix::from_parts(
        &[
            vec![0.5, 0.1, 0.05],
            vec![0.1, 0.3, 0.1],
            vec![0.05, 0.1, 0.2],
        ],
        &vec![vec![0.0; 3]; 3],
    )?;
    let modes = mode_decompose(&rho, &h)?;
    println!("{:>6}  {:>10}", "omega", "l1 norm");
    for w in modes.frequencies() {
        println!("{w:>6}  {:>10.6}", mode_l1(&modes, w));
    }

    let t = 0.7;
    let moved = mode_decompose(&time_translate(&rho, &h, t)?, &h)?;
    let x = moved.get(1.0).expect("ω = 1 mode present")[(1, 0)];
    println!(
        "after t = {t}: ρ^(1)_10 = {x:.6} (expected {:.6})",
        c(0.1, 0.0) * c(0.0, -t).exp()
    );
    Ok(())
}
