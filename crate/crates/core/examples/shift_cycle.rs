//! Moving coherence down a qutrit ladder and back up with a finite
//! oscillator bath: the round trip loses a Boltzmann factor.

use modeflow::channels::{shift_channel, ShiftDirection};
use modeflow::linalg;
use modeflow::oracle::bath_convergence_study;
use modeflow::InverseTemperature;

fn main() -> modeflow::Result<()> {
    let beta = InverseTemperature::new(0.5)?;
    println!("down-shift |2⟩⟨1| → |1⟩⟨0| versus bath size");
    for row in bath_convergence_study(ShiftDirection::Down, beta, 1.0, &[5, 10, 20, 40])? {
        println!(
            "  N = {:>2}  achieved {:.10}  error {:.3e}",
            row.n_bath, row.achieved, row.error
        );
    }
    let n = 40;
    let cycle = shift_channel(ShiftDirection::Down, beta, 1.0, n)?.then(&shift_channel(
        ShiftDirection::Up,
        beta,
        1.0,
        n,
    )?)?;
    let out = cycle.apply_operator(&linalg::ket_bra(3, 3, 2, 1))?;
    println!(
        "down then up: multiplier {:.8}, e^(-βω) = {:.8}",
        out[(2, 1)].norm(),
        (-0.5f64).exp()
    );
    Ok(())
}
