//! Classifies a few channels: symmetric? Gibbs-preserving? Both means the
//! channel is compatible with a thermal operation.

use modeflow::channels::{
    amplitude_damping, hadamard_channel, shift_channel, ChannelClassReport, KrausChannel,
    ShiftDirection,
};
use modeflow::{HamiltonianSpec, InverseTemperature};

fn show(name: &str, ch: &KrausChannel, beta: InverseTemperature) -> modeflow::Result<()> {
    let rep = ChannelClassReport::new(ch, &[beta])?;
    println!(
        "{name:<22} symmetric {:<5} gibbs {:<5} thermal-compatible {}",
        rep.is_symmetric,
        rep.gibbs[0].holds,
        rep.is_thermal_compatible()
    );
    Ok(())
}

fn main() -> modeflow::Result<()> {
    let beta = InverseTemperature::new(1.0)?;
    let qubit = HamiltonianSpec::qubit(1.0)?;
    show("dephasing", &KrausChannel::dephasing(&qubit), beta)?;
    show("amplitude damping", &amplitude_damping(&qubit, 0.4)?, beta)?;
    show("hadamard", &hadamard_channel(&qubit)?, beta)?;
    show(
        "shift down (N = 20)",
        &shift_channel(ShiftDirection::Down, beta, 1.0, 20)?,
        beta,
    )?;
    Ok(())
}
