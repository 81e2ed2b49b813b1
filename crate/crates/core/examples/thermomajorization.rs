//! Thermomajorization of qubit populations through Lorenz curves, compared
//! with the closed-form reachable interval.

use modeflow::thermo::{reachable_interval, thermomajorizes, EnergyDistribution, LorenzCurve};
use modeflow::{HamiltonianSpec, InverseTemperature};

fn main() -> modeflow::Result<()> {
    let h = HamiltonianSpec::qubit(1.0)?;
    let r = 2.0 / 3.0;
    let beta = InverseTemperature::from_ground_occupation(r, 1.0)?;
    let p = EnergyDistribution::qubit(0.5, h.clone())?;
    let (lo, hi) = reachable_interval(0.5, r)?;
    println!("from p = 0.5 at r = 2/3 the reachable q lie in [{lo:.4}, {hi:.4}]");
    for q in [0.4, 0.5, 0.7, 0.75, 0.8] {
        let target = EnergyDistribution::qubit(q, h.clone())?;
        println!(
            "  q = {q:<4} reachable: {}",
            thermomajorizes(&p, &target, beta)?
        );
    }
    println!("Lorenz curve of p:");
    LorenzCurve::new(&p, beta).write_csv(std::io::stdout())?;
    Ok(())
}
