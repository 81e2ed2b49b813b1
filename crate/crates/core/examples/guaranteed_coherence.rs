//! How much coherence survives a qubit thermal transition for sure
//! (λ*·c), versus the best a thermal operation can achieve.

use modeflow::bounds::qubit_thermal_bound;
use modeflow::linalg::c;
use modeflow::thermo::{guaranteed_lambda, guaranteed_sigma, EnergyDistribution};
use modeflow::{DensityMatrix, HamiltonianSpec, InverseTemperature};

fn main() -> modeflow::Result<()> {
    let (p, coh, r) = (0.5, 0.5, 2.0 / 3.0);
    let h = HamiltonianSpec::qubit(1.0)?;
    let beta = InverseTemperature::from_ground_occupation(r, 1.0)?;
    let rho = DensityMatrix::qubit(p, c(coh, 0.0))?;
    println!(
        "{:>6} {:>8} {:>10} {:>10}",
        "q", "lambda*", "guaranteed", "thermal"
    );
    for q in [0.5, 0.55, 0.6, 0.65, 0.7, 0.75] {
        let lam = guaranteed_lambda(p, q, r)?;
        let sigma = guaranteed_sigma(&rho, &h, beta, &EnergyDistribution::qubit(q, h.clone())?)?;
        let best = qubit_thermal_bound(p, q, r, coh).unwrap_or(0.0);
        println!(
            "{q:>6} {lam:>8.4} {:>10.4} {best:>10.4}",
            sigma.entry(0, 1).norm()
        );
    }
    Ok(())
}
