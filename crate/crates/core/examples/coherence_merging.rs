//! Merging two coherences of the same mode into one: the symmetric merge
//! reaches √(a² + b²), more than either input but less than a + b.

use modeflow::bounds::{merge_bound_symmetric, merge_bound_thermal};
use modeflow::channels::{merge_channel, optimal_merge_parameter, ShiftDirection};
use modeflow::linalg::{self, c};
use modeflow::InverseTemperature;

fn main() -> modeflow::Result<()> {
    let (a, b) = (0.3, 0.4);
    let x = optimal_merge_parameter(a, b);
    let op = linalg::ket_bra(3, 3, 1, 0) * c(a, 0.0) + linalg::ket_bra(3, 3, 2, 1) * c(b, 0.0);
    let merged = merge_channel(x)?.apply_operator(&op)?[(1, 0)].norm();
    println!(
        "x* = {x:.4}: merged {merged:.6}, bound {:.6}",
        merge_bound_symmetric(a, b)?
    );

    let beta = InverseTemperature::new(2f64.ln())?;
    for dir in [ShiftDirection::Down, ShiftDirection::Up] {
        println!(
            "thermal merge {dir:?}: bound {:.6}",
            merge_bound_thermal(a, b, beta, 1.0, dir)?
        );
    }
    Ok(())
}
