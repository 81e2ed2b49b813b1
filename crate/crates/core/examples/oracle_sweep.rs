//! Seeded counterexample hunt: random symmetric and thermal channels against
//! every bound, plus saturation of the explicit constructions.
//!
//! `cargo run --release --example oracle_sweep -- 10000 42`

use modeflow::oracle::{
    symmetric_sweep, thermal_sweep, verify_saturation, with_threads, BoundId, Params,
};

fn main() -> modeflow::Result<()> {
    let mut args = std::env::args().skip(1);
    let samples = args.next().and_then(|s| s.parse().ok()).unwrap_or(1000);
    let seed = args.next().and_then(|s| s.parse().ok()).unwrap_or(42);
    for report in [
        with_threads(0, || symmetric_sweep(samples, seed))?,
        with_threads(0, || thermal_sweep(samples, seed))?,
    ] {
        println!(
            "{:<20} pass {:<5} checks {:>8} worst slack {:.3e}",
            report.suite, report.pass, report.checks, report.worst_slack
        );
    }
    for id in BoundId::ALL {
        let rep = verify_saturation(id, &Params::new(), 1e-6)?;
        println!("{:<20} ratio {:.9} pass {}", id.name(), rep.ratio, rep.pass);
    }
    Ok(())
}
