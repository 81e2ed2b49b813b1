//! Qubit achievable regions (symmetric, thermal, guaranteed, triangle) as
//! CSV files in a directory given on the command line (default: ./regions).

use std::fs::{self, File};
use std::path::PathBuf;

use modeflow::regions::{region, RegionKind, DEFAULT_GRID};

fn main() -> modeflow::Result<()> {
    let dir = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| "regions".into());
    fs::create_dir_all(&dir)?;
    let (p, c, r) = (0.5, 0.45, 2.0 / 3.0);
    for kind in RegionKind::ALL {
        let boundary = region(kind, p, c, Some(r), DEFAULT_GRID)?;
        let path = dir.join(format!("{kind}.csv"));
        boundary.write_csv(File::create(&path)?)?;
        let widest = boundary.samples.iter().map(|s| s.d).fold(0.0, f64::max);
        println!(
            "{:<11} {:>3} points, max coherence {widest:.4} -> {}",
            kind.to_string(),
            boundary.samples.len(),
            path.display()
        );
    }
    Ok(())
}
