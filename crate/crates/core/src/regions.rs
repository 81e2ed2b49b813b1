//! Qubit achievable-state regions in the X–Z plane of the Bloch sphere.
//!
//! A qubit state `[[p, c], [c, 1−p]]` (real coherence `c ≥ 0`, ground
//! population `p`) maps to `x = 2c`, `z = 2p − 1`, so the ground state sits at
//! `z = +1`. The regions are rotationally symmetric about Z; each boundary is
//! stored as its `x ≥ 0` half, one point per target population `q`.
//!
//! The symmetric region also describes what thermal operations reach when
//! unlimited incoherent work is available.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use serde::Serialize;

use crate::bounds::{qubit_symmetric_bound, qubit_thermal_bound};
use crate::error::{Error, Result};
use crate::fmt::sig17;
use crate::qstate::InverseTemperature;
use crate::thermo::{extremal_incoherent_qubit, guaranteed_lambda, reachable_interval};

pub const DEFAULT_GRID: usize = 201;
pub const GRID_MIN: f64 = 0.005;
pub const GRID_MAX: f64 = 0.995;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BlochPoint {
    pub x: f64,
    pub z: f64,
}

impl BlochPoint {
    /// Point of the state with ground population `q` and coherence `d`.
    pub fn from_qubit(q: f64, d: f64) -> Self {
        Self {
            x: 2.0 * d,
            z: 2.0 * q - 1.0,
        }
    }

    pub fn radius(&self) -> f64 {
        self.x.hypot(self.z)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RegionKind {
    Symmetric,
    Thermal,
    Triangle,
    Guaranteed,
}

impl RegionKind {
    pub const ALL: [RegionKind; 4] = [
        RegionKind::Symmetric,
        RegionKind::Thermal,
        RegionKind::Triangle,
        RegionKind::Guaranteed,
    ];
}

impl fmt::Display for RegionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Symmetric => "symmetric",
            Self::Thermal => "thermal",
            Self::Triangle => "triangle",
            Self::Guaranteed => "guaranteed",
        })
    }
}

impl FromStr for RegionKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.to_string() == s)
            .ok_or_else(|| Error::Unknown(format!("region kind {s:?}")))
    }
}

/// One boundary sample: target population `q`, extremal coherence `d`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RegionSample {
    pub q: f64,
    pub d: f64,
    pub point: BlochPoint,
}

impl RegionSample {
    fn new(q: f64, d: f64) -> Self {
        Self {
            q,
            d,
            point: BlochPoint::from_qubit(q, d),
        }
    }
}

/// Upper boundary of an achievable region, ordered by ascending `q`.
///
/// Grid-based kinds hold one sample per feasible grid point (thermal and
/// guaranteed regions skip unreachable `q`); the triangle holds its three
/// vertices.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RegionBoundary {
    pub kind: RegionKind,
    pub p: f64,
    pub c: f64,
    pub r: Option<f64>,
    pub grid: usize,
    pub samples: Vec<RegionSample>,
}

impl RegionBoundary {
    pub fn points(&self) -> impl Iterator<Item = BlochPoint> + '_ {
        self.samples.iter().map(|s| s.point)
    }

    /// Coherence at the sample whose `q` is within `1e-12` of the request.
    pub fn d_at(&self, q: f64) -> Option<f64> {
        self.samples
            .iter()
            .find(|s| (s.q - q).abs() <= 1e-12)
            .map(|s| s.d)
    }

    /// CSV with header `kind,p,c,r,q,d_plus_x,z`; `d_plus_x` is the Bloch
    /// `x` coordinate `2d` of the upper branch.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["kind", "p", "c", "r", "q", "d_plus_x", "z"])?;
        let r = self.r.map(sig17).unwrap_or_default();
        for s in &self.samples {
            w.write_record([
                self.kind.to_string(),
                sig17(self.p),
                sig17(self.c),
                r.clone(),
                sig17(s.q),
                sig17(s.point.x),
                sig17(s.point.z),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// `n` evenly spaced target populations over `[GRID_MIN, GRID_MAX]`.
pub fn q_grid(n: usize) -> Result<Vec<f64>> {
    if n < 2 {
        return Err(Error::OutOfRange(format!(
            "grid needs at least 2 points, got {n}"
        )));
    }
    Ok((0..n)
        .map(|k| GRID_MIN + (GRID_MAX - GRID_MIN) * k as f64 / (n - 1) as f64)
        .collect())
}

/// Thermal ground occupation `r = 1/(1 + e^{−β})` of a unit-gap qubit.
pub fn r_from_beta(beta: InverseTemperature) -> f64 {
    beta.ground_occupation(1.0)
}

pub fn beta_from_r(r: f64) -> Result<InverseTemperature> {
    InverseTemperature::from_ground_occupation(r, 1.0)
}

fn validate_state(p: f64, c: f64) -> Result<()> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::InvalidState(format!(
            "ground population {p} not in (0,1)"
        )));
    }
    if c < 0.0 || c * c > p * (1.0 - p) + 1e-12 {
        return Err(Error::InvalidState(format!(
            "coherence {c} outside [0, sqrt(p(1-p))] for p = {p}"
        )));
    }
    Ok(())
}

fn validate_r(p: f64, r: f64) -> Result<()> {
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::OutOfRange(format!("r must lie in (0,1), got {r}")));
    }
    if p == r {
        return Err(Error::Infeasible(
            "p = r: the thermal region is undefined".into(),
        ));
    }
    Ok(())
}

/// Boundary reachable by time-translation symmetric operations.
pub fn symmetric_region(p: f64, c: f64, grid: usize) -> Result<RegionBoundary> {
    validate_state(p, c)?;
    let samples = q_grid(grid)?
        .into_iter()
        .map(|q| qubit_symmetric_bound(p, q, c).map(|d| RegionSample::new(q, d)))
        .collect::<Result<Vec<_>>>()?;
    Ok(RegionBoundary {
        kind: RegionKind::Symmetric,
        p,
        c,
        r: None,
        grid,
        samples,
    })
}

fn reachable_grid(p: f64, r: f64, grid: usize) -> Result<Vec<f64>> {
    let (lo, hi) = reachable_interval(p, r)?;
    Ok(q_grid(grid)?
        .into_iter()
        .filter(|&q| q >= lo - 1e-12 && q <= hi + 1e-12)
        .collect())
}

/// Boundary reachable by thermal operations at thermal occupation `r`.
pub fn thermal_region(p: f64, c: f64, r: f64, grid: usize) -> Result<RegionBoundary> {
    validate_state(p, c)?;
    validate_r(p, r)?;
    let samples = reachable_grid(p, r, grid)?
        .into_iter()
        .filter_map(|q| {
            qubit_thermal_bound(p, q, r, c)
                .ok()
                .map(|d| RegionSample::new(q, d))
        })
        .collect();
    Ok(RegionBoundary {
        kind: RegionKind::Thermal,
        p,
        c,
        r: Some(r),
        grid,
        samples,
    })
}

/// Dephasing followed by incoherent thermal processing: the triangle spanned
/// by the state, its dephased version, and the extremal incoherent state.
pub fn triangle_region(p: f64, c: f64, r: f64) -> Result<RegionBoundary> {
    validate_state(p, c)?;
    let qt = extremal_incoherent_qubit(p, r)?;
    let mut samples = vec![
        RegionSample::new(p, c),
        RegionSample::new(p, 0.0),
        RegionSample::new(qt, 0.0),
    ];
    samples.sort_by(|a, b| a.q.total_cmp(&b.q));
    Ok(RegionBoundary {
        kind: RegionKind::Triangle,
        p,
        c,
        r: Some(r),
        grid: 3,
        samples,
    })
}

/// States `λ*ρ + (1−λ*)ξ^(0)`: coherence `λ*·c` guaranteed at each reachable `q`.
pub fn guaranteed_region(p: f64, c: f64, r: f64, grid: usize) -> Result<RegionBoundary> {
    validate_state(p, c)?;
    validate_r(p, r)?;
    let samples = reachable_grid(p, r, grid)?
        .into_iter()
        .map(|q| guaranteed_lambda(p, q, r).map(|l| RegionSample::new(q, l * c)))
        .collect::<Result<Vec<_>>>()?;
    Ok(RegionBoundary {
        kind: RegionKind::Guaranteed,
        p,
        c,
        r: Some(r),
        grid,
        samples,
    })
}

pub fn region(
    kind: RegionKind,
    p: f64,
    c: f64,
    r: Option<f64>,
    grid: usize,
) -> Result<RegionBoundary> {
    let need_r = || r.ok_or_else(|| Error::MissingInput(format!("{kind} region needs r")));
    match kind {
        RegionKind::Symmetric => symmetric_region(p, c, grid),
        RegionKind::Thermal => thermal_region(p, c, need_r()?, grid),
        RegionKind::Triangle => triangle_region(p, c, need_r()?),
        RegionKind::Guaranteed => guaranteed_region(p, c, need_r()?, grid),
    }
}
