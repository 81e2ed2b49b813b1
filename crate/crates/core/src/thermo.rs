//! Thermomajorization and guaranteed coherence preservation.
//!
//! Incoherent reachability is decided with Gibbs-rescaled Lorenz curves:
//! levels are sorted by `p_i·e^{βω_i}` (the β-order), then the curve joins the
//! points `(Σ r_i, Σ p_i)` accumulated in that order, `r` being the thermal
//! distribution. `p` thermomajorizes `q` when its curve lies nowhere below the
//! curve of `q`.

use std::io::Write;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fmt::sig17;
use crate::linalg;
use crate::qstate::{gibbs_probabilities, DensityMatrix, HamiltonianSpec, InverseTemperature};

/// Slack allowed when comparing Lorenz curves.
pub const CURVE_TOL: f64 = 1e-12;
/// Slack used for interval membership in the qubit closed forms.
pub const INTERVAL_TOL: f64 = 1e-12;
/// Width at which the guaranteed-coherence bisection stops.
pub const BISECTION_TOL: f64 = 1e-10;

/// Energy-level populations of a state.
#[derive(Clone, Debug, PartialEq)]
pub struct EnergyDistribution {
    probs: Vec<f64>,
    hamiltonian: HamiltonianSpec,
}

impl EnergyDistribution {
    pub fn new(probs: Vec<f64>, hamiltonian: HamiltonianSpec) -> Result<Self> {
        if probs.len() != hamiltonian.dim() {
            return Err(Error::DimensionMismatch {
                expected: hamiltonian.dim(),
                actual: probs.len(),
            });
        }
        if let Some(x) = probs.iter().find(|x| !(x.is_finite() && **x >= -1e-12)) {
            return Err(Error::InvalidDistribution(format!("entry {x} is negative")));
        }
        let s: f64 = probs.iter().sum();
        if (s - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidDistribution(format!("entries sum to {s}")));
        }
        Ok(Self { probs, hamiltonian })
    }

    /// Populations `(p, 1−p)` of a qubit.
    pub fn qubit(p: f64, hamiltonian: HamiltonianSpec) -> Result<Self> {
        Self::new(vec![p, 1.0 - p], hamiltonian)
    }

    pub fn of_state(rho: &DensityMatrix, hamiltonian: &HamiltonianSpec) -> Result<Self> {
        Self::new(rho.populations(), hamiltonian.clone())
    }

    pub fn gibbs(hamiltonian: &HamiltonianSpec, beta: InverseTemperature) -> Self {
        Self {
            probs: gibbs_probabilities(hamiltonian, beta),
            hamiltonian: hamiltonian.clone(),
        }
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn hamiltonian(&self) -> &HamiltonianSpec {
        &self.hamiltonian
    }
}

/// Levels sorted by `p_i·e^{βω_i}` descending, ties by ascending energy.
pub fn beta_order(dist: &EnergyDistribution, beta: InverseTemperature) -> Vec<usize> {
    let r = gibbs_probabilities(&dist.hamiltonian, beta);
    // p_i/r_i is proportional to p_i·e^{βω_i} and cannot overflow.
    let keys: Vec<f64> = dist
        .probs
        .iter()
        .zip(&r)
        .map(|(&p, &ri)| match (ri > 0.0, p > 0.0) {
            (true, _) => p / ri,
            (false, true) => f64::INFINITY,
            (false, false) => 0.0,
        })
        .collect();
    let mut order: Vec<usize> = (0..keys.len()).collect();
    order.sort_by(|&a, &b| keys[b].total_cmp(&keys[a]).then(a.cmp(&b)));
    order
}

/// Piecewise-linear thermomajorization curve with strictly increasing `x`.
///
/// Levels of zero thermal weight (only at β = ∞) produce vertical steps; the
/// curve keeps the upper end of each step, so it may start at `(0, y₀ > 0)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LorenzCurve {
    points: Vec<(f64, f64)>,
}

impl LorenzCurve {
    pub fn new(dist: &EnergyDistribution, beta: InverseTemperature) -> Self {
        let r = gibbs_probabilities(&dist.hamiltonian, beta);
        let mut points = vec![(0.0, 0.0)];
        let (mut x, mut y) = (0.0, 0.0);
        for i in beta_order(dist, beta) {
            x += r[i];
            y += dist.probs[i];
            let last = points.last_mut().expect("non-empty");
            if r[i] == 0.0 {
                last.1 = y;
            } else {
                points.push((x, y));
            }
        }
        if let Some(last) = points.last_mut() {
            last.0 = 1.0;
        }
        Self { points }
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    /// Curve height at `x ∈ [0, 1]`.
    pub fn value_at(&self, x: f64) -> f64 {
        let pts = &self.points;
        if x <= pts[0].0 {
            return pts[0].1;
        }
        for w in pts.windows(2) {
            let ((x0, y0), (x1, y1)) = (w[0], w[1]);
            if x <= x1 {
                return y0 + (y1 - y0) * (x - x0) / (x1 - x0);
            }
        }
        pts[pts.len() - 1].1
    }

    /// CSV with header `x,y`, one breakpoint per row.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["x", "y"])?;
        for (x, y) in &self.points {
            w.write_record([sig17(*x), sig17(*y)])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// True when `p` thermomajorizes `q`, i.e. `q` is reachable from `p` by
/// thermal operations on incoherent states.
pub fn thermomajorizes(
    p: &EnergyDistribution,
    q: &EnergyDistribution,
    beta: InverseTemperature,
) -> Result<bool> {
    if p.hamiltonian != q.hamiltonian {
        return Err(Error::InvalidDistribution(
            "distributions refer to different Hamiltonians".into(),
        ));
    }
    let (lp, lq) = (LorenzCurve::new(p, beta), LorenzCurve::new(q, beta));
    let dominated = lp
        .points
        .iter()
        .chain(&lq.points)
        .all(|&(x, _)| lp.value_at(x) >= lq.value_at(x) - CURVE_TOL);
    Ok(dominated)
}

/// Upper bound `min(1, e^{β(ω_k−ω_l)})` on the Gibbs-preserving transition
/// probability `p_{l|k}`.
pub fn transition_bound(
    h: &HamiltonianSpec,
    beta: InverseTemperature,
    k: usize,
    l: usize,
) -> Result<f64> {
    let d = h.dim();
    if k >= d || l >= d {
        return Err(Error::OutOfRange(format!(
            "indices ({k}, {l}) out of range for d = {d}"
        )));
    }
    let uphill = h.energy(l) - h.energy(k);
    Ok(if uphill <= 0.0 {
        1.0
    } else {
        beta.boltzmann(uphill)
    })
}

fn check_open_unit(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v < 1.0 {
        Ok(())
    } else {
        Err(Error::OutOfRange(format!(
            "{name} must lie in (0,1), got {v}"
        )))
    }
}

/// Ground population `q̃` of the extremal incoherent qubit state reachable
/// from ground population `p`, with thermal ground occupation `r`.
///
/// The largest Gibbs-preserving transfer uses `p_{1|0} = min(1, (1−r)/r)`,
/// so `q̃ = 1 − p(1−r)/r` for `r ≥ 1/2` and `q̃ = r(1−p)/(1−r)` for `r < 1/2`.
pub fn extremal_incoherent_qubit(p: f64, r: f64) -> Result<f64> {
    check_open_unit("p", p)?;
    check_open_unit("r", r)?;
    if p == r {
        return Ok(p);
    }
    Ok(if r >= 0.5 {
        1.0 - (1.0 - r) / r * p
    } else {
        r / (1.0 - r) * (1.0 - p)
    })
}

/// Qubit ground populations reachable from `p`: the closed interval between
/// `p` and `q̃`.
pub fn reachable_interval(p: f64, r: f64) -> Result<(f64, f64)> {
    let qt = extremal_incoherent_qubit(p, r)?;
    Ok((p.min(qt), p.max(qt)))
}

/// Guaranteed fraction `λ* = (q − q̃)/(p − q̃)` of every mode that survives a
/// thermal transition `p → q` of a qubit.
pub fn guaranteed_lambda(p: f64, q: f64, r: f64) -> Result<f64> {
    check_open_unit("q", q)?;
    let qt = extremal_incoherent_qubit(p, r)?;
    let (lo, hi) = (p.min(qt), p.max(qt));
    if q < lo - INTERVAL_TOL || q > hi + INTERVAL_TOL {
        return Err(Error::NotThermomajorized(format!(
            "q = {q} lies outside the reachable interval [{lo}, {hi}]"
        )));
    }
    if (p - qt).abs() <= INTERVAL_TOL {
        return Ok(1.0);
    }
    // `+ 0.0` turns a signed zero into +0.
    Ok(((q - qt) / (p - qt)).clamp(0.0, 1.0) + 0.0)
}

/// Largest `λ` such that `q = λp + (1−λ)ξ` with `ξ` thermomajorized by `p`,
/// found by bisection along the line through `p` and `q`.
///
/// Works in any dimension; the feasible set on the line is an interval by
/// convexity of the thermally reachable set.
pub fn guaranteed_lambda_line_search(
    p: &EnergyDistribution,
    q: &EnergyDistribution,
    beta: InverseTemperature,
) -> Result<f64> {
    if !thermomajorizes(p, q, beta)? {
        return Err(Error::NotThermomajorized(
            "target distribution is not reachable".into(),
        ));
    }
    let diff = p
        .probs
        .iter()
        .zip(&q.probs)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    if diff <= INTERVAL_TOL {
        return Ok(1.0);
    }
    let feasible = |lambda: f64| -> bool {
        let xi: Vec<f64> = q
            .probs
            .iter()
            .zip(&p.probs)
            .map(|(qi, pi)| (qi - lambda * pi) / (1.0 - lambda))
            .collect();
        if xi.iter().any(|&x| x < -CURVE_TOL) {
            return false;
        }
        let xi: Vec<f64> = xi.into_iter().map(|x| x.max(0.0)).collect();
        match EnergyDistribution::new(xi, p.hamiltonian.clone()) {
            Ok(xi) => thermomajorizes(p, &xi, beta).unwrap_or(false),
            Err(_) => false,
        }
    };
    let (mut lo, mut hi) = (0.0, 1.0);
    while hi - lo > BISECTION_TOL {
        let mid = 0.5 * (lo + hi);
        if feasible(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

/// Qubit state `λ*ρ + (1−λ*)ξ^(0)` with diagonal `q_target`, where `ξ^(0)`
/// is the extremal incoherent state. Every mode of `ρ` is scaled by `λ*`.
pub fn guaranteed_sigma(
    rho: &DensityMatrix,
    h: &HamiltonianSpec,
    beta: InverseTemperature,
    q_target: &EnergyDistribution,
) -> Result<DensityMatrix> {
    if h.dim() != 2 || rho.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            actual: rho.dim().max(h.dim()),
        });
    }
    if q_target.hamiltonian() != h {
        return Err(Error::InvalidDistribution(
            "target refers to a different Hamiltonian".into(),
        ));
    }
    let r = gibbs_probabilities(h, beta)[0];
    let p = rho.populations()[0];
    let q = q_target.probs()[0];
    if r >= 1.0 {
        return Err(Error::OutOfRange(
            "closed form needs a finite temperature (r < 1)".into(),
        ));
    }
    let lambda = guaranteed_lambda(p, q, r)?;
    let qt = extremal_incoherent_qubit(p, r)?;
    let xi = DensityMatrix::new_unchecked(linalg::diag(&[qt, 1.0 - qt]));
    rho.mix(&xi, lambda)
}
