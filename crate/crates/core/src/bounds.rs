//! Upper bounds on the magnitude of a final coherence `|ρ'_nm|`.
//!
//! Three nested families: any CPTP map (full double sum weighted by the
//! induced transition probabilities), time-translation symmetric maps (sum
//! restricted to the mode of `(n, m)`), and thermal operations (channel
//! independent; contributions from lower energies are damped by the
//! Boltzmann factor). Closed forms for the qutrit shift/merge primitives and
//! for qubits are provided alongside.

use nalgebra::DMatrix;

use crate::channels::{ShiftDirection, StochasticMatrix};
use crate::error::{Error, Result};
use crate::qstate::{same_frequency, DensityMatrix, HamiltonianSpec, InverseTemperature};

/// Inputs for the matrix-valued bounds; the target entry is `(n, m)`.
#[derive(Clone, Debug)]
pub struct BoundQuery {
    pub rho: DensityMatrix,
    pub hamiltonian: HamiltonianSpec,
    pub stochastic: Option<StochasticMatrix>,
    pub beta: Option<InverseTemperature>,
    pub n: usize,
    pub m: usize,
}

impl BoundQuery {
    pub fn new(
        rho: DensityMatrix,
        hamiltonian: HamiltonianSpec,
        n: usize,
        m: usize,
    ) -> Result<Self> {
        if rho.dim() != hamiltonian.dim() {
            return Err(Error::DimensionMismatch {
                expected: hamiltonian.dim(),
                actual: rho.dim(),
            });
        }
        if n >= rho.dim() || m >= rho.dim() {
            return Err(Error::OutOfRange(format!(
                "target ({n}, {m}) out of range for d = {}",
                rho.dim()
            )));
        }
        Ok(Self {
            rho,
            hamiltonian,
            stochastic: None,
            beta: None,
            n,
            m,
        })
    }

    pub fn with_stochastic(mut self, lambda: StochasticMatrix) -> Result<Self> {
        if lambda.dim() != self.rho.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.rho.dim(),
                actual: lambda.dim(),
            });
        }
        self.stochastic = Some(lambda);
        Ok(self)
    }

    pub fn with_beta(mut self, beta: InverseTemperature) -> Self {
        self.beta = Some(beta);
        self
    }

    /// Retargets the query at another entry.
    pub fn at(&self, n: usize, m: usize) -> Result<Self> {
        let d = self.rho.dim();
        if n >= d || m >= d {
            return Err(Error::OutOfRange(format!(
                "target ({n}, {m}) out of range for d = {d}"
            )));
        }
        Ok(Self {
            n,
            m,
            ..self.clone()
        })
    }

    fn stochastic(&self) -> Result<&StochasticMatrix> {
        self.stochastic
            .as_ref()
            .ok_or_else(|| Error::MissingInput("bound needs a stochastic matrix".into()))
    }

    fn in_mode(&self, c: usize, d: usize) -> bool {
        same_frequency(
            self.hamiltonian.frequency(c, d),
            self.hamiltonian.frequency(self.n, self.m),
        )
    }

    fn weighted_sum(&self, restrict: bool) -> Result<f64> {
        let lam = self.stochastic()?;
        let dim = self.rho.dim();
        let mut total = 0.0;
        for c in 0..dim {
            for d in 0..dim {
                if restrict && !self.in_mode(c, d) {
                    continue;
                }
                let weight = (lam.get(self.n, c) * lam.get(self.m, d)).max(0.0).sqrt();
                total += self.rho.entry(c, d).norm() * weight;
            }
        }
        Ok(total)
    }
}

/// `Σ_{c,d} |ρ_cd| √(p_{n|c} p_{m|d})`, valid for every CPTP map.
pub fn cptp_bound(q: &BoundQuery) -> Result<f64> {
    q.weighted_sum(false)
}

/// Same sum restricted to `ω_c − ω_d = ω_n − ω_m`; valid for symmetric maps.
pub fn symmetric_bound(q: &BoundQuery) -> Result<f64> {
    q.weighted_sum(true)
}

/// Channel-independent bound for thermal operations:
/// `Σ'_{ω_c ≤ ω_n} |ρ_cd| e^{−β(ω_n−ω_c)} + Σ'_{ω_c > ω_n} |ρ_cd|`,
/// with both sums restricted to the mode of `(n, m)`.
pub fn thermal_bound(q: &BoundQuery) -> Result<f64> {
    let beta = q
        .beta
        .ok_or_else(|| Error::MissingInput("thermal bound needs beta".into()))?;
    let h = &q.hamiltonian;
    let dim = q.rho.dim();
    let mut total = 0.0;
    for c in 0..dim {
        for d in 0..dim {
            if !q.in_mode(c, d) {
                continue;
            }
            let lift = h.energy(q.n) - h.energy(c);
            let damping = if lift >= 0.0 {
                beta.boltzmann(lift)
            } else {
                1.0
            };
            total += q.rho.entry(c, d).norm() * damping;
        }
    }
    Ok(total)
}

/// Symmetric merging of `|ρ_10| = a` and `|ρ_21| = b` into `ρ'_10`: `√(a²+b²)`.
pub fn merge_bound_symmetric(a: f64, b: f64) -> Result<f64> {
    check_nonneg(a, b)?;
    Ok(a.hypot(b))
}

/// Thermal merging bound: `√(a²+b²)` into the lower term (`Down`) and
/// `√(e^{−βω₀}a² + b²)` into the upper term (`Up`).
pub fn merge_bound_thermal(
    a: f64,
    b: f64,
    beta: InverseTemperature,
    omega0: f64,
    direction: ShiftDirection,
) -> Result<f64> {
    check_nonneg(a, b)?;
    Ok(match direction {
        ShiftDirection::Down => a.hypot(b),
        ShiftDirection::Up => (beta.boltzmann(omega0) * a * a + b * b).sqrt(),
    })
}

/// Thermal shifting of a single coherence `c` within the `ω` mode of an
/// equidistant qutrit: `c` downwards, `c·e^{−βω}` upwards.
pub fn shift_bound_thermal(
    c: f64,
    beta: InverseTemperature,
    omega: f64,
    direction: ShiftDirection,
) -> f64 {
    match direction {
        ShiftDirection::Down => c,
        ShiftDirection::Up => c * beta.boltzmann(omega),
    }
}

fn check_nonneg(a: f64, b: f64) -> Result<()> {
    if a < 0.0 || b < 0.0 || a.is_nan() || b.is_nan() {
        return Err(Error::OutOfRange(format!(
            "coherence magnitudes must be non-negative, got a = {a}, b = {b}"
        )));
    }
    Ok(())
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

/// `c·√α` with `α = min(q/p, (1−q)/(1−p))`: the most coherence a symmetric
/// map can keep while taking ground population `p` to `q`.
pub fn qubit_symmetric_bound(p: f64, q: f64, c: f64) -> Result<f64> {
    check_open_unit("p", p)?;
    check_open_unit("q", q)?;
    Ok(c * (q / p).min((1.0 - q) / (1.0 - p)).sqrt())
}

/// The unique Gibbs-preserving qubit transition matrix taking `p` to `q`
/// at thermal occupation `r`. Errors when an entry leaves `[0, 1]`, which
/// happens exactly when `q` is not thermally reachable.
pub fn qubit_thermal_stochastic(p: f64, q: f64, r: f64) -> Result<StochasticMatrix> {
    check_open_unit("p", p)?;
    check_open_unit("q", q)?;
    check_open_unit("r", r)?;
    if p == r {
        return Err(Error::Infeasible(
            "p = r: the thermal qubit transition matrix is not determined".into(),
        ));
    }
    let p00 = (q * (1.0 - r) - r * (1.0 - p)) / (p - r);
    let p11 = (r * (1.0 - q) - p * (1.0 - r)) / (r - p);
    const TOL: f64 = 1e-12;
    for (name, v) in [("p_{0|0}", p00), ("p_{1|1}", p11)] {
        if !(-TOL..=1.0 + TOL).contains(&v) {
            return Err(Error::Infeasible(format!(
                "{name} = {v} lies outside [0,1] for (p, q, r) = ({p}, {q}, {r})"
            )));
        }
    }
    let (p00, p11) = (p00.clamp(0.0, 1.0), p11.clamp(0.0, 1.0));
    StochasticMatrix::new(DMatrix::from_row_slice(
        2,
        2,
        &[p00, 1.0 - p11, 1.0 - p00, p11],
    ))
}

/// `c·√((q(1−r)−r(1−p))·(p(1−r)−r(1−q)))/|p−r|`, the thermal-operation
/// limit on qubit coherence for the transition `p → q`.
pub fn qubit_thermal_bound(p: f64, q: f64, r: f64, c: f64) -> Result<f64> {
    qubit_thermal_stochastic(p, q, r)?;
    let radicand = (q * (1.0 - r) - r * (1.0 - p)) * (p * (1.0 - r) - r * (1.0 - q));
    Ok(c * radicand.max(0.0).sqrt() / (p - r).abs())
}
