//! States, Hamiltonians, Gibbs states and the mode algebra.
//!
//! A density matrix is always written in the energy eigenbasis of a
//! non-degenerate [`HamiltonianSpec`]. Entries `ρ_nm` with equal frequency
//! difference `ω_n − ω_m` form a *mode* `ρ^(ω)`; time translation acts on each
//! mode as a pure phase `e^{−iωt}`.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};

/// Absolute tolerance used when comparing frequencies.
pub const FREQ_TOL: f64 = 1e-9;
/// Hermiticity and trace tolerance for [`DensityMatrix`].
pub const STATE_TOL: f64 = 1e-12;
/// Smallest eigenvalue accepted for a density matrix.
pub const PSD_TOL: f64 = 1e-12;

pub fn same_frequency(a: f64, b: f64) -> bool {
    (a - b).abs() <= FREQ_TOL
}

/// Non-degenerate system Hamiltonian, given by its ordered energy levels
/// (units of a reference frequency, ħ = 1).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct HamiltonianSpec {
    energies: Vec<f64>,
}

impl HamiltonianSpec {
    pub fn new(energies: Vec<f64>) -> Result<Self> {
        if energies.len() < 2 {
            return Err(Error::InvalidHamiltonian(format!(
                "need at least two levels, got {}",
                energies.len()
            )));
        }
        if let Some(e) = energies.iter().find(|e| !e.is_finite()) {
            return Err(Error::InvalidHamiltonian(format!("non-finite energy {e}")));
        }
        for (i, w) in energies.windows(2).enumerate() {
            if w[1] - w[0] <= FREQ_TOL {
                return Err(Error::InvalidHamiltonian(format!(
                    "energies must be strictly increasing (levels {i} and {})",
                    i + 1
                )));
            }
        }
        Ok(Self { energies })
    }

    /// Equidistant ladder `0, ω, 2ω, …` with `d` levels.
    pub fn equidistant(d: usize, omega: f64) -> Result<Self> {
        Self::new((0..d).map(|n| n as f64 * omega).collect())
    }

    /// Qubit with levels `(0, gap)`.
    pub fn qubit(gap: f64) -> Result<Self> {
        Self::new(vec![0.0, gap])
    }

    pub fn dim(&self) -> usize {
        self.energies.len()
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    pub fn energy(&self, n: usize) -> f64 {
        self.energies[n]
    }

    /// Frequency `ω_n − ω_m` of the matrix entry `(n, m)`.
    pub fn frequency(&self, n: usize, m: usize) -> f64 {
        self.energies[n] - self.energies[m]
    }

    /// Distinct frequency differences, ascending. Values closer than
    /// [`FREQ_TOL`] are merged into one representative.
    pub fn mode_frequencies(&self) -> Vec<f64> {
        let mut all: Vec<f64> = (0..self.dim())
            .flat_map(|n| (0..self.dim()).map(move |m| (n, m)))
            .map(|(n, m)| self.frequency(n, m))
            .collect();
        all.sort_by(f64::total_cmp);
        let mut out: Vec<f64> = Vec::new();
        for w in all {
            match out.last() {
                Some(&last) if same_frequency(last, w) => {}
                _ => out.push(w),
            }
        }
        // Pin the zero mode to exactly 0.
        for w in out.iter_mut() {
            if same_frequency(*w, 0.0) {
                *w = 0.0;
            }
        }
        out
    }

    pub(crate) fn check_dim(&self, d: usize) -> Result<()> {
        if d != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: d,
            });
        }
        Ok(())
    }
}

impl TryFrom<Vec<f64>> for HamiltonianSpec {
    type Error = Error;
    fn try_from(v: Vec<f64>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<HamiltonianSpec> for Vec<f64> {
    fn from(h: HamiltonianSpec) -> Self {
        h.energies
    }
}

/// Inverse temperature `β ≥ 0`; the zero-temperature limit is a separate
/// variant so that Boltzmann factors stay exact there.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum InverseTemperature {
    Finite(f64),
    Infinite,
}

impl InverseTemperature {
    /// Accepts any `β ≥ 0`, including `f64::INFINITY`.
    pub fn new(beta: f64) -> Result<Self> {
        if beta.is_nan() || beta < 0.0 {
            return Err(Error::OutOfRange(format!("beta must be >= 0, got {beta}")));
        }
        if beta.is_infinite() {
            Ok(Self::Infinite)
        } else {
            Ok(Self::Finite(beta))
        }
    }

    pub fn zero() -> Self {
        Self::Finite(0.0)
    }

    /// Inverse temperature at which a qubit with energy gap `gap` has ground
    /// occupation `r`, i.e. `r = 1 / (1 + e^{−β·gap})`.
    pub fn from_ground_occupation(r: f64, gap: f64) -> Result<Self> {
        if !(0.5..=1.0).contains(&r) {
            return Err(Error::OutOfRange(format!(
                "ground occupation must lie in [1/2, 1] for beta >= 0, got {r}"
            )));
        }
        if gap <= 0.0 {
            return Err(Error::OutOfRange(format!(
                "gap must be positive, got {gap}"
            )));
        }
        if r == 1.0 {
            return Ok(Self::Infinite);
        }
        Self::new((r / (1.0 - r)).ln() / gap)
    }

    /// Ground occupation of a qubit with energy gap `gap` at this β.
    pub fn ground_occupation(&self, gap: f64) -> f64 {
        1.0 / (1.0 + self.boltzmann(gap))
    }

    pub fn value(&self) -> f64 {
        match self {
            Self::Finite(b) => *b,
            Self::Infinite => f64::INFINITY,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Self::Infinite)
    }

    /// Boltzmann factor `e^{−β·ΔE}`.
    pub fn boltzmann(&self, delta_e: f64) -> f64 {
        match self {
            Self::Finite(b) => (-b * delta_e).exp(),
            Self::Infinite if delta_e > 0.0 => 0.0,
            Self::Infinite if delta_e == 0.0 => 1.0,
            Self::Infinite => f64::INFINITY,
        }
    }
}

impl fmt::Display for InverseTemperature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Finite(b) => write!(f, "{b}"),
            Self::Infinite => write!(f, "inf"),
        }
    }
}

/// Thermal occupations `e^{−βω_n}/Z`.
pub fn gibbs_probabilities(h: &HamiltonianSpec, beta: InverseTemperature) -> Vec<f64> {
    let e0 = h.energy(0);
    let w: Vec<f64> = h
        .energies()
        .iter()
        .map(|e| beta.boltzmann(e - e0))
        .collect();
    let z: f64 = w.iter().sum();
    w.into_iter().map(|x| x / z).collect()
}

/// Unit-trace, Hermitian, positive semidefinite matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    m: CMatrix,
}

impl DensityMatrix {
    pub fn new(m: CMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::InvalidState(format!(
                "matrix is {}x{}, not square",
                m.nrows(),
                m.ncols()
            )));
        }
        if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidState("non-finite entry".into()));
        }
        let herm = linalg::hermiticity_violation(&m);
        if herm > STATE_TOL {
            return Err(Error::InvalidState(format!(
                "not Hermitian (max deviation {herm:e})"
            )));
        }
        let tr = linalg::trace(&m).re;
        if (tr - 1.0).abs() > STATE_TOL {
            return Err(Error::InvalidState(format!("trace is {tr}, expected 1")));
        }
        let min_ev = linalg::hermitian_eigenvalues(&m)[0];
        if min_ev < -PSD_TOL {
            return Err(Error::InvalidState(format!(
                "not positive semidefinite (min eigenvalue {min_ev:e})"
            )));
        }
        Ok(Self { m })
    }

    pub(crate) fn new_unchecked(m: CMatrix) -> Self {
        Self { m }
    }

    /// Build from row-major real and imaginary parts.
    pub fn from_parts(re: &[Vec<f64>], im: &[Vec<f64>]) -> Result<Self> {
        Self::new(matrix_from_parts(re, im)?)
    }

    /// Diagonal (incoherent) state with the given populations.
    pub fn diagonal(probs: &[f64]) -> Result<Self> {
        Self::new(linalg::diag(probs))
    }

    /// Qubit state `[[p, c], [c*, 1−p]]` with ground population `p`.
    pub fn qubit(p: f64, coherence: Complex64) -> Result<Self> {
        let mut m = linalg::diag(&[p, 1.0 - p]);
        m[(0, 1)] = coherence;
        m[(1, 0)] = coherence.conj();
        Self::new(m)
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.m
    }

    pub fn into_matrix(self) -> CMatrix {
        self.m
    }

    pub fn entry(&self, n: usize, m: usize) -> Complex64 {
        self.m[(n, m)]
    }

    pub fn populations(&self) -> Vec<f64> {
        self.m.diagonal().iter().map(|z| z.re).collect()
    }

    /// Convex mixture `λ·self + (1−λ)·other`.
    pub fn mix(&self, other: &DensityMatrix, lambda: f64) -> Result<DensityMatrix> {
        if !(0.0..=1.0).contains(&lambda) {
            return Err(Error::OutOfRange(format!("mixing weight {lambda}")));
        }
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: other.dim(),
            });
        }
        Ok(Self::new_unchecked(
            &self.m * linalg::c(lambda, 0.0) + &other.m * linalg::c(1.0 - lambda, 0.0),
        ))
    }
}

pub(crate) fn matrix_from_parts(re: &[Vec<f64>], im: &[Vec<f64>]) -> Result<CMatrix> {
    let d = re.len();
    if d == 0 {
        return Err(Error::Parse("empty matrix".into()));
    }
    if im.len() != d {
        return Err(Error::Parse(format!(
            "real part has {d} rows, imaginary part {}",
            im.len()
        )));
    }
    let cols = re[0].len();
    for (i, (r, s)) in re.iter().zip(im).enumerate() {
        if r.len() != cols || s.len() != cols {
            return Err(Error::Parse(format!("row {i} has inconsistent length")));
        }
    }
    Ok(CMatrix::from_fn(d, cols, |i, j| {
        linalg::c(re[i][j], im[i][j])
    }))
}

pub(crate) fn matrix_to_parts(m: &CMatrix) -> (Vec<Vec<f64>>, Vec<Vec<f64>>) {
    let re = (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)].re).collect())
        .collect();
    let im = (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)].im).collect())
        .collect();
    (re, im)
}

/// `γ = e^{−βH}/Z`; at β = ∞ the ground-state projector.
pub fn gibbs_state(h: &HamiltonianSpec, beta: InverseTemperature) -> DensityMatrix {
    DensityMatrix::new_unchecked(linalg::diag(&gibbs_probabilities(h, beta)))
}

/// Split of a matrix into its modes `ρ^(ω)`, keyed by ascending frequency.
///
/// The zero mode is always present; other modes appear only when they carry
/// at least one nonzero entry.
#[derive(Clone, Debug)]
pub struct ModeDecomposition {
    hamiltonian: HamiltonianSpec,
    modes: Vec<(f64, CMatrix)>,
}

impl ModeDecomposition {
    pub fn hamiltonian(&self) -> &HamiltonianSpec {
        &self.hamiltonian
    }

    pub fn frequencies(&self) -> Vec<f64> {
        self.modes.iter().map(|(w, _)| *w).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, &CMatrix)> {
        self.modes.iter().map(|(w, m)| (*w, m))
    }

    pub fn get(&self, omega: f64) -> Option<&CMatrix> {
        self.modes
            .iter()
            .find(|(w, _)| same_frequency(*w, omega))
            .map(|(_, m)| m)
    }

    /// Sum of all modes.
    pub fn reconstruct(&self) -> CMatrix {
        let d = self.hamiltonian.dim();
        self.modes
            .iter()
            .fold(linalg::zeros(d, d), |acc, (_, m)| acc + m)
    }
}

/// Decompose an arbitrary square operator into modes.
pub fn mode_decompose_operator(x: &CMatrix, h: &HamiltonianSpec) -> Result<ModeDecomposition> {
    if !x.is_square() {
        return Err(Error::DimensionMismatch {
            expected: x.nrows(),
            actual: x.ncols(),
        });
    }
    h.check_dim(x.nrows())?;
    let d = h.dim();
    let mut modes: Vec<(f64, CMatrix)> = Vec::new();
    for w in h.mode_frequencies() {
        let mut m = linalg::zeros(d, d);
        let mut occupied = false;
        for n in 0..d {
            for k in 0..d {
                if same_frequency(h.frequency(n, k), w) {
                    m[(n, k)] = x[(n, k)];
                    occupied |= x[(n, k)] != linalg::ZERO;
                }
            }
        }
        if occupied || w == 0.0 {
            modes.push((w, m));
        }
    }
    Ok(ModeDecomposition {
        hamiltonian: h.clone(),
        modes,
    })
}

pub fn mode_decompose(rho: &DensityMatrix, h: &HamiltonianSpec) -> Result<ModeDecomposition> {
    mode_decompose_operator(rho.matrix(), h)
}

/// `Σ_{ω_n−ω_m=ω} |ρ_nm|`; zero for frequencies absent from the decomposition.
pub fn mode_l1(md: &ModeDecomposition, omega: f64) -> f64 {
    md.get(omega)
        .map(|m| m.iter().map(|z| z.norm()).sum())
        .unwrap_or(0.0)
}

/// `e^{−iHt} X e^{iHt}` for any square operator.
pub fn time_translate_operator(x: &CMatrix, h: &HamiltonianSpec, t: f64) -> Result<CMatrix> {
    h.check_dim(x.nrows())?;
    h.check_dim(x.ncols())?;
    Ok(CMatrix::from_fn(x.nrows(), x.ncols(), |n, m| {
        x[(n, m)] * Complex64::from_polar(1.0, -h.frequency(n, m) * t)
    }))
}

pub fn time_translate(rho: &DensityMatrix, h: &HamiltonianSpec, t: f64) -> Result<DensityMatrix> {
    time_translate_operator(rho.matrix(), h, t).map(DensityMatrix::new_unchecked)
}

/// Full dephasing in the energy basis, `ρ ↦ ρ^(0)`.
pub fn dephase(rho: &DensityMatrix, h: &HamiltonianSpec) -> Result<DensityMatrix> {
    h.check_dim(rho.dim())?;
    Ok(DensityMatrix::new_unchecked(linalg::diag(
        &rho.populations(),
    )))
}

/// JSON form of a state: `{"energies": [..], "rho_re": [[..]], "rho_im": [[..]]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StateFile {
    pub energies: Vec<f64>,
    pub rho_re: Vec<Vec<f64>>,
    pub rho_im: Vec<Vec<f64>>,
}

impl StateFile {
    pub fn new(h: &HamiltonianSpec, rho: &DensityMatrix) -> Self {
        let (rho_re, rho_im) = matrix_to_parts(rho.matrix());
        Self {
            energies: h.energies().to_vec(),
            rho_re,
            rho_im,
        }
    }

    pub fn into_parts(self) -> Result<(HamiltonianSpec, DensityMatrix)> {
        let h = HamiltonianSpec::new(self.energies)?;
        let m = matrix_from_parts(&self.rho_re, &self.rho_im)?;
        if !m.is_square() {
            return Err(Error::Parse(format!(
                "state matrix is {}x{}, not square",
                m.nrows(),
                m.ncols()
            )));
        }
        if m.nrows() != h.dim() {
            return Err(Error::Parse(format!(
                "state is {0}x{0} but {1} energies were given",
                m.nrows(),
                h.dim()
            )));
        }
        Ok((h, DensityMatrix::new(m)?))
    }

    pub fn parse(json: &str) -> Result<(HamiltonianSpec, DensityMatrix)> {
        let file: StateFile =
            serde_json::from_str(json).map_err(|e| Error::Parse(e.to_string()))?;
        file.into_parts()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}
