//! Kraus channels, channel-class verification, and explicit constructions
//! that saturate the coherence bounds.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::{self, c, CMatrix, ONE};
use crate::qstate::{
    gibbs_state, matrix_from_parts, matrix_to_parts, same_frequency, DensityMatrix,
    HamiltonianSpec, InverseTemperature,
};

/// Tolerance on `‖Σ W†W − I‖_F`.
pub const COMPLETENESS_TOL: f64 = 1e-10;
/// Tolerance used by the symmetry and Gibbs-preservation checks.
pub const CLASS_TOL: f64 = 1e-10;

/// A channel `ρ ↦ Σ_k W_k ρ W_k†` between two systems with known Hamiltonians.
#[derive(Clone, Debug)]
pub struct KrausChannel {
    kraus: Vec<CMatrix>,
    input: HamiltonianSpec,
    output: HamiltonianSpec,
    completeness_violation: f64,
}

impl KrausChannel {
    /// Builds a channel, rejecting operator lists that are not trace preserving.
    pub fn new(
        kraus: Vec<CMatrix>,
        input: HamiltonianSpec,
        output: HamiltonianSpec,
    ) -> Result<Self> {
        let ch = Self::new_unchecked(kraus, input, output)?;
        if ch.completeness_violation > COMPLETENESS_TOL {
            return Err(Error::InvalidChannel(format!(
                "completeness violated: ||sum W†W - I||_F = {:e}",
                ch.completeness_violation
            )));
        }
        Ok(ch)
    }

    /// Builds a channel checking only shapes. [`KrausChannel::apply`] still
    /// refuses to run an incomplete channel.
    pub fn new_unchecked(
        kraus: Vec<CMatrix>,
        input: HamiltonianSpec,
        output: HamiltonianSpec,
    ) -> Result<Self> {
        if kraus.is_empty() {
            return Err(Error::InvalidChannel("empty Kraus list".into()));
        }
        for (k, w) in kraus.iter().enumerate() {
            if w.nrows() != output.dim() || w.ncols() != input.dim() {
                return Err(Error::InvalidChannel(format!(
                    "Kraus operator {k} is {}x{}, expected {}x{}",
                    w.nrows(),
                    w.ncols(),
                    output.dim(),
                    input.dim()
                )));
            }
        }
        let d_in = input.dim();
        let sum = kraus
            .iter()
            .fold(linalg::zeros(d_in, d_in), |acc, w| acc + w.adjoint() * w);
        let completeness_violation = linalg::frobenius(&(sum - linalg::identity(d_in)));
        Ok(Self {
            kraus,
            input,
            output,
            completeness_violation,
        })
    }

    pub fn identity(h: &HamiltonianSpec) -> Self {
        Self::new(vec![linalg::identity(h.dim())], h.clone(), h.clone())
            .expect("identity is complete")
    }

    /// `ρ ↦ UρU†`.
    pub fn unitary(u: CMatrix, h: &HamiltonianSpec) -> Result<Self> {
        Self::new(vec![u], h.clone(), h.clone())
    }

    /// Full dephasing `{|n⟩⟨n|}`.
    pub fn dephasing(h: &HamiltonianSpec) -> Self {
        let d = h.dim();
        let kraus = (0..d).map(|n| linalg::ket_bra(d, d, n, n)).collect();
        Self::new(kraus, h.clone(), h.clone()).expect("projectors are complete")
    }

    /// Rebuilds a channel from its Choi matrix
    /// `J = Σ_{i,j} |i⟩⟨j| ⊗ E(|i⟩⟨j|)`, giving at most `d_in·d_out` operators.
    pub fn from_choi(
        choi: &CMatrix,
        input: HamiltonianSpec,
        output: HamiltonianSpec,
    ) -> Result<Self> {
        let (d_in, d_out) = (input.dim(), output.dim());
        if choi.nrows() != d_in * d_out || !choi.is_square() {
            return Err(Error::DimensionMismatch {
                expected: d_in * d_out,
                actual: choi.nrows(),
            });
        }
        let eig = linalg::hermitian_eigen(choi);
        let max = eig.iter().map(|(v, _)| v.abs()).fold(0.0, f64::max);
        let mut kraus = Vec::new();
        for (value, vec) in eig {
            if value < -1e-10 * max.max(1.0) {
                return Err(Error::InvalidChannel(format!(
                    "Choi matrix is not positive (eigenvalue {value:e})"
                )));
            }
            if value <= 1e-14 * max.max(1.0) {
                continue;
            }
            let s = value.sqrt();
            kraus.push(CMatrix::from_fn(d_out, d_in, |n, i| vec[i * d_out + n] * s));
        }
        Self::new(kraus, input, output)
    }

    pub fn choi(&self) -> CMatrix {
        let (d_in, d_out) = (self.input.dim(), self.output.dim());
        let mut j = linalg::zeros(d_in * d_out, d_in * d_out);
        for w in &self.kraus {
            let v: Vec<Complex64> = (0..d_in)
                .flat_map(|i| (0..d_out).map(move |n| (i, n)))
                .map(|(i, n)| w[(n, i)])
                .collect();
            for (a, va) in v.iter().enumerate() {
                for (b, vb) in v.iter().enumerate() {
                    j[(a, b)] += va * vb.conj();
                }
            }
        }
        j
    }

    /// Same channel with a minimal Kraus list.
    pub fn compressed(&self) -> Result<Self> {
        Self::from_choi(&self.choi(), self.input.clone(), self.output.clone())
    }

    pub fn kraus(&self) -> &[CMatrix] {
        &self.kraus
    }

    pub fn input(&self) -> &HamiltonianSpec {
        &self.input
    }

    pub fn output(&self) -> &HamiltonianSpec {
        &self.output
    }

    pub fn completeness_violation(&self) -> f64 {
        self.completeness_violation
    }

    pub fn is_square(&self) -> bool {
        self.input == self.output
    }

    fn ensure_complete(&self) -> Result<()> {
        if self.completeness_violation > COMPLETENESS_TOL {
            return Err(Error::InvalidChannel(format!(
                "completeness violated by {:e}",
                self.completeness_violation
            )));
        }
        Ok(())
    }

    /// Action on an arbitrary operator (not necessarily a state).
    pub fn apply_operator(&self, x: &CMatrix) -> Result<CMatrix> {
        self.ensure_complete()?;
        if x.nrows() != self.input.dim() || x.ncols() != self.input.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.input.dim(),
                actual: x.nrows(),
            });
        }
        Ok(self.raw_apply(x))
    }

    fn raw_apply(&self, x: &CMatrix) -> CMatrix {
        let d = self.output.dim();
        self.kraus
            .iter()
            .fold(linalg::zeros(d, d), |acc, w| acc + w * x * w.adjoint())
    }

    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        self.apply_operator(rho.matrix())
            .map(DensityMatrix::new_unchecked)
    }

    /// `next ∘ self`: apply `self` first.
    pub fn then(&self, next: &KrausChannel) -> Result<Self> {
        if self.output != next.input {
            return Err(Error::InvalidChannel(
                "composition requires matching intermediate Hamiltonians".into(),
            ));
        }
        let kraus: Vec<CMatrix> = next
            .kraus
            .iter()
            .flat_map(|b| self.kraus.iter().map(move |a| b * a))
            .collect();
        let composed = Self::new(kraus, self.input.clone(), next.output.clone())?;
        if composed.kraus.len() > self.input.dim() * next.output.dim() {
            composed.compressed()
        } else {
            Ok(composed)
        }
    }
}

/// Column-stochastic transition matrix, `p_{l|k}` at row `l`, column `k`.
#[derive(Clone, Debug, PartialEq)]
pub struct StochasticMatrix {
    p: DMatrix<f64>,
}

impl StochasticMatrix {
    pub const ENTRY_TOL: f64 = 1e-12;
    pub const COLUMN_TOL: f64 = 1e-10;

    pub fn new(p: DMatrix<f64>) -> Result<Self> {
        if !p.is_square() {
            return Err(Error::InvalidChannel(
                "stochastic matrix must be square".into(),
            ));
        }
        for (k, col) in p.column_iter().enumerate() {
            if col
                .iter()
                .any(|&x| !(-Self::ENTRY_TOL..=1.0 + Self::ENTRY_TOL).contains(&x))
            {
                return Err(Error::InvalidChannel(format!(
                    "column {k} has entries outside [0,1]"
                )));
            }
            let s: f64 = col.iter().sum();
            if (s - 1.0).abs() > Self::COLUMN_TOL {
                return Err(Error::InvalidChannel(format!("column {k} sums to {s}")));
            }
        }
        Ok(Self { p })
    }

    pub fn identity(d: usize) -> Self {
        Self {
            p: DMatrix::identity(d, d),
        }
    }

    pub fn dim(&self) -> usize {
        self.p.nrows()
    }

    /// `p_{to|from}`.
    pub fn get(&self, to: usize, from: usize) -> f64 {
        self.p[(to, from)]
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.p
    }

    pub fn apply(&self, probs: &[f64]) -> Vec<f64> {
        (0..self.dim())
            .map(|l| (0..self.dim()).map(|k| self.p[(l, k)] * probs[k]).sum())
            .collect()
    }
}

/// `p_{n|c} = Σ_k |⟨n|W_k|c⟩|²`.
pub fn induced_stochastic(ch: &KrausChannel) -> Result<StochasticMatrix> {
    ch.ensure_complete()?;
    if ch.input.dim() != ch.output.dim() {
        return Err(Error::DimensionMismatch {
            expected: ch.input.dim(),
            actual: ch.output.dim(),
        });
    }
    let d = ch.input.dim();
    let p = DMatrix::from_fn(d, d, |n, cc| {
        ch.kraus.iter().map(|w| w[(n, cc)].norm_sqr()).sum::<f64>()
    });
    StochasticMatrix::new(p)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Check {
    pub holds: bool,
    pub violation: f64,
}

/// Mode-support test: every `|c⟩⟨d|` must land inside the output mode of the
/// same frequency. Reports the largest leaked magnitude.
pub fn check_symmetric(ch: &KrausChannel) -> Check {
    let (d_in, d_out) = (ch.input.dim(), ch.output.dim());
    let mut violation: f64 = 0.0;
    for cc in 0..d_in {
        for d in 0..d_in {
            let omega = ch.input.frequency(cc, d);
            let out = ch.raw_apply(&linalg::ket_bra(d_in, d_in, cc, d));
            for n in 0..d_out {
                for m in 0..d_out {
                    if !same_frequency(ch.output.frequency(n, m), omega) {
                        violation = violation.max(out[(n, m)].norm());
                    }
                }
            }
        }
    }
    Check {
        holds: violation <= CLASS_TOL,
        violation,
    }
}

/// `E(γ) = γ` within [`CLASS_TOL`], elementwise.
pub fn check_gibbs_preserving(ch: &KrausChannel, beta: InverseTemperature) -> Result<Check> {
    if !ch.is_square() {
        return Err(Error::InvalidChannel(
            "Gibbs preservation needs equal input and output Hamiltonians".into(),
        ));
    }
    let gamma = gibbs_state(&ch.input, beta);
    let out = ch.raw_apply(gamma.matrix());
    let violation = linalg::max_abs_diff(&out, gamma.matrix());
    Ok(Check {
        holds: violation <= CLASS_TOL,
        violation,
    })
}

fn serialize_beta<S: Serializer>(
    beta: &InverseTemperature,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match beta {
        InverseTemperature::Finite(b) => s.serialize_f64(*b),
        InverseTemperature::Infinite => s.serialize_str("inf"),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GibbsCheck {
    #[serde(serialize_with = "serialize_beta")]
    pub beta: InverseTemperature,
    pub holds: bool,
    pub violation: f64,
}

/// Summary of the CPTP, symmetry and Gibbs-preservation checks.
#[derive(Clone, Debug, Serialize)]
pub struct ChannelClassReport {
    pub is_cptp: bool,
    pub completeness_violation: f64,
    pub is_symmetric: bool,
    pub symmetry_violation: f64,
    pub gibbs: Vec<GibbsCheck>,
}

impl ChannelClassReport {
    pub fn new(ch: &KrausChannel, betas: &[InverseTemperature]) -> Result<Self> {
        let sym = check_symmetric(ch);
        let gibbs = betas
            .iter()
            .map(|&beta| {
                check_gibbs_preserving(ch, beta).map(|c| GibbsCheck {
                    beta,
                    holds: c.holds,
                    violation: c.violation,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            is_cptp: ch.completeness_violation <= COMPLETENESS_TOL,
            completeness_violation: ch.completeness_violation,
            is_symmetric: sym.holds,
            symmetry_violation: sym.violation,
            gibbs,
        })
    }

    pub fn is_thermal_compatible(&self) -> bool {
        self.is_cptp && self.is_symmetric && self.gibbs.iter().all(|g| g.holds)
    }
}

/// `p·E₁ + (1−p)·E₂` as the Kraus list `{√p·W₁} ∪ {√(1−p)·W₂}`.
pub fn convex_combine(ch1: &KrausChannel, ch2: &KrausChannel, p: f64) -> Result<KrausChannel> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::OutOfRange(format!(
            "mixing weight must be in [0,1], got {p}"
        )));
    }
    if ch1.input != ch2.input || ch1.output != ch2.output {
        return Err(Error::InvalidChannel(
            "convex combination requires identical Hamiltonians".into(),
        ));
    }
    let (a, b) = (c(p.sqrt(), 0.0), c((1.0 - p).sqrt(), 0.0));
    let kraus = ch1
        .kraus
        .iter()
        .map(|w| w * a)
        .chain(ch2.kraus.iter().map(|w| w * b))
        .filter(|w| linalg::max_abs(w) > 0.0)
        .collect();
    KrausChannel::new(kraus, ch1.input.clone(), ch1.output.clone())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ShiftDirection {
    Up,
    Down,
}

impl std::str::FromStr for ShiftDirection {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "up" => Ok(Self::Up),
            "down" => Ok(Self::Down),
            other => Err(Error::Unknown(format!("direction {other:?}"))),
        }
    }
}

/// Energy-conserving permutation on qutrit ⊗ oscillator (levels `< n_bath`),
/// as a map from joint index `(s, e)` to its image.
///
/// Within each total-energy block `i ≥ 2` it cycles
/// `|2;i−2⟩ → |1;i−1⟩ → |0;i⟩ → |2;i−2⟩`; in the `i = 1` block it swaps
/// `|1;0⟩ ↔ |0;1⟩`. Blocks cut by the truncation are left as identity.
fn shift_permutation(n_bath: usize) -> Vec<(usize, usize)> {
    let idx = |s: usize, e: usize| s * n_bath + e;
    let mut image: Vec<usize> = (0..3 * n_bath).collect();
    image[idx(1, 0)] = idx(0, 1);
    image[idx(0, 1)] = idx(1, 0);
    for i in 2..n_bath {
        image[idx(2, i - 2)] = idx(1, i - 1);
        image[idx(1, i - 1)] = idx(0, i);
        image[idx(0, i)] = idx(2, i - 2);
    }
    image.into_iter().enumerate().collect()
}

/// Oscillator Gibbs weights truncated to `n` levels of spacing `omega`.
pub(crate) fn truncated_bath_weights(beta: InverseTemperature, omega: f64, n: usize) -> Vec<f64> {
    let w: Vec<f64> = (0..n).map(|k| beta.boltzmann(k as f64 * omega)).collect();
    let z: f64 = w.iter().sum();
    w.into_iter().map(|x| x / z).collect()
}

/// Thermal operation moving coherence within the `ω` mode of an equidistant
/// qutrit `(0, ω, 2ω)`, using an oscillator bath truncated to `n_bath` levels.
///
/// `Down` realizes `tr_E{U(ρ⊗γ)U†}` and sends `|2⟩⟨1| ↦ |1⟩⟨0|`; `Up` realizes
/// `tr_E{U†(ρ⊗γ)U}` and sends `|1⟩⟨0| ↦ e^{−βω}|2⟩⟨1|`. Both are exact up to
/// truncation error `O(e^{−βNω})`.
pub fn shift_channel(
    direction: ShiftDirection,
    beta: InverseTemperature,
    omega: f64,
    n_bath: usize,
) -> Result<KrausChannel> {
    if n_bath < 3 {
        return Err(Error::OutOfRange(format!(
            "bath needs at least 3 levels to hold the three-term blocks, got {n_bath}"
        )));
    }
    if !(omega > 0.0 && omega.is_finite()) {
        return Err(Error::OutOfRange(format!(
            "omega must be positive, got {omega}"
        )));
    }
    let h = HamiltonianSpec::equidistant(3, omega)?;
    let weights = truncated_bath_weights(beta, omega, n_bath);
    let mut pairs = shift_permutation(n_bath);
    if direction == ShiftDirection::Up {
        pairs = pairs.into_iter().map(|(src, dst)| (dst, src)).collect();
    }
    // W_ab = √γ_a ⟨b|U|a⟩ restricted to the system factor.
    let mut ops: std::collections::BTreeMap<(usize, usize), CMatrix> = Default::default();
    for (src, dst) in pairs {
        let (c_sys, a) = (src / n_bath, src % n_bath);
        let (n_sys, b) = (dst / n_bath, dst % n_bath);
        if weights[a] == 0.0 {
            continue;
        }
        ops.entry((a, b)).or_insert_with(|| linalg::zeros(3, 3))[(n_sys, c_sys)] +=
            c(weights[a].sqrt(), 0.0);
    }
    KrausChannel::new(ops.into_values().collect(), h.clone(), h)
}

/// Symmetric perfect shift `{|1⟩⟨0| + |2⟩⟨1|, |2⟩⟨2|}` on an equidistant qutrit.
pub fn symmetric_shift_up_channel(omega: f64) -> Result<KrausChannel> {
    let h = HamiltonianSpec::equidistant(3, omega)?;
    let m1 = linalg::ket_bra(3, 3, 1, 0) + linalg::ket_bra(3, 3, 2, 1);
    let m2 = linalg::ket_bra(3, 3, 2, 2);
    KrausChannel::new(vec![m1, m2], h.clone(), h)
}

/// Symmetric merging map on the qutrit `(0, 1, 2)`:
/// `M_j = (|0⟩(e^{2πij/3}⟨0| + x⟨1|) + |1⟩(e^{2πij/3}√(1−x²)⟨1| + ⟨2|))/√3`.
///
/// With `|ρ_10| = a`, `|ρ_21| = b` (real positive) the output has
/// `ρ'_10 = √(1−x²)·a + x·b`.
pub fn merge_channel(x: f64) -> Result<KrausChannel> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::OutOfRange(format!("x must be in [0,1], got {x}")));
    }
    let h = HamiltonianSpec::equidistant(3, 1.0)?;
    let s = (1.0 - x * x).sqrt();
    let norm = c(1.0 / 3f64.sqrt(), 0.0);
    let kraus = (0..3)
        .map(|j| {
            let phase = Complex64::from_polar(1.0, 2.0 * PI * j as f64 / 3.0);
            let mut m = linalg::zeros(3, 3);
            m[(0, 0)] = phase;
            m[(0, 1)] = c(x, 0.0);
            m[(1, 1)] = phase * s;
            m[(1, 2)] = ONE;
            m * norm
        })
        .collect();
    KrausChannel::new(kraus, h.clone(), h)
}

/// The merge parameter `x = b/√(a²+b²)` that saturates the merging bound.
pub fn optimal_merge_parameter(a: f64, b: f64) -> f64 {
    let n = a.hypot(b);
    if n == 0.0 {
        0.0
    } else {
        b / n
    }
}

/// Symmetric qubit channel taking populations `(p, 1−p)` to `(q, 1−q)` while
/// keeping the largest possible fraction `√α` of the coherence,
/// `α = min(q/p, (1−q)/(1−p))`.
pub fn qubit_extremal_symmetric_channel(p: f64, q: f64) -> Result<KrausChannel> {
    for (name, v) in [("p", p), ("q", q)] {
        if !(v > 0.0 && v < 1.0) {
            return Err(Error::OutOfRange(format!(
                "{name} must lie in (0,1), got {v}"
            )));
        }
    }
    let h = HamiltonianSpec::qubit(1.0)?;
    let alpha = (q / p).min((1.0 - q) / (1.0 - p)).min(1.0);
    let (keep, move_from, move_to) = if q >= p { (0, 1, 0) } else { (1, 0, 1) };
    let mut m1 = linalg::zeros(2, 2);
    m1[(keep, keep)] = ONE;
    m1[(move_from, move_from)] = c(alpha.sqrt(), 0.0);
    let mut m2 = linalg::zeros(2, 2);
    m2[(move_to, move_from)] = c((1.0 - alpha).sqrt(), 0.0);
    let kraus = if alpha < 1.0 { vec![m1, m2] } else { vec![m1] };
    KrausChannel::new(kraus, h.clone(), h)
}

/// Qubit amplitude damping with decay probability `gamma` (full decay at 1).
pub fn amplitude_damping(h: &HamiltonianSpec, gamma: f64) -> Result<KrausChannel> {
    if h.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            actual: h.dim(),
        });
    }
    if !(0.0..=1.0).contains(&gamma) {
        return Err(Error::OutOfRange(format!(
            "gamma must be in [0,1], got {gamma}"
        )));
    }
    let mut m1 = linalg::ket_bra(2, 2, 0, 0);
    m1[(1, 1)] = c((1.0 - gamma).sqrt(), 0.0);
    let m2 = linalg::ket_bra(2, 2, 0, 1) * c(gamma.sqrt(), 0.0);
    KrausChannel::new(vec![m1, m2], h.clone(), h.clone())
}

pub fn hadamard_channel(h: &HamiltonianSpec) -> Result<KrausChannel> {
    if h.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            actual: h.dim(),
        });
    }
    let s = c(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let u = CMatrix::from_row_slice(2, 2, &[s, s, s, -s]);
    KrausChannel::unitary(u, h)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct KrausEntry {
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

/// JSON form of a channel:
/// `{"energies_in": [..], "energies_out": [..], "kraus": [{"re": [[..]], "im": [[..]]}, ..]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ChannelFile {
    pub energies_in: Vec<f64>,
    pub energies_out: Vec<f64>,
    pub kraus: Vec<KrausEntry>,
}

impl ChannelFile {
    pub fn new(ch: &KrausChannel) -> Self {
        Self {
            energies_in: ch.input.energies().to_vec(),
            energies_out: ch.output.energies().to_vec(),
            kraus: ch
                .kraus
                .iter()
                .map(|w| {
                    let (re, im) = matrix_to_parts(w);
                    KrausEntry { re, im }
                })
                .collect(),
        }
    }

    pub fn parse(json: &str) -> Result<Self> {
        serde_json::from_str(json).map_err(|e| Error::Parse(e.to_string()))
    }

    fn parts(self) -> Result<(Vec<CMatrix>, HamiltonianSpec, HamiltonianSpec)> {
        let input = HamiltonianSpec::new(self.energies_in)?;
        let output = HamiltonianSpec::new(self.energies_out)?;
        let kraus = self
            .kraus
            .iter()
            .map(|k| matrix_from_parts(&k.re, &k.im))
            .collect::<Result<Vec<_>>>()?;
        if let Some(w) = kraus
            .iter()
            .find(|w| w.nrows() != output.dim() || w.ncols() != input.dim())
        {
            return Err(Error::Parse(format!(
                "Kraus operator is {}x{}, expected {}x{}",
                w.nrows(),
                w.ncols(),
                output.dim(),
                input.dim()
            )));
        }
        Ok((kraus, input, output))
    }

    /// Strict conversion; fails on non trace-preserving lists.
    pub fn into_channel(self) -> Result<KrausChannel> {
        let (k, i, o) = self.parts()?;
        KrausChannel::new(k, i, o)
    }

    /// Shape-checked conversion, for reporting on possibly invalid channels.
    pub fn into_unchecked(self) -> Result<KrausChannel> {
        let (k, i, o) = self.parts()?;
        KrausChannel::new_unchecked(k, i, o)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}
