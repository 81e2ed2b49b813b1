//! Brute-force verification: random channels of each class, saturation
//! checks for the explicit constructions, seeded counterexample sweeps, and
//! bath-truncation convergence studies.
//!
//! Random symmetric and thermal channels come from block-Haar unitaries on
//! system ⊗ environment: the joint space is split into total-energy
//! eigenspaces and an independent Haar unitary is drawn in each block, which
//! is exactly the set of unitaries commuting with `H_S + H_E`.

use std::collections::BTreeMap;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::{
    cptp_bound, merge_bound_symmetric, qubit_symmetric_bound, qubit_thermal_bound,
    qubit_thermal_stochastic, symmetric_bound, thermal_bound, BoundQuery,
};
use crate::channels::{
    check_gibbs_preserving, check_symmetric, induced_stochastic, merge_channel,
    optimal_merge_parameter, qubit_extremal_symmetric_channel, shift_channel, ChannelClassReport,
    KrausChannel, ShiftDirection,
};
use crate::error::{Error, Result};
use crate::linalg::{self, c, CMatrix};
use crate::qstate::{
    gibbs_probabilities, mode_decompose, mode_decompose_operator, mode_l1, same_frequency,
    DensityMatrix, HamiltonianSpec, InverseTemperature,
};
use crate::thermo::transition_bound;

/// Slack allowed before a sweep records a violation.
pub const SWEEP_SLACK: f64 = 1e-9;

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn complex_gaussian<R: Rng>(rng: &mut R) -> Complex64 {
    c(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Haar-distributed `k × k` unitary.
pub fn haar_unitary<R: Rng>(rng: &mut R, k: usize) -> CMatrix {
    let g = CMatrix::from_fn(k, k, |_, _| complex_gaussian(rng));
    let qr = g.qr();
    let (q, r) = (qr.q(), qr.r());
    let phases = CMatrix::from_diagonal(&nalgebra::DVector::from_fn(k, |i, _| {
        let d = r[(i, i)];
        if d.norm() > 0.0 {
            d / d.norm()
        } else {
            linalg::ONE
        }
    }));
    q * phases
}

/// Random unitary commuting with `diag(energies)`: Haar inside every
/// degenerate block (energies equal within the frequency tolerance).
pub fn block_haar_unitary<R: Rng>(rng: &mut R, energies: &[f64]) -> CMatrix {
    let n = energies.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| energies[a].total_cmp(&energies[b]));
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    for i in order {
        match blocks.last_mut() {
            Some(b) if same_frequency(energies[b[0]], energies[i]) => b.push(i),
            _ => blocks.push(vec![i]),
        }
    }
    let mut u = linalg::zeros(n, n);
    for block in blocks {
        let v = haar_unitary(rng, block.len());
        for (a, &i) in block.iter().enumerate() {
            for (b, &j) in block.iter().enumerate() {
                u[(i, j)] = v[(a, b)];
            }
        }
    }
    u
}

/// Full-rank random state (normalized Ginibre `GG†`).
pub fn random_state<R: Rng>(rng: &mut R, d: usize) -> DensityMatrix {
    let g = CMatrix::from_fn(d, d, |_, _| complex_gaussian(rng));
    let m = &g * g.adjoint();
    let tr = linalg::trace(&m).re;
    let mut m = m * c(1.0 / tr, 0.0);
    // Remove the rounding-level anti-Hermitian part.
    m = (&m + m.adjoint()) * c(0.5, 0.0);
    DensityMatrix::new(m).expect("Ginibre states are valid")
}

/// Random non-degenerate spectrum. With `ladder` the gaps are drawn from
/// `{0.5, 1, 1.5}`, which produces modes holding several entries; otherwise
/// gaps are uniform in `[0.3, 1.3)`.
pub fn random_hamiltonian<R: Rng>(rng: &mut R, d: usize, ladder: bool) -> HamiltonianSpec {
    let mut e = vec![0.0];
    for _ in 1..d {
        let gap = if ladder {
            [0.5, 1.0, 1.5][rng.random_range(0..3)]
        } else {
            rng.random_range(0.3..1.3)
        };
        e.push(e.last().unwrap() + gap);
    }
    HamiltonianSpec::new(e).expect("positive gaps")
}

fn random_probabilities<R: Rng>(rng: &mut R, n: usize) -> Vec<f64> {
    let w: Vec<f64> = (0..n).map(|_| rng.random_range(0.05..1.0)).collect();
    let s: f64 = w.iter().sum();
    w.into_iter().map(|x| x / s).collect()
}

/// `tr_E[U(ρ ⊗ τ)U†]` with `τ = Σ_a λ_a|a⟩⟨a|`, as Kraus operators
/// `W_ab = √λ_a ⟨b|U|a⟩` (zero operators dropped).
fn dilation_channel(h: &HamiltonianSpec, u: &CMatrix, env_probs: &[f64]) -> Result<KrausChannel> {
    let (d, e) = (h.dim(), env_probs.len());
    let mut kraus = Vec::new();
    for (a, &lam) in env_probs.iter().enumerate() {
        if lam <= 0.0 {
            continue;
        }
        let s = c(lam.sqrt(), 0.0);
        for b in 0..e {
            let w = CMatrix::from_fn(d, d, |n, cc| u[(n * e + b, cc * e + a)] * s);
            if linalg::max_abs(&w) > 0.0 {
                kraus.push(w);
            }
        }
    }
    KrausChannel::new(kraus, h.clone(), h.clone())
}

fn joint_energies(h: &HamiltonianSpec, env: &[f64]) -> Vec<f64> {
    h.energies()
        .iter()
        .flat_map(|es| env.iter().map(move |ee| es + ee))
        .collect()
}

/// Random time-translation symmetric channel: energy-preserving block-Haar
/// unitary on system ⊗ a random incoherent environment, environment traced
/// out. Environment levels copy system energies so that the total-energy
/// blocks are non-trivial. Deterministic per seed.
pub fn random_symmetric_channel(h: &HamiltonianSpec, seed: u64) -> KrausChannel {
    let mut rng = rng_from_seed(seed);
    rng.set_stream(1);
    let env_dim = rng.random_range(2..=3usize);
    let e0 = h.energy(0);
    let env: Vec<f64> = (0..env_dim)
        .map(|_| h.energy(rng.random_range(0..h.dim())) - e0)
        .collect();
    let probs = random_probabilities(&mut rng, env_dim);
    let u = block_haar_unitary(&mut rng, &joint_energies(h, &env));
    dilation_channel(h, &u, &probs).expect("unitary dilation is trace preserving")
}

/// Random thermal operation: block-Haar energy-preserving unitary on system ⊗
/// bath with the bath in its Gibbs state at `beta`. Bath levels are sums of
/// system gaps so that degenerate total-energy blocks exist.
pub fn random_thermal_channel(
    h: &HamiltonianSpec,
    beta: InverseTemperature,
    bath_dim: usize,
    seed: u64,
) -> Result<KrausChannel> {
    if bath_dim < 2 {
        return Err(Error::OutOfRange(format!(
            "bath_dim must be >= 2, got {bath_dim}"
        )));
    }
    let mut rng = rng_from_seed(seed);
    rng.set_stream(2);
    let gaps: Vec<f64> = (0..h.dim())
        .flat_map(|i| (i + 1..h.dim()).map(move |j| (i, j)))
        .map(|(i, j)| h.frequency(j, i))
        .collect();
    let mut bath = vec![0.0];
    while bath.len() < bath_dim {
        let mut e = gaps[rng.random_range(0..gaps.len())];
        if rng.random_bool(0.3) {
            e += gaps[rng.random_range(0..gaps.len())];
        }
        bath.push(e);
    }
    let bath_h_probs = {
        let w: Vec<f64> = bath.iter().map(|&e| beta.boltzmann(e)).collect();
        let z: f64 = w.iter().sum();
        w.into_iter().map(|x| x / z).collect::<Vec<_>>()
    };
    let u = block_haar_unitary(&mut rng, &joint_energies(h, &bath));
    dilation_channel(h, &u, &bath_h_probs)
}

/// A generated channel together with its class report and seed.
#[derive(Clone, Debug)]
pub struct ChannelSample {
    pub channel: KrausChannel,
    pub class_report: ChannelClassReport,
    pub seed: u64,
}

impl ChannelSample {
    pub fn symmetric(h: &HamiltonianSpec, seed: u64) -> Result<Self> {
        let channel = random_symmetric_channel(h, seed);
        let class_report = ChannelClassReport::new(&channel, &[])?;
        Ok(Self {
            channel,
            class_report,
            seed,
        })
    }

    pub fn thermal(
        h: &HamiltonianSpec,
        beta: InverseTemperature,
        bath_dim: usize,
        seed: u64,
    ) -> Result<Self> {
        let channel = random_thermal_channel(h, beta, bath_dim, seed)?;
        let class_report = ChannelClassReport::new(&channel, &[beta])?;
        Ok(Self {
            channel,
            class_report,
            seed,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundId {
    ShiftDown,
    ShiftUp,
    MergeSymmetric,
    QubitSymmetric,
    QubitThermal,
}

impl BoundId {
    pub const ALL: [BoundId; 5] = [
        BoundId::ShiftDown,
        BoundId::ShiftUp,
        BoundId::MergeSymmetric,
        BoundId::QubitSymmetric,
        BoundId::QubitThermal,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Self::ShiftDown => "shift_down",
            Self::ShiftUp => "shift_up",
            Self::MergeSymmetric => "merge_symmetric",
            Self::QubitSymmetric => "qubit_symmetric",
            Self::QubitThermal => "qubit_thermal",
        }
    }

    /// Parameters used when none are supplied.
    pub fn default_params(&self) -> Params {
        let v: &[(&str, f64)] = match self {
            Self::ShiftDown | Self::ShiftUp => &[("beta_omega", 0.5), ("n_bath", 30.0), ("c", 0.3)],
            Self::MergeSymmetric => &[("a", 0.3), ("b", 0.4)],
            Self::QubitSymmetric => &[("p", 0.5), ("q", 0.75), ("c", 0.4)],
            Self::QubitThermal => &[("p", 0.5), ("q", 0.6), ("r", 2.0 / 3.0), ("c", 0.4)],
        };
        v.iter().map(|(k, x)| (k.to_string(), *x)).collect()
    }
}

impl FromStr for BoundId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|b| b.name() == s)
            .ok_or_else(|| Error::Unknown(format!("bound id {s:?}")))
    }
}

pub type Params = BTreeMap<String, f64>;

/// `{bound_id, params, seed, achieved, bound, ratio, pass}`.
#[derive(Clone, Debug, Serialize)]
pub struct SaturationReport {
    pub bound_id: BoundId,
    pub params: Params,
    pub seed: u64,
    pub achieved: f64,
    pub bound: f64,
    pub ratio: f64,
    pub pass: bool,
}

fn param(params: &Params, key: &str) -> Result<f64> {
    params
        .get(key)
        .copied()
        .ok_or_else(|| Error::MissingInput(format!("parameter {key:?}")))
}

/// Maximal coherence multiplier `|t|` of a symmetric qubit channel with the
/// given diagonal action, found by bisection on positivity of the Choi
/// matrix; returns the channel realizing it.
pub fn qubit_kraus_completion(
    lambda: &crate::channels::StochasticMatrix,
) -> Result<(f64, KrausChannel)> {
    let h = HamiltonianSpec::qubit(1.0)?;
    let choi = |t: f64| {
        let mut j = linalg::zeros(4, 4);
        j[(0, 0)] = c(lambda.get(0, 0), 0.0);
        j[(1, 1)] = c(lambda.get(1, 0), 0.0);
        j[(2, 2)] = c(lambda.get(0, 1), 0.0);
        j[(3, 3)] = c(lambda.get(1, 1), 0.0);
        j[(0, 3)] = c(t, 0.0);
        j[(3, 0)] = c(t, 0.0);
        j
    };
    let positive = |t: f64| linalg::hermitian_eigenvalues(&choi(t))[0] >= -1e-15;
    let (mut lo, mut hi) = (0.0, 1.0);
    if positive(hi) {
        lo = hi;
    }
    while hi - lo > 1e-14 {
        let mid = 0.5 * (lo + hi);
        if positive(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let ch = KrausChannel::from_choi(&choi(lo), h.clone(), h)?;
    Ok((lo, ch))
}

fn shift_state(direction: ShiftDirection, coherence: f64) -> Result<(DensityMatrix, usize, usize)> {
    let (src, dst) = match direction {
        ShiftDirection::Down => ((2, 1), (1, 0)),
        ShiftDirection::Up => ((1, 0), (2, 1)),
    };
    let mut m = linalg::diag(&[1.0 / 3.0; 3]);
    m[src] = c(coherence, 0.0);
    m[(src.1, src.0)] = c(coherence, 0.0);
    Ok((DensityMatrix::new(m)?, dst.0, dst.1))
}

/// Builds the designated saturating channel, applies it, and compares the
/// achieved coherence with the bound. Passes iff `achieved/bound ≥ 1 − tol`.
pub fn verify_saturation(
    bound_id: BoundId,
    params: &Params,
    tolerance: f64,
) -> Result<SaturationReport> {
    let mut merged = bound_id.default_params();
    merged.extend(params.iter().map(|(k, v)| (k.clone(), *v)));
    let params = merged;
    let (achieved, bound) = match bound_id {
        BoundId::ShiftDown | BoundId::ShiftUp => {
            let dir = if bound_id == BoundId::ShiftDown {
                ShiftDirection::Down
            } else {
                ShiftDirection::Up
            };
            let beta = InverseTemperature::new(param(&params, "beta_omega")?)?;
            let n_bath = param(&params, "n_bath")? as usize;
            let coherence = param(&params, "c")?;
            let (rho, n, m) = shift_state(dir, coherence)?;
            let h = HamiltonianSpec::equidistant(3, 1.0)?;
            let out = shift_channel(dir, beta, 1.0, n_bath)?.apply(&rho)?;
            let q = BoundQuery::new(rho, h, n, m)?.with_beta(beta);
            (out.entry(n, m).norm(), thermal_bound(&q)?)
        }
        BoundId::MergeSymmetric => {
            let (a, b) = (param(&params, "a")?, param(&params, "b")?);
            let x =
                linalg::ket_bra(3, 3, 1, 0) * c(a, 0.0) + linalg::ket_bra(3, 3, 2, 1) * c(b, 0.0);
            let out = merge_channel(optimal_merge_parameter(a, b))?.apply_operator(&x)?;
            (out[(1, 0)].norm(), merge_bound_symmetric(a, b)?)
        }
        BoundId::QubitSymmetric => {
            let (p, q, coherence) = (
                param(&params, "p")?,
                param(&params, "q")?,
                param(&params, "c")?,
            );
            let rho = DensityMatrix::qubit(p, c(coherence, 0.0))?;
            let out = qubit_extremal_symmetric_channel(p, q)?.apply(&rho)?;
            (
                out.entry(0, 1).norm(),
                qubit_symmetric_bound(p, q, coherence)?,
            )
        }
        BoundId::QubitThermal => {
            let (p, q, r, coherence) = (
                param(&params, "p")?,
                param(&params, "q")?,
                param(&params, "r")?,
                param(&params, "c")?,
            );
            let lambda = qubit_thermal_stochastic(p, q, r)?;
            let (_, ch) = qubit_kraus_completion(&lambda)?;
            let beta = InverseTemperature::from_ground_occupation(r, 1.0)?;
            if !check_symmetric(&ch).holds || !check_gibbs_preserving(&ch, beta)?.holds {
                return Err(Error::Infeasible(
                    "Kraus completion is not a symmetric Gibbs-preserving channel".into(),
                ));
            }
            let rho = DensityMatrix::qubit(p, c(coherence, 0.0))?;
            let out = ch.apply(&rho)?;
            (
                out.entry(0, 1).norm(),
                qubit_thermal_bound(p, q, r, coherence)?,
            )
        }
    };
    let ratio = if bound > 0.0 {
        achieved / bound
    } else if achieved == 0.0 {
        1.0
    } else {
        f64::INFINITY
    };
    Ok(SaturationReport {
        bound_id,
        params,
        seed: 0,
        achieved,
        bound,
        ratio,
        pass: ratio >= 1.0 - tolerance,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ConvergenceRow {
    pub n_bath: usize,
    pub achieved: f64,
    pub target: f64,
    pub error: f64,
}

/// Coherence moved by the truncated-bath shift channel, per bath size.
/// `Down` tracks `|2⟩⟨1| ↦ |1⟩⟨0|` (target 1), `Up` tracks `|1⟩⟨0| ↦ |2⟩⟨1|`
/// (target `e^{−βω}`).
pub fn bath_convergence_study(
    direction: ShiftDirection,
    beta: InverseTemperature,
    omega: f64,
    n_list: &[usize],
) -> Result<Vec<ConvergenceRow>> {
    if n_list.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::OutOfRange(
            "bath sizes must be strictly increasing".into(),
        ));
    }
    let (src, dst, target) = match direction {
        ShiftDirection::Down => ((2, 1), (1, 0), 1.0),
        ShiftDirection::Up => ((1, 0), (2, 1), beta.boltzmann(omega)),
    };
    n_list
        .iter()
        .map(|&n| {
            let ch = shift_channel(direction, beta, omega, n)?;
            let out = ch.apply_operator(&linalg::ket_bra(3, 3, src.0, src.1))?;
            let achieved = out[dst].norm();
            Ok(ConvergenceRow {
                n_bath: n,
                achieved,
                target,
                error: (achieved - target).abs(),
            })
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct Violation {
    pub seed: u64,
    pub check: String,
    pub slack: f64,
}

/// Outcome of a seeded counterexample sweep.
#[derive(Clone, Debug, Serialize)]
pub struct SweepReport {
    pub suite: String,
    pub samples: usize,
    pub seed: u64,
    pub checks: u64,
    pub worst_slack: f64,
    pub violations: Vec<Violation>,
    pub pass: bool,
}

#[derive(Default)]
struct Tally {
    checks: u64,
    worst: f64,
    violations: Vec<Violation>,
}

impl Tally {
    fn new() -> Self {
        Self {
            worst: f64::INFINITY,
            ..Default::default()
        }
    }

    /// Records `slack = allowed − observed`; negative beyond tolerance fails.
    fn check(&mut self, seed: u64, name: &str, slack: f64) {
        self.checks += 1;
        self.worst = self.worst.min(slack);
        if slack < -SWEEP_SLACK || slack.is_nan() {
            self.violations.push(Violation {
                seed,
                check: name.to_string(),
                slack,
            });
        }
    }

    fn merge(mut self, other: Tally) -> Tally {
        self.checks += other.checks;
        self.worst = self.worst.min(other.worst);
        self.violations.extend(other.violations);
        self
    }
}

/// Runs `f` on a rayon pool with `threads` workers (0 = rayon default).
pub fn with_threads<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> T {
    match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(pool) => pool.install(f),
        Err(_) => f(),
    }
}

fn run_sweep(
    suite: &str,
    samples: usize,
    seed: u64,
    body: impl Fn(u64, &mut Tally) -> Result<()> + Sync,
) -> Result<SweepReport> {
    let tallies = (0..samples as u64)
        .into_par_iter()
        .map(|i| {
            let s = seed.wrapping_add(i);
            let mut t = Tally::new();
            body(s, &mut t).map(|_| t)
        })
        .collect::<Result<Vec<_>>>()?;
    let total = tallies.into_iter().fold(Tally::new(), Tally::merge);
    Ok(SweepReport {
        suite: suite.to_string(),
        samples,
        seed,
        checks: total.checks,
        worst_slack: total.worst,
        pass: total.violations.is_empty(),
        violations: total.violations,
    })
}

/// Random symmetric channels on random states: the per-mode 1-norm never
/// grows, every mode operator is contracted in trace norm, and modes are
/// transported independently.
pub fn symmetric_sweep(samples: usize, seed: u64) -> Result<SweepReport> {
    run_sweep("symmetric_monotone", samples, seed, |s, t| {
        let mut rng = rng_from_seed(s);
        let d = rng.random_range(2..=4usize);
        let ladder = rng.random_bool(0.7);
        let h = random_hamiltonian(&mut rng, d, ladder);
        let rho = random_state(&mut rng, d);
        let ch = random_symmetric_channel(&h, s);
        t.check(
            s,
            "symmetry",
            super_tol(check_symmetric(&ch).violation, 1e-10),
        );
        let out = ch.apply(&rho)?;
        let (md_in, md_out) = (mode_decompose(&rho, &h)?, mode_decompose(&out, &h)?);
        for w in h.mode_frequencies() {
            t.check(s, "mode_l1", mode_l1(&md_in, w) - mode_l1(&md_out, w));
            if let Some(x) = md_in.get(w) {
                let y = ch.apply_operator(x)?;
                t.check(
                    s,
                    "trace_norm",
                    linalg::trace_norm(x) - linalg::trace_norm(&y),
                );
                let out_mode = md_out
                    .get(w)
                    .cloned()
                    .unwrap_or_else(|| linalg::zeros(d, d));
                t.check(s, "covariance", 1e-10 - linalg::max_abs_diff(&y, &out_mode));
            }
        }
        Ok(())
    })
}

fn super_tol(violation: f64, tol: f64) -> f64 {
    tol - violation
}

/// Random thermal operations on random states: every final entry obeys the
/// CPTP, symmetric and thermal bounds evaluated with the channel's own
/// transition matrix, which itself fixes the Gibbs distribution and obeys
/// the transition-probability bound.
pub fn thermal_sweep(samples: usize, seed: u64) -> Result<SweepReport> {
    run_sweep("thermal_bounds", samples, seed, |s, t| {
        let mut rng = rng_from_seed(s);
        let d = rng.random_range(2..=4usize);
        let ladder = rng.random_bool(0.7);
        let h = random_hamiltonian(&mut rng, d, ladder);
        let beta = if rng.random_bool(0.1) {
            InverseTemperature::zero()
        } else {
            InverseTemperature::new(rng.random_range(0.05..3.0))?
        };
        let bath_dim = rng.random_range(2..=4usize);
        let rho = random_state(&mut rng, d);
        let ch = random_thermal_channel(&h, beta, bath_dim, s)?;
        t.check(
            s,
            "symmetry",
            super_tol(check_symmetric(&ch).violation, 1e-9),
        );
        t.check(
            s,
            "gibbs",
            super_tol(check_gibbs_preserving(&ch, beta)?.violation, 1e-9),
        );
        let lam = induced_stochastic(&ch)?;
        let r = gibbs_probabilities(&h, beta);
        for (l, fixed) in lam.apply(&r).iter().enumerate() {
            t.check(s, "gibbs_fixed_point", 1e-9 - (fixed - r[l]).abs());
        }
        for k in 0..d {
            for l in 0..d {
                t.check(
                    s,
                    "transition_bound",
                    transition_bound(&h, beta, k, l)? - lam.get(l, k),
                );
            }
        }
        let out = ch.apply(&rho)?;
        let base = BoundQuery::new(rho, h.clone(), 0, 0)?
            .with_stochastic(lam)?
            .with_beta(beta);
        for n in 0..d {
            for m in 0..d {
                let q = base.at(n, m)?;
                let actual = out.entry(n, m).norm();
                t.check(s, "thermal_bound", thermal_bound(&q)? - actual);
                t.check(s, "symmetric_bound", symmetric_bound(&q)? - actual);
                t.check(s, "cptp_bound", cptp_bound(&q)? - actual);
            }
        }
        Ok(())
    })
}

/// Random general (non-symmetric) channels: the CPTP bound and the trace-norm
/// contraction of mode operators still hold.
pub fn cptp_sweep(samples: usize, seed: u64) -> Result<SweepReport> {
    run_sweep("cptp_bounds", samples, seed, |s, t| {
        let mut rng = rng_from_seed(s);
        let d = rng.random_range(2..=4usize);
        let h = random_hamiltonian(&mut rng, d, true);
        let rho = random_state(&mut rng, d);
        let env = rng.random_range(2..=3usize);
        let u = haar_unitary(&mut rng, d * env);
        let probs = random_probabilities(&mut rng, env);
        let ch = dilation_channel(&h, &u, &probs)?;
        let out = ch.apply(&rho)?;
        let base = BoundQuery::new(rho.clone(), h.clone(), 0, 0)?
            .with_stochastic(induced_stochastic(&ch)?)?;
        for n in 0..d {
            for m in 0..d {
                t.check(
                    s,
                    "cptp_bound",
                    cptp_bound(&base.at(n, m)?)? - out.entry(n, m).norm(),
                );
            }
        }
        for (_, x) in mode_decompose_operator(rho.matrix(), &h)?.iter() {
            let y = ch.apply_operator(x)?;
            t.check(
                s,
                "trace_norm",
                linalg::trace_norm(x) - linalg::trace_norm(&y),
            );
        }
        Ok(())
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn haar_is_unitary() {
        let mut rng = rng_from_seed(7);
        let u = haar_unitary(&mut rng, 4);
        let err = linalg::max_abs_diff(&(u.adjoint() * &u), &linalg::identity(4));
        assert!(err < 1e-13);
    }

    #[test]
    fn block_unitary_commutes_with_energy() {
        let mut rng = rng_from_seed(3);
        let e = [0.0, 1.0, 1.0, 2.0, 1.0, 0.0];
        let u = block_haar_unitary(&mut rng, &e);
        let hd = linalg::diag(&e);
        assert!(linalg::max_abs(&(&u * &hd - &hd * &u)) < 1e-13);
    }

    #[test]
    fn random_symmetric_channel_is_symmetric_and_deterministic() {
        let h = HamiltonianSpec::new(vec![0.0, 1.0, 2.0, 3.5]).unwrap();
        let a = random_symmetric_channel(&h, 11);
        let b = random_symmetric_channel(&h, 11);
        assert_eq!(a.kraus(), b.kraus());
        assert!(check_symmetric(&a).violation < 1e-10);
        let sample = ChannelSample::symmetric(&h, 11).unwrap();
        assert!(sample.class_report.is_symmetric);
        // Non-trivial: some coherence actually moves or decays.
        let rho = random_state(&mut rng_from_seed(5), 4);
        assert!(linalg::max_abs_diff(a.apply(&rho).unwrap().matrix(), rho.matrix()) > 1e-3);
    }

    #[test]
    fn random_thermal_channel_classes() {
        let h = HamiltonianSpec::new(vec![0.0, 1.0, 2.0]).unwrap();
        for beta in [
            InverseTemperature::zero(),
            InverseTemperature::new(0.8).unwrap(),
        ] {
            let s = ChannelSample::thermal(&h, beta, 3, 4).unwrap();
            assert!(
                s.class_report.is_thermal_compatible(),
                "{:?}",
                s.class_report
            );
            let lam = induced_stochastic(&s.channel).unwrap();
            if beta == InverseTemperature::zero() {
                for l in 0..3 {
                    let row: f64 = (0..3).map(|k| lam.get(l, k)).sum();
                    assert!((row - 1.0).abs() < 1e-9);
                }
            }
        }
        assert!(random_thermal_channel(&h, InverseTemperature::zero(), 1, 0).is_err());
    }

    #[test]
    fn saturation_defaults_pass() {
        for id in BoundId::ALL {
            let rep = verify_saturation(id, &Params::new(), 1e-6).unwrap();
            assert!(rep.pass, "{rep:?}");
        }
        assert!("nope".parse::<BoundId>().is_err());
    }

    #[test]
    fn kraus_completion_matches_closed_form() {
        let lam = qubit_thermal_stochastic(0.5, 0.6, 2.0 / 3.0).unwrap();
        let (t, _) = qubit_kraus_completion(&lam).unwrap();
        assert!((t - (lam.get(0, 0) * lam.get(1, 1)).sqrt()).abs() < 1e-10);
    }

    #[test]
    fn convergence_rows() {
        let beta = InverseTemperature::new(0.5).unwrap();
        let rows = bath_convergence_study(ShiftDirection::Down, beta, 1.0, &[5, 6, 7]).unwrap();
        for w in rows.windows(2) {
            let ratio = w[1].error / w[0].error;
            assert!(ratio > 0.5 * (-0.5f64).exp() && ratio < 2.0 * (-0.5f64).exp());
        }
        assert!(bath_convergence_study(ShiftDirection::Down, beta, 1.0, &[5, 5]).is_err());
        let cold = bath_convergence_study(
            ShiftDirection::Down,
            InverseTemperature::Infinite,
            1.0,
            &[3],
        )
        .unwrap();
        assert_eq!(cold[0].error, 0.0);
    }

    #[test]
    fn small_sweeps_pass() {
        assert!(symmetric_sweep(20, 1).unwrap().pass);
        assert!(thermal_sweep(20, 1).unwrap().pass);
        assert!(cptp_sweep(20, 1).unwrap().pass);
    }
}
