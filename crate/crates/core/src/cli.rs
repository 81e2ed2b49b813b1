//! The `modeflow` command-line front end.
//!
//! Every subcommand is a thin layer over the library. Machine-readable
//! output (CSV, JSON, `key = value` lines) uses 17 significant digits;
//! human-readable tables use 6. Exit codes: 0 success, 1 domain error or
//! failed verification, 2 I/O or parse error.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::bounds::{
    cptp_bound, merge_bound_symmetric, merge_bound_thermal, qubit_symmetric_bound,
    qubit_thermal_bound, shift_bound_thermal, symmetric_bound, thermal_bound, BoundQuery,
};
use crate::channels::{induced_stochastic, ChannelClassReport, ChannelFile, ShiftDirection};
use crate::error::{Error, Result};
use crate::fmt::{sig17, sig6};
use crate::oracle::{self, BoundId, Params, SaturationReport, SweepReport};
use crate::qstate::{
    mode_decompose, mode_l1, DensityMatrix, HamiltonianSpec, InverseTemperature, StateFile,
};
use crate::regions::{self, RegionKind, DEFAULT_GRID};
use crate::thermo::{
    extremal_incoherent_qubit, guaranteed_lambda, guaranteed_sigma, thermomajorizes,
    EnergyDistribution, LorenzCurve,
};

/// Environment variable capping sweep parallelism (0 = automatic).
pub const THREADS_ENV: &str = "MODEFLOW_THREADS";

#[derive(Parser, Debug)]
#[command(
    name = "modeflow",
    version,
    about = "Coherence modes, channel classes, bounds and qubit regions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the mode decomposition of a state.
    Decompose {
        #[arg(long)]
        state: PathBuf,
    },
    /// Check a channel for complete positivity, symmetry and Gibbs preservation.
    CheckChannel {
        #[arg(long)]
        channel: PathBuf,
        #[command(flatten)]
        temp: MultiTemp,
        #[arg(long)]
        json: bool,
    },
    /// Evaluate a named coherence bound.
    Bound(BoundArgs),
    /// Decide thermomajorization of two distributions and print Lorenz curves.
    Thermomajorize {
        /// Comma-separated source distribution.
        #[arg(long, value_delimiter = ',', required = true)]
        p: Vec<f64>,
        /// Comma-separated target distribution.
        #[arg(long, value_delimiter = ',', required = true)]
        q: Vec<f64>,
        /// Comma-separated energies (defaults to 0, 1, 2, ...).
        #[arg(long, value_delimiter = ',')]
        energies: Option<Vec<f64>>,
        #[command(flatten)]
        temp: Temp,
    },
    /// Write qubit achievable-region boundaries as CSV files.
    Region {
        #[arg(long)]
        p: f64,
        #[arg(long)]
        c: f64,
        #[arg(long)]
        r: Option<f64>,
        #[arg(
            long,
            value_delimiter = ',',
            default_value = "symmetric,thermal,triangle,guaranteed"
        )]
        kinds: Vec<String>,
        #[arg(long, default_value_t = DEFAULT_GRID)]
        grid: usize,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// Guaranteed coherence fraction and the state realizing it (qubit).
    Guaranteed {
        /// Initial ground population.
        #[arg(long)]
        p: f64,
        /// Target ground population.
        #[arg(long)]
        q: f64,
        /// Initial coherence |ρ_01|.
        #[arg(long, default_value_t = 0.0)]
        c: f64,
        #[command(flatten)]
        temp: Temp,
        /// Write the guaranteed state as a state JSON file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run oracle suites and write JSON reports.
    Verify {
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
}

#[derive(Args, Debug, Clone, Copy)]
struct Temp {
    /// Inverse temperature (`inf` allowed), in units of the energy scale.
    #[arg(long, conflicts_with = "r", value_parser = parse_beta)]
    beta: Option<f64>,
    /// Thermal ground occupation of a unit-gap qubit, in [1/2, 1].
    #[arg(long)]
    r: Option<f64>,
}

impl Temp {
    fn resolve(&self) -> Result<Option<InverseTemperature>> {
        match (self.beta, self.r) {
            (Some(b), _) => InverseTemperature::new(b).map(Some),
            (None, Some(r)) => regions::beta_from_r(r).map(Some),
            (None, None) => Ok(None),
        }
    }

    fn require(&self) -> Result<InverseTemperature> {
        self.resolve()?
            .ok_or_else(|| Error::MissingInput("--beta or --r is required".into()))
    }
}

#[derive(Args, Debug, Clone)]
struct MultiTemp {
    /// Inverse temperatures at which to check Gibbs preservation.
    #[arg(long, conflicts_with = "r", value_delimiter = ',', value_parser = parse_beta)]
    beta: Vec<f64>,
    #[arg(long)]
    r: Option<f64>,
}

fn parse_beta(s: &str) -> std::result::Result<f64, String> {
    match s {
        "inf" | "infinity" => Ok(f64::INFINITY),
        _ => s.parse::<f64>().map_err(|e| e.to_string()),
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum BoundName {
    Cptp,
    Symmetric,
    Thermal,
    MergeSymmetric,
    MergeThermal,
    ShiftThermal,
    QubitSymmetric,
    QubitThermal,
}

#[derive(Args, Debug)]
struct BoundArgs {
    #[arg(long, value_enum)]
    name: BoundName,
    /// State JSON (cptp, symmetric, thermal).
    #[arg(long)]
    state: Option<PathBuf>,
    /// Channel JSON supplying the transition matrix (cptp, symmetric).
    #[arg(long)]
    channel: Option<PathBuf>,
    /// Target entry (n, m); all entries when omitted.
    #[arg(long, requires = "m")]
    n: Option<usize>,
    #[arg(long, requires = "n")]
    m: Option<usize>,
    #[command(flatten)]
    temp: Temp,
    #[arg(long)]
    a: Option<f64>,
    #[arg(long)]
    b: Option<f64>,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    q: Option<f64>,
    #[arg(long)]
    c: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    omega: f64,
    #[arg(long, default_value = "down")]
    direction: String,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Suite {
    All,
    Symmetric,
    Thermal,
    Cptp,
    Saturation,
    Convergence,
}

/// Parses `argv` (including the program name), runs the subcommand and
/// returns the process exit code. Output goes to `out`, diagnostics to
/// stderr.
pub fn run<I, T, W>(argv: I, out: &mut W) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
    W: Write,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            if code == 0 {
                let _ = write!(out, "{e}");
            } else {
                eprint!("{e}");
            }
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_input_error() {
                2
            } else {
                1
            }
        }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| {
        Error::Io(std::io::Error::new(
            e.kind(),
            format!("{}: {e}", path.display()),
        ))
    })
}

fn load_state(path: &Path) -> Result<(HamiltonianSpec, DensityMatrix)> {
    StateFile::parse(&read(path)?)
}

fn require<T>(v: Option<T>, flag: &str) -> Result<T> {
    v.ok_or_else(|| Error::MissingInput(format!("--{flag} is required")))
}

/// Returns `Ok(false)` when the command ran but reports a failure.
fn dispatch<W: Write>(cmd: Command, out: &mut W) -> Result<bool> {
    match cmd {
        Command::Decompose { state } => decompose(&state, out).map(|_| true),
        Command::CheckChannel {
            channel,
            temp,
            json,
        } => check_channel(&channel, &temp, json, out),
        Command::Bound(args) => bound(&args, out).map(|_| true),
        Command::Thermomajorize {
            p,
            q,
            energies,
            temp,
        } => thermomajorize(p, q, energies, &temp, out).map(|_| true),
        Command::Region {
            p,
            c,
            r,
            kinds,
            grid,
            out_dir,
        } => region(p, c, r, &kinds, grid, &out_dir, out).map(|_| true),
        Command::Guaranteed {
            p,
            q,
            c,
            temp,
            out: path,
        } => guaranteed(p, q, c, &temp, path.as_deref(), out).map(|_| true),
        Command::Verify {
            suite,
            samples,
            seed,
            out_dir,
        } => verify(suite, samples, seed, &out_dir, out),
    }
}

fn decompose<W: Write>(path: &Path, out: &mut W) -> Result<()> {
    let (h, rho) = load_state(path)?;
    let md = mode_decompose(&rho, &h)?;
    writeln!(out, "{:>12}  {:>12}  entries", "omega", "mode_l1")?;
    for (w, x) in md.iter() {
        let mut entries = Vec::new();
        for n in 0..h.dim() {
            for m in 0..h.dim() {
                let z = x[(n, m)];
                if z.norm() > 0.0 {
                    let sign = if z.im < 0.0 { "-" } else { "+" };
                    entries.push(format!(
                        "({n},{m})={}{sign}{}i",
                        sig6(z.re),
                        sig6(z.im.abs())
                    ));
                }
            }
        }
        writeln!(
            out,
            "{:>12}  {:>12}  {}",
            sig6(w),
            sig6(mode_l1(&md, w)),
            entries.join(" ")
        )?;
    }
    Ok(())
}

fn check_channel<W: Write>(path: &Path, temp: &MultiTemp, json: bool, out: &mut W) -> Result<bool> {
    let ch = ChannelFile::parse(&read(path)?)?.into_unchecked()?;
    let mut betas = temp
        .beta
        .iter()
        .map(|&b| InverseTemperature::new(b))
        .collect::<Result<Vec<_>>>()?;
    if let Some(r) = temp.r {
        betas.push(regions::beta_from_r(r)?);
    }
    let report = ChannelClassReport::new(&ch, &betas)?;
    if json {
        writeln!(out, "{}", serde_json::to_string_pretty(&report)?)?;
    } else {
        let flag = |b: bool| if b { "yes" } else { "no" };
        writeln!(
            out,
            "cptp       {:<3}  violation {}",
            flag(report.is_cptp),
            sig6(report.completeness_violation)
        )?;
        writeln!(
            out,
            "symmetric  {:<3}  violation {}",
            flag(report.is_symmetric),
            sig6(report.symmetry_violation)
        )?;
        for g in &report.gibbs {
            writeln!(
                out,
                "gibbs(beta={})  {:<3}  violation {}",
                g.beta,
                flag(g.holds),
                sig6(g.violation)
            )?;
        }
        writeln!(
            out,
            "thermal-compatible {}",
            flag(report.is_thermal_compatible())
        )?;
    }
    Ok(true)
}

fn bound<W: Write>(a: &BoundArgs, out: &mut W) -> Result<()> {
    let beta = a.temp.resolve()?;
    let value = match a.name {
        BoundName::Cptp | BoundName::Symmetric | BoundName::Thermal => {
            let (h, rho) = load_state(&require(a.state.clone(), "state")?)?;
            let mut query = BoundQuery::new(rho, h.clone(), 0, 0)?;
            if let Some(path) = &a.channel {
                let ch = ChannelFile::parse(&read(path)?)?.into_channel()?;
                query = query.with_stochastic(induced_stochastic(&ch)?)?;
            }
            if let Some(b) = beta {
                query = query.with_beta(b);
            }
            let eval = |q: &BoundQuery| match a.name {
                BoundName::Cptp => cptp_bound(q),
                BoundName::Symmetric => symmetric_bound(q),
                _ => thermal_bound(q),
            };
            let targets: Vec<(usize, usize)> = match (a.n, a.m) {
                (Some(n), Some(m)) => vec![(n, m)],
                _ => (0..h.dim())
                    .flat_map(|n| (0..h.dim()).map(move |m| (n, m)))
                    .collect(),
            };
            let mut w = csv::Writer::from_writer(&mut *out);
            w.write_record(["n", "m", "bound"])?;
            for (n, m) in targets {
                let v = eval(&query.at(n, m)?)?;
                w.write_record([n.to_string(), m.to_string(), sig17(v)])?;
            }
            w.flush()?;
            return Ok(());
        }
        BoundName::MergeSymmetric => merge_bound_symmetric(require(a.a, "a")?, require(a.b, "b")?)?,
        BoundName::MergeThermal => {
            let dir: ShiftDirection = a.direction.parse()?;
            merge_bound_thermal(
                require(a.a, "a")?,
                require(a.b, "b")?,
                require(beta, "beta")?,
                a.omega,
                dir,
            )?
        }
        BoundName::ShiftThermal => {
            let dir: ShiftDirection = a.direction.parse()?;
            shift_bound_thermal(require(a.c, "c")?, require(beta, "beta")?, a.omega, dir)
        }
        BoundName::QubitSymmetric => {
            qubit_symmetric_bound(require(a.p, "p")?, require(a.q, "q")?, require(a.c, "c")?)?
        }
        BoundName::QubitThermal => {
            let r = match (a.temp.r, beta) {
                (Some(r), _) => r,
                (None, Some(b)) => regions::r_from_beta(b),
                (None, None) => {
                    return Err(Error::MissingInput("--r or --beta is required".into()))
                }
            };
            qubit_thermal_bound(
                require(a.p, "p")?,
                require(a.q, "q")?,
                r,
                require(a.c, "c")?,
            )?
        }
    };
    writeln!(out, "bound = {}", sig17(value))?;
    Ok(())
}

fn thermomajorize<W: Write>(
    p: Vec<f64>,
    q: Vec<f64>,
    energies: Option<Vec<f64>>,
    temp: &Temp,
    out: &mut W,
) -> Result<()> {
    let beta = temp.require()?;
    let h = match energies {
        Some(e) => HamiltonianSpec::new(e)?,
        None => HamiltonianSpec::equidistant(p.len(), 1.0)?,
    };
    let pd = EnergyDistribution::new(p, h.clone())?;
    let qd = EnergyDistribution::new(q, h)?;
    let yes = thermomajorizes(&pd, &qd, beta)?;
    writeln!(out, "{}", if yes { "yes" } else { "no" })?;
    let mut w = csv::Writer::from_writer(&mut *out);
    w.write_record(["curve", "x", "y"])?;
    for (name, d) in [("p", &pd), ("q", &qd)] {
        for &(x, y) in LorenzCurve::new(d, beta).points() {
            w.write_record([name.to_string(), sig17(x), sig17(y)])?;
        }
    }
    w.flush()?;
    Ok(())
}

fn region<W: Write>(
    p: f64,
    c: f64,
    r: Option<f64>,
    kinds: &[String],
    grid: usize,
    out_dir: &Path,
    out: &mut W,
) -> Result<()> {
    let kinds = kinds
        .iter()
        .map(|k| k.parse::<RegionKind>())
        .collect::<Result<Vec<_>>>()?;
    let boundaries = kinds
        .iter()
        .map(|&k| regions::region(k, p, c, r, grid))
        .collect::<Result<Vec<_>>>()?;
    fs::create_dir_all(out_dir)?;
    for b in boundaries {
        let path = out_dir.join(format!("{}.csv", b.kind));
        b.write_csv(fs::File::create(&path)?)?;
        writeln!(out, "{}\t{} points", path.display(), b.samples.len())?;
    }
    Ok(())
}

fn guaranteed<W: Write>(
    p: f64,
    q: f64,
    c: f64,
    temp: &Temp,
    path: Option<&Path>,
    out: &mut W,
) -> Result<()> {
    let beta = temp.require()?;
    let r = regions::r_from_beta(beta);
    let h = HamiltonianSpec::qubit(1.0)?;
    let rho = DensityMatrix::qubit(p, crate::linalg::c(c, 0.0))?;
    let lambda = guaranteed_lambda(p, q, r)?;
    let sigma = guaranteed_sigma(&rho, &h, beta, &EnergyDistribution::qubit(q, h.clone())?)?;
    writeln!(out, "q_tilde = {}", sig17(extremal_incoherent_qubit(p, r)?))?;
    writeln!(out, "lambda = {}", sig17(lambda))?;
    for n in 0..2 {
        for m in 0..2 {
            let z = sigma.entry(n, m);
            writeln!(out, "sigma[{n}][{m}] = {} {}", sig17(z.re), sig17(z.im))?;
        }
    }
    if let Some(path) = path {
        fs::write(path, StateFile::new(&h, &sigma).to_json()?)?;
    }
    Ok(())
}

#[derive(Serialize)]
struct ConvergenceReport {
    direction: ShiftDirection,
    beta_omega: f64,
    rows: Vec<oracle::ConvergenceRow>,
    pass: bool,
}

fn threads() -> usize {
    std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(0)
}

fn write_json<T: Serialize>(dir: &Path, name: &str, value: &T) -> Result<PathBuf> {
    let path = dir.join(name);
    fs::write(&path, serde_json::to_string_pretty(value)? + "\n")?;
    Ok(path)
}

fn verify<W: Write>(
    suite: Suite,
    samples: usize,
    seed: u64,
    out_dir: &Path,
    out: &mut W,
) -> Result<bool> {
    fs::create_dir_all(out_dir)?;
    let want = |s: Suite| suite == Suite::All || suite == s;
    let mut all_pass = true;

    type Sweep = fn(usize, u64) -> Result<SweepReport>;
    let sweeps: [(Suite, Sweep); 3] = [
        (Suite::Symmetric, oracle::symmetric_sweep),
        (Suite::Thermal, oracle::thermal_sweep),
        (Suite::Cptp, oracle::cptp_sweep),
    ];
    for (s, f) in sweeps {
        if !want(s) {
            continue;
        }
        let report = oracle::with_threads(threads(), || f(samples, seed))?;
        all_pass &= report.pass;
        let path = write_json(out_dir, &format!("{}.json", report.suite), &report)?;
        writeln!(
            out,
            "{:<20} {}  checks {}  worst slack {}  -> {}",
            report.suite,
            if report.pass { "PASS" } else { "FAIL" },
            report.checks,
            sig6(report.worst_slack),
            path.display()
        )?;
    }

    if want(Suite::Saturation) {
        let reports = BoundId::ALL
            .iter()
            .map(|&id| {
                oracle::verify_saturation(id, &Params::new(), 1e-6).map(|mut r| {
                    r.seed = seed;
                    r
                })
            })
            .collect::<Result<Vec<SaturationReport>>>()?;
        let pass = reports.iter().all(|r| r.pass);
        all_pass &= pass;
        let path = write_json(out_dir, "saturation.json", &reports)?;
        for r in &reports {
            writeln!(
                out,
                "{:<20} {}  ratio {}",
                r.bound_id.name(),
                if r.pass { "PASS" } else { "FAIL" },
                sig6(r.ratio)
            )?;
        }
        writeln!(out, "saturation -> {}", path.display())?;
    }

    if want(Suite::Convergence) {
        let beta = InverseTemperature::new(0.5)?;
        let n_list = [5, 10, 20, 40];
        let mut reports = Vec::new();
        for dir in [ShiftDirection::Down, ShiftDirection::Up] {
            let rows = oracle::bath_convergence_study(dir, beta, 1.0, &n_list)?;
            let pass = rows.windows(2).all(|w| w[1].error <= w[0].error)
                && rows.last().is_some_and(|r| r.error < 1e-6);
            all_pass &= pass;
            writeln!(
                out,
                "convergence {:<8} {}  error at N={}: {}",
                format!("{dir:?}").to_lowercase(),
                if pass { "PASS" } else { "FAIL" },
                n_list[n_list.len() - 1],
                sig6(rows.last().map_or(f64::NAN, |r| r.error))
            )?;
            reports.push(ConvergenceReport {
                direction: dir,
                beta_omega: 0.5,
                rows,
                pass,
            });
        }
        write_json(out_dir, "convergence.json", &reports)?;
    }
    Ok(all_pass)
}
