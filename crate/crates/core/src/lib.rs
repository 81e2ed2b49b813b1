//! Coherence processing under time-translation symmetry and thermal
//! operations.
//!
//! A state `ρ` on a system with Hamiltonian `H = Σ E_n |n⟩⟨n|` splits into
//! *modes of coherence* `ρ^(ω)`, collecting the entries `ρ_nm` with
//! `E_n − E_m = ω`. Channels that commute with the time evolution map every
//! mode into itself, and thermal operations additionally fix the Gibbs
//! state. This crate provides:
//!
//! - [`qstate`]: Hamiltonians, temperatures, density matrices and the mode
//!   decomposition;
//! - [`channels`]: Kraus channels, class checks (symmetry, Gibbs
//!   preservation), induced stochastic matrices and the explicit shifting and
//!   merging constructions;
//! - [`thermo`]: thermomajorization, Lorenz curves, transition-probability
//!   bounds and the guaranteed-coherence fraction;
//! - [`bounds`]: upper bounds on a final coherence `|ρ'_nm|`;
//! - [`regions`]: exact qubit achievable regions in the Bloch x–z plane;
//! - [`oracle`]: random symmetric/thermal channels, saturation checks and
//!   counterexample sweeps;
//! - [`cli`]: the `modeflow` command-line front end.
//!
//! ```
//! use modeflow::qstate::{mode_decompose, mode_l1, DensityMatrix, HamiltonianSpec};
//! use num_complex::Complex64;
//!
//! let h = HamiltonianSpec::qubit(1.0).unwrap();
//! let rho = DensityMatrix::qubit(0.7, Complex64::new(0.2, 0.0)).unwrap();
//! let modes = mode_decompose(&rho, &h).unwrap();
//! assert!((mode_l1(&modes, 1.0) - 0.2).abs() < 1e-15);
//! ```

pub mod bounds;
pub mod channels;
pub mod cli;
pub mod error;
pub mod fmt;
pub mod linalg;
pub mod oracle;
pub mod qstate;
pub mod regions;
pub mod thermo;

pub use error::{Error, Result};
pub use qstate::{DensityMatrix, HamiltonianSpec, InverseTemperature};
