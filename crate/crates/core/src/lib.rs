//! Variational work extraction from spin-chain quantum batteries.
//!
//! A battery is an open chain of `n` spin-1/2 sites with nearest-neighbour
//! anisotropic Heisenberg couplings and a uniform longitudinal field. Work is
//! extracted by a single-layer hardware-efficient circuit (one `R_y` per qubit
//! followed by a fixed CNOT pattern) whose angles are tuned by gradient ascent
//! on the extracted work. The ergotropy of the input state is the unconstrained
//! upper bound and the ratio between the two is the extraction efficiency.
//!
//! Conventions used throughout the crate:
//!
//! * qubits are indexed from 0 and qubit `m` is bit `m` of a basis index;
//! * bit 0 is spin down (`σ_z = +1`), bit 1 is spin up (`σ_z = −1`);
//! * `R_y(θ) = exp(−iθσ_y)` (no factor 1/2), so every cost is π-periodic;
//! * a CNOT flips its target when the control is spin down.

pub mod ansatz;
pub mod ergotropy;
mod error;
pub mod experiment;
pub mod hamiltonian;
pub mod linalg;
pub mod optimizer;
pub mod statevec;

pub use ansatz::{Ansatz, Connectivity};
pub use ergotropy::{efficiency, DensityMatrix, WorkCost, WorkReport};
pub use error::{Error, Result};
pub use experiment::{LandscapeGrid, SweepAxis, SweepRecord, SweepTemplate, TrialEnsemble};
pub use hamiltonian::{HamiltonianMatrix, Preset, SpinModel, Spectrum};
pub use optimizer::{GradientMethod, OptimizeResult, OptimizerConfig};
pub use statevec::{Spin, Statevector};

/// Coupling used by every experiment unless overridden.
pub const DEFAULT_COUPLING: f64 = -1.0;
/// Longitudinal field used by every experiment unless overridden.
pub const DEFAULT_FIELD: f64 = 0.5;
