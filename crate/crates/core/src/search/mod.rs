//! Phase-matched multi-target search: parameters, circuit builders and the
//! two-level reduced model.

mod build;
mod params;
mod reduced;

use thiserror::Error;

use crate::bits::BitstringError;
use crate::circuit::CircuitError;
use crate::statevec::SimError;

pub use build::{
    build_circuit, build_diffusion, build_oracle, DiffusionForm, SearchCircuit, SearchSpec, Variant,
};
pub use params::{
    analytic_final_phase, beta, compute_params, default_j, grover_iterations, grover_success,
    j_min, measured_final_phase, phase_angle, PhaseParams,
};
pub use reduced::{
    iteration_matrix, project, projected_trajectory, reduced_step, reduced_trajectory, ReducedState,
};

pub(crate) use params::floor_nonneg;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SearchError {
    #[error("qubit count {0} is out of range")]
    QubitCount(usize),
    #[error("at least one target is required")]
    NoTargets,
    #[error("{m} targets exceed the 2^{n} basis states")]
    TooManyTargets { m: u64, n: usize },
    #[error("J = {j} is below the minimum J = {j_min}")]
    SlackTooSmall { j: u32, j_min: u32 },
    #[error("target {target} is not a {n}-bit string")]
    TargetWidth { target: String, n: usize },
    #[error("duplicate target {0}")]
    DuplicateTarget(String),
    #[error("unknown variant `{0}` (expected grover, modified or optimized)")]
    UnknownVariant(String),
    #[error(transparent)]
    Bitstring(#[from] BitstringError),
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error(transparent)]
    Sim(#[from] SimError),
}
