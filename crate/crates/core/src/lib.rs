//! Exact multi-target quantum search: circuit IR, dense simulation, lowering
//! passes and resource metrics.

pub mod bits;
pub mod circuit;
pub mod lower;
pub mod metrics;
pub mod presets;
pub mod search;
pub mod statevec;

pub use bits::{Bitstring, BitstringError};
pub use circuit::{Block, Circuit, CircuitError, DepthPolicy, Gate, GateCounts, GateKind, GateTag};
pub use lower::{lower_full, merge_hx_to_ry, Census, LowerError, PassReport};
pub use metrics::{compare, evaluate, CompareRow, DepthBasis, EvalOptions, MetricsError, Report};
pub use presets::{Preset, PRESETS};
pub use search::{
    build_circuit, compute_params, PhaseParams, SearchCircuit, SearchError, SearchSpec, Variant,
};
pub use statevec::{ShotHistogram, SimError, StateVector};

/// Crate version, embedded in emitted artifacts.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
