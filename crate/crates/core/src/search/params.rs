//! Phase-matching parameters and closed-form success/phase formulas.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, TAU};

use serde::{Deserialize, Serialize};

use super::SearchError;

// Floors of expressions that are mathematically integers (e.g. the J_min
// quotient at M = N/4) land a few ulps low in floating point.
const FLOOR_SLACK: f64 = 1e-9;

pub(crate) fn floor_nonneg(x: f64) -> u32 {
    (x + FLOOR_SLACK).floor().max(0.0) as u32
}

fn check_counts(n: usize, m: u64) -> Result<(), SearchError> {
    if n == 0 || n > crate::bits::MAX_WIDTH {
        return Err(SearchError::QubitCount(n));
    }
    if m == 0 {
        return Err(SearchError::NoTargets);
    }
    if m > 1u64 << n {
        return Err(SearchError::TooManyTargets { m, n });
    }
    Ok(())
}

/// Overlap angle between the uniform superposition and the target subspace:
/// `sin(beta) = sqrt(M / N)`.
pub fn beta(n: usize, m: u64) -> f64 {
    (m as f64 / (1u64 << n) as f64).sqrt().asin()
}

/// Smallest admissible slack `J_min = floor((pi/2 - beta) / (2 beta))`.
pub fn j_min(beta: f64) -> u32 {
    floor_nonneg((FRAC_PI_2 - beta) / (2.0 * beta))
}

/// The experimental default `floor((pi/4) sqrt(N/M) - 1/2)`.
pub fn default_j(n: usize, m: u64) -> u32 {
    floor_nonneg(FRAC_PI_4 * ((1u64 << n) as f64 / m as f64).sqrt() - 0.5)
}

/// Matched oracle/diffusion rotation `phi = 2 asin(sin(pi/(4J+6)) / sin(beta))`.
pub fn phase_angle(j: u32, beta: f64) -> f64 {
    let ratio = (PI / (4.0 * j as f64 + 6.0)).sin() / beta.sin();
    // ratio == 1 exactly at the boundary (e.g. M = N/4, J = 0) can round above 1.
    2.0 * ratio.min(1.0).asin()
}

/// Phase-matching bundle for an `n`-qubit, `m`-target instance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseParams {
    pub n: usize,
    pub m: u64,
    pub beta: f64,
    /// Slack actually used.
    pub j: u32,
    /// Lower bound on the slack.
    pub j_min: u32,
    /// `floor((pi/4) sqrt(N/M) - 1/2)` before clamping to `j_min`.
    pub j_default: u32,
    pub phi: f64,
    /// `j + 1`.
    pub iterations: u32,
}

pub fn compute_params(
    n: usize,
    m: u64,
    j_override: Option<u32>,
) -> Result<PhaseParams, SearchError> {
    check_counts(n, m)?;
    let beta = beta(n, m);
    let j_min = j_min(beta);
    let j_default = default_j(n, m);
    let j = match j_override {
        Some(j) if j < j_min => return Err(SearchError::SlackTooSmall { j, j_min }),
        Some(j) => j,
        None => j_default.max(j_min),
    };
    Ok(PhaseParams {
        n,
        m,
        beta,
        j,
        j_min,
        j_default,
        phi: phase_angle(j, beta),
        iterations: j + 1,
    })
}

/// Standard iteration count `floor((pi/4) sqrt(N/M))`.
pub fn grover_iterations(n: usize, m: u64) -> Result<u32, SearchError> {
    check_counts(n, m)?;
    Ok(floor_nonneg(
        FRAC_PI_4 * ((1u64 << n) as f64 / m as f64).sqrt(),
    ))
}

/// `sin^2((2k+1) theta)` with `sin(theta) = sqrt(M/N)`.
pub fn grover_success(n: usize, m: u64, k: u32) -> Result<f64, SearchError> {
    check_counts(n, m)?;
    Ok(((2.0 * k as f64 + 1.0) * beta(n, m)).sin().powi(2))
}

/// Published closed form for the final target-state phase,
/// `(pi - phi)/2 + J(pi + phi)` reduced to `[0, 2pi)`.
pub fn analytic_final_phase(params: &PhaseParams) -> f64 {
    ((PI - params.phi) / 2.0 + params.j as f64 * (PI + params.phi)).rem_euclid(TAU)
}

/// Phase of the target amplitude after `J+1` applications of the iteration
/// operator including its leading `-1`: `(phi - pi)/2 + J(pi + phi)` in `[0, 2pi)`.
///
/// Differs from [`analytic_final_phase`] by `pi - phi`; this is the form the
/// reduced model and the simulator both produce.
pub fn measured_final_phase(params: &PhaseParams) -> f64 {
    ((params.phi - PI) / 2.0 + params.j as f64 * (PI + params.phi)).rem_euclid(TAU)
}
