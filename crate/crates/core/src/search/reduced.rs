//! Two-level model of the search on the basis `|T>` (uniform over targets)
//! and `|T_perp>` (uniform over the rest).
//!
//! The iteration operator here is `L = -D_L O`, with the leading `-1`. The
//! built circuits omit that sign, so after `k` circuit iterations the
//! simulator projection equals `(-1)^k` times the reduced trajectory.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{PhaseParams, SearchCircuit, SearchError};
use crate::circuit::Matrix2;
use crate::statevec::StateVector;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReducedState {
    pub a_target: Complex64,
    pub a_rest: Complex64,
}

impl ReducedState {
    /// The uniform superposition: `(sin beta, cos beta)`.
    pub fn initial(beta: f64) -> Self {
        Self {
            a_target: Complex64::new(beta.sin(), 0.0),
            a_rest: Complex64::new(beta.cos(), 0.0),
        }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.a_target.norm_sqr() + self.a_rest.norm_sqr()
    }

    pub fn apply(&self, m: &Matrix2) -> Self {
        Self {
            a_target: m[0][0] * self.a_target + m[0][1] * self.a_rest,
            a_rest: m[1][0] * self.a_target + m[1][1] * self.a_rest,
        }
    }

    pub fn scale(&self, f: Complex64) -> Self {
        Self {
            a_target: f * self.a_target,
            a_rest: f * self.a_rest,
        }
    }

    /// Largest component-wise deviation.
    pub fn distance(&self, other: &ReducedState) -> f64 {
        (self.a_target - other.a_target)
            .norm()
            .max((self.a_rest - other.a_rest).norm())
    }
}

/// `L = -D_L O` restricted to `(|T>, |T_perp>)`, with `e = e^{i phi}`:
///
/// ```text
/// [ -e(1 + (e-1)s^2)   -(e-1)sc        ]
/// [ -e(e-1)sc          -e + (e-1)s^2   ]
/// ```
pub fn iteration_matrix(phi: f64, beta: f64) -> Matrix2 {
    let e = Complex64::from_polar(1.0, phi);
    let (s, c) = beta.sin_cos();
    let one = Complex64::new(1.0, 0.0);
    let em1 = e - one;
    [
        [-e * (one + em1 * s * s), -em1 * s * c],
        [-e * em1 * s * c, -e + em1 * s * s],
    ]
}

pub fn reduced_step(state: ReducedState, params: &PhaseParams) -> ReducedState {
    state.apply(&iteration_matrix(params.phi, params.beta))
}

/// States after `0..=iterations` applications of `L` at angle `phi`.
pub fn reduced_trajectory(phi: f64, beta: f64, iterations: u32) -> Vec<ReducedState> {
    let m = iteration_matrix(phi, beta);
    let mut out = vec![ReducedState::initial(beta)];
    for _ in 0..iterations {
        let next = out.last().expect("non-empty").apply(&m);
        out.push(next);
    }
    out
}

/// Projects `state` onto `(|T>, |T_perp>)` for the marked indices `targets`.
/// Also returns the norm of the component outside that plane.
pub fn project(state: &StateVector, targets: &[usize]) -> (ReducedState, f64) {
    let amps = state.amplitudes();
    let dim = amps.len();
    let m = targets.len();
    let mut marked = vec![false; dim];
    for &t in targets {
        marked[t] = true;
    }
    let zero = Complex64::new(0.0, 0.0);
    let (mut sum_t, mut sum_r) = (zero, zero);
    for (i, a) in amps.iter().enumerate() {
        if marked[i] {
            sum_t += a;
        } else {
            sum_r += a;
        }
    }
    let a_target = if m > 0 {
        sum_t / (m as f64).sqrt()
    } else {
        zero
    };
    let a_rest = if dim > m {
        sum_r / ((dim - m) as f64).sqrt()
    } else {
        zero
    };
    // Distance of each amplitude from its class mean; zero exactly when the
    // state lies in the plane.
    let mean_t = if m > 0 { sum_t / m as f64 } else { zero };
    let mean_r = if dim > m {
        sum_r / (dim - m) as f64
    } else {
        zero
    };
    let leak = amps
        .iter()
        .enumerate()
        .map(|(i, a)| (a - if marked[i] { mean_t } else { mean_r }).norm_sqr())
        .sum::<f64>()
        .sqrt();
    (ReducedState { a_target, a_rest }, leak)
}

/// Runs `sc` and projects the state after the initial layer and after each
/// diffusion block. Entry `k` is the state after `k` iterations; the sign
/// convention is the circuit's (no `-1` per iteration).
pub fn projected_trajectory(sc: &SearchCircuit) -> Result<Vec<(ReducedState, f64)>, SearchError> {
    let targets: Vec<usize> = sc.spec.targets().iter().map(|t| t.index()).collect();
    let checkpoints: Vec<usize> = sc
        .circuit
        .blocks()
        .iter()
        .filter(|b| b.label == "init" || b.label.starts_with("diffusion:"))
        .map(|b| b.end)
        .collect();
    let mut out = Vec::with_capacity(checkpoints.len());
    StateVector::run_observed(&sc.circuit, |i, s| {
        if checkpoints.contains(&(i + 1)) {
            out.push(project(s, &targets));
        }
    })?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::search::{build_circuit, compute_params, measured_final_phase, SearchSpec, Variant};
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    #[test]
    fn all_target_case_keeps_norm() {
        let p = compute_params(2, 4, None).unwrap();
        assert!((p.beta - FRAC_PI_2).abs() < 1e-15);
        let s = reduced_step(ReducedState::initial(p.beta), &p);
        assert!(s.a_rest.norm() < 1e-12);
        assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn two_qubit_single_step_lands_on_target() {
        let p = compute_params(2, 2, None).unwrap();
        let s = reduced_step(ReducedState::initial(p.beta), &p);
        assert!((s.a_target.norm() - 1.0).abs() < 1e-12);
        assert!(s.a_rest.norm() < 1e-12);
        // -e(1 + (e-1)/2) - (e-1)/2 with e = i equals e^{-i pi/4} = e^{i 7pi/4}.
        assert!((s.a_target - Complex64::from_polar(1.0, -FRAC_PI_4)).norm() < 1e-12);
        assert!((s.a_target.arg().rem_euclid(2.0 * PI) - measured_final_phase(&p)).abs() < 1e-12);
    }

    #[test]
    fn matrix_is_unitary() {
        for (phi, beta) in [(0.3, 0.2), (2.1951, 0.25), (PI, 1.0), (5.0, FRAC_PI_2)] {
            let m = iteration_matrix(phi, beta);
            for r in 0..2 {
                for c in 0..2 {
                    let dot: Complex64 = (0..2).map(|k| m[k][r].conj() * m[k][c]).sum();
                    let id = if r == c { 1.0 } else { 0.0 };
                    assert!((dot - id).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn simulator_projection_tracks_model() {
        let spec = SearchSpec::parse(4, "0110,1011,0001", Variant::ModifiedCanonical).unwrap();
        let sc = build_circuit(&spec).unwrap();
        let model = reduced_trajectory(sc.angle, sc.params.beta, sc.iterations);
        let sim = projected_trajectory(&sc).unwrap();
        assert_eq!(sim.len(), model.len());
        for (k, ((got, leak), want)) in sim.iter().zip(&model).enumerate() {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            assert!(
                got.distance(&want.scale(Complex64::new(sign, 0.0))) < 1e-10,
                "k={k}"
            );
            assert!(*leak < 1e-10, "k={k}");
        }
        assert!((model.last().unwrap().a_target.norm() - 1.0).abs() < 1e-10);
    }
}
