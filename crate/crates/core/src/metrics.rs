//! Closed-form depth and count formulas, per-run reports and the
//! three-variant comparison table.

use std::collections::BTreeSet;
use std::f64::consts::{FRAC_PI_4, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::circuit::{CircuitError, GateCounts};
use crate::lower::{lower_full, Census, DepthSummary, EquivalenceCheck, LowerError};
use crate::presets::{variant_index, Preset};
use crate::search::{
    analytic_final_phase, build_circuit, floor_nonneg, grover_success, measured_final_phase,
    project, reduced_trajectory, PhaseParams, SearchError, SearchSpec, Variant,
};
use crate::statevec::{ShotHistogram, SimError, StateVector};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MetricsError {
    #[error(transparent)]
    Search(#[from] SearchError),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    Lower(#[from] LowerError),
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error("inconsistent comparison set: {0}")]
    Inconsistent(String),
}

/// `floor((pi/4) sqrt(2^n / M) - offset)`.
fn floor_term(n: usize, m: u64, offset: f64) -> usize {
    floor_nonneg(FRAC_PI_4 * ((1u64 << n) as f64 / m as f64).sqrt() - offset) as usize
}

/// Closed-form circuit depth. With `K = floor((pi/4) sqrt(2^n/M))` and
/// `J = floor((pi/4) sqrt(2^n/M) - 1/2)`:
///
/// ```text
/// grover:    1 + (3M+5) K
/// modified:  (3M+6) + (3M+5) J
/// optimized: (3M+4) + (3M+3) J
/// ```
pub fn depth_formula(variant: Variant, n: usize, m: u64) -> Result<usize, SearchError> {
    crate::search::compute_params(n, m, None)?;
    let m3 = 3 * m as usize;
    Ok(match variant {
        Variant::GroverOriginal => 1 + (m3 + 5) * floor_term(n, m, 0.0),
        Variant::ModifiedCanonical => (m3 + 6) + (m3 + 5) * floor_term(n, m, 0.5),
        Variant::OptimizedMerged => (m3 + 4) + (m3 + 3) * floor_term(n, m, 0.5),
    })
}

/// `n + iterations * (sum_i (2 z_i + 1) + D)` with `z_i` the zero bits of
/// target `i` and `D = 4n+1` (canonical) or `2n+1` (merged).
pub fn count_formula(spec: &SearchSpec) -> Result<usize, SearchError> {
    let (_, iterations) = spec.schedule()?;
    let n = spec.n();
    let oracles: usize = spec.targets().iter().map(|t| 2 * t.count_zeros() + 1).sum();
    let diffusion = match spec.variant() {
        Variant::OptimizedMerged => 2 * n + 1,
        _ => 4 * n + 1,
    };
    Ok(n + iterations as usize * (oracles + diffusion))
}

/// Percentage reduction of `value` relative to `base`, rounded half-up to one
/// decimal using integer arithmetic. Zero when `base` is zero.
pub fn reduction_pct(base: usize, value: usize) -> f64 {
    if base == 0 {
        return 0.0;
    }
    let (b, d) = (base as i64, base as i64 - value as i64);
    // tenths of a percent: floor(1000 d / b + 1/2)
    let tenths = (2000 * d + b).div_euclid(2 * b);
    tenths as f64 / 10.0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DepthMetrics {
    pub blocked: usize,
    pub asap: usize,
    pub formula: usize,
    pub formula_matches: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SuccessMetrics {
    /// Closed form for Grover; the two-level model for the exact variants.
    pub analytic: f64,
    /// Amplitude-level probability from the state vector.
    pub simulated: f64,
    /// Fraction of shots that hit a target.
    pub sampled: f64,
}

/// Final phase of the target component, all in `[0, 2pi)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseCheck {
    /// `arg` of the simulator's `|T>` amplitude, with the `(-1)^iterations`
    /// the circuit omits restored.
    pub simulated: f64,
    /// `(phi - pi)/2 + J(pi + phi)`.
    pub closed_form: f64,
    /// `(pi - phi)/2 + J(pi + phi)`.
    pub printed_form: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LoweredMetrics {
    pub gates: GateCounts,
    pub census: Census,
    pub depth: DepthSummary,
    pub equivalence: EquivalenceCheck,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub spec: SearchSpec,
    pub params: PhaseParams,
    /// Rotation angle emitted in the circuit (`pi` for Grover).
    pub angle: f64,
    pub iterations: u32,
    pub shots: u64,
    pub seed: u64,
    pub gates: GateCounts,
    pub gates_formula: usize,
    pub depth: DepthMetrics,
    pub success: SuccessMetrics,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub final_phase: Option<PhaseCheck>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lowered: Option<LoweredMetrics>,
    pub histogram: ShotHistogram,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EvalOptions {
    pub shots: u64,
    pub seed: u64,
    pub lowered: bool,
}

impl Default for EvalOptions {
    fn default() -> Self {
        Self {
            shots: 1000,
            seed: 0,
            lowered: false,
        }
    }
}

/// Builds, measures, simulates and samples one instance. Returns the report
/// and the final state.
pub fn evaluate(
    spec: &SearchSpec,
    opts: EvalOptions,
) -> Result<(Report, StateVector), MetricsError> {
    let sc = build_circuit(spec)?;
    let (n, m) = (spec.n(), spec.m());
    let mut notes = Vec::new();

    let blocked = sc.circuit.depth_blocked()?;
    let formula = depth_formula(spec.variant(), n, m)?;
    let depth = DepthMetrics {
        blocked,
        asap: sc.circuit.depth_asap(),
        formula,
        formula_matches: blocked == formula,
    };
    if !depth.formula_matches {
        let all_ones: Vec<String> = spec
            .targets()
            .iter()
            .filter(|t| t.count_zeros() == 0)
            .map(|t| t.to_string())
            .collect();
        let why = if all_ones.is_empty() {
            match spec.j_override() {
                Some(j) => format!("J = {j} overrides the default slack"),
                None => "iteration count differs from the formula's floor term".into(),
            }
        } else {
            format!(
                "target(s) {} have no zero bit, so their oracles are one layer deep",
                all_ones.join(",")
            )
        };
        notes.push(format!(
            "blocked depth {blocked} differs from formula depth {formula}: {why}"
        ));
    }

    let state = StateVector::run(&sc.circuit)?;
    let simulated = state.success_probability(spec.targets())?;
    let histogram = state.sample(opts.shots, opts.seed)?;
    let sampled = histogram.hit_rate(spec.targets());

    let (analytic, final_phase) = match spec.variant() {
        Variant::GroverOriginal => (grover_success(n, m, sc.iterations)?, None),
        _ => {
            let end = *reduced_trajectory(sc.angle, sc.params.beta, sc.iterations)
                .last()
                .expect("non-empty");
            let targets: Vec<usize> = spec.targets().iter().map(|t| t.index()).collect();
            let (proj, _) = project(&state, &targets);
            let sign = if sc.iterations % 2 == 0 { 1.0 } else { -1.0 };
            let phase = PhaseCheck {
                simulated: (proj.a_target * Complex64::new(sign, 0.0))
                    .arg()
                    .rem_euclid(TAU),
                closed_form: measured_final_phase(&sc.params),
                printed_form: analytic_final_phase(&sc.params),
            };
            notes.push(
                "the -1 of each iteration operator is a global phase and is not emitted; simulated phases restore it"
                    .into(),
            );
            (end.a_target.norm_sqr(), Some(phase))
        }
    };

    let lowered = if opts.lowered {
        let (low, pass) = lower_full(&sc.circuit)?;
        Some(LoweredMetrics {
            gates: low.count_gates(),
            census: Census::of(&low),
            depth: pass.depth_after,
            equivalence: pass.equivalence,
        })
    } else {
        None
    };

    let report = Report {
        spec: spec.clone(),
        params: sc.params,
        angle: sc.angle,
        iterations: sc.iterations,
        shots: opts.shots,
        seed: opts.seed,
        gates: sc.circuit.count_gates(),
        gates_formula: count_formula(spec)?,
        depth,
        success: SuccessMetrics {
            analytic,
            simulated,
            sampled,
        },
        final_phase,
        lowered,
        histogram,
        notes,
    };
    Ok((report, state))
}

/// Which measured depth the comparison's reduction columns use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DepthBasis {
    #[default]
    Blocked,
    Asap,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompareRow {
    pub instance: String,
    pub n: usize,
    pub m: u64,
    pub targets: String,
    pub variant: Variant,
    pub iterations: u32,
    pub angle: f64,
    pub gates: usize,
    pub depth_blocked: usize,
    pub depth_asap: usize,
    pub depth_formula: usize,
    pub success_analytic: f64,
    pub success_simulated: f64,
    pub success_sampled: f64,
    pub gate_reduction_vs_modified: f64,
    pub gate_reduction_vs_grover: f64,
    pub depth_reduction_vs_modified: f64,
    pub depth_reduction_vs_grover: f64,
    pub lowered: Option<Census>,
    pub reference_gates: Option<usize>,
    pub reference_depth: Option<usize>,
    pub reference_success: Option<f64>,
    pub reference_lowered_total: Option<usize>,
    /// Semicolon-separated divergence flags.
    pub flags: String,
}

impl CompareRow {
    pub fn csv_header(lowered: bool) -> Vec<&'static str> {
        let mut h = vec![
            "instance",
            "n",
            "m",
            "targets",
            "variant",
            "iterations",
            "angle",
            "gates",
            "depth_blocked",
            "depth_asap",
            "depth_formula",
            "success_analytic",
            "success_simulated",
            "success_sampled",
            "gate_reduction_vs_modified_pct",
            "gate_reduction_vs_grover_pct",
            "depth_reduction_vs_modified_pct",
            "depth_reduction_vs_grover_pct",
        ];
        if lowered {
            h.extend([
                "lowered_h",
                "lowered_x",
                "lowered_t",
                "lowered_ry",
                "lowered_cps",
                "lowered_ct",
                "lowered_cnot",
                "lowered_ps",
                "lowered_total",
                "reference_lowered_total",
            ]);
        }
        h.extend([
            "reference_gates",
            "reference_depth",
            "reference_success",
            "flags",
        ]);
        h
    }

    pub fn csv_record(&self, lowered: bool) -> Vec<String> {
        let opt = |v: Option<String>| v.unwrap_or_default();
        let mut r = vec![
            self.instance.clone(),
            self.n.to_string(),
            self.m.to_string(),
            self.targets.clone(),
            self.variant.to_string(),
            self.iterations.to_string(),
            format!("{:.6}", self.angle),
            self.gates.to_string(),
            self.depth_blocked.to_string(),
            self.depth_asap.to_string(),
            self.depth_formula.to_string(),
            format!("{:.6}", self.success_analytic),
            format!("{:.6}", self.success_simulated),
            format!("{:.6}", self.success_sampled),
            format!("{:.1}", self.gate_reduction_vs_modified),
            format!("{:.1}", self.gate_reduction_vs_grover),
            format!("{:.1}", self.depth_reduction_vs_modified),
            format!("{:.1}", self.depth_reduction_vs_grover),
        ];
        if lowered {
            let c = self.lowered.unwrap_or_default();
            r.extend(
                [c.h, c.x, c.t, c.ry, c.cps, c.ct, c.cnot, c.ps, c.total]
                    .iter()
                    .map(|v| v.to_string()),
            );
            r.push(opt(self.reference_lowered_total.map(|v| v.to_string())));
        }
        r.push(opt(self.reference_gates.map(|v| v.to_string())));
        r.push(opt(self.reference_depth.map(|v| v.to_string())));
        r.push(opt(self.reference_success.map(|v| format!("{v:.3}"))));
        r.push(self.flags.clone());
        r
    }
}

/// Sampling noise allowance for comparing analytic success against a
/// reference measured with `shots` shots.
fn within_sampling_noise(p: f64, reference: f64, shots: u64) -> bool {
    // Rounding can put p a hair above 1.
    let q = p.clamp(0.0, 1.0);
    let sigma = (q * (1.0 - q) / shots as f64).sqrt();
    (p - reference).abs() <= 5.0 * sigma + 1e-12
}

/// One row per report, with reductions against the modified and Grover rows
/// of the same set (zero when that variant is absent). All reports must share
/// `n` and the target set.
pub fn compare(
    instance: &str,
    reports: &[Report],
    basis: DepthBasis,
    preset: Option<&Preset>,
) -> Result<Vec<CompareRow>, MetricsError> {
    let Some(first) = reports.first() else {
        return Err(MetricsError::Inconsistent("no reports".into()));
    };
    let key = |r: &Report| {
        (
            r.spec.n(),
            r.spec.targets().iter().copied().collect::<BTreeSet<_>>(),
        )
    };
    if reports.iter().any(|r| key(r) != key(first)) {
        return Err(MetricsError::Inconsistent(
            "reports differ in n or targets".into(),
        ));
    }
    let mut seen = BTreeSet::new();
    if !reports.iter().all(|r| seen.insert(r.spec.variant())) {
        return Err(MetricsError::Inconsistent("variant listed twice".into()));
    }
    let depth_of = |r: &Report| match basis {
        DepthBasis::Blocked => r.depth.blocked,
        DepthBasis::Asap => r.depth.asap,
    };
    let find = |v: Variant| reports.iter().find(|r| r.spec.variant() == v);
    let modified = find(Variant::ModifiedCanonical);
    let grover = find(Variant::GroverOriginal);
    let reduce = |base: Option<&Report>, f: &dyn Fn(&Report) -> usize, r: &Report| {
        base.map_or(0.0, |b| reduction_pct(f(b), f(r)))
    };
    let gates_of = |r: &Report| r.gates.total;
    let targets = first
        .spec
        .targets()
        .iter()
        .map(|t| t.to_string())
        .collect::<Vec<_>>()
        .join(" ");

    Ok(reports
        .iter()
        .map(|r| {
            let idx = variant_index(r.spec.variant());
            let reference = preset.map(|p| p.reference);
            let mut flags = Vec::new();
            if !r.depth.formula_matches {
                flags.push("depth_formula_diverges".to_string());
            }
            if let Some(rf) = reference {
                if r.gates.total != rf.gates[idx] {
                    flags.push("gates_differ_from_reference".into());
                }
                if r.depth.blocked != rf.depth[idx] {
                    flags.push("depth_differs_from_reference".into());
                }
                if !within_sampling_noise(r.success.analytic, rf.success[idx], 1000) {
                    flags.push("success_differs_from_reference".into());
                }
            }
            CompareRow {
                instance: instance.to_string(),
                n: r.spec.n(),
                m: r.spec.m(),
                targets: targets.clone(),
                variant: r.spec.variant(),
                iterations: r.iterations,
                angle: r.angle,
                gates: r.gates.total,
                depth_blocked: r.depth.blocked,
                depth_asap: r.depth.asap,
                depth_formula: r.depth.formula,
                success_analytic: r.success.analytic,
                success_simulated: r.success.simulated,
                success_sampled: r.success.sampled,
                gate_reduction_vs_modified: reduce(modified, &gates_of, r),
                gate_reduction_vs_grover: reduce(grover, &gates_of, r),
                depth_reduction_vs_modified: reduce(modified, &depth_of, r),
                depth_reduction_vs_grover: reduce(grover, &depth_of, r),
                lowered: r.lowered.as_ref().map(|l| l.census),
                reference_gates: reference.map(|rf| rf.gates[idx]),
                reference_depth: reference.map(|rf| rf.depth[idx]),
                reference_success: reference.map(|rf| rf.success[idx]),
                reference_lowered_total: reference
                    .and_then(|rf| rf.lowered)
                    .map(|rows| rows[idx].total),
                flags: flags.join(";"),
            }
        })
        .collect())
}
