//! Rewrite passes: H/X merging and multi-controlled gate decomposition,
//! each checked against the input unitary on small registers.

mod decompose;

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::circuit::{
    phase_aligned_distance, trace_overlap, unitary_of, Block, Circuit, CircuitError, Gate,
    GateCounts, GateKind, GateTag,
};

pub use decompose::{
    cnx_network, decompose_cnu_vchain, decompose_cnx, expand_cnx, expand_gate, toffoli, vchain,
};

/// Passes are verified by dense unitary comparison up to this width.
pub const VERIFY_MAX_QUBITS: usize = 8;

/// Trace-overlap tolerance for accepting a pass.
pub const EQUIVALENCE_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LowerError {
    #[error("decomposition needs at least {needed} control(s), got {got}")]
    TooFewControls { needed: usize, got: usize },
    #[error("pass `{pass}` changed the unitary: trace overlap {overlap:.3e} below 1 - {tol:e}, max deviation {max_deviation:.3e}")]
    NotEquivalent {
        pass: String,
        overlap: f64,
        max_deviation: f64,
        tol: f64,
    },
    #[error(transparent)]
    Circuit(#[from] CircuitError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DepthSummary {
    pub asap: usize,
    /// `None` when the circuit has no block partition.
    pub blocked: Option<usize>,
}

impl DepthSummary {
    pub fn of(c: &Circuit) -> Self {
        Self {
            asap: c.depth_asap(),
            blocked: c.depth_blocked().ok().filter(|_| c.has_block_partition()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EquivalenceCheck {
    /// False when the register is too wide to compare densely.
    pub checked: bool,
    pub tolerance: f64,
    pub trace_overlap: Option<f64>,
    /// Entry-wise deviation after global-phase alignment.
    pub max_deviation: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PassReport {
    pub pass: String,
    pub gates_before: GateCounts,
    pub gates_after: GateCounts,
    pub depth_before: DepthSummary,
    pub depth_after: DepthSummary,
    pub equivalence: EquivalenceCheck,
}

fn verify(pass: &str, before: &Circuit, after: &Circuit) -> Result<PassReport, LowerError> {
    let n = before.num_qubits();
    let equivalence = if n <= VERIFY_MAX_QUBITS {
        let (u, v) = (unitary_of(before)?, unitary_of(after)?);
        let overlap = trace_overlap(&u, &v)?;
        let max_deviation = phase_aligned_distance(&u, &v)?;
        if overlap < 1.0 - EQUIVALENCE_TOL {
            return Err(LowerError::NotEquivalent {
                pass: pass.into(),
                overlap,
                max_deviation,
                tol: EQUIVALENCE_TOL,
            });
        }
        EquivalenceCheck {
            checked: true,
            tolerance: EQUIVALENCE_TOL,
            trace_overlap: Some(overlap),
            max_deviation: Some(max_deviation),
        }
    } else {
        EquivalenceCheck {
            checked: false,
            tolerance: EQUIVALENCE_TOL,
            trace_overlap: None,
            max_deviation: None,
        }
    };
    Ok(PassReport {
        pass: pass.into(),
        gates_before: before.count_gates(),
        gates_after: after.count_gates(),
        depth_before: DepthSummary::of(before),
        depth_after: DepthSummary::of(after),
        equivalence,
    })
}

/// Block ranges of `c`, or the whole circuit as one range.
fn segments(c: &Circuit) -> Vec<(Option<String>, std::ops::Range<usize>)> {
    if c.has_block_partition() {
        c.blocks()
            .iter()
            .map(|b| (Some(b.label.clone()), b.range()))
            .collect()
    } else {
        vec![(None, 0..c.len())]
    }
}

/// Rewrites each segment's gates with `f`, carrying block labels over to the
/// rewritten ranges.
fn rewrite_segments(c: &Circuit, mut f: impl FnMut(&[Gate]) -> Vec<Gate>) -> Circuit {
    let mut gates = Vec::with_capacity(c.len());
    let mut blocks = Vec::new();
    for (label, range) in segments(c) {
        let start = gates.len();
        gates.extend(f(&c.gates()[range]));
        if let Some(label) = label {
            blocks.push(Block {
                label,
                start,
                end: gates.len(),
            });
        }
    }
    Circuit::from_parts(c.num_qubits(), gates, blocks)
}

fn merge_segment(gates: &[Gate]) -> Vec<Gate> {
    let mut out: Vec<Option<Gate>> = Vec::with_capacity(gates.len());
    // Index into `out` of the latest gate touching each qubit.
    let mut last: BTreeMap<usize, usize> = BTreeMap::new();
    for g in gates {
        if g.controls().is_empty() {
            let q = g.target();
            let prev = last
                .get(&q)
                .and_then(|&i| out[i].as_ref().map(|p| (i, p.kind())));
            let merged = match (prev, g.kind()) {
                (Some((i, GateKind::H)), GateKind::X) => Some((i, FRAC_PI_2)),
                (Some((i, GateKind::X)), GateKind::H) => Some((i, -FRAC_PI_2)),
                _ => None,
            };
            if let Some((i, theta)) = merged {
                out[i] = Some(Gate::ry(theta, q));
                continue;
            }
        }
        for q in g.qubits() {
            last.insert(q, out.len());
        }
        out.push(Some(g.clone()));
    }
    out.into_iter().flatten().collect()
}

/// Replaces each H-then-X pair on one wire by `Ry(pi/2)` and each X-then-H
/// pair by `Ry(-pi/2)`, where no other gate touches that wire in between.
/// Pairs never straddle a block boundary. The merged rotation takes the
/// position of the first gate of the pair.
pub fn merge_hx_to_ry(circuit: &Circuit) -> Circuit {
    rewrite_segments(circuit, merge_segment)
}

/// Expands every `CX_multi` and `CPS_multi` to the 1- and 2-qubit basis.
pub fn expand_multi_controlled(circuit: &Circuit) -> Circuit {
    rewrite_segments(circuit, |gs| {
        gs.iter().cloned().flat_map(expand_gate).collect()
    })
}

/// [`merge_hx_to_ry`] plus its verification report.
pub fn merge_pass(circuit: &Circuit) -> Result<(Circuit, PassReport), LowerError> {
    let out = merge_hx_to_ry(circuit);
    let report = verify("merge_hx_to_ry", circuit, &out)?;
    Ok((out, report))
}

/// Full lowering to `{H, X, T, Tdg, Ry, PS, CNOT, CPS}`, verified when the
/// register has at most [`VERIFY_MAX_QUBITS`] qubits.
pub fn lower_full(circuit: &Circuit) -> Result<(Circuit, PassReport), LowerError> {
    let out = expand_multi_controlled(circuit);
    let report = verify("lower_full", circuit, &out)?;
    Ok((out, report))
}

/// Gate census in the column layout used for decomposed-circuit comparisons:
/// T and Tdg share a column, and `CPS(pi/4)` is reported as CT.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Census {
    pub h: usize,
    pub x: usize,
    pub t: usize,
    pub ry: usize,
    pub cps: usize,
    pub ct: usize,
    pub cnot: usize,
    pub ps: usize,
    /// Gates still multi-controlled (zero after full lowering).
    pub multi: usize,
    pub total: usize,
}

impl Census {
    pub fn of(circuit: &Circuit) -> Self {
        let mut c = Census {
            total: circuit.len(),
            ..Default::default()
        };
        for g in circuit.gates() {
            match g.kind() {
                GateKind::H => c.h += 1,
                GateKind::X => c.x += 1,
                GateKind::T | GateKind::Tdg => c.t += 1,
                GateKind::Ry(_) => c.ry += 1,
                GateKind::Cps(a) if (a - FRAC_PI_4).abs() < 1e-12 => c.ct += 1,
                GateKind::Cps(_) => c.cps += 1,
                GateKind::Cnot => c.cnot += 1,
                GateKind::Ps(_) => c.ps += 1,
                GateKind::CxMulti | GateKind::CpsMulti(_) => c.multi += 1,
            }
        }
        c
    }

    pub const COLUMNS: [&'static str; 10] = [
        "H", "X", "T", "Ry", "CPS", "CT", "CNOT", "PS", "multi", "total",
    ];

    pub fn values(&self) -> [usize; 10] {
        [
            self.h, self.x, self.t, self.ry, self.cps, self.ct, self.cnot, self.ps, self.multi,
            self.total,
        ]
    }
}

/// True when `c` contains only basis kinds.
pub fn is_lowered(c: &Circuit) -> bool {
    c.gates()
        .iter()
        .all(|g| !matches!(g.tag(), GateTag::CxMulti | GateTag::CpsMulti))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::search::{build_circuit, SearchSpec, Variant};

    fn one_qubit(gates: Vec<Gate>) -> Circuit {
        Circuit::new(2).with_gates(gates).unwrap()
    }

    #[test]
    fn merges_pairs() {
        let c = merge_hx_to_ry(&one_qubit(vec![Gate::h(0), Gate::x(0)]));
        assert_eq!(c.gates(), &[Gate::ry(FRAC_PI_2, 0)]);
        let c = merge_hx_to_ry(&one_qubit(vec![Gate::x(0), Gate::h(0)]));
        assert_eq!(c.gates(), &[Gate::ry(-FRAC_PI_2, 0)]);
        // An unrelated wire in between does not block the merge.
        let c = merge_hx_to_ry(&one_qubit(vec![Gate::h(0), Gate::h(1), Gate::x(0)]));
        assert_eq!(c.gates(), &[Gate::ry(FRAC_PI_2, 0), Gate::h(1)]);
    }

    #[test]
    fn intervening_gate_blocks_merge() {
        let src = one_qubit(vec![Gate::h(0), Gate::cnot(0, 1), Gate::x(0)]);
        assert_eq!(merge_hx_to_ry(&src), src);
        let src = one_qubit(vec![Gate::h(0), Gate::h(0)]);
        assert_eq!(merge_hx_to_ry(&src), src);
    }

    #[test]
    fn merged_rotation_does_not_remerge() {
        let c = merge_hx_to_ry(&one_qubit(vec![Gate::h(0), Gate::x(0), Gate::h(0)]));
        assert_eq!(c.gates(), &[Gate::ry(FRAC_PI_2, 0), Gate::h(0)]);
    }

    #[test]
    fn block_boundary_blocks_merge() {
        let mut c = Circuit::new(1);
        c.push_block("a", &Circuit::new(1).with_gate(Gate::h(0)).unwrap())
            .unwrap();
        c.push_block("b", &Circuit::new(1).with_gate(Gate::x(0)).unwrap())
            .unwrap();
        let m = merge_hx_to_ry(&c);
        assert_eq!(m.len(), 2);
        assert_eq!(m.blocks(), c.blocks());
    }

    #[test]
    fn canonical_instance_merges_to_optimized() {
        let spec = SearchSpec::parse(5, "00101,10111", Variant::ModifiedCanonical).unwrap();
        let canonical = build_circuit(&spec).unwrap().circuit;
        let (merged, report) = merge_pass(&canonical).unwrap();
        assert_eq!(merged.len(), 68);
        assert!(report.equivalence.checked);
        assert!(report.depth_after.asap <= report.depth_before.asap);
        assert_eq!(report.depth_after.blocked, Some(28));
        let optimized = build_circuit(&spec.with_variant(Variant::OptimizedMerged))
            .unwrap()
            .circuit;
        assert_eq!(merged, optimized);
    }

    #[test]
    fn lower_full_keeps_blocks_and_unitary() {
        let spec = SearchSpec::parse(3, "011,110", Variant::OptimizedMerged).unwrap();
        let c = build_circuit(&spec).unwrap().circuit;
        let (low, report) = lower_full(&c).unwrap();
        assert!(is_lowered(&low));
        assert!(low.has_block_partition());
        assert_eq!(low.blocks().len(), c.blocks().len());
        assert!(report.equivalence.trace_overlap.unwrap() >= 1.0 - 1e-9);
        assert_eq!(Census::of(&low).multi, 0);
    }

    #[test]
    fn single_cps_multi_lowers() {
        let c = Circuit::new(5)
            .with_gate(Gate::cps_multi(1.3, vec![0, 1, 2, 3], 4).unwrap())
            .unwrap();
        let (low, _) = lower_full(&c).unwrap();
        assert_eq!(low.len(), 15 + 14);
        assert!(is_lowered(&low));
    }

    #[test]
    fn census_columns() {
        let c = Circuit::new(2)
            .with_gates([
                Gate::t(0),
                Gate::tdg(1),
                Gate::cps(FRAC_PI_4, 0, 1),
                Gate::cps(0.2, 0, 1),
                Gate::ps(0.1, 0),
            ])
            .unwrap();
        let k = Census::of(&c);
        assert_eq!((k.t, k.ct, k.cps, k.ps, k.total), (2, 1, 1, 1, 5));
    }
}
