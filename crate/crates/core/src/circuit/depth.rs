use std::ops::Range;

use super::{Block, Circuit, CircuitError, Gate};

/// How layers are allowed to form when measuring depth.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DepthPolicy {
    /// Earliest-layer scheduling over the whole circuit: the longest path
    /// along qubit wires.
    Asap,
    /// Asap inside each range, no layer sharing across ranges; depth is the
    /// sum over ranges. Ranges must partition the gate list.
    Blocked(Vec<Range<usize>>),
}

impl DepthPolicy {
    /// Blocked policy from the circuit's own block annotations.
    pub fn from_circuit(circuit: &Circuit) -> Result<Self, CircuitError> {
        if circuit.blocks().is_empty() {
            return Err(CircuitError::InvalidPartition(
                "circuit has no block annotations".into(),
            ));
        }
        Ok(DepthPolicy::Blocked(
            circuit.blocks().iter().map(Block::range).collect(),
        ))
    }
}

pub(crate) fn check_partition(ranges: &[Range<usize>], len: usize) -> Result<(), CircuitError> {
    let mut next = 0;
    for r in ranges {
        if r.start != next {
            return Err(CircuitError::InvalidPartition(format!(
                "range {}..{} does not start at gate {next}",
                r.start, r.end
            )));
        }
        if r.end < r.start {
            return Err(CircuitError::InvalidPartition(format!(
                "range {}..{} is reversed",
                r.start, r.end
            )));
        }
        next = r.end;
    }
    if next != len {
        return Err(CircuitError::InvalidPartition(format!(
            "ranges cover {next} of {len} gates"
        )));
    }
    Ok(())
}

/// Layer index (0-based) of every gate under earliest-layer scheduling.
fn asap_layers(gates: &[Gate]) -> Vec<usize> {
    let width = gates
        .iter()
        .flat_map(Gate::qubits)
        .max()
        .map_or(0, |q| q + 1);
    let mut frontier = vec![0usize; width];
    gates
        .iter()
        .map(|g| {
            let layer = g.qubits().map(|q| frontier[q]).max().unwrap_or(0);
            for q in g.qubits() {
                frontier[q] = layer + 1;
            }
            layer
        })
        .collect()
}

pub(crate) fn asap_depth(gates: &[Gate]) -> usize {
    asap_layers(gates).into_iter().max().map_or(0, |l| l + 1)
}

pub fn depth(circuit: &Circuit, policy: &DepthPolicy) -> Result<usize, CircuitError> {
    match policy {
        DepthPolicy::Asap => Ok(asap_depth(circuit.gates())),
        DepthPolicy::Blocked(ranges) => {
            check_partition(ranges, circuit.len())?;
            Ok(ranges
                .iter()
                .map(|r| asap_depth(&circuit.gates()[r.clone()]))
                .sum())
        }
    }
}

/// Gate indices grouped by Asap layer. Gates in one layer have disjoint footprints.
pub fn layers(circuit: &Circuit) -> Vec<Vec<usize>> {
    let assignment = asap_layers(circuit.gates());
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); assignment.iter().max().map_or(0, |l| l + 1)];
    for (i, l) in assignment.into_iter().enumerate() {
        out[l].push(i);
    }
    out
}
