//! Gate-level circuit IR.
//!
//! A [`Circuit`] is an ordered gate list over a fixed register. Gates are
//! stored in time order (index 0 acts first). Circuits built by the search
//! module also carry [`Block`] annotations that mark the initialization layer
//! and each oracle/diffusion operator; the blocked depth policy and the merge
//! pass both respect those boundaries.

mod depth;
mod gate;
mod text;
mod unitary;

use std::collections::BTreeMap;
use std::ops::Range;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use depth::{depth, layers, DepthPolicy};
pub use gate::{Gate, GateKind, GateRecord, GateTag, Matrix2};
pub use text::{from_text, to_text};
pub use unitary::{
    equivalent_up_to_phase, gate_matrix, phase_aligned_distance, trace_overlap,
    unitarity_deviation, unitary_of, Unitary, MAX_UNITARY_QUBITS,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CircuitError {
    #[error("qubit {qubit} out of range for a {num_qubits}-qubit circuit")]
    QubitOutOfRange { qubit: usize, num_qubits: usize },
    #[error("duplicate qubit {0} within one gate")]
    DuplicateQubit(usize),
    #[error("{kind} does not accept {got} control(s)")]
    ControlArity { kind: GateTag, got: usize },
    #[error("{0} requires an angle")]
    MissingAngle(GateTag),
    #[error("{0} does not take an angle")]
    UnexpectedAngle(GateTag),
    #[error("{0} angle must be finite")]
    NonFiniteAngle(GateTag),
    #[error("unknown gate kind `{0}`")]
    UnknownKind(String),
    #[error("circuit width {0} exceeds the dense-unitary limit of {MAX_UNITARY_QUBITS}")]
    TooWide(usize),
    #[error("circuit widths differ: {0} vs {1}")]
    WidthMismatch(usize, usize),
    #[error("matrix dimensions differ or are not square: {0}x{1} vs {2}x{3}")]
    DimensionMismatch(usize, usize, usize, usize),
    #[error("invalid block partition: {0}")]
    InvalidPartition(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// A labelled, half-open range of gate indices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Block {
    pub label: String,
    pub start: usize,
    pub end: usize,
}

impl Block {
    pub fn range(&self) -> Range<usize> {
        self.start..self.end
    }

    pub fn len(&self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.start == self.end
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "CircuitRecord")]
pub struct Circuit {
    num_qubits: usize,
    gates: Vec<Gate>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    blocks: Vec<Block>,
}

#[derive(Deserialize)]
struct CircuitRecord {
    num_qubits: usize,
    gates: Vec<Gate>,
    #[serde(default)]
    blocks: Vec<Block>,
}

impl TryFrom<CircuitRecord> for Circuit {
    type Error = CircuitError;

    fn try_from(r: CircuitRecord) -> Result<Self, Self::Error> {
        let mut c = Circuit::new(r.num_qubits);
        for g in r.gates {
            c.push(g)?;
        }
        if !r.blocks.is_empty() {
            c.set_blocks(r.blocks)?;
        }
        Ok(c)
    }
}

impl Circuit {
    pub fn new(num_qubits: usize) -> Self {
        Self {
            num_qubits,
            gates: Vec::new(),
            blocks: Vec::new(),
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    /// Appends `gate` after every existing gate.
    pub fn push(&mut self, gate: Gate) -> Result<(), CircuitError> {
        gate.validate(self.num_qubits)?;
        self.gates.push(gate);
        Ok(())
    }

    /// By-value form of [`Circuit::push`].
    pub fn with_gate(mut self, gate: Gate) -> Result<Self, CircuitError> {
        self.push(gate)?;
        Ok(self)
    }

    pub fn with_gates<I: IntoIterator<Item = Gate>>(
        mut self,
        gates: I,
    ) -> Result<Self, CircuitError> {
        self.extend(gates)?;
        Ok(self)
    }

    pub fn extend<I: IntoIterator<Item = Gate>>(&mut self, gates: I) -> Result<(), CircuitError> {
        for g in gates {
            self.push(g)?;
        }
        Ok(())
    }

    /// Appends every gate of `fragment` as one labelled block.
    pub fn push_block(
        &mut self,
        label: impl Into<String>,
        fragment: &Circuit,
    ) -> Result<(), CircuitError> {
        if fragment.num_qubits != self.num_qubits {
            return Err(CircuitError::WidthMismatch(
                self.num_qubits,
                fragment.num_qubits,
            ));
        }
        let start = self.gates.len();
        self.gates.extend(fragment.gates.iter().cloned());
        self.blocks.push(Block {
            label: label.into(),
            start,
            end: self.gates.len(),
        });
        Ok(())
    }

    /// Replaces the block annotations; they must partition the gate list.
    pub fn set_blocks(&mut self, blocks: Vec<Block>) -> Result<(), CircuitError> {
        let ranges: Vec<_> = blocks.iter().map(Block::range).collect();
        depth::check_partition(&ranges, self.gates.len())?;
        self.blocks = blocks;
        Ok(())
    }

    pub fn clear_blocks(&mut self) {
        self.blocks.clear();
    }

    /// True when the block annotations cover every gate exactly once.
    pub fn has_block_partition(&self) -> bool {
        !self.blocks.is_empty()
            && depth::check_partition(
                &self.blocks.iter().map(Block::range).collect::<Vec<_>>(),
                self.gates.len(),
            )
            .is_ok()
    }

    /// Gate-wise inverse in reverse order; block annotations are mirrored.
    pub fn inverse(&self) -> Circuit {
        let len = self.gates.len();
        let gates = self.gates.iter().rev().map(Gate::inverse).collect();
        let blocks = self
            .blocks
            .iter()
            .rev()
            .map(|b| Block {
                label: b.label.clone(),
                start: len - b.end,
                end: len - b.start,
            })
            .collect();
        Circuit {
            num_qubits: self.num_qubits,
            gates,
            blocks,
        }
    }

    /// Per-kind histogram; multi-controlled gates count once each.
    pub fn count_gates(&self) -> GateCounts {
        GateCounts::from_gates(&self.gates)
    }

    pub fn depth(&self, policy: &DepthPolicy) -> Result<usize, CircuitError> {
        depth(self, policy)
    }

    pub fn depth_asap(&self) -> usize {
        depth::asap_depth(&self.gates)
    }

    /// Blocked depth using this circuit's own annotations.
    pub fn depth_blocked(&self) -> Result<usize, CircuitError> {
        depth(self, &DepthPolicy::from_circuit(self)?)
    }

    pub(crate) fn from_parts(num_qubits: usize, gates: Vec<Gate>, blocks: Vec<Block>) -> Self {
        Self {
            num_qubits,
            gates,
            blocks,
        }
    }
}

/// Gate histogram by kind.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GateCounts {
    pub by_kind: BTreeMap<GateTag, usize>,
    pub total: usize,
}

impl GateCounts {
    pub fn from_gates(gates: &[Gate]) -> Self {
        let mut by_kind = BTreeMap::new();
        for g in gates {
            *by_kind.entry(g.tag()).or_insert(0) += 1;
        }
        Self {
            by_kind,
            total: gates.len(),
        }
    }

    pub fn get(&self, tag: GateTag) -> usize {
        self.by_kind.get(&tag).copied().unwrap_or(0)
    }

    /// `self - other` per kind, over the union of kinds present in either.
    pub fn delta(&self, other: &GateCounts) -> BTreeMap<GateTag, i64> {
        let mut out = BTreeMap::new();
        for tag in self.by_kind.keys().chain(other.by_kind.keys()) {
            let d = self.get(*tag) as i64 - other.get(*tag) as i64;
            if d != 0 {
                out.insert(*tag, d);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn append_grows_and_preserves_order() {
        let c = Circuit::new(2).with_gate(Gate::h(0)).unwrap();
        assert_eq!(c.len(), 1);
        let c = c.with_gate(Gate::x(1)).unwrap();
        assert_eq!(c.gates()[0], Gate::h(0));
        assert_eq!(c.gates()[1], Gate::x(1));
    }

    #[test]
    fn append_rejects_duplicate_qubit() {
        let err = Circuit::new(2).with_gate(Gate::cnot(0, 0)).unwrap_err();
        assert_eq!(err, CircuitError::DuplicateQubit(0));
        assert!(err.to_string().contains("duplicate qubit"));
    }

    #[test]
    fn append_rejects_out_of_range() {
        let err = Circuit::new(2).with_gate(Gate::x(2)).unwrap_err();
        assert_eq!(
            err,
            CircuitError::QubitOutOfRange {
                qubit: 2,
                num_qubits: 2
            }
        );
    }

    #[test]
    fn append_five_qubit_controlled_phase() {
        let mut c = Circuit::new(5);
        c.push(Gate::h(0)).unwrap();
        let before = c.len();
        c.push(Gate::cps_multi(2.1951, vec![0, 1, 2, 3], 4).unwrap())
            .unwrap();
        assert_eq!(c.len(), before + 1);
    }

    #[test]
    fn counts() {
        assert_eq!(Circuit::new(3).count_gates().total, 0);
        let mut c = Circuit::new(3);
        c.extend([
            Gate::h(0),
            Gate::h(1),
            Gate::cx_multi(vec![0, 1], 2).unwrap(),
        ])
        .unwrap();
        let counts = c.count_gates();
        assert_eq!(counts.total, 3);
        assert_eq!(counts.get(GateTag::H), 2);
        assert_eq!(counts.get(GateTag::CxMulti), 1);
        assert_eq!(counts.by_kind.values().sum::<usize>(), counts.total);
    }

    #[test]
    fn inverse_mirrors_blocks() {
        let mut c = Circuit::new(2);
        let mut a = Circuit::new(2);
        a.extend([Gate::h(0), Gate::h(1)]).unwrap();
        let mut b = Circuit::new(2);
        b.push(Gate::t(0)).unwrap();
        c.push_block("a", &a).unwrap();
        c.push_block("b", &b).unwrap();
        let inv = c.inverse();
        assert_eq!(inv.gates()[0], Gate::tdg(0));
        assert_eq!(
            inv.blocks()[0],
            Block {
                label: "b".into(),
                start: 0,
                end: 1
            }
        );
        assert_eq!(
            inv.blocks()[1],
            Block {
                label: "a".into(),
                start: 1,
                end: 3
            }
        );
    }
}
