use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::CircuitError;

/// 2x2 complex matrix, row-major.
pub type Matrix2 = [[Complex64; 2]; 2];

/// Gate kind without its angle; used for counting and serialization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GateTag {
    H,
    X,
    T,
    Tdg,
    Ry,
    #[serde(rename = "PS")]
    Ps,
    #[serde(rename = "CNOT")]
    Cnot,
    #[serde(rename = "CPS")]
    Cps,
    #[serde(rename = "CX_multi")]
    CxMulti,
    #[serde(rename = "CPS_multi")]
    CpsMulti,
}

impl GateTag {
    pub const ALL: [GateTag; 10] = [
        GateTag::H,
        GateTag::X,
        GateTag::T,
        GateTag::Tdg,
        GateTag::Ry,
        GateTag::Ps,
        GateTag::Cnot,
        GateTag::Cps,
        GateTag::CxMulti,
        GateTag::CpsMulti,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GateTag::H => "H",
            GateTag::X => "X",
            GateTag::T => "T",
            GateTag::Tdg => "Tdg",
            GateTag::Ry => "Ry",
            GateTag::Ps => "PS",
            GateTag::Cnot => "CNOT",
            GateTag::Cps => "CPS",
            GateTag::CxMulti => "CX_multi",
            GateTag::CpsMulti => "CPS_multi",
        }
    }

    pub fn is_parameterized(self) -> bool {
        matches!(
            self,
            GateTag::Ry | GateTag::Ps | GateTag::Cps | GateTag::CpsMulti
        )
    }

    pub fn is_multi_controlled(self) -> bool {
        matches!(self, GateTag::CxMulti | GateTag::CpsMulti)
    }

    fn check_controls(self, n: usize) -> bool {
        match self {
            GateTag::Cnot | GateTag::Cps => n == 1,
            GateTag::CxMulti | GateTag::CpsMulti => n >= 1,
            _ => n == 0,
        }
    }
}

impl fmt::Display for GateTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GateTag {
    type Err = CircuitError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        GateTag::ALL
            .iter()
            .copied()
            .find(|t| t.name() == s)
            .ok_or_else(|| CircuitError::UnknownKind(s.to_string()))
    }
}

/// Gate kind with its rotation angle (radians) where the kind takes one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GateKind {
    H,
    X,
    T,
    Tdg,
    Ry(f64),
    Ps(f64),
    Cnot,
    Cps(f64),
    CxMulti,
    CpsMulti(f64),
}

impl GateKind {
    pub fn from_tag(tag: GateTag, angle: Option<f64>) -> Result<Self, CircuitError> {
        let need = || angle.ok_or(CircuitError::MissingAngle(tag));
        let kind = match tag {
            GateTag::H => GateKind::H,
            GateTag::X => GateKind::X,
            GateTag::T => GateKind::T,
            GateTag::Tdg => GateKind::Tdg,
            GateTag::Ry => GateKind::Ry(need()?),
            GateTag::Ps => GateKind::Ps(need()?),
            GateTag::Cnot => GateKind::Cnot,
            GateTag::Cps => GateKind::Cps(need()?),
            GateTag::CxMulti => GateKind::CxMulti,
            GateTag::CpsMulti => GateKind::CpsMulti(need()?),
        };
        if !tag.is_parameterized() && angle.is_some() {
            return Err(CircuitError::UnexpectedAngle(tag));
        }
        Ok(kind)
    }

    pub fn tag(&self) -> GateTag {
        match self {
            GateKind::H => GateTag::H,
            GateKind::X => GateTag::X,
            GateKind::T => GateTag::T,
            GateKind::Tdg => GateTag::Tdg,
            GateKind::Ry(_) => GateTag::Ry,
            GateKind::Ps(_) => GateTag::Ps,
            GateKind::Cnot => GateTag::Cnot,
            GateKind::Cps(_) => GateTag::Cps,
            GateKind::CxMulti => GateTag::CxMulti,
            GateKind::CpsMulti(_) => GateTag::CpsMulti,
        }
    }

    pub fn angle(&self) -> Option<f64> {
        match *self {
            GateKind::Ry(a) | GateKind::Ps(a) | GateKind::Cps(a) | GateKind::CpsMulti(a) => Some(a),
            _ => None,
        }
    }

    /// Matrix applied to the target qubit when every control is set.
    pub fn target_matrix(&self) -> Matrix2 {
        let zero = Complex64::new(0.0, 0.0);
        let one = Complex64::new(1.0, 0.0);
        let phase = |phi: f64| [[one, zero], [zero, Complex64::from_polar(1.0, phi)]];
        match *self {
            GateKind::H => {
                let s = Complex64::new(FRAC_1_SQRT_2, 0.0);
                [[s, s], [s, -s]]
            }
            GateKind::X | GateKind::Cnot | GateKind::CxMulti => [[zero, one], [one, zero]],
            GateKind::T => phase(FRAC_PI_4),
            GateKind::Tdg => phase(-FRAC_PI_4),
            GateKind::Ry(theta) => {
                let (s, c) = (theta / 2.0).sin_cos();
                [
                    [Complex64::new(c, 0.0), Complex64::new(-s, 0.0)],
                    [Complex64::new(s, 0.0), Complex64::new(c, 0.0)],
                ]
            }
            GateKind::Ps(phi) | GateKind::Cps(phi) | GateKind::CpsMulti(phi) => phase(phi),
        }
    }

    pub fn inverse(&self) -> GateKind {
        match *self {
            GateKind::T => GateKind::Tdg,
            GateKind::Tdg => GateKind::T,
            GateKind::Ry(a) => GateKind::Ry(-a),
            GateKind::Ps(a) => GateKind::Ps(-a),
            GateKind::Cps(a) => GateKind::Cps(-a),
            GateKind::CpsMulti(a) => GateKind::CpsMulti(-a),
            other => other,
        }
    }

    /// True for gates that are diagonal in the computational basis.
    pub fn is_diagonal(&self) -> bool {
        matches!(
            self,
            GateKind::T
                | GateKind::Tdg
                | GateKind::Ps(_)
                | GateKind::Cps(_)
                | GateKind::CpsMulti(_)
        )
    }
}

/// One circuit element: `kind` acting on `target`, conditioned on every qubit in `controls`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GateRecord", into = "GateRecord")]
pub struct Gate {
    kind: GateKind,
    controls: Vec<usize>,
    target: usize,
}

impl Gate {
    /// Checks control arity for the kind, angle finiteness and qubit distinctness.
    pub fn new(kind: GateKind, controls: Vec<usize>, target: usize) -> Result<Self, CircuitError> {
        let tag = kind.tag();
        if !tag.check_controls(controls.len()) {
            return Err(CircuitError::ControlArity {
                kind: tag,
                got: controls.len(),
            });
        }
        if let Some(a) = kind.angle() {
            if !a.is_finite() {
                return Err(CircuitError::NonFiniteAngle(tag));
            }
        }
        let gate = Self {
            kind,
            controls,
            target,
        };
        if let Some(q) = gate.duplicate_qubit() {
            return Err(CircuitError::DuplicateQubit(q));
        }
        Ok(gate)
    }

    fn single(kind: GateKind, target: usize) -> Self {
        Self {
            kind,
            controls: Vec::new(),
            target,
        }
    }

    pub fn h(q: usize) -> Self {
        Self::single(GateKind::H, q)
    }

    pub fn x(q: usize) -> Self {
        Self::single(GateKind::X, q)
    }

    pub fn t(q: usize) -> Self {
        Self::single(GateKind::T, q)
    }

    pub fn tdg(q: usize) -> Self {
        Self::single(GateKind::Tdg, q)
    }

    pub fn ry(theta: f64, q: usize) -> Self {
        Self::single(GateKind::Ry(theta), q)
    }

    pub fn ps(phi: f64, q: usize) -> Self {
        Self::single(GateKind::Ps(phi), q)
    }

    // The two-qubit constructors do not reject `control == target`; that is
    // reported when the gate is pushed onto a circuit.
    pub fn cnot(control: usize, target: usize) -> Self {
        Self {
            kind: GateKind::Cnot,
            controls: vec![control],
            target,
        }
    }

    pub fn cps(phi: f64, control: usize, target: usize) -> Self {
        Self {
            kind: GateKind::Cps(phi),
            controls: vec![control],
            target,
        }
    }

    pub fn cx_multi(controls: Vec<usize>, target: usize) -> Result<Self, CircuitError> {
        Self::new(GateKind::CxMulti, controls, target)
    }

    pub fn cps_multi(phi: f64, controls: Vec<usize>, target: usize) -> Result<Self, CircuitError> {
        Self::new(GateKind::CpsMulti(phi), controls, target)
    }

    pub fn kind(&self) -> GateKind {
        self.kind
    }

    pub fn tag(&self) -> GateTag {
        self.kind.tag()
    }

    pub fn controls(&self) -> &[usize] {
        &self.controls
    }

    pub fn target(&self) -> usize {
        self.target
    }

    /// Every qubit the gate touches: controls, then target.
    pub fn qubits(&self) -> impl Iterator<Item = usize> + '_ {
        self.controls
            .iter()
            .copied()
            .chain(std::iter::once(self.target))
    }

    pub fn control_mask(&self) -> usize {
        self.controls.iter().fold(0, |m, &c| m | (1 << c))
    }

    fn duplicate_qubit(&self) -> Option<usize> {
        let mut seen = 0u128;
        for q in self.qubits() {
            if q < 128 {
                if seen & (1 << q) != 0 {
                    return Some(q);
                }
                seen |= 1 << q;
            } else if self.qubits().filter(|&p| p == q).count() > 1 {
                return Some(q);
            }
        }
        None
    }

    /// Range and distinctness check against a register of `num_qubits`.
    pub fn validate(&self, num_qubits: usize) -> Result<(), CircuitError> {
        if let Some(q) = self.qubits().find(|&q| q >= num_qubits) {
            return Err(CircuitError::QubitOutOfRange {
                qubit: q,
                num_qubits,
            });
        }
        if let Some(q) = self.duplicate_qubit() {
            return Err(CircuitError::DuplicateQubit(q));
        }
        Ok(())
    }

    pub fn inverse(&self) -> Gate {
        Gate {
            kind: self.kind.inverse(),
            controls: self.controls.clone(),
            target: self.target,
        }
    }

    /// Relabels qubits through `map` (`new = map[old]`).
    pub fn remap(&self, map: &[usize]) -> Gate {
        Gate {
            kind: self.kind,
            controls: self.controls.iter().map(|&c| map[c]).collect(),
            target: map[self.target],
        }
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.tag())?;
        if let Some(a) = self.kind.angle() {
            // `{}` on f64 is the shortest representation that round-trips.
            write!(f, " {a}")?;
        }
        for c in &self.controls {
            write!(f, " {c}")?;
        }
        write!(f, " -> {}", self.target)
    }
}

/// Serialized form of a [`Gate`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GateRecord {
    pub kind: GateTag,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub angle: Option<f64>,
    #[serde(default)]
    pub controls: Vec<usize>,
    pub target: usize,
}

impl TryFrom<GateRecord> for Gate {
    type Error = CircuitError;

    fn try_from(r: GateRecord) -> Result<Self, Self::Error> {
        Gate::new(GateKind::from_tag(r.kind, r.angle)?, r.controls, r.target)
    }
}

impl From<Gate> for GateRecord {
    fn from(g: Gate) -> Self {
        GateRecord {
            kind: g.tag(),
            angle: g.kind.angle(),
            controls: g.controls,
            target: g.target,
        }
    }
}
