//! Oracle, diffusion and full search-circuit construction.

use std::collections::BTreeSet;
use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::params::{compute_params, grover_iterations, PhaseParams};
use super::SearchError;
use crate::bits::Bitstring;
use crate::circuit::{Circuit, Gate};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    /// Phase inversions (`phi = pi`), `floor((pi/4) sqrt(N/M))` iterations.
    GroverOriginal,
    /// Matched phases, textbook H/X diffusion conjugation.
    ModifiedCanonical,
    /// Matched phases, H/X pairs merged into Ry rotations.
    OptimizedMerged,
}

impl Variant {
    pub const ALL: [Variant; 3] = [
        Variant::GroverOriginal,
        Variant::ModifiedCanonical,
        Variant::OptimizedMerged,
    ];

    pub fn short_name(self) -> &'static str {
        match self {
            Variant::GroverOriginal => "grover",
            Variant::ModifiedCanonical => "modified",
            Variant::OptimizedMerged => "optimized",
        }
    }

    pub fn diffusion_form(self) -> DiffusionForm {
        match self {
            Variant::OptimizedMerged => DiffusionForm::Merged,
            _ => DiffusionForm::Canonical,
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_name())
    }
}

impl FromStr for Variant {
    type Err = SearchError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "grover" | "grover_original" | "original" => Ok(Variant::GroverOriginal),
            "modified" | "modified_canonical" | "canonical" => Ok(Variant::ModifiedCanonical),
            "optimized" | "optimized_merged" | "merged" => Ok(Variant::OptimizedMerged),
            _ => Err(SearchError::UnknownVariant(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiffusionForm {
    /// H layer, X layer, controlled phase, X layer, H layer.
    Canonical,
    /// Ry(pi/2) layer, controlled phase, Ry(-pi/2) layer.
    Merged,
}

/// A search instance: register width, marked states and algorithm variant.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchSpec {
    n: usize,
    targets: Vec<Bitstring>,
    variant: Variant,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    j_override: Option<u32>,
}

impl SearchSpec {
    pub fn new(n: usize, targets: Vec<Bitstring>, variant: Variant) -> Result<Self, SearchError> {
        if n == 0 || n > crate::statevec::MAX_QUBITS {
            return Err(SearchError::QubitCount(n));
        }
        if targets.is_empty() {
            return Err(SearchError::NoTargets);
        }
        let mut seen = BTreeSet::new();
        for t in &targets {
            if t.width() != n {
                return Err(SearchError::TargetWidth {
                    target: t.to_string(),
                    n,
                });
            }
            if !seen.insert(*t) {
                return Err(SearchError::DuplicateTarget(t.to_string()));
            }
        }
        Ok(Self {
            n,
            targets,
            variant,
            j_override: None,
        })
    }

    /// Parses a comma-separated target list such as `"00101,10111"`.
    pub fn parse(n: usize, targets: &str, variant: Variant) -> Result<Self, SearchError> {
        let targets = targets
            .split(',')
            .map(|t| t.trim().parse::<Bitstring>())
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(n, targets, variant)
    }

    pub fn with_j(mut self, j: Option<u32>) -> Self {
        self.j_override = j;
        self
    }

    pub fn with_variant(mut self, variant: Variant) -> Self {
        self.variant = variant;
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> u64 {
        self.targets.len() as u64
    }

    pub fn targets(&self) -> &[Bitstring] {
        &self.targets
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn j_override(&self) -> Option<u32> {
        self.j_override
    }

    pub fn params(&self) -> Result<PhaseParams, SearchError> {
        compute_params(self.n, self.m(), self.j_override)
    }

    /// Rotation angle and iteration count the builder uses for this variant.
    pub fn schedule(&self) -> Result<(f64, u32), SearchError> {
        match self.variant {
            Variant::GroverOriginal => Ok((PI, grover_iterations(self.n, self.m())?)),
            _ => {
                let p = self.params()?;
                Ok((p.phi, p.iterations))
            }
        }
    }
}

/// `n - 1` controls on a phase gate targeting the top qubit; a bare PS on one qubit.
fn all_qubit_phase(n: usize, phi: f64) -> Gate {
    if n == 1 {
        Gate::ps(phi, 0)
    } else {
        Gate::cps_multi(phi, (0..n - 1).collect(), n - 1)
            .expect("n >= 2 gives at least one control")
    }
}

/// Single-target phase oracle `I + (e^{i phi} - 1)|target><target|`:
/// X on each zero bit, all-qubit controlled phase, X on each zero bit.
pub fn build_oracle(target: Bitstring, phi: f64) -> Circuit {
    let n = target.width();
    let mut c = Circuit::new(n);
    let flips: Vec<usize> = target.zero_qubits().collect();
    c.extend(flips.iter().map(|&q| Gate::x(q)))
        .expect("qubits in range");
    c.push(all_qubit_phase(n, phi)).expect("qubits in range");
    c.extend(flips.iter().map(|&q| Gate::x(q)))
        .expect("qubits in range");
    c
}

/// Diffusion `I + (e^{i phi} - 1)|s><s|` about the uniform superposition `|s>`.
pub fn build_diffusion(n: usize, phi: f64, form: DiffusionForm) -> Circuit {
    let mut c = Circuit::new(n);
    let layer =
        |c: &mut Circuit, g: fn(usize) -> Gate| c.extend((0..n).map(g)).expect("qubits in range");
    match form {
        DiffusionForm::Canonical => {
            layer(&mut c, Gate::h);
            layer(&mut c, Gate::x);
            c.push(all_qubit_phase(n, phi)).expect("qubits in range");
            layer(&mut c, Gate::x);
            layer(&mut c, Gate::h);
        }
        DiffusionForm::Merged => {
            c.extend((0..n).map(|q| Gate::ry(FRAC_PI_2, q)))
                .expect("qubits in range");
            c.push(all_qubit_phase(n, phi)).expect("qubits in range");
            c.extend((0..n).map(|q| Gate::ry(-FRAC_PI_2, q)))
                .expect("qubits in range");
        }
    }
    c
}

/// A built search circuit with the parameters it was built from.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchCircuit {
    pub spec: SearchSpec,
    /// Block-annotated circuit: `init`, then per iteration `oracle:k:i` blocks and a `diffusion:k` block.
    pub circuit: Circuit,
    /// Phase-matching parameters of the instance (reported for every variant).
    pub params: PhaseParams,
    /// Oracle and diffusion rotation actually emitted.
    pub angle: f64,
    pub iterations: u32,
}

pub fn build_circuit(spec: &SearchSpec) -> Result<SearchCircuit, SearchError> {
    let params = spec.params().or_else(|e| match (spec.variant, e) {
        // The slack override only applies to the exact variants.
        (Variant::GroverOriginal, SearchError::SlackTooSmall { .. }) => {
            spec.clone().with_j(None).params()
        }
        (_, e) => Err(e),
    })?;
    let (angle, iterations) = spec.schedule()?;
    let n = spec.n;

    let mut circuit = Circuit::new(n);
    let mut init = Circuit::new(n);
    init.extend((0..n).map(Gate::h))?;
    circuit.push_block("init", &init)?;

    let oracles: Vec<Circuit> = spec
        .targets
        .iter()
        .map(|t| build_oracle(*t, angle))
        .collect();
    let diffusion = build_diffusion(n, angle, spec.variant.diffusion_form());
    for k in 0..iterations {
        for (i, oracle) in oracles.iter().enumerate() {
            circuit.push_block(format!("oracle:{k}:{i}"), oracle)?;
        }
        circuit.push_block(format!("diffusion:{k}"), &diffusion)?;
    }
    Ok(SearchCircuit {
        spec: spec.clone(),
        circuit,
        params,
        angle,
        iterations,
    })
}
