//! The four named experiment instances and their reference figures.

use crate::bits::Bitstring;
use crate::search::{SearchError, SearchSpec, Variant};

/// Decomposed-gate census row: H, X, T (incl. Tdg), Ry, CPS, CT, CNOT, total.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CensusRow {
    pub h: usize,
    pub x: usize,
    pub t: usize,
    pub ry: usize,
    pub cps: usize,
    pub ct: usize,
    pub cnot: usize,
    pub total: usize,
}

/// Reference figures, each indexed `[grover, modified, optimized]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Reference {
    pub gates: [usize; 3],
    pub depth: [usize; 3],
    /// Reported success rates from 1000-shot runs.
    pub success: [f64; 3],
    /// Gate-count reduction of optimized vs modified, in percent.
    pub gate_reduction: f64,
    /// Depth reduction of optimized vs modified, in percent.
    pub depth_reduction: f64,
    pub lowered: Option<[CensusRow; 3]>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Preset {
    pub name: &'static str,
    pub n: usize,
    pub targets: &'static [&'static str],
    pub reference: Reference,
}

#[allow(clippy::too_many_arguments)]
const fn row(
    h: usize,
    x: usize,
    t: usize,
    ry: usize,
    cps: usize,
    ct: usize,
    cnot: usize,
    total: usize,
) -> CensusRow {
    CensusRow {
        h,
        x,
        t,
        ry,
        cps,
        ct,
        cnot,
        total,
    }
}

pub const PRESETS: [Preset; 4] = [
    Preset {
        name: "2q2t",
        n: 2,
        targets: &["00", "01"],
        reference: Reference {
            gates: [19, 19, 15],
            depth: [12, 12, 10],
            success: [0.495, 1.0, 1.0],
            gate_reduction: 21.1,
            depth_reduction: 16.7,
            lowered: None,
        },
    },
    Preset {
        name: "5q2t",
        n: 5,
        targets: &["00101", "10111"],
        reference: Reference {
            gates: [98, 98, 68],
            depth: [34, 34, 28],
            success: [0.958, 1.0, 1.0],
            gate_reduction: 30.6,
            depth_reduction: 17.6,
            lowered: Some([
                row(809, 54, 2646, 0, 27, 54, 1962, 5552),
                row(287, 54, 864, 0, 81, 18, 702, 2006),
                row(257, 24, 864, 30, 81, 18, 702, 1976),
            ]),
        },
    },
    Preset {
        name: "5q4t",
        n: 5,
        targets: &["10001", "01011", "11101", "10110"],
        reference: Reference {
            gates: [87, 87, 67],
            depth: [35, 35, 31],
            success: [0.947, 1.0, 1.0],
            gate_reduction: 23.0,
            depth_reduction: 11.4,
            lowered: Some([
                row(895, 62, 2940, 0, 30, 60, 2180, 6167),
                row(305, 52, 960, 0, 90, 20, 780, 2207),
                row(285, 32, 960, 20, 90, 20, 780, 2187),
            ]),
        },
    },
    Preset {
        name: "6q3t",
        n: 6,
        targets: &["100010", "110011", "111010"],
        reference: Reference {
            gates: [182, 182, 134],
            depth: [43, 57, 49],
            success: [0.963, 1.0, 1.0],
            gate_reduction: 26.4,
            depth_reduction: 14.0,
            lowered: Some([
                row(7822, 112, 26550, 0, 375, 540, 19710, 55109),
                row(3411, 568, 10234, 0, 272, 224, 8824, 23533),
                row(3363, 520, 10234, 48, 272, 224, 8824, 23485),
            ]),
        },
    },
];

pub fn names() -> Vec<&'static str> {
    PRESETS.iter().map(|p| p.name).collect()
}

pub fn find(name: &str) -> Option<&'static Preset> {
    PRESETS.iter().find(|p| p.name.eq_ignore_ascii_case(name))
}

/// Index into the `[grover, modified, optimized]` reference arrays.
pub fn variant_index(v: Variant) -> usize {
    match v {
        Variant::GroverOriginal => 0,
        Variant::ModifiedCanonical => 1,
        Variant::OptimizedMerged => 2,
    }
}

impl Preset {
    pub fn targets(&self) -> Vec<Bitstring> {
        self.targets
            .iter()
            .map(|t| t.parse().expect("preset targets are valid"))
            .collect()
    }

    pub fn spec(&self, variant: Variant) -> Result<SearchSpec, SearchError> {
        SearchSpec::new(self.n, self.targets(), variant)
    }
}
