//! Line-oriented circuit format.
//!
//! ```text
//! # comments and blank lines are ignored
//! qubits 5
//! block init
//! H -> 0
//! block oracle:0:0
//! X -> 1
//! CPS_multi 2.195057699090115 0 1 2 3 -> 4
//! ```
//!
//! The `qubits` header comes first. Each gate line is
//! `KIND [angle] controls... -> target`. `block LABEL` lines are optional; when
//! present, the first one must precede every gate and each block runs until
//! the next `block` line.

use std::fmt::Write;

use super::{Block, Circuit, CircuitError, Gate, GateKind, GateTag};

pub fn to_text(circuit: &Circuit) -> String {
    let mut out = format!("qubits {}\n", circuit.num_qubits());
    let mut blocks = circuit.blocks().iter().peekable();
    for (i, gate) in circuit.gates().iter().enumerate() {
        while let Some(b) = blocks.next_if(|b| b.start == i) {
            let _ = writeln!(out, "block {}", b.label);
        }
        let _ = writeln!(out, "{gate}");
    }
    for b in blocks {
        let _ = writeln!(out, "block {}", b.label);
    }
    out
}

fn parse_err(line: usize, msg: impl Into<String>) -> CircuitError {
    CircuitError::Parse {
        line,
        msg: msg.into(),
    }
}

fn parse_gate(line: usize, text: &str) -> Result<Gate, CircuitError> {
    let (lhs, rhs) = text
        .split_once("->")
        .ok_or_else(|| parse_err(line, "missing `->`"))?;
    let target: usize = rhs
        .trim()
        .parse()
        .map_err(|_| parse_err(line, format!("bad target `{}`", rhs.trim())))?;
    let mut tokens = lhs.split_whitespace();
    let tag: GateTag = tokens
        .next()
        .ok_or_else(|| parse_err(line, "missing gate kind"))?
        .parse()
        .map_err(|e: CircuitError| parse_err(line, e.to_string()))?;
    let angle = if tag.is_parameterized() {
        let tok = tokens
            .next()
            .ok_or_else(|| parse_err(line, format!("{tag} requires an angle")))?;
        Some(
            tok.parse::<f64>()
                .map_err(|_| parse_err(line, format!("bad angle `{tok}`")))?,
        )
    } else {
        None
    };
    let controls = tokens
        .map(|t| {
            t.parse::<usize>()
                .map_err(|_| parse_err(line, format!("bad control `{t}`")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let kind = GateKind::from_tag(tag, angle).map_err(|e| parse_err(line, e.to_string()))?;
    Gate::new(kind, controls, target).map_err(|e| parse_err(line, e.to_string()))
}

pub fn from_text(src: &str) -> Result<Circuit, CircuitError> {
    let mut circuit: Option<Circuit> = None;
    let mut blocks: Vec<Block> = Vec::new();
    for (idx, raw) in src.lines().enumerate() {
        let line = idx + 1;
        let text = raw.split('#').next().unwrap_or("").trim();
        if text.is_empty() {
            continue;
        }
        let Some(c) = circuit.as_mut() else {
            let n = text
                .strip_prefix("qubits")
                .and_then(|rest| rest.trim().parse::<usize>().ok())
                .ok_or_else(|| parse_err(line, "expected `qubits N` header"))?;
            circuit = Some(Circuit::new(n));
            continue;
        };
        if let Some(label) = text.strip_prefix("block") {
            let label = label.trim();
            if label.is_empty() {
                return Err(parse_err(line, "block label missing"));
            }
            if let Some(last) = blocks.last_mut() {
                last.end = c.len();
            } else if !c.is_empty() {
                return Err(parse_err(line, "first block starts after gates"));
            }
            blocks.push(Block {
                label: label.to_string(),
                start: c.len(),
                end: c.len(),
            });
            continue;
        }
        let gate = parse_gate(line, text)?;
        c.push(gate).map_err(|e| parse_err(line, e.to_string()))?;
    }
    let mut c = circuit.ok_or_else(|| parse_err(0, "empty input"))?;
    if let Some(last) = blocks.last_mut() {
        last.end = c.len();
    }
    if !blocks.is_empty() {
        c.set_blocks(blocks)?;
    }
    Ok(c)
}
