//! Deterministic CSV and JSON emission. Every file carries the tool version
//! and the resolved config: CSVs as a leading `#` line, JSON as an envelope.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;

use phasesearch::{ShotHistogram, StateVector, VERSION};

pub const TOOL: &str = "phasesearch";

#[derive(Serialize)]
struct Envelope<'a, C: Serialize, T: Serialize> {
    tool: &'static str,
    version: &'static str,
    config: &'a C,
    result: &'a T,
}

pub fn comment_line<C: Serialize>(config: &C) -> Result<String> {
    Ok(format!(
        "# {TOOL} {VERSION} config={}",
        serde_json::to_string(config)?
    ))
}

fn ensure_parent(path: &Path) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    Ok(())
}

pub fn write_csv<C, I>(path: &Path, config: &C, header: &[&str], rows: I) -> Result<()>
where
    C: Serialize,
    I: IntoIterator<Item = Vec<String>>,
{
    ensure_parent(path)?;
    let mut buf = comment_line(config)?.into_bytes();
    buf.push(b'\n');
    {
        let mut w = csv::Writer::from_writer(&mut buf);
        w.write_record(header)?;
        for r in rows {
            w.write_record(&r)?;
        }
        w.flush()?;
    }
    fs::write(path, buf).with_context(|| format!("writing {}", path.display()))
}

pub fn write_json<C: Serialize, T: Serialize>(path: &Path, config: &C, result: &T) -> Result<()> {
    ensure_parent(path)?;
    let env = Envelope {
        tool: TOOL,
        version: VERSION,
        config,
        result,
    };
    let mut text = serde_json::to_string_pretty(&env)?;
    text.push('\n');
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    ensure_parent(path)?;
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

/// `bitstring,probability` over every basis state, in index order.
pub fn probability_rows(state: &StateVector) -> impl Iterator<Item = Vec<String>> + '_ {
    let n = state.num_qubits();
    state
        .probabilities()
        .into_iter()
        .enumerate()
        .map(move |(i, p)| vec![format!("{i:0n$b}"), format!("{p:.12}")])
}

/// `bitstring,count` over observed outcomes, in bitstring order.
pub fn histogram_rows(h: &ShotHistogram) -> impl Iterator<Item = Vec<String>> + '_ {
    h.counts
        .iter()
        .map(|(b, c)| vec![b.to_string(), c.to_string()])
}

pub fn path_in(dir: &Path, name: &str) -> PathBuf {
    dir.join(name)
}
