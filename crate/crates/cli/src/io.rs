//! File loading and output helpers shared by the subcommands.

use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use hyperstate::circuit::Circuit;
use hyperstate::hypergraph::HypergraphJson;
use hyperstate::noisefit::CountsHistogram;
use hyperstate::state::StateJson;
use hyperstate::symmetry::{GroupJson, PermutationGroup};
use hyperstate::{Hypergraph, SparseState};
use serde::de::DeserializeOwned;
use serde::Serialize;

pub fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

/// Parse JSON, reporting the line and column of a syntax error.
pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = read_text(path)?;
    serde_json::from_str(&text)
        .map_err(|e| anyhow::anyhow!("{}: malformed JSON: {e}", path.display()))
}

pub fn load_graph(path: &Path) -> Result<Hypergraph> {
    let raw: HypergraphJson = read_json(path)?;
    Ok(raw
        .validate()
        .with_context(|| format!("invalid hypergraph in {}", path.display()))?
        .graph)
}

pub fn load_state(path: &Path) -> Result<SparseState> {
    let raw: StateJson = read_json(path)?;
    raw.into_state()
        .with_context(|| format!("invalid state in {}", path.display()))
}

pub fn load_group(path: &Path) -> Result<PermutationGroup> {
    let raw: GroupJson = read_json(path)?;
    raw.into_group()
        .with_context(|| format!("invalid group in {}", path.display()))
}

pub fn load_circuit(path: &Path) -> Result<Circuit> {
    let c: Circuit = read_json(path)?;
    c.validate()
        .with_context(|| format!("invalid circuit in {}", path.display()))?;
    Ok(c)
}

/// Counts from `.csv` (bitstring,count rows) or JSON `{"counts": {...}}`.
pub fn load_counts(path: &Path, reverse_bits: bool) -> Result<CountsHistogram> {
    let text = read_text(path)?;
    let is_csv = path
        .extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("csv"));
    let hist = if is_csv {
        CountsHistogram::from_csv(&text, reverse_bits)
    } else {
        CountsHistogram::from_json(&text, reverse_bits)
    };
    hist.with_context(|| format!("invalid counts in {}", path.display()))
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

/// Write to `path`, or stdout when absent.
pub fn emit(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("cannot write {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

pub fn emit_json<T: Serialize>(path: Option<&Path>, value: &T) -> Result<()> {
    emit(path, &to_json(value)?)
}

/// Fixed six-decimal rendering used by every CSV.
pub fn fmt6(x: f64) -> String {
    format!("{x:.6}")
}

pub fn csv_string(header: &[&str], rows: &[Vec<String>]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

/// `"0,2,3"` into indices.
pub fn parse_index_list(s: &str) -> Result<Vec<usize>> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<usize>()
                .with_context(|| format!("invalid index `{t}`"))
        })
        .collect()
}
