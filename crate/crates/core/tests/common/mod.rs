//! Fixtures and independent oracles shared by the integration tests.

#![allow(dead_code)]

use std::collections::HashMap;
use std::path::{Path, PathBuf};

use hyperstate::hamiltonian::Model;
use hyperstate::hypergraph::HypergraphJson;
use hyperstate::Hypergraph;

pub fn data_dir() -> PathBuf {
    Path::new(concat!(env!("CARGO_MANIFEST_DIR"), "/../../data")).to_path_buf()
}

/// Every bundled hypergraph fixture, by file stem, sorted.
pub fn graph_fixtures() -> Vec<(String, Hypergraph)> {
    let mut paths: Vec<PathBuf> = std::fs::read_dir(data_dir().join("graphs"))
        .expect("fixture directory")
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "json"))
        .collect();
    paths.sort();
    paths
        .into_iter()
        .map(|p| {
            let raw: HypergraphJson =
                serde_json::from_str(&std::fs::read_to_string(&p).unwrap()).unwrap();
            let name = p.file_stem().unwrap().to_string_lossy().into_owned();
            (name, raw.validate().unwrap().graph)
        })
        .collect()
}

pub fn fixture(name: &str) -> Hypergraph {
    graph_fixtures()
        .into_iter()
        .find(|(n, _)| n == name)
        .unwrap_or_else(|| panic!("no fixture {name}"))
        .1
}

/// Bitmask with vertex 0 as the most significant of `n` bits.
pub fn mask(n: usize, vs: &[usize]) -> u64 {
    vs.iter().fold(0, |m, &v| m | 1 << (n - 1 - v))
}

/// Sparse real operator on the full `2^n` space, column `s` -> [(row, value)].
type Sparse = HashMap<u64, Vec<(u64, f64)>>;

fn lowering_single(n: usize) -> Vec<Vec<usize>> {
    (0..n).map(|v| vec![v]).collect()
}

/// `sum over groups e of prod_{v in e} sigma_minus_v`, applied to one state.
fn lower(state: u64, n: usize, groups: &[Vec<usize>]) -> Vec<u64> {
    groups
        .iter()
        .filter_map(|e| {
            let m = mask(n, e);
            (state & m == m).then_some(state & !m)
        })
        .collect()
}

/// `<a| L^T L |b>` over the basis `states`, from the images of `L`.
fn gram(states: &[u64], n: usize, groups: &[Vec<usize>]) -> Vec<f64> {
    let d = states.len();
    let mut images: Sparse = HashMap::new();
    for (col, &s) in states.iter().enumerate() {
        for t in lower(s, n, groups) {
            images.entry(t).or_default().push((col as u64, 1.0));
        }
    }
    let mut h = vec![0.0; d * d];
    for cols in images.values() {
        for &(a, x) in cols {
            for &(b, y) in cols {
                h[a as usize * d + b as usize] += x * y;
            }
        }
    }
    h
}

/// Three-body term `sum over walks v - v' - v'' of sigma_plus_v'' n_v' sigma_minus_v`
/// applied bit by bit on the full space.
fn three_body(states: &[u64], n: usize, g: &Hypergraph) -> Vec<f64> {
    let d = states.len();
    let index: HashMap<u64, usize> = states.iter().enumerate().map(|(i, &s)| (s, i)).collect();
    let bit = |v: usize| 1u64 << (n - 1 - v);
    let mut h = vec![0.0; d * d];
    for (col, &s) in states.iter().enumerate() {
        for v in (0..n).filter(|&v| s & bit(v) != 0) {
            let after_lower = s & !bit(v);
            for vp in g.neighbors(v).unwrap() {
                if after_lower & bit(vp) == 0 {
                    continue;
                }
                for vpp in g.neighbors(vp).unwrap() {
                    if after_lower & bit(vpp) != 0 {
                        continue;
                    }
                    let t = after_lower | bit(vpp);
                    h[index[&t] * d + col] += 1.0;
                }
            }
        }
    }
    h
}

/// The `k`-excitation block of the model built on the full space, in the
/// order of ascending lexicographic subsets.
pub fn full_space_block(model: Model, g: &Hypergraph, k: usize) -> Vec<f64> {
    let n = g.n();
    assert!(n <= 20);
    let mut subsets: Vec<Vec<usize>> = Vec::new();
    for s in 0u64..(1 << n) {
        if s.count_ones() as usize == k {
            subsets.push((0..n).filter(|&v| s & (1 << (n - 1 - v)) != 0).collect());
        }
    }
    subsets.sort();
    let states: Vec<u64> = subsets.iter().map(|s| mask(n, s)).collect();
    match model {
        Model::Jj => gram(&states, n, &lowering_single(n)),
        Model::Hg => gram(&states, n, g.edges()),
        Model::ThreeBody => three_body(&states, n, g),
    }
}

/// Deterministic vertex orders: natural, reversed and strided shuffles.
pub fn deletion_orders(n: usize, count: usize) -> Vec<Vec<usize>> {
    let mut orders = vec![(0..n).collect::<Vec<_>>(), (0..n).rev().collect()];
    let mut step = 2;
    while orders.len() < count {
        if gcd(step, n) == 1 {
            let start = orders.len() % n;
            orders.push((0..n).map(|i| (start + i * step) % n).collect());
        }
        step += 1;
        if step > 4 * n + 8 {
            // small n: fall back to rotations
            let r = orders.len() % n;
            orders.push((0..n).map(|i| (i + r) % n).collect());
        }
    }
    orders
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}
