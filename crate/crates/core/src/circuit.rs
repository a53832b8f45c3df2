//! Disentangling and preparation circuits for excitation states of graphs,
//! a sparse simulator for them and CNOT accounting.
//!
//! Every non-X gate is a real Givens rotation between two basis patterns of
//! its targets, the identity elsewhere. With parameters `(a, b)` (the weight
//! carried by the source pattern and the weight already on the destination)
//! the forward rotation moves all weight onto the destination:
//! `dst <- c dst + s src`, `src <- -s dst + c src`, with
//! `c = sqrt(b / (a + b))` and `s = sqrt(a / (a + b))`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::state::{Label, SparseState};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GateKind {
    U1,
    U2,
    U3,
    U4,
    X,
}

impl GateKind {
    pub fn cnot_cost(self) -> usize {
        match self {
            GateKind::U1 => 10,
            GateKind::U2 => 6,
            GateKind::U3 => 1,
            GateKind::U4 => 3,
            GateKind::X => 0,
        }
    }

    pub fn arity(self) -> usize {
        match self {
            GateKind::U1 | GateKind::U2 => 3,
            GateKind::U3 | GateKind::U4 => 2,
            GateKind::X => 1,
        }
    }

    /// (source, destination) bit patterns over the targets, first target most
    /// significant.
    fn patterns(self) -> Option<(u8, u8)> {
        match self {
            GateKind::U1 | GateKind::U2 => Some((0b101, 0b011)),
            GateKind::U3 => Some((0b11, 0b01)),
            GateKind::U4 => Some((0b01, 0b10)),
            GateKind::X => None,
        }
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

fn is_false(b: &bool) -> bool {
    !*b
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Gate {
    pub kind: GateKind,
    pub targets: Vec<usize>,
    /// `[a, b]` for rotations, empty for X.
    #[serde(default)]
    pub params: Vec<f64>,
    /// Transposed rotation.
    #[serde(default, skip_serializing_if = "is_false")]
    pub inverse: bool,
}

impl Gate {
    pub fn rotation(kind: GateKind, targets: Vec<usize>, a: f64, b: f64) -> Gate {
        Gate {
            kind,
            targets,
            params: vec![a, b],
            inverse: false,
        }
    }

    pub fn x(target: usize) -> Gate {
        Gate {
            kind: GateKind::X,
            targets: vec![target],
            params: Vec::new(),
            inverse: false,
        }
    }

    pub fn inverted(&self) -> Gate {
        Gate {
            inverse: self.kind != GateKind::X && !self.inverse,
            ..self.clone()
        }
    }

    fn validate(&self, n: usize) -> Result<()> {
        if self.targets.len() != self.kind.arity() {
            return Err(Error::Shape(format!(
                "{} acts on {} qubits, got {:?}",
                self.kind,
                self.kind.arity(),
                self.targets
            )));
        }
        for (i, &t) in self.targets.iter().enumerate() {
            if t >= n {
                return Err(Error::IndexOutOfRange { index: t, n });
            }
            if self.targets[..i].contains(&t) {
                return Err(Error::Shape(format!(
                    "repeated target {t} in {}",
                    self.kind
                )));
            }
        }
        match (self.kind, self.params.as_slice()) {
            (GateKind::X, []) => Ok(()),
            (GateKind::X, _) => Err(Error::Parameter("X takes no parameters".into())),
            (_, &[a, b])
                if a >= 0.0 && b >= 0.0 && a + b > 0.0 && a.is_finite() && b.is_finite() =>
            {
                Ok(())
            }
            (k, p) => Err(Error::Parameter(format!(
                "{k} needs two nonnegative parameters with positive sum, got {p:?}"
            ))),
        }
    }

    /// `(c, s)` of the forward rotation.
    fn cos_sin(&self) -> (f64, f64) {
        let (a, b) = (self.params[0], self.params[1]);
        ((b / (a + b)).sqrt(), (a / (a + b)).sqrt())
    }

    /// The gate as a dense real matrix on its targets (row-major, first
    /// target most significant).
    pub fn matrix(&self) -> Vec<f64> {
        let dim = 1usize << self.targets.len();
        let mut m = vec![0.0; dim * dim];
        match self.kind.patterns() {
            None => {
                m[1] = 1.0;
                m[2] = 1.0;
            }
            Some((src, dst)) => {
                for i in 0..dim {
                    m[i * dim + i] = 1.0;
                }
                let (src, dst) = (src as usize, dst as usize);
                let (c, s) = self.cos_sin();
                let s = if self.inverse { -s } else { s };
                m[dst * dim + dst] = c;
                m[dst * dim + src] = s;
                m[src * dim + dst] = -s;
                m[src * dim + src] = c;
            }
        }
        m
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Circuit {
    pub n: usize,
    pub gates: Vec<Gate>,
    pub cnot_cost: usize,
}

impl Circuit {
    pub fn new(n: usize, gates: Vec<Gate>) -> Result<Circuit> {
        for g in &gates {
            g.validate(n)?;
        }
        let cnot_cost = gates.iter().map(|g| g.kind.cnot_cost()).sum();
        Ok(Circuit {
            n,
            gates,
            cnot_cost,
        })
    }

    /// Check a deserialized circuit, including its stated cost.
    pub fn validate(&self) -> Result<()> {
        let rebuilt = Circuit::new(self.n, self.gates.clone())?;
        if rebuilt.cnot_cost != self.cnot_cost {
            return Err(Error::Parameter(format!(
                "stated cnot_cost {} differs from the gate total {}",
                self.cnot_cost, rebuilt.cnot_cost
            )));
        }
        Ok(())
    }

    /// Gate counts by kind, in kind order.
    pub fn gate_counts(&self) -> BTreeMap<String, usize> {
        let mut out = BTreeMap::new();
        for g in &self.gates {
            *out.entry(g.kind.to_string()).or_default() += 1;
        }
        out
    }
}

pub fn cnot_cost(c: &Circuit) -> usize {
    c.gates.iter().map(|g| g.kind.cnot_cost()).sum()
}

/// Reverse the gate order and transpose every rotation.
pub fn invert(c: &Circuit) -> Circuit {
    Circuit {
        n: c.n,
        gates: c.gates.iter().rev().map(Gate::inverted).collect(),
        cnot_cost: c.cnot_cost,
    }
}

fn target_bits(n: usize, targets: &[usize]) -> Vec<Label> {
    targets.iter().map(|&t| 1u128 << (n - 1 - t)).collect()
}

fn spread(pattern: u8, bits: &[Label]) -> Label {
    let k = bits.len();
    bits.iter()
        .enumerate()
        .filter(|(i, _)| pattern >> (k - 1 - i) & 1 == 1)
        .fold(0, |acc, (_, b)| acc | b)
}

fn apply_gate(amps: &mut BTreeMap<Label, Complex64>, n: usize, gate: &Gate) {
    let bits = target_bits(n, &gate.targets);
    let mask: Label = bits.iter().fold(0, |a, b| a | b);
    let Some((src, dst)) = gate.kind.patterns() else {
        let flip = bits[0];
        let moved: BTreeMap<Label, Complex64> = amps.iter().map(|(&l, &a)| (l ^ flip, a)).collect();
        *amps = moved;
        return;
    };
    let (src, dst) = (spread(src, &bits), spread(dst, &bits));
    let bases: BTreeSet<Label> = amps
        .keys()
        .filter(|&&l| l & mask == src || l & mask == dst)
        .map(|&l| l & !mask)
        .collect();
    let (c, s) = gate.cos_sin();
    let s = if gate.inverse { -s } else { s };
    for base in bases {
        let x = amps.remove(&(base | src)).unwrap_or_default();
        let y = amps.remove(&(base | dst)).unwrap_or_default();
        let new_dst = c * y + s * x;
        let new_src = -s * y + c * x;
        if new_dst.norm() >= crate::state::PRUNE {
            amps.insert(base | dst, new_dst);
        }
        if new_src.norm() >= crate::state::PRUNE {
            amps.insert(base | src, new_src);
        }
    }
}

/// Run the circuit on a qubit state.
pub fn apply_circuit(state: &SparseState, c: &Circuit) -> Result<SparseState> {
    if state.n() != c.n || state.local_dim() != 2 {
        return Err(Error::Shape(format!(
            "circuit on {} qubits applied to a state with n = {}, local_dim = {}",
            c.n,
            state.n(),
            state.local_dim()
        )));
    }
    for g in &c.gates {
        g.validate(c.n)?;
    }
    let mut amps = state.amplitudes().clone();
    for g in &c.gates {
        apply_gate(&mut amps, c.n, g);
    }
    Ok(SparseState::from_normalized(c.n, 2, amps))
}

fn check_graph(g: &Hypergraph) -> Result<()> {
    if g.edge_count() == 0 {
        return Err(Error::NoEdges);
    }
    if g.edges().iter().any(|e| e.len() > 2) {
        return Err(Error::Parameter(
            "circuit synthesis supports edges of at most two vertices".into(),
        ));
    }
    if g.n() > 127 {
        return Err(Error::Shape(format!(
            "{} qubits exceed the label width",
            g.n()
        )));
    }
    if g.uniformity() != Some(1) && !g.is_connected() {
        return Err(Error::Disconnected);
    }
    Ok(())
}

fn check_order(n: usize, order: Option<&[usize]>) -> Result<Vec<usize>> {
    let order = order.map_or_else(|| (0..n).collect(), <[usize]>::to_vec);
    let mut seen = vec![false; n];
    if order.len() != n
        || order
            .iter()
            .any(|&v| v >= n || std::mem::replace(&mut seen[v], true))
    {
        return Err(Error::Parameter(format!(
            "{order:?} is not an ordering of 0..{n}"
        )));
    }
    Ok(order)
}

/// Circuit mapping the excitation state of a connected graph (or of a
/// single-vertex-edge hypergraph) to the basis state with one excitation on
/// the first vertex of `order`.
///
/// Each vertex but the last in `order` is deleted in turn: its remaining
/// edges are merged onto the edge to its largest remaining neighbour
/// (U1 then U2) and that edge onto the vertex alone (U3). The weighted
/// single-excitation remainder is then gathered on the anchor by U4 gates.
pub fn synthesize_disentangler(g: &Hypergraph, order: Option<&[usize]>) -> Result<Circuit> {
    check_graph(g)?;
    let n = g.n();
    let order = check_order(n, order)?;
    let mut adj: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    let mut weight = vec![0usize; n];
    for e in g.edges() {
        match e.as_slice() {
            [v] => weight[*v] += 1,
            [u, v] => {
                let (u, v) = (*u, *v);
                adj[u].insert(v);
                adj[v].insert(u);
            }
            _ => unreachable!("checked above"),
        }
    }
    let mut gates = Vec::new();
    for &v in &order[..n - 1] {
        let nb: Vec<usize> = adj[v].iter().copied().collect();
        let d = nb.len();
        if d == 0 {
            continue;
        }
        let last = nb[d - 1];
        for i in 1..d.saturating_sub(1) {
            gates.push(Gate::rotation(
                GateKind::U1,
                vec![nb[i - 1], last, v],
                1.0,
                i as f64,
            ));
        }
        if d >= 2 {
            gates.push(Gate::rotation(
                GateKind::U2,
                vec![nb[d - 2], last, v],
                1.0,
                (d - 1) as f64,
            ));
        }
        gates.push(Gate::rotation(
            GateKind::U3,
            vec![last, v],
            d as f64,
            weight[v] as f64,
        ));
        weight[v] += d;
        for u in nb {
            adj[u].remove(&v);
        }
        adj[v].clear();
    }
    let anchor = order[0];
    let mut acc = weight[anchor];
    for &v in &order[1..] {
        gates.push(Gate::rotation(
            GateKind::U4,
            vec![anchor, v],
            weight[v] as f64,
            acc as f64,
        ));
        acc += weight[v];
    }
    Circuit::new(n, gates)
}

/// X on the anchor followed by the inverted disentangler; maps the vacuum to
/// the excitation state.
pub fn preparation_circuit(g: &Hypergraph, order: Option<&[usize]>) -> Result<Circuit> {
    let dis = synthesize_disentangler(g, order)?;
    let anchor = check_order(g.n(), order)?[0];
    let mut gates = vec![Gate::x(anchor)];
    gates.extend(invert(&dis).gates);
    Circuit::new(g.n(), gates)
}

/// CNOTs needed to delete a vertex of current degree `d`:
/// `1 + 6 theta(d - 1) + 10 theta(d - 2) (d - 2)` with `theta(0) = 0`.
pub fn deletion_cost(d: usize) -> usize {
    match d {
        0 => 0,
        1 => 1,
        _ => 7 + 10 * (d - 2),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    Sparse,
    Medium,
    Dense,
}

impl FromStr for Regime {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sparse" => Ok(Regime::Sparse),
            "medium" => Ok(Regime::Medium),
            "dense" => Ok(Regime::Dense),
            _ => Err(Error::Parse(format!("unknown regime `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegimeEstimate {
    pub regime: Regime,
    pub formula: &'static str,
    pub estimate: usize,
    /// `|E| / |V|`.
    pub edge_ratio: f64,
}

/// Edge density below which the sparse estimate is used.
pub const SPARSE_RATIO: f64 = 1.25;
/// Edge density from which the dense estimate is used.
pub const DENSE_RATIO: f64 = 2.0;

/// Coarse CNOT estimate by edge density: `4(|V|-1)` for tree-like graphs,
/// `7(|V|-1)` when most deletions need one U2, and `10|E| + 2|V| - 2` when U1
/// gates dominate.
pub fn regime_estimate(g: &Hypergraph) -> RegimeEstimate {
    let v = g.n();
    let e = g.edge_count();
    let r = e as f64 / v.max(1) as f64;
    let (regime, formula, estimate) = if r < SPARSE_RATIO {
        (Regime::Sparse, "4(|V|-1)", 4 * v.saturating_sub(1))
    } else if r < DENSE_RATIO {
        (Regime::Medium, "7(|V|-1)", 7 * v.saturating_sub(1))
    } else {
        (
            Regime::Dense,
            "10|E|+2|V|-2",
            (10 * e + 2 * v).saturating_sub(2),
        )
    };
    RegimeEstimate {
        regime,
        formula,
        estimate,
        edge_ratio: r,
    }
}
