//! Excitation-conserving Hamiltonians restricted to a fixed excitation
//! number, and their top eigenpairs.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::families::k_subsets;
use crate::hypergraph::{binomial, Hypergraph};
use crate::limits::limits;
use crate::linalg::jacobi_eigen;
use crate::state::{Label, SparseState};

/// Tolerance for counting degenerate top eigenvalues.
pub const DEGENERACY_TOL: f64 = 1e-8;

/// A real symmetric operator on the span of the `k`-excitation basis states.
#[derive(Debug, Clone, PartialEq)]
pub struct SubspaceOperator {
    pub n: usize,
    pub k: usize,
    /// Ascending `k`-subsets in lexicographic order.
    pub basis: Vec<Vec<usize>>,
    /// Row-major, `basis.len()` squared entries.
    pub matrix: Vec<f64>,
}

struct Sector {
    n: usize,
    basis: Vec<Vec<usize>>,
    labels: Vec<Label>,
    index: HashMap<Label, usize>,
}

fn subset_label(n: usize, s: &[usize]) -> Label {
    s.iter().fold(0, |acc, &v| acc | 1u128 << (n - 1 - v))
}

impl Sector {
    fn new(n: usize, k: usize) -> Result<Sector> {
        if k > n {
            return Err(Error::Parameter(format!("k = {k} exceeds n = {n}")));
        }
        if n > 127 {
            return Err(Error::Shape(format!("{n} qubits exceed the label width")));
        }
        let limit = limits().sector_dim;
        if binomial(n, k).is_none_or(|d| d > limit) {
            return Err(Error::Budget {
                what: "excitation sector dimension",
                limit,
            });
        }
        let basis = k_subsets(n, k);
        let labels: Vec<Label> = basis.iter().map(|s| subset_label(n, s)).collect();
        let index = labels.iter().enumerate().map(|(i, &l)| (l, i)).collect();
        Ok(Sector {
            n,
            basis,
            labels,
            index,
        })
    }

    fn dim(&self) -> usize {
        self.basis.len()
    }

    fn bit(&self, v: usize) -> Label {
        1u128 << (self.n - 1 - v)
    }

    fn into_operator(self, k: usize, matrix: Vec<f64>) -> SubspaceOperator {
        SubspaceOperator {
            n: self.n,
            k,
            basis: self.basis,
            matrix,
        }
    }
}

impl SubspaceOperator {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.matrix[i * self.dim() + j]
    }

    pub fn symmetry_error(&self) -> f64 {
        let d = self.dim();
        let mut worst: f64 = 0.0;
        for i in 0..d {
            for j in 0..i {
                worst = worst.max((self.get(i, j) - self.get(j, i)).abs());
            }
        }
        worst
    }

    /// Amplitudes of a qubit state on the sector basis.
    pub fn restrict(&self, state: &SparseState) -> Result<Vec<f64>> {
        if state.n() != self.n || state.local_dim() != 2 {
            return Err(Error::Shape(format!(
                "state on {} subsystems for a {}-qubit operator",
                state.n(),
                self.n
            )));
        }
        Ok(self
            .basis
            .iter()
            .map(|s| state.amplitude(subset_label(self.n, s)).re)
            .collect())
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let d = self.dim();
        (0..d)
            .map(|i| (0..d).map(|j| self.matrix[i * d + j] * x[j]).sum())
            .collect()
    }
}

/// `J+ J-` on the `k`-excitation sector: the diagonal `k` plus one for every
/// single-excitation hop.
pub fn build_dicke_jj(n: usize, k: usize) -> Result<SubspaceOperator> {
    let sector = Sector::new(n, k)?;
    let d = sector.dim();
    let mut m = vec![0.0; d * d];
    for (col, &label) in sector.labels.iter().enumerate() {
        m[col * d + col] += k as f64;
        for i in 0..n {
            if label & sector.bit(i) == 0 {
                continue;
            }
            for j in 0..n {
                if label & sector.bit(j) != 0 {
                    continue;
                }
                let row = sector.index[&(label ^ sector.bit(i) ^ sector.bit(j))];
                m[row * d + col] += 1.0;
            }
        }
    }
    Ok(sector.into_operator(k, m))
}

/// `J+^G J-^G`, where `J-^G` removes the excitations of one edge and `J+^G`
/// creates those of one edge: `<S'|H|S>` counts edge pairs `e ⊆ S`,
/// `e' ⊆ S'` with `S \ e = S' \ e'`.
pub fn build_hg(g: &Hypergraph, k: usize) -> Result<SubspaceOperator> {
    if let Some(u) = g.uniformity() {
        if k < u {
            return Err(Error::Parameter(format!(
                "k = {k} is below the edge size {u}"
            )));
        }
    }
    let sector = Sector::new(g.n(), k)?;
    let d = sector.dim();
    let edge_labels: Vec<(usize, Label)> = g
        .edges()
        .iter()
        .map(|e| (e.len(), subset_label(g.n(), e)))
        .collect();
    let mut m = vec![0.0; d * d];
    for (col, &label) in sector.labels.iter().enumerate() {
        for &(size, e) in &edge_labels {
            if label & e != e {
                continue;
            }
            let rest = label & !e;
            for &(size2, e2) in &edge_labels {
                if size2 == size && rest & e2 == 0 {
                    let row = sector.index[&(rest | e2)];
                    m[row * d + col] += 1.0;
                }
            }
        }
    }
    Ok(sector.into_operator(k, m))
}

fn graph_adjacency(g: &Hypergraph) -> Result<Vec<Vec<usize>>> {
    if g.uniformity() != Some(2) {
        return Err(Error::Parameter(
            "the three-body model needs a graph (all edges of size 2)".into(),
        ));
    }
    (0..g.n()).map(|v| g.neighbors(v)).collect()
}

/// Three-body hopping: for every walk `v - v' - v''` an excitation moves
/// from `v` to `v''` provided `v'` is excited. Walks with `v'' = v` give the
/// diagonal `n_v n_v'`.
pub fn build_3body(g: &Hypergraph, k: usize) -> Result<SubspaceOperator> {
    let adj = graph_adjacency(g)?;
    let sector = Sector::new(g.n(), k)?;
    let d = sector.dim();
    let mut m = vec![0.0; d * d];
    for (col, &label) in sector.labels.iter().enumerate() {
        for v in 0..g.n() {
            if label & sector.bit(v) == 0 {
                continue;
            }
            for &mid in &adj[v] {
                if label & sector.bit(mid) == 0 {
                    continue;
                }
                for &end in &adj[mid] {
                    let moved = label ^ sector.bit(v);
                    if moved & sector.bit(end) != 0 {
                        continue;
                    }
                    let row = sector.index[&(moved | sector.bit(end))];
                    m[row * d + col] += 1.0;
                }
            }
        }
    }
    Ok(sector.into_operator(k, m))
}

/// The same operator written as conditional hopping,
/// `sum over v' of n_v' J+(N(v')) J-(N(v'))` with `J(N(v'))` the collective
/// operators of the neighbourhood of `v'`.
pub fn build_3body_conditional(g: &Hypergraph, k: usize) -> Result<SubspaceOperator> {
    let adj = graph_adjacency(g)?;
    let sector = Sector::new(g.n(), k)?;
    let d = sector.dim();
    let mut m = vec![0.0; d * d];
    for (col, &label) in sector.labels.iter().enumerate() {
        for (mid, nb) in adj.iter().enumerate() {
            if label & sector.bit(mid) == 0 {
                continue;
            }
            for &a in nb.iter().filter(|&&a| label & sector.bit(a) != 0) {
                let lowered = label ^ sector.bit(a);
                for &c in nb.iter().filter(|&&c| lowered & sector.bit(c) == 0) {
                    let row = sector.index[&(lowered | sector.bit(c))];
                    m[row * d + col] += 1.0;
                }
            }
        }
    }
    Ok(sector.into_operator(k, m))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Model {
    Jj,
    Hg,
    ThreeBody,
}

impl FromStr for Model {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "jj" => Ok(Model::Jj),
            "hg" => Ok(Model::Hg),
            "3body" | "three_body" => Ok(Model::ThreeBody),
            _ => Err(Error::Parse(format!(
                "unknown model `{s}` (expected jj, hg or 3body)"
            ))),
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Model::Jj => "jj",
            Model::Hg => "hg",
            Model::ThreeBody => "3body",
        })
    }
}

pub fn build(model: Model, g: &Hypergraph, k: usize) -> Result<SubspaceOperator> {
    match model {
        Model::Jj => build_dicke_jj(g.n(), k),
        Model::Hg => build_hg(g, k),
        Model::ThreeBody => build_3body(g, k),
    }
}

/// Literature value of the top eigenvalue the computed one is compared with:
/// `k (N + 1 - k)` for `jj`, `|E|^2` for `hg` and `C(d, 2) |V|` for the
/// three-body model on `d`-regular graphs.
pub fn reference_top_eigenvalue(model: Model, g: &Hypergraph, k: usize) -> Option<f64> {
    match model {
        Model::Jj => g.n().checked_sub(k).map(|r| (k * (r + 1)) as f64),
        Model::Hg => Some((g.edge_count() * g.edge_count()) as f64),
        Model::ThreeBody => {
            let d = g.predicates().degree?;
            Some((d * d.saturating_sub(1) / 2 * g.n()) as f64)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumReport {
    pub dimension: usize,
    pub top_eigenvalue: f64,
    /// Eigenvalues within `1e-8` of the top one.
    pub degeneracy: usize,
    /// Weight of the normalized target in the top eigenspace; for a
    /// non-degenerate top eigenvalue this is `|<target|v>|^2`.
    pub overlap: Option<f64>,
    /// Rayleigh quotient of the target and `||H t - mu t||`.
    pub target_rayleigh: Option<f64>,
    pub target_residual: Option<f64>,
    pub jacobi_off_norm: f64,
    pub spectrum: Vec<f64>,
}

/// Rayleigh quotient and eigen-residual of a state in the sector.
pub fn eigen_residual(op: &SubspaceOperator, state: &SparseState) -> Result<(f64, f64)> {
    let mut t = op.restrict(state)?;
    let norm = t.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm < 1e-12 {
        return Err(Error::Precondition(
            "target has no weight in the sector".into(),
        ));
    }
    for x in &mut t {
        *x /= norm;
    }
    let ht = op.apply(&t);
    let mu: f64 = ht.iter().zip(&t).map(|(a, b)| a * b).sum();
    let residual = ht
        .iter()
        .zip(&t)
        .map(|(a, b)| (a - mu * b).powi(2))
        .sum::<f64>()
        .sqrt();
    Ok((mu, residual))
}

/// Dense diagonalization by cyclic Jacobi.
pub fn top_eigenpair(
    op: &SubspaceOperator,
    target: Option<&SparseState>,
) -> Result<SpectrumReport> {
    let d = op.dim();
    if d == 0 {
        return Err(Error::Shape("empty sector".into()));
    }
    let eig = jacobi_eigen(d, &op.matrix)?;
    let top = eig.values[0];
    let degeneracy = eig
        .values
        .iter()
        .take_while(|&&x| top - x <= DEGENERACY_TOL * top.abs().max(1.0))
        .count();
    let (mut overlap, mut rayleigh, mut residual) = (None, None, None);
    if let Some(state) = target {
        let t = op.restrict(state)?;
        let norm2: f64 = t.iter().map(|x| x * x).sum();
        if norm2 > 1e-24 {
            let weight: f64 = (0..degeneracy)
                .map(|j| {
                    let v = eig.vector(j);
                    let dot: f64 = v.iter().zip(&t).map(|(a, b)| a * b).sum();
                    dot * dot
                })
                .sum();
            overlap = Some((weight / norm2).min(1.0));
            let (mu, r) = eigen_residual(op, state)?;
            rayleigh = Some(mu);
            residual = Some(r);
        } else {
            overlap = Some(0.0);
        }
    }
    Ok(SpectrumReport {
        dimension: d,
        top_eigenvalue: top,
        degeneracy,
        overlap,
        target_rayleigh: rayleigh,
        target_residual: residual,
        jacobi_off_norm: eig.off_norm,
        spectrum: eig.values,
    })
}
