//! Sparse pure states over `n` subsystems of a fixed local dimension.
//!
//! Basis labels are packed into a `u128` with vertex 0 as the most significant
//! digit, so the numeric order of labels matches the lexicographic order of
//! their strings (`"1100"` has vertex 0 excited).

use std::collections::{BTreeMap, HashMap};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::limits::limits;
use crate::symmetry::Permutation;

pub type Label = u128;

/// Amplitudes with modulus below this are dropped.
pub const PRUNE: f64 = 1e-15;

#[derive(Debug, Clone, PartialEq)]
pub struct SparseState {
    n: usize,
    local_dim: usize,
    amps: BTreeMap<Label, Complex64>,
}

fn capacity_ok(n: usize, local_dim: usize) -> bool {
    if local_dim < 2 {
        return false;
    }
    let mut acc: u128 = 1;
    for _ in 0..n {
        match acc.checked_mul(local_dim as u128) {
            Some(x) => acc = x,
            None => return false,
        }
    }
    true
}

impl SparseState {
    /// Build a normalized state from (label, amplitude) pairs. Repeated labels
    /// are summed; tiny amplitudes are pruned.
    pub fn new<I>(n: usize, local_dim: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Label, Complex64)>,
    {
        if !capacity_ok(n, local_dim) {
            return Err(Error::Shape(format!(
                "{n} subsystems of dimension {local_dim} do not fit a 128-bit label"
            )));
        }
        let bound = (local_dim as u128).pow(n as u32);
        let mut amps: BTreeMap<Label, Complex64> = BTreeMap::new();
        for (label, a) in terms {
            if label >= bound {
                return Err(Error::Shape(format!("label {label} out of range")));
            }
            *amps.entry(label).or_default() += a;
        }
        amps.retain(|_, a| a.norm() >= PRUNE);
        let norm = amps.values().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm < PRUNE {
            return Err(Error::ZeroNorm);
        }
        for a in amps.values_mut() {
            *a /= norm;
        }
        Ok(SparseState { n, local_dim, amps })
    }

    /// Qubit state from real amplitudes.
    pub fn qubits<I>(n: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Label, f64)>,
    {
        SparseState::new(
            n,
            2,
            terms.into_iter().map(|(l, a)| (l, Complex64::new(a, 0.0))),
        )
    }

    /// Computational basis state.
    pub fn basis(n: usize, local_dim: usize, label: Label) -> Result<Self> {
        SparseState::new(n, local_dim, [(label, Complex64::new(1.0, 0.0))])
    }

    /// Wrap amplitudes that are already normalized (used by unitary updates).
    pub(crate) fn from_normalized(
        n: usize,
        local_dim: usize,
        mut amps: BTreeMap<Label, Complex64>,
    ) -> Self {
        amps.retain(|_, a| a.norm() >= PRUNE);
        SparseState { n, local_dim, amps }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn local_dim(&self) -> usize {
        self.local_dim
    }

    pub fn amplitudes(&self) -> &BTreeMap<Label, Complex64> {
        &self.amps
    }

    pub fn amplitude(&self, label: Label) -> Complex64 {
        self.amps.get(&label).copied().unwrap_or_default()
    }

    pub fn support_size(&self) -> usize {
        self.amps.len()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.values().map(|a| a.norm_sqr()).sum()
    }

    fn place(&self, p: usize) -> u128 {
        (self.local_dim as u128).pow((self.n - 1 - p) as u32)
    }

    /// Digit of subsystem `p` in `label`.
    pub fn digit(&self, label: Label, p: usize) -> usize {
        ((label / self.place(p)) % self.local_dim as u128) as usize
    }

    pub fn digits(&self, label: Label) -> Vec<usize> {
        (0..self.n).map(|p| self.digit(label, p)).collect()
    }

    pub fn label_from_digits(&self, digits: &[usize]) -> Label {
        digits
            .iter()
            .fold(0u128, |acc, &d| acc * self.local_dim as u128 + d as u128)
    }

    /// Render a label as its digit string, vertex 0 first.
    pub fn label_string(&self, label: Label) -> String {
        self.digits(label)
            .into_iter()
            .map(|d| char::from_digit(d as u32, 36).expect("local_dim <= 36"))
            .collect()
    }

    pub fn parse_label(&self, s: &str) -> Result<Label> {
        if s.chars().count() != self.n {
            return Err(Error::Parse(format!(
                "label `{s}` has length {}, expected {}",
                s.chars().count(),
                self.n
            )));
        }
        let digits = s
            .chars()
            .map(|c| match c.to_digit(36) {
                Some(d) if (d as usize) < self.local_dim => Ok(d as usize),
                _ => Err(Error::Parse(format!("invalid digit `{c}` in label `{s}`"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(self.label_from_digits(&digits))
    }

    /// Move the digit at position `i` to position `perm[i]`.
    pub fn permute_label(&self, label: Label, perm: &Permutation) -> Label {
        let digits = self.digits(label);
        let mut out = vec![0; self.n];
        for (i, &d) in digits.iter().enumerate() {
            out[perm.image()[i]] = d;
        }
        self.label_from_digits(&out)
    }

    pub fn permuted(&self, perm: &Permutation) -> Result<SparseState> {
        if perm.len() != self.n {
            return Err(Error::Shape(format!(
                "permutation on {} points applied to {} subsystems",
                perm.len(),
                self.n
            )));
        }
        let amps = self
            .amps
            .iter()
            .map(|(&l, &a)| (self.permute_label(l, perm), a))
            .collect();
        Ok(SparseState::from_normalized(self.n, self.local_dim, amps))
    }

    /// Euclidean distance to another state of the same shape.
    pub fn distance(&self, other: &SparseState) -> Result<f64> {
        self.check_shape(other)?;
        let mut acc = 0.0;
        for (l, a) in &self.amps {
            acc += (a - other.amplitude(*l)).norm_sqr();
        }
        for (l, b) in &other.amps {
            if !self.amps.contains_key(l) {
                acc += b.norm_sqr();
            }
        }
        Ok(acc.sqrt())
    }

    pub fn inner(&self, other: &SparseState) -> Result<Complex64> {
        self.check_shape(other)?;
        Ok(self
            .amps
            .iter()
            .map(|(l, a)| a.conj() * other.amplitude(*l))
            .sum())
    }

    fn check_shape(&self, other: &SparseState) -> Result<()> {
        if self.n != other.n || self.local_dim != other.local_dim {
            return Err(Error::Shape(format!(
                "states of shape ({}, {}) and ({}, {})",
                self.n, self.local_dim, other.n, other.local_dim
            )));
        }
        Ok(())
    }

    pub fn to_json(&self) -> StateJson {
        StateJson {
            n: self.n,
            local_dim: self.local_dim,
            amps: self
                .amps
                .iter()
                .map(|(&l, a)| (self.label_string(l), [a.re, a.im]))
                .collect(),
        }
    }
}

/// On-disk representation: `{"n": 2, "local_dim": 2, "amps": {"01": [0.7071, 0.0]}}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateJson {
    pub n: usize,
    #[serde(default = "default_local_dim")]
    pub local_dim: usize,
    pub amps: BTreeMap<String, [f64; 2]>,
}

fn default_local_dim() -> usize {
    2
}

impl StateJson {
    pub fn into_state(self) -> Result<SparseState> {
        if self.local_dim > 36 || !capacity_ok(self.n, self.local_dim) {
            return Err(Error::Shape(format!(
                "unsupported shape n = {}, local_dim = {}",
                self.n, self.local_dim
            )));
        }
        let probe = SparseState {
            n: self.n,
            local_dim: self.local_dim,
            amps: BTreeMap::new(),
        };
        let terms = self
            .amps
            .iter()
            .map(|(s, [re, im])| Ok((probe.parse_label(s)?, Complex64::new(*re, *im))))
            .collect::<Result<Vec<_>>>()?;
        SparseState::new(self.n, self.local_dim, terms)
    }
}

/// Bit of vertex `v` in an `n`-qubit label.
pub fn qubit_mask(n: usize, v: usize) -> Label {
    1u128 << (n - 1 - v)
}

/// Uniform superposition over the edge-indicator strings of `g`.
pub fn excitation_state(g: &Hypergraph) -> Result<SparseState> {
    if g.edge_count() == 0 {
        return Err(Error::NoEdges);
    }
    if g.n() > 127 {
        return Err(Error::Shape(format!(
            "{} qubits exceed the label width",
            g.n()
        )));
    }
    let amp = 1.0 / (g.edge_count() as f64).sqrt();
    let terms = g.edges().iter().map(|e| {
        let label = e.iter().fold(0u128, |acc, &v| acc | qubit_mask(g.n(), v));
        (label, Complex64::new(amp, 0.0))
    });
    SparseState::new(g.n(), 2, terms)
}

/// Dense Hermitian matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl DensityMatrix {
    pub fn from_rows(dim: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != dim * dim {
            return Err(Error::Shape(format!(
                "{} entries for dimension {dim}",
                data.len()
            )));
        }
        Ok(DensityMatrix { dim, data })
    }

    pub fn from_real(dim: usize, data: &[f64]) -> Result<Self> {
        DensityMatrix::from_rows(dim, data.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.dim + j]
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn max_abs_diff(&self, other: &DensityMatrix) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn hermiticity_error(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.dim {
            for j in 0..self.dim {
                worst = worst.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        worst
    }

    /// Determinant of a 2x2 matrix.
    pub fn det2(&self) -> Result<Complex64> {
        if self.dim != 2 {
            return Err(Error::Shape(format!("det2 on dimension {}", self.dim)));
        }
        Ok(self.get(0, 0) * self.get(1, 1) - self.get(0, 1) * self.get(1, 0))
    }

    pub fn to_json(&self) -> DensityJson {
        DensityJson {
            dim: self.dim,
            re: (0..self.dim)
                .map(|i| (0..self.dim).map(|j| self.get(i, j).re).collect())
                .collect(),
            im: (0..self.dim)
                .map(|i| (0..self.dim).map(|j| self.get(i, j).im).collect())
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityJson {
    pub dim: usize,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

/// Partial trace onto `subset`, whose order fixes the subsystem order of the
/// result (first listed = most significant).
pub fn reduced_density(state: &SparseState, subset: &[usize]) -> Result<DensityMatrix> {
    if subset.is_empty() {
        return Err(Error::Parameter("empty subset".into()));
    }
    let mut seen = vec![false; state.n()];
    for &v in subset {
        if v >= state.n() {
            return Err(Error::IndexOutOfRange {
                index: v,
                n: state.n(),
            });
        }
        if std::mem::replace(&mut seen[v], true) {
            return Err(Error::Parameter(format!("subsystem {v} listed twice")));
        }
    }
    let d = state.local_dim();
    let dim = (d as u128)
        .checked_pow(subset.len() as u32)
        .unwrap_or(u128::MAX);
    let limit = limits().reduced_dim;
    if dim > limit as u128 {
        return Err(Error::Budget {
            what: "reduced density matrix dimension",
            limit,
        });
    }
    let dim = dim as usize;
    let mut groups: HashMap<Label, Vec<(usize, Complex64)>> = HashMap::new();
    for (&label, &a) in state.amplitudes() {
        let mut rest = label;
        let mut index = 0usize;
        for &v in subset {
            let digit = state.digit(label, v);
            rest -= digit as u128 * state.place(v);
            index = index * d + digit;
        }
        groups.entry(rest).or_default().push((index, a));
    }
    let mut data = vec![Complex64::default(); dim * dim];
    for terms in groups.values() {
        for &(i, a) in terms {
            for &(j, b) in terms {
                data[i * dim + j] += a * b.conj();
            }
        }
    }
    DensityMatrix::from_rows(dim, data)
}

/// The two-qubit reduction of an excitation state assembled from the pair
/// statistics, in the basis `|v w>` = 00, 01, 10, 11.
///
/// The block form needs the edge set to create no coherence other than the
/// `|01> <-> |10>` one; this always holds for uniform hypergraphs and is
/// checked otherwise.
pub fn reduced_2q_closed_form(g: &Hypergraph, v: usize, w: usize) -> Result<DensityMatrix> {
    let st = g.pair_stats(v, w)?;
    if g.uniformity().is_none() {
        check_block_form(g, v, w)?;
    }
    let e = st.edge_count as f64;
    let mut m = [0.0f64; 16];
    m[0] = st.lambda() as f64 / e;
    m[5] = (st.degree_w - st.section) as f64 / e;
    m[10] = (st.degree_v - st.section) as f64 / e;
    m[15] = st.section as f64 / e;
    m[6] = st.joint_neighborhood as f64 / e;
    m[9] = m[6];
    DensityMatrix::from_real(4, &m)
}

fn check_block_form(g: &Hypergraph, v: usize, w: usize) -> Result<()> {
    let mut patterns: HashMap<Vec<usize>, u8> = HashMap::new();
    for e in g.edges() {
        let rest: Vec<usize> = e.iter().copied().filter(|&x| x != v && x != w).collect();
        let bit = match (e.contains(&v), e.contains(&w)) {
            (false, false) => 1,
            (false, true) => 2,
            (true, false) => 4,
            (true, true) => 8,
        };
        *patterns.entry(rest).or_default() |= bit;
    }
    for p in patterns.values() {
        if p.count_ones() > 1 && *p != 2 | 4 {
            return Err(Error::Precondition(format!(
                "edges around ({v}, {w}) produce coherences outside the block form"
            )));
        }
    }
    Ok(())
}

/// `|<a|b>|^2`.
pub fn fidelity(a: &SparseState, b: &SparseState) -> Result<f64> {
    Ok(a.inner(b)?.norm_sqr())
}

/// Whether `state` is the tensor product of its restrictions to the blocks of
/// `partition`, within `1e-10` in Euclidean norm.
pub fn separability_check(state: &SparseState, partition: &[Vec<usize>]) -> Result<bool> {
    let n = state.n();
    let mut owner = vec![usize::MAX; n];
    for (b, block) in partition.iter().enumerate() {
        for &v in block {
            if v >= n {
                return Err(Error::IndexOutOfRange { index: v, n });
            }
            if owner[v] != usize::MAX {
                return Err(Error::Parameter(format!("vertex {v} in two blocks")));
            }
            owner[v] = b;
        }
    }
    if owner.contains(&usize::MAX) || partition.iter().any(Vec::is_empty) {
        return Err(Error::Parameter(
            "partition must cover every subsystem".into(),
        ));
    }
    Ok(product_residual(state, partition)? <= 1e-10)
}

/// Distance between the state and the product of its block restrictions
/// through the largest amplitude.
fn product_residual(state: &SparseState, partition: &[Vec<usize>]) -> Result<f64> {
    let (&pivot, &pivot_amp) = state
        .amplitudes()
        .iter()
        .max_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))
        .ok_or(Error::ZeroNorm)?;
    let pivot_digits = state.digits(pivot);
    let mut factors: Vec<Vec<(Vec<usize>, Complex64)>> = Vec::new();
    for block in partition {
        let mut entries = Vec::new();
        for (&label, &a) in state.amplitudes() {
            let digits = state.digits(label);
            let off_block_matches = (0..state.n())
                .filter(|p| !block.contains(p))
                .all(|p| digits[p] == pivot_digits[p]);
            if off_block_matches {
                entries.push((block.iter().map(|&p| digits[p]).collect(), a));
            }
        }
        factors.push(entries);
    }
    let size: usize = factors.iter().map(Vec::len).product();
    let limit = limits().state_terms;
    if size > limit {
        return Err(Error::Budget {
            what: "product state expansion",
            limit,
        });
    }
    let scale = pivot_amp.powi(partition.len() as i32 - 1);
    let mut product: BTreeMap<Label, Complex64> = BTreeMap::new();
    let mut stack: Vec<(Vec<usize>, Complex64)> =
        vec![(pivot_digits.clone(), Complex64::new(1.0, 0.0))];
    for (block, entries) in partition.iter().zip(&factors) {
        let mut next = Vec::with_capacity(stack.len() * entries.len());
        for (digits, amp) in &stack {
            for (local, a) in entries {
                let mut d = digits.clone();
                for (&p, &x) in block.iter().zip(local) {
                    d[p] = x;
                }
                next.push((d, amp * a));
            }
        }
        stack = next;
    }
    for (digits, amp) in stack {
        *product.entry(state.label_from_digits(&digits)).or_default() += amp / scale;
    }
    let mut acc = 0.0;
    for (l, a) in &product {
        acc += (a - state.amplitude(*l)).norm_sqr();
    }
    for (l, a) in state.amplitudes() {
        if !product.contains_key(l) {
            acc += a.norm_sqr();
        }
    }
    Ok(acc.sqrt())
}
