//! Permutation groups acting on subsystem positions, and the symmetric states
//! they generate.
//!
//! A permutation acts on a basis label by moving the digit at position `i` to
//! position `image[i]`.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::limits::limits;
use crate::state::{Label, SparseState};

/// Amplitude tolerance for invariance checks on normalized states.
pub const INVARIANCE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    image: Vec<usize>,
}

impl Permutation {
    pub fn new(image: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; image.len()];
        for &x in &image {
            if x >= image.len() || std::mem::replace(&mut seen[x], true) {
                return Err(Error::InvalidPermutation(format!(
                    "{image:?} is not a bijection"
                )));
            }
        }
        Ok(Permutation { image })
    }

    pub fn identity(n: usize) -> Self {
        Permutation {
            image: (0..n).collect(),
        }
    }

    /// Cyclic permutation `points[0] -> points[1] -> ... -> points[0]` on `n` points.
    pub fn cycle(n: usize, points: &[usize]) -> Result<Self> {
        let mut image: Vec<usize> = (0..n).collect();
        for (i, &p) in points.iter().enumerate() {
            if p >= n {
                return Err(Error::IndexOutOfRange { index: p, n });
            }
            image[p] = points[(i + 1) % points.len()];
        }
        Permutation::new(image)
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    pub fn len(&self) -> usize {
        self.image.len()
    }

    pub fn is_empty(&self) -> bool {
        self.image.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(i, &x)| i == x)
    }

    /// `self` after `other`: `i -> self[other[i]]`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation {
            image: other.image.iter().map(|&x| self.image[x]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut image = vec![0; self.image.len()];
        for (i, &x) in self.image.iter().enumerate() {
            image[x] = i;
        }
        Permutation { image }
    }

    pub fn is_even(&self) -> bool {
        let mut seen = vec![false; self.len()];
        let mut transpositions = 0;
        for start in 0..self.len() {
            let mut len = 0;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                x = self.image[x];
                len += 1;
            }
            if len > 0 {
                transpositions += len - 1;
            }
        }
        transpositions % 2 == 0
    }

    /// Action on an `n`-qubit label.
    pub fn apply_bits(&self, label: Label) -> Label {
        let n = self.len();
        let mut out = 0u128;
        for i in 0..n {
            if label >> (n - 1 - i) & 1 == 1 {
                out |= 1u128 << (n - 1 - self.image[i]);
            }
        }
        out
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.image)
    }
}

/// A finite permutation group with its elements enumerated.
#[derive(Debug, Clone)]
pub struct PermutationGroup {
    n: usize,
    generators: Vec<Permutation>,
    elements: Vec<Permutation>,
    index: HashSet<Permutation>,
}

impl PartialEq for PermutationGroup {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.index == other.index
    }
}

impl PermutationGroup {
    /// Close a generator set under composition.
    pub fn generate(n: usize, generators: Vec<Permutation>) -> Result<Self> {
        if let Some(g) = generators.iter().find(|g| g.len() != n) {
            return Err(Error::Shape(format!(
                "generator {g} does not act on {n} points"
            )));
        }
        let elements = closure(n, &generators)?;
        let index = elements.iter().cloned().collect();
        Ok(PermutationGroup {
            n,
            generators,
            elements,
            index,
        })
    }

    /// Wrap an element list that is already a group, e.g. the output of an
    /// exhaustive search. Only cheap consistency checks are made.
    pub fn from_elements(n: usize, elements: Vec<Permutation>) -> Result<Self> {
        let mut elements = elements;
        elements.sort();
        elements.dedup();
        if let Some(g) = elements.iter().find(|g| g.len() != n) {
            return Err(Error::Shape(format!(
                "element {g} does not act on {n} points"
            )));
        }
        if !elements.iter().any(Permutation::is_identity) {
            return Err(Error::InvalidPermutation(
                "element list lacks the identity".into(),
            ));
        }
        let index = elements.iter().cloned().collect();
        Ok(PermutationGroup {
            n,
            generators: elements.clone(),
            elements,
            index,
        })
    }

    pub fn trivial(n: usize) -> Self {
        PermutationGroup::generate(n, Vec::new()).expect("trivial group fits any budget")
    }

    pub fn symmetric(n: usize) -> Result<Self> {
        let mut gens = Vec::new();
        if n >= 2 {
            gens.push(Permutation::cycle(n, &[0, 1])?);
            gens.push(Permutation::cycle(n, &(0..n).collect::<Vec<_>>())?);
        }
        PermutationGroup::generate(n, gens)
    }

    /// Rotations `i -> i + 1 mod n`.
    pub fn cyclic(n: usize) -> Result<Self> {
        let gens = if n >= 2 {
            vec![Permutation::cycle(n, &(0..n).collect::<Vec<_>>())?]
        } else {
            Vec::new()
        };
        PermutationGroup::generate(n, gens)
    }

    /// Rotations and the reflection `i -> n - 1 - i`.
    pub fn dihedral(n: usize) -> Result<Self> {
        let mut gens = PermutationGroup::cyclic(n)?.generators;
        gens.push(Permutation::new((0..n).rev().collect())?);
        PermutationGroup::generate(n, gens)
    }

    /// Generated by the 3-cycles `(0 1 i)`.
    pub fn alternating(n: usize) -> Result<Self> {
        let gens = (2..n)
            .map(|i| Permutation::cycle(n, &[0, 1, i]))
            .collect::<Result<Vec<_>>>()?;
        PermutationGroup::generate(n, gens)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        self.index.contains(p)
    }

    pub fn is_subgroup_of(&self, other: &PermutationGroup) -> bool {
        self.n == other.n && self.elements.iter().all(|g| other.contains(g))
    }

    /// Orbit of a qubit label under the group, found by a search over the
    /// generators.
    pub fn bit_orbit(&self, seed: Label) -> Vec<Label> {
        let mut seen: HashSet<Label> = HashSet::from([seed]);
        let mut queue = VecDeque::from([seed]);
        while let Some(x) = queue.pop_front() {
            for g in &self.generators {
                let y = g.apply_bits(x);
                if seen.insert(y) {
                    queue.push_back(y);
                }
            }
        }
        let mut orbit: Vec<Label> = seen.into_iter().collect();
        orbit.sort_unstable();
        orbit
    }

    pub fn to_json(&self) -> GroupJson {
        GroupJson {
            n: self.n,
            generators: self.generators.iter().map(|g| g.image.clone()).collect(),
        }
    }
}

/// All products of the generators, by breadth-first search from the identity.
pub fn closure(n: usize, generators: &[Permutation]) -> Result<Vec<Permutation>> {
    let limit = limits().group_order;
    let id = Permutation::identity(n);
    let mut seen: HashSet<Permutation> = HashSet::from([id.clone()]);
    let mut elements = vec![id.clone()];
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in generators {
            let y = g.compose(&x);
            if !seen.contains(&y) {
                if seen.len() >= limit {
                    return Err(Error::Budget {
                        what: "permutation group order",
                        limit,
                    });
                }
                seen.insert(y.clone());
                elements.push(y.clone());
                queue.push_back(y);
            }
        }
    }
    elements.sort();
    Ok(elements)
}

/// `{"n": 4, "generators": [[1, 2, 3, 0]]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupJson {
    pub n: usize,
    pub generators: Vec<Vec<usize>>,
}

impl GroupJson {
    pub fn into_group(self) -> Result<PermutationGroup> {
        let gens = self
            .generators
            .into_iter()
            .map(Permutation::new)
            .collect::<Result<Vec<_>>>()?;
        PermutationGroup::generate(self.n, gens)
    }
}

fn preset(name: &str, n: usize) -> Result<PermutationGroup> {
    match name {
        "symmetric" | "S" => PermutationGroup::symmetric(n),
        "cyclic" | "C" => PermutationGroup::cyclic(n),
        "dihedral" | "D" => PermutationGroup::dihedral(n),
        "alternating" | "A" => PermutationGroup::alternating(n),
        "trivial" | "identity" | "I" => Ok(PermutationGroup::trivial(n)),
        _ => Err(Error::Parse(format!("unknown group preset `{name}`"))),
    }
}

/// Parse a named group on `n` points.
///
/// Accepts `symmetric`, `cyclic`, `dihedral`, `alternating`, `trivial`, or a
/// product such as `S2xS2@[0,2|1,3]`, where each factor (`S`, `C`, `D`, `A`
/// followed by its degree) acts on the matching block and all other points
/// are fixed.
pub fn parse_group(spec: &str, n: usize) -> Result<PermutationGroup> {
    let spec = spec.trim();
    let Some((factors, blocks)) = spec.split_once('@') else {
        return preset(&spec.to_ascii_lowercase(), n);
    };
    let blocks = blocks
        .trim()
        .strip_prefix('[')
        .and_then(|b| b.strip_suffix(']'))
        .ok_or_else(|| Error::Parse(format!("expected [..|..] block list in `{spec}`")))?;
    let blocks: Vec<Vec<usize>> = blocks
        .split('|')
        .map(|b| {
            b.split(',')
                .map(|x| {
                    x.trim()
                        .parse::<usize>()
                        .map_err(|_| Error::Parse(format!("bad point `{x}` in `{spec}`")))
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    let factors: Vec<&str> = factors.split(['x', 'X']).map(str::trim).collect();
    if factors.len() != blocks.len() {
        return Err(Error::Parse(format!(
            "{} factors but {} blocks in `{spec}`",
            factors.len(),
            blocks.len()
        )));
    }
    let mut used = vec![false; n];
    let mut gens = Vec::new();
    for (factor, block) in factors.iter().zip(&blocks) {
        let (kind, degree) = factor.split_at(factor.len().min(1));
        let degree: usize = degree
            .parse()
            .map_err(|_| Error::Parse(format!("bad factor `{factor}` in `{spec}`")))?;
        if degree != block.len() {
            return Err(Error::Parse(format!(
                "factor `{factor}` acts on {degree} points but its block has {}",
                block.len()
            )));
        }
        for &p in block {
            if p >= n {
                return Err(Error::IndexOutOfRange { index: p, n });
            }
            if std::mem::replace(&mut used[p], true) {
                return Err(Error::Parse(format!("point {p} in two blocks of `{spec}`")));
            }
        }
        for g in preset(kind, degree)?.generators() {
            let mut image: Vec<usize> = (0..n).collect();
            for (j, &x) in g.image().iter().enumerate() {
                image[block[j]] = block[x];
            }
            gens.push(Permutation::new(image)?);
        }
    }
    PermutationGroup::generate(n, gens)
}

fn check_qubit_width(n: usize) -> Result<()> {
    if n > 127 {
        return Err(Error::Shape(format!("{n} qubits exceed the label width")));
    }
    Ok(())
}

/// Uniform superposition over the orbit of `1^k 0^(n-k)`.
pub fn dicke_like_state(h: &PermutationGroup, k: usize) -> Result<SparseState> {
    let n = h.n();
    if k > n {
        return Err(Error::Parameter(format!("k = {k} exceeds n = {n}")));
    }
    check_qubit_width(n)?;
    let seed = ((1u128 << k) - 1) << (n - k);
    dicke_like_state_from_seed(h, seed)
}

/// Uniform superposition over the orbit of an arbitrary qubit label.
pub fn dicke_like_state_from_seed(h: &PermutationGroup, seed: Label) -> Result<SparseState> {
    check_qubit_width(h.n())?;
    if h.n() < 128 && seed >> h.n() != 0 {
        return Err(Error::Shape(format!(
            "seed {seed:b} wider than {} qubits",
            h.n()
        )));
    }
    let orbit = h.bit_orbit(seed);
    SparseState::qubits(h.n(), orbit.into_iter().map(|l| (l, 1.0)))
}

/// Normalized sum over `h` of the permuted tensor product of the stars.
/// Stars are single-subsystem vectors of a common dimension and are
/// normalized before use.
pub fn stellar_construct(stars: &[Vec<Complex64>], h: &PermutationGroup) -> Result<SparseState> {
    let n = stars.len();
    if n != h.n() {
        return Err(Error::Shape(format!(
            "{n} stars for a group on {} points",
            h.n()
        )));
    }
    let d = stars
        .first()
        .map(Vec::len)
        .ok_or_else(|| Error::Parameter("no stars".into()))?;
    if d < 2 || stars.iter().any(|s| s.len() != d) {
        return Err(Error::Shape(
            "stars must share a dimension of at least 2".into(),
        ));
    }
    let mut normalized = Vec::with_capacity(n);
    for s in stars {
        let norm = s.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-15 {
            return Err(Error::ZeroNorm);
        }
        normalized.push(s.iter().map(|a| a / norm).collect::<Vec<_>>());
    }
    let limit = limits().state_terms;
    let terms = (d as f64).powi(n as i32) * h.order() as f64;
    if terms > limit as f64 {
        return Err(Error::Budget {
            what: "stellar construction terms",
            limit,
        });
    }
    let mut product: Vec<(Vec<usize>, Complex64)> = vec![(Vec::new(), Complex64::new(1.0, 0.0))];
    for star in &normalized {
        let mut next = Vec::with_capacity(product.len() * d);
        for (digits, amp) in &product {
            for (x, a) in star.iter().enumerate() {
                if a.norm() < 1e-300 {
                    continue;
                }
                let mut digits = digits.clone();
                digits.push(x);
                next.push((digits, amp * a));
            }
        }
        product = next;
    }
    let mut acc: BTreeMap<Label, Complex64> = BTreeMap::new();
    let mut moved = vec![0; n];
    for sigma in h.elements() {
        for (digits, amp) in &product {
            for (i, &x) in digits.iter().enumerate() {
                moved[sigma.image()[i]] = x;
            }
            let label = moved.iter().fold(0u128, |l, &x| l * d as u128 + x as u128);
            *acc.entry(label).or_default() += amp;
        }
    }
    SparseState::new(n, d, acc)
}

/// Whether `perm` leaves the state unchanged, amplitude by amplitude.
pub fn is_invariant(state: &SparseState, perm: &Permutation) -> Result<bool> {
    let moved = state.permuted(perm)?;
    let worst = state
        .amplitudes()
        .iter()
        .map(|(l, a)| (a - moved.amplitude(*l)).norm())
        .chain(
            moved
                .amplitudes()
                .iter()
                .map(|(l, a)| (a - state.amplitude(*l)).norm()),
        )
        .fold(0.0, f64::max);
    Ok(worst <= INVARIANCE_TOL)
}

/// Advance to the next permutation in lexicographic order.
fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
        return false;
    };
    let j = (i..p.len())
        .rev()
        .find(|&j| p[j] > p[i - 1])
        .expect("pivot exists");
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

fn check_symmetric_search(n: usize) -> Result<()> {
    let limit = limits().symmetric_search_max_n;
    if n > limit {
        return Err(Error::Budget {
            what: "search over all permutations",
            limit,
        });
    }
    Ok(())
}

fn all_permutations(n: usize) -> impl Iterator<Item = Permutation> {
    let mut current: Option<Vec<usize>> = Some((0..n).collect());
    std::iter::from_fn(move || {
        let out = current.take()?;
        let mut next = out.clone();
        if next_permutation(&mut next) {
            current = Some(next);
        }
        Some(Permutation { image: out })
    })
}

/// All subsystem permutations leaving the state unchanged.
pub fn stabilizer_group(state: &SparseState) -> Result<PermutationGroup> {
    check_symmetric_search(state.n())?;
    let mut found = Vec::new();
    for p in all_permutations(state.n()) {
        if is_invariant(state, &p)? {
            found.push(p);
        }
    }
    PermutationGroup::from_elements(state.n(), found)
}

/// The permutations that fix every `h`-orbit of qubit labels setwise. A
/// generic real combination of the orbit sums has exactly this stabilizer,
/// so it is the smallest group containing `h` that a qubit state can have.
pub fn realizable_closure(h: &PermutationGroup) -> Result<PermutationGroup> {
    let n = h.n();
    if n > 16 {
        return Err(Error::Budget {
            what: "qubit orbit enumeration",
            limit: 16,
        });
    }
    check_symmetric_search(n)?;
    let mut orbit_of = vec![usize::MAX; 1 << n];
    let mut count = 0;
    for x in 0..(1u128 << n) {
        if orbit_of[x as usize] == usize::MAX {
            for y in h.bit_orbit(x) {
                orbit_of[y as usize] = count;
            }
            count += 1;
        }
    }
    let found: Vec<Permutation> = all_permutations(n)
        .filter(|p| {
            (0..(1u128 << n)).all(|x| orbit_of[p.apply_bits(x) as usize] == orbit_of[x as usize])
        })
        .collect();
    PermutationGroup::from_elements(n, found)
}

pub fn is_realizable(h: &PermutationGroup) -> Result<bool> {
    Ok(realizable_closure(h)?.order() == h.order())
}

/// The weight-`k` sector split into `h`-orbits, each as a normalized uniform
/// superposition. Orbits are listed by decreasing largest label, so the orbit
/// of `1^k 0^(n-k)` comes first.
pub fn orbit_basis(h: &PermutationGroup, k: usize) -> Result<Vec<SparseState>> {
    let n = h.n();
    if k > n {
        return Err(Error::Parameter(format!("k = {k} exceeds n = {n}")));
    }
    check_qubit_width(n)?;
    let size = crate::hypergraph::binomial(n, k).unwrap_or(usize::MAX);
    let limit = limits().state_terms;
    if size > limit {
        return Err(Error::Budget {
            what: "excitation sector size",
            limit,
        });
    }
    let mut assigned: HashMap<Label, usize> = HashMap::new();
    let mut orbits: Vec<Vec<Label>> = Vec::new();
    for subset in crate::families::k_subsets(n, k) {
        let label = subset.iter().fold(0u128, |l, &v| l | 1u128 << (n - 1 - v));
        if assigned.contains_key(&label) {
            continue;
        }
        let orbit = h.bit_orbit(label);
        for &y in &orbit {
            assigned.insert(y, orbits.len());
        }
        orbits.push(orbit);
    }
    orbits.sort_by(|a, b| b.last().cmp(&a.last()));
    orbits
        .into_iter()
        .map(|o| SparseState::qubits(n, o.into_iter().map(|l| (l, 1.0))))
        .collect()
}

/// Local dimension `n` state `sum over sigma in h of |sigma(0) ... sigma(n-1)>`,
/// whose stabilizer is exactly `h`.
pub fn proposition1_state(h: &PermutationGroup) -> Result<SparseState> {
    let n = h.n();
    if !(2..=36).contains(&n) {
        return Err(Error::Parameter(format!("need 2 <= n <= 36, got {n}")));
    }
    let terms: Vec<(Label, Complex64)> = h
        .elements()
        .iter()
        .map(|g| {
            let label = g
                .image()
                .iter()
                .fold(0u128, |l, &x| l * n as u128 + x as u128);
            (label, Complex64::new(1.0, 0.0))
        })
        .collect();
    SparseState::new(n, n, terms)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn perm(v: &[usize]) -> Permutation {
        Permutation::new(v.to_vec()).unwrap()
    }

    #[test]
    fn permutation_basics() {
        assert!(Permutation::new(vec![0, 0]).is_err());
        assert!(Permutation::new(vec![0, 2]).is_err());
        let p = perm(&[1, 2, 0]);
        assert!(p.compose(&p.inverse()).is_identity());
        assert_eq!(p.compose(&p), perm(&[2, 0, 1]));
        assert!(p.is_even());
        assert!(!perm(&[1, 0, 2]).is_even());
        // digit at 0 moves to 1
        assert_eq!(p.apply_bits(0b100), 0b010);
    }

    #[test]
    fn closure_examples() {
        let c6 = PermutationGroup::generate(6, vec![perm(&[1, 2, 3, 4, 5, 0])]).unwrap();
        assert_eq!(c6.order(), 6);
        assert_eq!(PermutationGroup::dihedral(4).unwrap().order(), 8);
        let id = PermutationGroup::generate(5, vec![]).unwrap();
        assert_eq!(id.order(), 1);
        assert!(id.elements()[0].is_identity());
        assert_eq!(PermutationGroup::symmetric(5).unwrap().order(), 120);
        assert_eq!(PermutationGroup::alternating(5).unwrap().order(), 60);
        assert!(PermutationGroup::alternating(4)
            .unwrap()
            .elements()
            .iter()
            .all(Permutation::is_even));
    }

    #[test]
    fn closure_budget() {
        // 10! exceeds the default group order budget.
        assert!(matches!(
            PermutationGroup::symmetric(10),
            Err(Error::Budget { .. })
        ));
    }

    #[test]
    fn product_syntax() {
        let g = parse_group("S2xS2@[0,2|1,3]", 4).unwrap();
        assert_eq!(g.order(), 4);
        assert!(g.contains(&perm(&[2, 1, 0, 3])));
        assert!(g.contains(&perm(&[0, 3, 2, 1])));
        assert!(parse_group("S3xS2@[0,2|1,3]", 4).is_err());
        assert!(parse_group("S2xS2@[0,1|1,3]", 4).is_err());
        assert!(parse_group("wreath", 4).is_err());
        assert_eq!(parse_group("Cyclic", 5).unwrap().order(), 5);
    }

    #[test]
    fn dicke_like_examples() {
        let c4 = PermutationGroup::cyclic(4).unwrap();
        let s = dicke_like_state(&c4, 2).unwrap();
        let expected = SparseState::qubits(
            4,
            [(0b1100, 1.0), (0b0110, 1.0), (0b0011, 1.0), (0b1001, 1.0)],
        )
        .unwrap();
        assert!(s.distance(&expected).unwrap() < 1e-15);

        // The two-term class is not the orbit of 1100 under any group; it is the
        // orbit of 1010 under the Klein embedding, and the block-wise S2xS2
        // leaves it invariant.
        let klein = GroupJson {
            n: 4,
            generators: vec![vec![1, 0, 3, 2], vec![2, 3, 0, 1]],
        }
        .into_group()
        .unwrap();
        let s = dicke_like_state_from_seed(&klein, 0b1010).unwrap();
        let expected = SparseState::qubits(4, [(0b1010, 1.0), (0b0101, 1.0)]).unwrap();
        assert!(s.distance(&expected).unwrap() < 1e-15);
        let s2s2 = parse_group("S2xS2@[0,2|1,3]", 4).unwrap();
        for g in s2s2.elements() {
            assert!(is_invariant(&s, g).unwrap());
        }

        let sym = PermutationGroup::symmetric(5).unwrap();
        assert_eq!(dicke_like_state(&sym, 2).unwrap().support_size(), 10);
        assert_eq!(dicke_like_state(&sym, 0).unwrap().support_size(), 1);
        assert!(dicke_like_state(&sym, 6).is_err());
    }

    #[test]
    fn stellar_examples() {
        let one = vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)];
        let zero = vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)];
        let s3 = PermutationGroup::symmetric(3).unwrap();
        let w = stellar_construct(&[one.clone(), zero.clone(), zero.clone()], &s3).unwrap();
        let expected = SparseState::qubits(3, [(0b100, 1.0), (0b010, 1.0), (0b001, 1.0)]).unwrap();
        assert!(w.distance(&expected).unwrap() < 1e-14);

        let stars: Vec<Vec<Complex64>> = (0..3)
            .map(|k| {
                let phase = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / 3.0);
                vec![Complex64::new(1.0, 0.0), phase]
            })
            .collect();
        let ghz = stellar_construct(&stars, &s3).unwrap();
        let target = SparseState::qubits(3, [(0b000, 1.0), (0b111, 1.0)]).unwrap();
        assert!((crate::state::fidelity(&ghz, &target).unwrap() - 1.0).abs() < 1e-12);

        let id = PermutationGroup::trivial(3);
        let prod = stellar_construct(&[one, zero.clone(), zero], &id).unwrap();
        assert!((prod.amplitude(0b100).norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn stellar_rejects_bad_stars() {
        let s2 = PermutationGroup::symmetric(2).unwrap();
        let zero = vec![Complex64::default(); 2];
        let plus = vec![Complex64::new(1.0, 0.0); 2];
        assert!(matches!(
            stellar_construct(&[zero, plus.clone()], &s2),
            Err(Error::ZeroNorm)
        ));
        assert!(stellar_construct(std::slice::from_ref(&plus), &s2).is_err());
        assert!(
            stellar_construct(&[plus.clone(), vec![Complex64::new(1.0, 0.0); 3]], &s2).is_err()
        );
    }

    #[test]
    fn stabilizer_examples() {
        let chi = SparseState::qubits(3, [(0b001, 1.0), (0b010, 1.0), (0b100, 2.0), (0b111, 2.0)])
            .unwrap();
        let st = stabilizer_group(&chi).unwrap();
        assert_eq!(st.order(), 2);
        assert!(st.contains(&perm(&[0, 2, 1])));

        let d42 = dicke_like_state(&PermutationGroup::cyclic(4).unwrap(), 2).unwrap();
        let st = stabilizer_group(&d42).unwrap();
        assert_eq!(st, PermutationGroup::dihedral(4).unwrap());

        let ghz = SparseState::qubits(3, [(0b000, 1.0), (0b111, 1.0)]).unwrap();
        assert_eq!(stabilizer_group(&ghz).unwrap().order(), 6);
    }

    #[test]
    fn realizability_examples() {
        let a3 = PermutationGroup::alternating(3).unwrap();
        assert_eq!(
            realizable_closure(&a3).unwrap(),
            PermutationGroup::symmetric(3).unwrap()
        );
        assert!(!is_realizable(&a3).unwrap());
        let c4 = PermutationGroup::cyclic(4).unwrap();
        assert_eq!(
            realizable_closure(&c4).unwrap(),
            PermutationGroup::dihedral(4).unwrap()
        );
        assert!(!is_realizable(&c4).unwrap());
        assert!(is_realizable(&PermutationGroup::dihedral(4).unwrap()).unwrap());
    }

    #[test]
    fn orbit_basis_examples() {
        let c4 = PermutationGroup::cyclic(4).unwrap();
        let basis = orbit_basis(&c4, 2).unwrap();
        assert_eq!(basis.len(), 2);
        assert_eq!(basis[0].support_size(), 4);
        let expected = SparseState::qubits(4, [(0b1010, 1.0), (0b0101, 1.0)]).unwrap();
        assert!(basis[1].distance(&expected).unwrap() < 1e-15);

        assert_eq!(
            orbit_basis(&PermutationGroup::symmetric(4).unwrap(), 2)
                .unwrap()
                .len(),
            1
        );
        let id = orbit_basis(&PermutationGroup::trivial(3), 1).unwrap();
        assert_eq!(id.len(), 3);
        assert_eq!(
            id[0].amplitudes().keys().copied().collect::<Vec<_>>(),
            vec![0b100]
        );
    }

    #[test]
    fn proposition1_examples() {
        let a3 = PermutationGroup::alternating(3).unwrap();
        let s = proposition1_state(&a3).unwrap();
        let labels: Vec<String> = s.amplitudes().keys().map(|&l| s.label_string(l)).collect();
        assert_eq!(labels, vec!["012", "120", "201"]);
        assert_eq!(stabilizer_group(&s).unwrap(), a3);

        let id = proposition1_state(&PermutationGroup::trivial(2)).unwrap();
        assert_eq!(
            id.label_string(*id.amplitudes().keys().next().unwrap()),
            "01"
        );
    }
}
