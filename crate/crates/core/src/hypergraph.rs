//! Hypergraphs on vertices `0..n` and the combinatorial quantities that govern
//! the entanglement of their excitation states.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::limits::limits;
use crate::symmetry::{Permutation, PermutationGroup};

/// A hypergraph in canonical form: every edge strictly ascending, edges sorted
/// lexicographically, no duplicates.
#[derive(Debug, Clone)]
pub struct Hypergraph {
    n: usize,
    edges: Vec<Vec<usize>>,
    uniformity: Option<usize>,
    lookup: HashSet<Vec<usize>>,
    incidence: Vec<Vec<usize>>,
}

impl PartialEq for Hypergraph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.edges == other.edges
    }
}

impl Eq for Hypergraph {}

/// Result of [`validate`]: the canonical hypergraph plus the duplicate edges
/// that were dropped on the way.
#[derive(Debug, Clone)]
pub struct Validated {
    pub graph: Hypergraph,
    pub duplicates: Vec<Vec<usize>>,
}

/// Canonicalize a raw vertex count and edge list.
pub fn validate(n: usize, raw_edges: Vec<Vec<usize>>) -> Result<Validated> {
    let mut edges = Vec::with_capacity(raw_edges.len());
    for (i, mut e) in raw_edges.into_iter().enumerate() {
        if e.is_empty() {
            return Err(Error::EmptyEdge(i));
        }
        if let Some(&bad) = e.iter().find(|&&v| v >= n) {
            return Err(Error::IndexOutOfRange { index: bad, n });
        }
        e.sort_unstable();
        if e.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::RepeatedVertex(i));
        }
        edges.push(e);
    }
    edges.sort();
    let mut duplicates = Vec::new();
    let mut unique: Vec<Vec<usize>> = Vec::with_capacity(edges.len());
    for e in edges {
        if unique.last() == Some(&e) {
            duplicates.push(e);
        } else {
            unique.push(e);
        }
    }
    Ok(Validated {
        graph: Hypergraph::from_canonical(n, unique),
        duplicates,
    })
}

impl Hypergraph {
    /// Build and canonicalize; duplicate edges are silently merged.
    pub fn new(n: usize, edges: Vec<Vec<usize>>) -> Result<Self> {
        validate(n, edges).map(|v| v.graph)
    }

    fn from_canonical(n: usize, edges: Vec<Vec<usize>>) -> Self {
        let uniformity = match edges.first() {
            Some(first) if edges.iter().all(|e| e.len() == first.len()) => Some(first.len()),
            _ => None,
        };
        let mut incidence = vec![Vec::new(); n];
        for (i, e) in edges.iter().enumerate() {
            for &v in e {
                incidence[v].push(i);
            }
        }
        let lookup = edges.iter().cloned().collect();
        Hypergraph {
            n,
            edges,
            uniformity,
            lookup,
            incidence,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Vec<usize>] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// `Some(k)` when every edge has exactly `k` vertices. An edgeless
    /// hypergraph has no uniformity.
    pub fn uniformity(&self) -> Option<usize> {
        self.uniformity
    }

    pub fn contains_edge(&self, edge: &[usize]) -> bool {
        self.lookup.contains(edge)
    }

    /// Indices (into [`Hypergraph::edges`]) of the edges containing `v`.
    pub fn incident_edges(&self, v: usize) -> &[usize] {
        &self.incidence[v]
    }

    fn check_vertex(&self, v: usize) -> Result<()> {
        if v >= self.n {
            Err(Error::IndexOutOfRange {
                index: v,
                n: self.n,
            })
        } else {
            Ok(())
        }
    }

    fn check_pair(&self, v: usize, w: usize) -> Result<()> {
        self.check_vertex(v)?;
        self.check_vertex(w)?;
        if v == w {
            return Err(Error::SameVertex(v));
        }
        Ok(())
    }

    pub fn degree(&self, v: usize) -> Result<usize> {
        self.check_vertex(v)?;
        Ok(self.incidence[v].len())
    }

    /// Number of edges containing both `v` and `w`.
    pub fn section(&self, v: usize, w: usize) -> Result<usize> {
        self.check_pair(v, w)?;
        Ok(self.incidence[v]
            .iter()
            .filter(|&&i| self.edges[i].binary_search(&w).is_ok())
            .count())
    }

    /// Number of sets `W` (avoiding `v` and `w`) such that both `W ∪ {v}` and
    /// `W ∪ {w}` are edges.
    pub fn joint_neighborhood(&self, v: usize, w: usize) -> Result<usize> {
        self.check_pair(v, w)?;
        let mut count = 0;
        for &i in &self.incidence[v] {
            let e = &self.edges[i];
            if e.binary_search(&w).is_ok() {
                continue;
            }
            let mut swapped: Vec<usize> = e.iter().copied().filter(|&x| x != v).collect();
            let pos = swapped.binary_search(&w).unwrap_err();
            swapped.insert(pos, w);
            if self.lookup.contains(&swapped) {
                count += 1;
            }
        }
        Ok(count)
    }

    /// Vertices sharing at least one edge with `v`, ascending.
    pub fn neighbors(&self, v: usize) -> Result<Vec<usize>> {
        self.check_vertex(v)?;
        let set: BTreeSet<usize> = self.incidence[v]
            .iter()
            .flat_map(|&i| self.edges[i].iter().copied())
            .filter(|&x| x != v)
            .collect();
        Ok(set.into_iter().collect())
    }

    fn adjacency(&self) -> Vec<Vec<usize>> {
        (0..self.n)
            .map(|v| self.neighbors(v).expect("vertex in range"))
            .collect()
    }

    /// Breadth-first distances from `v`; `None` marks unreachable vertices.
    pub fn distances_from(&self, v: usize) -> Result<Vec<Option<usize>>> {
        self.check_vertex(v)?;
        Ok(bfs(&self.adjacency(), v))
    }

    /// Shortest hyperedge-path distance; `None` stands for infinity.
    pub fn distance(&self, v: usize, w: usize) -> Result<Option<usize>> {
        self.check_pair(v, w)?;
        Ok(self.distances_from(v)?[w])
    }

    pub fn pair_stats(&self, v: usize, w: usize) -> Result<VertexPairStats> {
        Ok(VertexPairStats {
            degree_v: self.degree(v)?,
            degree_w: self.degree(w)?,
            section: self.section(v, w)?,
            joint_neighborhood: self.joint_neighborhood(v, w)?,
            distance: self.distance(v, w)?,
            edge_count: self.edge_count(),
        })
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        bfs(&self.adjacency(), 0).iter().all(Option::is_some)
    }

    pub fn predicates(&self) -> Predicates {
        let degrees: Vec<usize> = (0..self.n).map(|v| self.incidence[v].len()).collect();
        let regular = degrees.windows(2).all(|w| w[0] == w[1]);
        let mut section = None;
        let mut distance1_regular = regular;
        if regular {
            'outer: for v in 0..self.n {
                for w in self.neighbors(v).expect("in range") {
                    let s = self.section(v, w).expect("distinct");
                    match section {
                        None => section = Some(s),
                        Some(s0) if s0 != s => {
                            distance1_regular = false;
                            break 'outer;
                        }
                        _ => {}
                    }
                }
            }
        }
        Predicates {
            connected: self.is_connected(),
            k_uniform: self.uniformity.is_some(),
            regular,
            distance1_regular,
            uniformity: self.uniformity,
            degree: if regular {
                degrees.first().copied()
            } else {
                None
            },
            section: if distance1_regular { section } else { None },
        }
    }

    /// Finest factorization into a product hypergraph, if one exists.
    ///
    /// Only splits in which every factor receives at least one vertex of every
    /// edge are considered, so isolated vertices are never split off.
    pub fn product_decompose(&self) -> Result<Option<ProductDecomposition>> {
        if self.edges.is_empty() || self.n < 2 {
            return Ok(None);
        }
        let mut budget = limits().product_search_nodes;
        let all: Vec<usize> = (0..self.n).collect();
        let mut blocks = Vec::new();
        decompose_block(&all, &self.edges, &mut budget, &mut blocks)?;
        if blocks.len() < 2 {
            return Ok(None);
        }
        blocks.sort_by_key(|b| b[0]);
        let factors = blocks
            .iter()
            .map(|block| self.restrict(block))
            .collect::<Vec<_>>();
        Ok(Some(ProductDecomposition { blocks, factors }))
    }

    /// The hypergraph induced on `block` by intersecting every edge with it,
    /// relabelled to `0..block.len()` in the order of `block`.
    pub fn restrict(&self, block: &[usize]) -> Hypergraph {
        let index: HashMap<usize, usize> = block.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let edges: BTreeSet<Vec<usize>> = self
            .edges
            .iter()
            .map(|e| {
                let mut r: Vec<usize> = e.iter().filter_map(|v| index.get(v).copied()).collect();
                r.sort_unstable();
                r
            })
            .filter(|r| !r.is_empty())
            .collect();
        Hypergraph::from_canonical(block.len(), edges.into_iter().collect())
    }

    /// Color classes when the hypergraph is a complete multipartite one.
    pub fn is_complete_multipartite(&self) -> Result<Option<Multipartite>> {
        let k = self.uniformity.ok_or(Error::NotUniform)?;
        let singletons_of = |g: &Hypergraph| g.uniformity == Some(1) && g.edge_count() == g.n;
        if k == 1 {
            return Ok(singletons_of(self).then(|| Multipartite {
                classes: vec![(0..self.n).collect()],
                trivial: false,
            }));
        }
        if let Some(dec) = self.product_decompose()? {
            if dec.blocks.len() == k && dec.factors.iter().all(singletons_of) {
                return Ok(Some(Multipartite {
                    classes: dec.blocks,
                    trivial: false,
                }));
            }
        }
        if self.n > k && binomial(self.n, k) == Some(self.edge_count()) {
            return Ok(Some(Multipartite {
                classes: (0..self.n).map(|v| vec![v]).collect(),
                trivial: true,
            }));
        }
        Ok(None)
    }

    /// All vertex permutations mapping the edge set onto itself.
    pub fn automorphism_group(&self) -> Result<PermutationGroup> {
        let limit = limits().automorphism_max_n;
        if self.n > limit {
            return Err(Error::Budget {
                what: "automorphism search vertex count",
                limit,
            });
        }
        let invariant: Vec<(usize, Vec<usize>)> = (0..self.n)
            .map(|v| {
                let mut sizes: Vec<usize> = self.incidence[v]
                    .iter()
                    .map(|&i| self.edges[i].len())
                    .collect();
                sizes.sort_unstable();
                (sizes.len(), sizes)
            })
            .collect();
        // Edges grouped by their largest vertex: they become checkable as soon
        // as that vertex is assigned.
        let mut closing: Vec<Vec<usize>> = vec![Vec::new(); self.n];
        for (i, e) in self.edges.iter().enumerate() {
            closing[*e.last().expect("nonempty")].push(i);
        }
        let mut image = vec![usize::MAX; self.n];
        let mut used = vec![false; self.n];
        let mut found = Vec::new();
        self.extend_automorphism(0, &invariant, &closing, &mut image, &mut used, &mut found)?;
        PermutationGroup::from_elements(self.n, found)
    }

    fn extend_automorphism(
        &self,
        v: usize,
        invariant: &[(usize, Vec<usize>)],
        closing: &[Vec<usize>],
        image: &mut Vec<usize>,
        used: &mut Vec<bool>,
        found: &mut Vec<Permutation>,
    ) -> Result<()> {
        if v == self.n {
            let limit = limits().group_order;
            if found.len() >= limit {
                return Err(Error::Budget {
                    what: "automorphism group order",
                    limit,
                });
            }
            found.push(Permutation::new(image.clone()).expect("bijection by construction"));
            return Ok(());
        }
        for target in 0..self.n {
            if used[target] || invariant[target] != invariant[v] {
                continue;
            }
            image[v] = target;
            let consistent = closing[v].iter().all(|&i| {
                let mut mapped: Vec<usize> = self.edges[i].iter().map(|&x| image[x]).collect();
                mapped.sort_unstable();
                self.lookup.contains(&mapped)
            });
            if consistent {
                used[target] = true;
                let outcome =
                    self.extend_automorphism(v + 1, invariant, closing, image, used, found);
                used[target] = false;
                outcome?;
            }
        }
        image[v] = usize::MAX;
        Ok(())
    }

    /// Whether the automorphism group acts transitively on the edges.
    pub fn is_edge_transitive(&self) -> Result<bool> {
        let group = self.automorphism_group()?;
        let Some(first) = self.edges.first() else {
            return Ok(true);
        };
        let orbit: HashSet<Vec<usize>> = group
            .elements()
            .iter()
            .map(|g| {
                let mut e: Vec<usize> = first.iter().map(|&x| g.image()[x]).collect();
                e.sort_unstable();
                e
            })
            .collect();
        Ok(orbit.len() == self.edges.len())
    }

    /// Apply a vertex relabelling `v -> perm[v]`.
    pub fn relabel(&self, perm: &Permutation) -> Result<Hypergraph> {
        if perm.len() != self.n {
            return Err(Error::Shape(format!(
                "permutation on {} points applied to {} vertices",
                perm.len(),
                self.n
            )));
        }
        let edges = self
            .edges
            .iter()
            .map(|e| e.iter().map(|&v| perm.image()[v]).collect())
            .collect();
        Hypergraph::new(self.n, edges)
    }

    pub fn to_json(&self) -> HypergraphJson {
        HypergraphJson {
            n: self.n,
            edges: self.edges.clone(),
        }
    }
}

/// On-disk representation: `{"n": 4, "edges": [[0,1],[1,2]]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HypergraphJson {
    pub n: usize,
    pub edges: Vec<Vec<usize>>,
}

impl HypergraphJson {
    pub fn validate(self) -> Result<Validated> {
        validate(self.n, self.edges)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct VertexPairStats {
    pub degree_v: usize,
    pub degree_w: usize,
    pub section: usize,
    pub joint_neighborhood: usize,
    /// `None` when the pair is disconnected.
    pub distance: Option<usize>,
    pub edge_count: usize,
}

impl VertexPairStats {
    /// `|E| - d_v - d_w + s_vw`, the number of edges avoiding both vertices.
    pub fn lambda(&self) -> usize {
        self.edge_count + self.section - self.degree_v - self.degree_w
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Predicates {
    pub connected: bool,
    pub k_uniform: bool,
    pub regular: bool,
    pub distance1_regular: bool,
    pub uniformity: Option<usize>,
    pub degree: Option<usize>,
    /// The common section of adjacent pairs for distance-1 regular graphs.
    pub section: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProductDecomposition {
    /// Vertex blocks, each ascending, ordered by smallest vertex.
    pub blocks: Vec<Vec<usize>>,
    /// Factor hypergraphs; factor `i` lives on `0..blocks[i].len()`.
    pub factors: Vec<Hypergraph>,
}

impl ProductDecomposition {
    /// Rebuild the product edge set in original labels.
    pub fn rebuild(&self, n: usize) -> Result<Hypergraph> {
        let mut acc: Vec<Vec<usize>> = vec![Vec::new()];
        for (block, factor) in self.blocks.iter().zip(&self.factors) {
            let mut next = Vec::with_capacity(acc.len() * factor.edge_count());
            for partial in &acc {
                for e in factor.edges() {
                    let mut u = partial.clone();
                    u.extend(e.iter().map(|&i| block[i]));
                    next.push(u);
                }
            }
            acc = next;
        }
        Hypergraph::new(n, acc)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Multipartite {
    pub classes: Vec<Vec<usize>>,
    /// Set when the only partition is into singletons (complete hypergraph).
    pub trivial: bool,
}

fn bfs(adj: &[Vec<usize>], start: usize) -> Vec<Option<usize>> {
    let mut dist = vec![None; adj.len()];
    dist[start] = Some(0);
    let mut queue = VecDeque::from([start]);
    while let Some(u) = queue.pop_front() {
        let du = dist[u].expect("visited");
        for &x in &adj[u] {
            if dist[x].is_none() {
                dist[x] = Some(du + 1);
                queue.push_back(x);
            }
        }
    }
    dist
}

pub(crate) fn binomial(n: usize, k: usize) -> Option<usize> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: usize = 1;
    for i in 0..k {
        acc = acc.checked_mul(n - i)? / (i + 1);
    }
    Some(acc)
}

/// Recursively split `vertices` (original labels) with the given edges
/// (original labels, each a subset of `vertices`) into irreducible blocks.
fn decompose_block(
    vertices: &[usize],
    edges: &[Vec<usize>],
    budget: &mut usize,
    out: &mut Vec<Vec<usize>>,
) -> Result<()> {
    match find_split(vertices, edges, budget)? {
        None => out.push(vertices.to_vec()),
        Some(mask) => {
            let v1: Vec<usize> = (0..vertices.len())
                .filter(|&i| mask[i])
                .map(|i| vertices[i])
                .collect();
            let v2: Vec<usize> = (0..vertices.len())
                .filter(|&i| !mask[i])
                .map(|i| vertices[i])
                .collect();
            for part in [v1, v2] {
                let set: HashSet<usize> = part.iter().copied().collect();
                let sub: BTreeSet<Vec<usize>> = edges
                    .iter()
                    .map(|e| e.iter().copied().filter(|v| set.contains(v)).collect())
                    .collect();
                let sub: Vec<Vec<usize>> = sub.into_iter().collect();
                decompose_block(&part, &sub, budget, out)?;
            }
        }
    }
    Ok(())
}

struct SplitSearch<'a> {
    /// For every local vertex, the edges (local indices) containing it.
    member_of: Vec<Vec<usize>>,
    sizes: Vec<usize>,
    edges: &'a [Vec<usize>],
    position: HashMap<usize, usize>,
    target: usize,
    in_v1: Vec<usize>,
    assigned: Vec<usize>,
    mask: Vec<bool>,
    budget: &'a mut usize,
}

impl SplitSearch<'_> {
    fn assign(&mut self, v: usize, to_v1: bool) -> bool {
        self.mask[v] = to_v1;
        let mut ok = true;
        for &i in &self.member_of[v] {
            self.assigned[i] += 1;
            if to_v1 {
                self.in_v1[i] += 1;
            }
            let left = self.sizes[i] - self.assigned[i];
            if self.in_v1[i] > self.target || self.in_v1[i] + left < self.target {
                ok = false;
            }
        }
        ok
    }

    fn unassign(&mut self, v: usize, to_v1: bool) {
        for &i in &self.member_of[v] {
            self.assigned[i] -= 1;
            if to_v1 {
                self.in_v1[i] -= 1;
            }
        }
    }

    fn run(&mut self, v: usize) -> Result<bool> {
        if *self.budget == 0 {
            return Err(Error::Budget {
                what: "product decomposition search",
                limit: limits().product_search_nodes,
            });
        }
        *self.budget -= 1;
        let m = self.member_of.len();
        if v == m {
            return Ok(self.is_product());
        }
        for to_v1 in [true, false] {
            if v == 0 && !to_v1 {
                continue;
            }
            if self.assign(v, to_v1) && self.run(v + 1)? {
                return Ok(true);
            }
            self.unassign(v, to_v1);
        }
        Ok(false)
    }

    fn is_product(&self) -> bool {
        if self.mask.iter().all(|&b| b) {
            return false;
        }
        let mut e1 = HashSet::new();
        let mut e2 = HashSet::new();
        for e in self.edges {
            let (a, b): (Vec<usize>, Vec<usize>) =
                e.iter().partition(|v| self.mask[self.position[v]]);
            e1.insert(a);
            e2.insert(b);
        }
        e1.len() * e2.len() == self.edges.len()
    }
}

/// Look for a bipartition `V1 | V2` (with the first vertex in `V1`) such that
/// `|e ∩ V1|` is the same for every edge and the edge set is the full product
/// of the two traces. Returns the membership mask of `V1`.
fn find_split(
    vertices: &[usize],
    edges: &[Vec<usize>],
    budget: &mut usize,
) -> Result<Option<Vec<bool>>> {
    if vertices.len() < 2 || edges.is_empty() {
        return Ok(None);
    }
    let position: HashMap<usize, usize> =
        vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut member_of = vec![Vec::new(); vertices.len()];
    for (i, e) in edges.iter().enumerate() {
        for v in e {
            member_of[position[v]].push(i);
        }
    }
    if member_of.iter().any(Vec::is_empty) {
        return Ok(None);
    }
    let min_size = edges.iter().map(Vec::len).min().expect("nonempty");
    for target in 1..min_size {
        let mut search = SplitSearch {
            member_of: member_of.clone(),
            sizes: edges.iter().map(Vec::len).collect(),
            edges,
            position: position.clone(),
            target,
            in_v1: vec![0; edges.len()],
            assigned: vec![0; edges.len()],
            mask: vec![false; vertices.len()],
            budget,
        };
        if search.run(0)? {
            return Ok(Some(search.mask));
        }
    }
    Ok(None)
}
