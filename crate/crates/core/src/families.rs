//! Generators for the named hypergraph families: complete hypergraphs, cycles,
//! Platonic solids, simplices, orthoplexes, hypercubes and periodic tilings.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;

/// All `k`-subsets of `0..n`, lexicographic.
pub fn k_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut current: Vec<usize> = (0..k).collect();
    loop {
        out.push(current.clone());
        let Some(i) = (0..k).rev().find(|&i| current[i] < n - k + i) else {
            return out;
        };
        current[i] += 1;
        for j in i + 1..k {
            current[j] = current[j - 1] + 1;
        }
    }
}

/// The complete `k`-uniform hypergraph; its excitation state is the Dicke state.
pub fn complete_kuniform(n: usize, k: usize) -> Result<Hypergraph> {
    if k == 0 || k > n {
        return Err(Error::Parameter(format!(
            "need 1 <= k <= N, got N = {n}, k = {k}"
        )));
    }
    Hypergraph::new(n, k_subsets(n, k))
}

pub fn cycle(n: usize) -> Result<Hypergraph> {
    if n < 3 {
        return Err(Error::Parameter(format!("cycle needs N >= 3, got {n}")));
    }
    Hypergraph::new(n, (0..n).map(|i| vec![i, (i + 1) % n]).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Solid {
    Tetrahedron,
    Cube,
    Octahedron,
    Dodecahedron,
    Icosahedron,
}

impl Solid {
    pub const ALL: [Solid; 5] = [
        Solid::Tetrahedron,
        Solid::Octahedron,
        Solid::Cube,
        Solid::Icosahedron,
        Solid::Dodecahedron,
    ];

    pub fn vertex_count(self) -> usize {
        match self {
            Solid::Tetrahedron => 4,
            Solid::Cube => 8,
            Solid::Octahedron => 6,
            Solid::Dodecahedron => 20,
            Solid::Icosahedron => 12,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Solid::Tetrahedron => "tetrahedron",
            Solid::Cube => "cube",
            Solid::Octahedron => "octahedron",
            Solid::Dodecahedron => "dodecahedron",
            Solid::Icosahedron => "icosahedron",
        }
    }
}

impl fmt::Display for Solid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Solid {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Solid::ALL
            .into_iter()
            .find(|solid| solid.name() == s)
            .ok_or_else(|| Error::Parameter(format!("unknown solid `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PlatonicMode {
    Edges,
    Faces,
}

impl FromStr for PlatonicMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "edges" => Ok(PlatonicMode::Edges),
            "faces" => Ok(PlatonicMode::Faces),
            other => Err(Error::Parameter(format!("unknown platonic mode `{other}`"))),
        }
    }
}

// Incidence tables. Vertex numbering follows the coordinate lists used by
// `tools/platonic_tables.py`; the test suite re-derives both tables from
// those coordinates.
const TETRAHEDRON_EDGES: &[[usize; 2]] = &[[0, 1], [0, 2], [0, 3], [1, 2], [1, 3], [2, 3]];
const TETRAHEDRON_FACES: &[[usize; 3]] = &[[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]];
const CUBE_EDGES: &[[usize; 2]] = &[
    [0, 1],
    [0, 2],
    [0, 4],
    [1, 3],
    [1, 5],
    [2, 3],
    [2, 6],
    [3, 7],
    [4, 5],
    [4, 6],
    [5, 7],
    [6, 7],
];
const CUBE_FACES: &[[usize; 4]] = &[
    [0, 1, 2, 3],
    [0, 1, 4, 5],
    [0, 2, 4, 6],
    [1, 3, 5, 7],
    [2, 3, 6, 7],
    [4, 5, 6, 7],
];
const OCTAHEDRON_EDGES: &[[usize; 2]] = &[
    [0, 2],
    [0, 3],
    [0, 4],
    [0, 5],
    [1, 2],
    [1, 3],
    [1, 4],
    [1, 5],
    [2, 4],
    [2, 5],
    [3, 4],
    [3, 5],
];
const OCTAHEDRON_FACES: &[[usize; 3]] = &[
    [0, 2, 4],
    [0, 2, 5],
    [0, 3, 4],
    [0, 3, 5],
    [1, 2, 4],
    [1, 2, 5],
    [1, 3, 4],
    [1, 3, 5],
];
const DODECAHEDRON_EDGES: &[[usize; 2]] = &[
    [0, 8],
    [0, 9],
    [0, 10],
    [1, 9],
    [1, 11],
    [1, 16],
    [2, 10],
    [2, 12],
    [2, 14],
    [3, 12],
    [3, 16],
    [3, 17],
    [4, 8],
    [4, 13],
    [4, 15],
    [5, 11],
    [5, 15],
    [5, 19],
    [6, 13],
    [6, 14],
    [6, 18],
    [7, 17],
    [7, 18],
    [7, 19],
    [8, 14],
    [9, 15],
    [10, 16],
    [11, 17],
    [12, 18],
    [13, 19],
];
const DODECAHEDRON_FACES: &[[usize; 5]] = &[
    [0, 1, 9, 10, 16],
    [0, 2, 8, 10, 14],
    [0, 4, 8, 9, 15],
    [1, 3, 11, 16, 17],
    [1, 5, 9, 11, 15],
    [2, 3, 10, 12, 16],
    [2, 6, 12, 14, 18],
    [3, 7, 12, 17, 18],
    [4, 5, 13, 15, 19],
    [4, 6, 8, 13, 14],
    [5, 7, 11, 17, 19],
    [6, 7, 13, 18, 19],
];
const ICOSAHEDRON_EDGES: &[[usize; 2]] = &[
    [0, 1],
    [0, 2],
    [0, 5],
    [0, 6],
    [0, 7],
    [1, 2],
    [1, 3],
    [1, 7],
    [1, 8],
    [2, 4],
    [2, 6],
    [2, 8],
    [3, 7],
    [3, 8],
    [3, 9],
    [3, 11],
    [4, 6],
    [4, 8],
    [4, 9],
    [4, 10],
    [5, 6],
    [5, 7],
    [5, 10],
    [5, 11],
    [6, 10],
    [7, 11],
    [8, 9],
    [9, 10],
    [9, 11],
    [10, 11],
];
const ICOSAHEDRON_FACES: &[[usize; 3]] = &[
    [0, 1, 2],
    [0, 1, 7],
    [0, 2, 6],
    [0, 5, 6],
    [0, 5, 7],
    [1, 2, 8],
    [1, 3, 7],
    [1, 3, 8],
    [2, 4, 6],
    [2, 4, 8],
    [3, 7, 11],
    [3, 8, 9],
    [3, 9, 11],
    [4, 6, 10],
    [4, 8, 9],
    [4, 9, 10],
    [5, 6, 10],
    [5, 7, 11],
    [5, 10, 11],
    [9, 10, 11],
];

fn table<const K: usize>(rows: &[[usize; K]]) -> Vec<Vec<usize>> {
    rows.iter().map(|r| r.to_vec()).collect()
}

/// Edge skeleton (2-uniform) or face hypergraph of a Platonic solid.
pub fn platonic(solid: Solid, mode: PlatonicMode) -> Result<Hypergraph> {
    let edges = match (solid, mode) {
        (Solid::Tetrahedron, PlatonicMode::Edges) => table(TETRAHEDRON_EDGES),
        (Solid::Tetrahedron, PlatonicMode::Faces) => table(TETRAHEDRON_FACES),
        (Solid::Cube, PlatonicMode::Edges) => table(CUBE_EDGES),
        (Solid::Cube, PlatonicMode::Faces) => table(CUBE_FACES),
        (Solid::Octahedron, PlatonicMode::Edges) => table(OCTAHEDRON_EDGES),
        (Solid::Octahedron, PlatonicMode::Faces) => table(OCTAHEDRON_FACES),
        (Solid::Dodecahedron, PlatonicMode::Edges) => table(DODECAHEDRON_EDGES),
        (Solid::Dodecahedron, PlatonicMode::Faces) => table(DODECAHEDRON_FACES),
        (Solid::Icosahedron, PlatonicMode::Edges) => table(ICOSAHEDRON_EDGES),
        (Solid::Icosahedron, PlatonicMode::Faces) => table(ICOSAHEDRON_FACES),
    };
    Hypergraph::new(solid.vertex_count(), edges)
}

/// Hyperedges are the `k`-vertex faces of the `(m-1)`-simplex, i.e. all
/// `k`-subsets of `m` vertices.
pub fn simplex_hypergraph(m: usize, k: usize) -> Result<Hypergraph> {
    if k == 0 || k >= m {
        return Err(Error::Parameter(format!(
            "need 1 <= k <= m-1, got m = {m}, k = {k}"
        )));
    }
    complete_kuniform(m, k)
}

/// The `m`-orthoplex on vertices `0..2m`, antipodal pairs `(2i, 2i+1)`; edges
/// are the `k`-subsets containing no antipodal pair.
pub fn orthoplex_hypergraph(m: usize, k: usize) -> Result<Hypergraph> {
    if k < 2 || k > m {
        return Err(Error::Parameter(format!(
            "need 2 <= k <= m, got m = {m}, k = {k}"
        )));
    }
    let edges = k_subsets(2 * m, k)
        .into_iter()
        .filter(|s| s.windows(2).all(|w| w[0] / 2 != w[1] / 2))
        .collect();
    Hypergraph::new(2 * m, edges)
}

/// Skeleton of the `m`-cube: binary labels joined at Hamming distance one.
pub fn hypercube_graph(m: usize) -> Result<Hypergraph> {
    if !(2..=20).contains(&m) {
        return Err(Error::Parameter(format!("need 2 <= m <= 20, got {m}")));
    }
    let n = 1usize << m;
    let edges = (0..n)
        .flat_map(|v| (0..m).map(move |b| (v, v ^ (1 << b))))
        .filter(|(v, w)| v < w)
        .map(|(v, w)| vec![v, w])
        .collect();
    Hypergraph::new(n, edges)
}

/// Periodic honeycomb in brick-wall coordinates. Vertex `(r, c)` has index
/// `r * cols + c`; every column is a cycle of length `rows` and `(r, c)` is
/// joined to `(r, c + 1)` when `r + c` is even.
///
/// Both sizes must be even so the gluing is consistent, and `rows >= 6`,
/// `cols >= 4` keep the smallest cycles hexagonal.
pub fn hexagonal_torus(rows: usize, cols: usize) -> Result<Hypergraph> {
    if rows < 6 || cols < 4 || rows % 2 == 1 || cols % 2 == 1 {
        return Err(Error::Parameter(format!(
            "hexagonal torus needs even rows >= 6 and even cols >= 4, got {rows}x{cols}"
        )));
    }
    let idx = |r: usize, c: usize| (r % rows) * cols + (c % cols);
    let mut edges = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            edges.push(vec![idx(r, c), idx(r + 1, c)]);
            if (r + c) % 2 == 0 {
                edges.push(vec![idx(r, c), idx(r, c + 1)]);
            }
        }
    }
    Hypergraph::new(rows * cols, edges)
}

/// Periodic triangular lattice: `(r, c)` joined to `(r, c+1)`, `(r+1, c)` and
/// `(r+1, c-1)`, indices modulo the cut.
pub fn triangular_torus(rows: usize, cols: usize) -> Result<Hypergraph> {
    if rows < 3 || cols < 3 {
        return Err(Error::Parameter(format!(
            "triangular torus needs at least a 3x3 cut, got {rows}x{cols}"
        )));
    }
    let idx = |r: usize, c: usize| (r % rows) * cols + (c % cols);
    let mut edges = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            edges.push(vec![idx(r, c), idx(r, c + 1)]);
            edges.push(vec![idx(r, c), idx(r + 1, c)]);
            edges.push(vec![idx(r, c), idx(r + 1, c + cols - 1)]);
        }
    }
    Hypergraph::new(rows * cols, edges)
}

/// Four parties with edges `{0,1,2,3}`, `{0}` and `{1,2}`.
pub fn telescope() -> Hypergraph {
    Hypergraph::new(4, vec![vec![0, 1, 2, 3], vec![0], vec![1, 2]]).expect("valid by construction")
}

/// A named family instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum FamilySpec {
    Dicke { n: usize, k: usize },
    Cycle { n: usize },
    Platonic { solid: Solid, mode: PlatonicMode },
    Simplex { m: usize, k: usize },
    Orthoplex { m: usize, k: usize },
    Hypercube { m: usize },
    HexTorus { rows: usize, cols: usize },
    TriTorus { rows: usize, cols: usize },
    Telescope,
}

impl FamilySpec {
    pub fn build(&self) -> Result<Hypergraph> {
        match *self {
            FamilySpec::Dicke { n, k } => complete_kuniform(n, k),
            FamilySpec::Cycle { n } => cycle(n),
            FamilySpec::Platonic { solid, mode } => platonic(solid, mode),
            FamilySpec::Simplex { m, k } => simplex_hypergraph(m, k),
            FamilySpec::Orthoplex { m, k } => orthoplex_hypergraph(m, k),
            FamilySpec::Hypercube { m } => hypercube_graph(m),
            FamilySpec::HexTorus { rows, cols } => hexagonal_torus(rows, cols),
            FamilySpec::TriTorus { rows, cols } => triangular_torus(rows, cols),
            FamilySpec::Telescope => Ok(telescope()),
        }
    }

    /// Short label used in reports and CSV output.
    pub fn label(&self) -> String {
        match self {
            FamilySpec::Dicke { n, k } => format!("dicke_{n}_{k}"),
            FamilySpec::Cycle { n } => format!("cycle_{n}"),
            FamilySpec::Platonic { solid, mode } => match mode {
                PlatonicMode::Edges => format!("{solid}_edges"),
                PlatonicMode::Faces => format!("{solid}_faces"),
            },
            FamilySpec::Simplex { m, k } => format!("simplex_{m}_{k}"),
            FamilySpec::Orthoplex { m, k } => format!("orthoplex_{m}_{k}"),
            FamilySpec::Hypercube { m } => format!("hypercube_{m}"),
            FamilySpec::HexTorus { rows, cols } => format!("hex_torus_{rows}x{cols}"),
            FamilySpec::TriTorus { rows, cols } => format!("tri_torus_{rows}x{cols}"),
            FamilySpec::Telescope => "telescope".to_string(),
        }
    }
}
