//! Concurrence, generalized concurrence, the entanglement ratio and the
//! closed forms for the standard families.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::families::FamilySpec;
use crate::hypergraph::{Hypergraph, VertexPairStats};
use crate::linalg::complex_eigenvalues;
use crate::state::{
    excitation_state, reduced_2q_closed_form, reduced_density, DensityMatrix, SparseState,
};

/// Tolerance for the density matrix sanity checks.
pub const DENSITY_TOL: f64 = 1e-9;

fn validate_density(rho: &DensityMatrix) -> Result<Vec<f64>> {
    let herm = rho.hermiticity_error();
    if herm > DENSITY_TOL {
        return Err(Error::NotDensityMatrix(format!(
            "not Hermitian (error {herm:.3e})"
        )));
    }
    let tr = rho.trace();
    if (tr.re - 1.0).abs() > DENSITY_TOL || tr.im.abs() > DENSITY_TOL {
        return Err(Error::NotDensityMatrix(format!("trace {tr}")));
    }
    let eig: Vec<f64> = complex_eigenvalues(rho.dim(), rho.data())?
        .into_iter()
        .map(|z| z.re)
        .collect();
    if let Some(min) = eig.iter().copied().reduce(f64::min) {
        if min < -DENSITY_TOL {
            return Err(Error::NotDensityMatrix(format!(
                "negative eigenvalue {min:.3e}"
            )));
        }
    }
    Ok(eig)
}

/// Wootters concurrence of a two-qubit density matrix.
pub fn concurrence_wootters(rho: &DensityMatrix) -> Result<f64> {
    if rho.dim() != 4 {
        return Err(Error::Shape(format!(
            "two-qubit matrix expected, got dimension {}",
            rho.dim()
        )));
    }
    validate_density(rho)?;
    // sigma_y (x) sigma_y is real with entries -1, 1, 1, -1 on the anti-diagonal.
    let flip = |i: usize| 3 - i;
    let sign = |i: usize| if i == 0 || i == 3 { -1.0 } else { 1.0 };
    let mut tilde = vec![Complex64::default(); 16];
    for i in 0..4 {
        for j in 0..4 {
            tilde[i * 4 + j] = rho.get(flip(i), flip(j)).conj() * sign(i) * sign(j);
        }
    }
    let mut prod = vec![Complex64::default(); 16];
    for i in 0..4 {
        for j in 0..4 {
            prod[i * 4 + j] = (0..4).map(|k| rho.get(i, k) * tilde[k * 4 + j]).sum();
        }
    }
    let mut roots: Vec<f64> = complex_eigenvalues(4, &prod)?
        .into_iter()
        .map(|z| z.re.max(0.0).sqrt())
        .collect();
    roots.sort_by(|a, b| b.total_cmp(a));
    Ok((roots[0] - roots[1] - roots[2] - roots[3]).max(0.0))
}

/// Smallest eigenvalue of the partial transpose on the second qubit.
pub fn partial_transpose_min_eigenvalue(rho: &DensityMatrix) -> Result<f64> {
    if rho.dim() != 4 {
        return Err(Error::Shape(format!(
            "two-qubit matrix expected, got dimension {}",
            rho.dim()
        )));
    }
    let mut pt = vec![Complex64::default(); 16];
    for a in 0..2 {
        for b in 0..2 {
            for c in 0..2 {
                for d in 0..2 {
                    pt[(2 * a + b) * 4 + 2 * c + d] = rho.get(2 * a + d, 2 * c + b);
                }
            }
        }
    }
    Ok(complex_eigenvalues(4, &pt)?
        .into_iter()
        .map(|z| z.re)
        .fold(f64::INFINITY, f64::min))
}

fn block_stats(g: &Hypergraph, v: usize, w: usize) -> Result<VertexPairStats> {
    // The closed form reproduces the reduction exactly when it applies.
    reduced_2q_closed_form(g, v, w)?;
    g.pair_stats(v, w)
}

fn concurrence_from_stats(st: &VertexPairStats) -> f64 {
    let e = st.edge_count as f64;
    let n = st.joint_neighborhood as f64;
    let root = (st.section as f64 * st.lambda() as f64).sqrt();
    (2.0 / e * (n - root)).max(0.0)
}

/// Concurrence between `v` and `w` in the excitation state of `g`, from the
/// pair statistics. Fails when the edges create coherences outside the
/// two-qubit block form (possible only for non-uniform hypergraphs).
pub fn concurrence_excitation(g: &Hypergraph, v: usize, w: usize) -> Result<f64> {
    Ok(concurrence_from_stats(&block_stats(g, v, w)?))
}

/// Partial-transpose verdict `n^2 > lambda * s`.
pub fn ppt_entangled(g: &Hypergraph, v: usize, w: usize) -> Result<bool> {
    let st = block_stats(g, v, w)?;
    let n = st.joint_neighborhood as u128;
    Ok(n * n > st.lambda() as u128 * st.section as u128)
}

/// Concurrence for regular hypergraphs with a common adjacent-pair section:
/// a threshold formula at distance 1, `2 n / |E|` at distance 2, zero beyond.
pub fn concurrence_regular(g: &Hypergraph, v: usize, w: usize) -> Result<f64> {
    let p = g.predicates();
    if !p.distance1_regular {
        return Err(Error::Precondition(
            "hypergraph is not distance-1 regular".into(),
        ));
    }
    let st = g.pair_stats(v, w)?;
    let e = st.edge_count as f64;
    let d = st.degree_v as f64;
    let n = st.joint_neighborhood as f64;
    Ok(match st.distance {
        Some(1) => {
            let s = st.section as f64;
            (2.0 / e * (n - (s * (e - 2.0 * d + s)).sqrt())).max(0.0)
        }
        Some(2) => 2.0 * n / e,
        _ => 0.0,
    })
}

/// `2 sqrt(det rho_v)` from the one-qubit reduction of a state.
pub fn c_v_rest_state(state: &SparseState, v: usize) -> Result<f64> {
    if state.local_dim() != 2 {
        return Err(Error::Shape("qubit state expected".into()));
    }
    let rho = reduced_density(state, &[v])?;
    Ok(2.0 * rho.det2()?.re.max(0.0).sqrt())
}

/// `sqrt(4 d_v (|E| - d_v)) / |E|`, valid when no edge `e` has `e ∪ {v}` as
/// another edge.
pub fn c_v_rest_closed(g: &Hypergraph, v: usize) -> Result<f64> {
    let d = g.degree(v)?;
    if g.uniformity().is_none() {
        for &i in g.incident_edges(v) {
            let rest: Vec<usize> = g.edges()[i].iter().copied().filter(|&x| x != v).collect();
            if !rest.is_empty() && g.contains_edge(&rest) {
                return Err(Error::Precondition(format!(
                    "edges {rest:?} and its extension by {v} create a one-qubit coherence"
                )));
            }
        }
    }
    let e = g.edge_count() as f64;
    Ok((4.0 * d as f64 * (e - d as f64)).sqrt() / e)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Wootters,
    ClosedForm,
    RegularForm,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConcurrenceReport {
    pub pair: (usize, usize),
    pub concurrence: f64,
    pub method: Method,
    /// `None` for disconnected pairs.
    pub distance: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NodeEntanglement {
    pub vertex: usize,
    pub c_v_rest: f64,
    pub gamma: f64,
    pub monogamy_gap: f64,
    pub pairwise: Vec<ConcurrenceReport>,
}

impl NodeEntanglement {
    /// Largest pair concurrence at the given distance, zero if none.
    pub fn max_at_distance(&self, distance: usize) -> f64 {
        self.pairwise
            .iter()
            .filter(|r| r.distance == Some(distance))
            .map(|r| r.concurrence)
            .fold(0.0, f64::max)
    }
}

/// All pair concurrences of `v` with the generalized concurrence, the
/// entanglement ratio and the monogamy gap. Uses the closed forms where they
/// apply and the Wootters formula on explicit reductions otherwise.
pub fn node_entanglement(g: &Hypergraph, v: usize) -> Result<NodeEntanglement> {
    if g.edge_count() == 0 {
        return Err(Error::NoEdges);
    }
    let dist = g.distances_from(v)?;
    let mut state: Option<SparseState> = None;
    let mut explicit = |g: &Hypergraph| -> Result<SparseState> {
        if state.is_none() {
            state = Some(excitation_state(g)?);
        }
        Ok(state.clone().expect("just set"))
    };
    let c_v_rest = match c_v_rest_closed(g, v) {
        Ok(c) => c,
        Err(Error::Precondition(_)) => c_v_rest_state(&explicit(g)?, v)?,
        Err(e) => return Err(e),
    };
    let mut pairwise = Vec::with_capacity(g.n().saturating_sub(1));
    for w in (0..g.n()).filter(|&w| w != v) {
        let (concurrence, method) = match reduced_2q_closed_form(g, v, w) {
            Ok(_) => {
                let st = VertexPairStats {
                    degree_v: g.degree(v)?,
                    degree_w: g.degree(w)?,
                    section: g.section(v, w)?,
                    joint_neighborhood: g.joint_neighborhood(v, w)?,
                    distance: dist[w],
                    edge_count: g.edge_count(),
                };
                (concurrence_from_stats(&st), Method::ClosedForm)
            }
            Err(Error::Precondition(_)) => {
                let rho = reduced_density(&explicit(g)?, &[v, w])?;
                (concurrence_wootters(&rho)?, Method::Wootters)
            }
            Err(e) => return Err(e),
        };
        pairwise.push(ConcurrenceReport {
            pair: (v, w),
            concurrence,
            method,
            distance: dist[w],
        });
    }
    let sum: f64 = pairwise.iter().map(|r| r.concurrence * r.concurrence).sum();
    let total = c_v_rest * c_v_rest;
    if total < 1e-300 {
        return Err(Error::Precondition(format!(
            "vertex {v} is not entangled with the rest (C_v|rest = 0)"
        )));
    }
    Ok(NodeEntanglement {
        vertex: v,
        c_v_rest,
        gamma: sum / total,
        monogamy_gap: total - sum,
        pairwise,
    })
}

pub fn entanglement_ratio(g: &Hypergraph, v: usize) -> Result<f64> {
    Ok(node_entanglement(g, v)?.gamma)
}

pub fn monogamy_gap(g: &Hypergraph, v: usize) -> Result<f64> {
    Ok(node_entanglement(g, v)?.monogamy_gap)
}

/// Pairs at one distance from a fixed vertex, all sharing one concurrence.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DistanceClass {
    pub distance: usize,
    pub count: usize,
    pub concurrence: f64,
}

/// Closed-form entanglement data for a vertex of a vertex-transitive family.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FamilyClosedForm {
    pub family: String,
    pub n_vertices: usize,
    /// Distance classes with nonzero pair count; classes with zero
    /// concurrence are included for distances 1 and 2.
    pub classes: Vec<DistanceClass>,
    pub c_v_rest: f64,
    pub gamma: f64,
    /// Value of the ratio as the family grows, with the other parameters fixed.
    pub limit: f64,
}

/// `(n, s, lambda) / |E|` for the Dicke family.
fn dicke_ratios(n: usize, k: usize) -> (f64, f64, f64) {
    let (nf, kf) = (n as f64, k as f64);
    let pairs = nf * (nf - 1.0);
    (
        kf * (nf - kf) / pairs,
        kf * (kf - 1.0) / pairs,
        (nf - kf) * (nf - kf - 1.0) / pairs,
    )
}

/// Pair concurrence in the Dicke state with `k` excitations on `n` qubits.
pub fn dicke_concurrence(n: usize, k: usize) -> Result<f64> {
    if n < 2 || k > n {
        return Err(Error::Parameter(format!(
            "need n >= 2 and k <= n, got n = {n}, k = {k}"
        )));
    }
    let (jn, s, l) = dicke_ratios(n, k);
    Ok((2.0 * (jn - (s * l).sqrt())).max(0.0))
}

/// Entanglement ratio of the Dicke state.
pub fn dicke_gamma(n: usize, k: usize) -> Result<f64> {
    if k == 0 || k >= n {
        return Err(Error::Parameter(format!(
            "need 0 < k < n, got n = {n}, k = {k}"
        )));
    }
    let c = dicke_concurrence(n, k)?;
    let (nf, kf) = (n as f64, k as f64);
    let cv2 = 4.0 * kf * (nf - kf) / (nf * nf);
    Ok((nf - 1.0) * c * c / cv2)
}

/// Large-`n` limit of the Dicke ratio: `2k - 1 - 2 sqrt(k (k - 1))`.
pub fn dicke_gamma_limit(k: usize) -> Result<f64> {
    if k == 0 {
        return Err(Error::Parameter("k must be positive".into()));
    }
    let kf = k as f64;
    Ok(2.0 * kf - 1.0 - 2.0 * (kf * (kf - 1.0)).sqrt())
}

fn closed(
    family: String,
    n: usize,
    edges: f64,
    degree: f64,
    classes: Vec<DistanceClass>,
    limit: f64,
) -> FamilyClosedForm {
    let c_v_rest = (4.0 * degree * (edges - degree)).sqrt() / edges;
    let sum: f64 = classes
        .iter()
        .map(|c| c.count as f64 * c.concurrence * c.concurrence)
        .sum();
    FamilyClosedForm {
        family,
        n_vertices: n,
        classes,
        c_v_rest,
        gamma: sum / (c_v_rest * c_v_rest),
        limit,
    }
}

/// Evaluate the closed-form expressions for a family instance. Supported:
/// Dicke, cycles, 2-uniform orthoplexes, hypercube skeletons and hexagonal
/// tori.
pub fn family_closed_form(spec: &FamilySpec) -> Result<FamilyClosedForm> {
    let label = spec.label();
    match *spec {
        FamilySpec::Dicke { n, k } => {
            let _ = dicke_gamma(n, k)?;
            let edges = crate::hypergraph::binomial(n, k).map_or(f64::INFINITY, |x| x as f64);
            let degree = edges * k as f64 / n as f64;
            let classes = vec![DistanceClass {
                distance: 1,
                count: n - 1,
                concurrence: dicke_concurrence(n, k)?,
            }];
            let mut out = closed(label, n, edges, degree, classes, dicke_gamma_limit(k)?);
            // avoid the overflowing binomial for large n
            out.c_v_rest = (4.0 * k as f64 * (n - k) as f64).sqrt() / n as f64;
            out.gamma = dicke_gamma(n, k)?;
            Ok(out)
        }
        FamilySpec::Cycle { n } => {
            if n < 3 {
                return Err(Error::Parameter(format!("cycle needs n >= 3, got {n}")));
            }
            let nf = n as f64;
            let classes = match n {
                3 => vec![DistanceClass {
                    distance: 1,
                    count: 2,
                    concurrence: 2.0 / 3.0,
                }],
                4 => vec![
                    DistanceClass {
                        distance: 1,
                        count: 2,
                        concurrence: 0.0,
                    },
                    DistanceClass {
                        distance: 2,
                        count: 1,
                        concurrence: 1.0,
                    },
                ],
                _ => vec![
                    DistanceClass {
                        distance: 1,
                        count: 2,
                        concurrence: 0.0,
                    },
                    DistanceClass {
                        distance: 2,
                        count: 2,
                        concurrence: 2.0 / nf,
                    },
                ],
            };
            Ok(closed(label, n, nf, 2.0, classes, 0.0))
        }
        FamilySpec::Orthoplex { m, k } => {
            if k != 2 {
                return Err(Error::Parameter(
                    "closed form covers the 2-uniform orthoplex only".into(),
                ));
            }
            if m < 2 {
                return Err(Error::Parameter(format!("orthoplex needs m >= 2, got {m}")));
            }
            let mf = m as f64;
            let edges = 2.0 * mf * (mf - 1.0);
            let adjacent = ((2.0 * mf - 4.0) - (2.0 * mf * mf - 6.0 * mf + 5.0).sqrt()).max(0.0)
                / (mf * (mf - 1.0));
            let classes = vec![
                DistanceClass {
                    distance: 1,
                    count: 2 * m - 2,
                    concurrence: adjacent,
                },
                DistanceClass {
                    distance: 2,
                    count: 1,
                    concurrence: 2.0 / mf,
                },
            ];
            Ok(closed(
                label,
                2 * m,
                edges,
                2.0 * mf - 2.0,
                classes,
                3.0 - 2.0 * 2f64.sqrt(),
            ))
        }
        FamilySpec::Hypercube { m } => {
            if !(2..=20).contains(&m) {
                return Err(Error::Parameter(format!(
                    "hypercube needs 2 <= m <= 20, got {m}"
                )));
            }
            let mf = m as f64;
            let n = 1usize << m;
            let edges = mf * (n / 2) as f64;
            let classes = vec![
                DistanceClass {
                    distance: 1,
                    count: m,
                    concurrence: 0.0,
                },
                DistanceClass {
                    distance: 2,
                    count: m * (m - 1) / 2,
                    concurrence: 4.0 / edges,
                },
            ];
            Ok(closed(label, n, edges, mf, classes, 0.0))
        }
        FamilySpec::HexTorus { rows, cols } => {
            // validates the size constraints
            let g = crate::families::hexagonal_torus(rows, cols)?;
            let n = g.n();
            let edges = g.edge_count() as f64;
            let classes = vec![
                DistanceClass {
                    distance: 1,
                    count: 3,
                    concurrence: 0.0,
                },
                DistanceClass {
                    distance: 2,
                    count: 6,
                    concurrence: 2.0 / edges,
                },
            ];
            Ok(closed(label, n, edges, 3.0, classes, 0.0))
        }
        _ => Err(Error::Parameter(format!(
            "no closed form for family `{label}`"
        ))),
    }
}

/// `sum over distance-2 vertices w of n_vw^2`, for regular graphs.
pub fn gamma_v_path_count(g: &Hypergraph, v: usize) -> Result<usize> {
    let p = g.predicates();
    if p.uniformity != Some(2) || !p.regular {
        return Err(Error::Precondition("a regular graph is required".into()));
    }
    let dist = g.distances_from(v)?;
    let mut total = 0;
    for (w, d) in dist.iter().enumerate() {
        if *d == Some(2) {
            let n = g.joint_neighborhood(v, w)?;
            total += n * n;
        }
    }
    Ok(total)
}

/// Entanglement ratio predicted from the path count, `2 gamma / (d^2 (N - 2))`.
/// Exact when adjacent pairs carry no concurrence.
pub fn gamma_from_path_count(g: &Hypergraph, v: usize) -> Result<f64> {
    let gamma = gamma_v_path_count(g, v)? as f64;
    let d = g.degree(v)? as f64;
    let n = g.n() as f64;
    Ok(2.0 * gamma / (d * d * (n - 2.0)))
}

fn check_network(n: usize, d: usize) -> Result<()> {
    if d < 2 || n < 3 || d >= n {
        return Err(Error::Parameter(format!(
            "need 2 <= d < N and N >= 3, got N = {n}, d = {d}"
        )));
    }
    Ok(())
}

/// Lower bound `(2 / (N - 2)) (d - 1) / d` on the ratio of a local network.
pub fn local_network_bound(n: usize, d: usize) -> Result<f64> {
    check_network(n, d)?;
    Ok(2.0 / (n as f64 - 2.0) * (d as f64 - 1.0) / d as f64)
}

/// Flat-network estimate `(d - 1)^2 / (d (N - 2))`. Only an estimate.
pub fn flat_network_estimate(n: usize, d: usize) -> Result<f64> {
    check_network(n, d)?;
    let df = d as f64;
    Ok((df - 1.0) * (df - 1.0) / (df * (n as f64 - 2.0)))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhaseThresholds {
    pub n: usize,
    /// Degree at which adjacent pairs start to be entangled, `N / 2^(1/3)`.
    pub d1: f64,
    /// Root of `d (n - sqrt(d N / 2))^2 = (N - d) n^2` with `n = d^2 / N`.
    pub d2: f64,
    pub relation: &'static str,
}

pub const SECOND_THRESHOLD_RELATION: &str = "d (n - sqrt(d N / 2))^2 = (N - d) n^2, n = d^2 / N";

/// Degree thresholds of the dense random-graph regime.
pub fn phase_thresholds(n: usize) -> Result<PhaseThresholds> {
    if n < 8 {
        return Err(Error::Parameter(format!("need N >= 8, got {n}")));
    }
    let nf = n as f64;
    let d1 = nf / 2f64.cbrt();
    let f = |d: f64| {
        let m = d * d / nf;
        let a = m - (d * nf / 2.0).sqrt();
        d * a * a - (nf - d) * m * m
    };
    let (mut lo, mut hi) = (d1, nf);
    let (flo, fhi) = (f(lo), f(hi));
    if flo.signum() == fhi.signum() {
        return Err(Error::NoRoot);
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid).signum() == flo.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-12 * nf {
            break;
        }
    }
    Ok(PhaseThresholds {
        n,
        d1,
        d2: 0.5 * (lo + hi),
        relation: SECOND_THRESHOLD_RELATION,
    })
}
