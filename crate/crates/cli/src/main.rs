//! `hyperstate` command-line front end.
//!
//! Exit codes: 0 on success, 1 on a domain error (invalid input file, failed
//! precondition, exceeded budget, failed verification), 2 on a usage error.

mod export;
mod io;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use hyperstate::circuit::{
    apply_circuit, cnot_cost, preparation_circuit, regime_estimate, synthesize_disentangler,
    Circuit, RegimeEstimate,
};
use hyperstate::entanglement::{node_entanglement, NodeEntanglement};
use hyperstate::families::{complete_kuniform, FamilySpec, PlatonicMode, Solid};
use hyperstate::hamiltonian::{
    build, reference_top_eigenvalue, top_eigenpair, Model, SpectrumReport,
};
use hyperstate::hypergraph::{Multipartite, Predicates};
use hyperstate::noisefit::{
    fit_input, fit_noise_model, signal_probability, stratum_means, NoiseFit,
};
use hyperstate::state::{
    excitation_state, fidelity, reduced_density, separability_check, StateJson,
};
use hyperstate::symmetry::{
    is_realizable, orbit_basis, parse_group, realizable_closure, stabilizer_group, GroupJson,
};
use hyperstate::{limits, Hypergraph, SparseState};
use serde::Serialize;

use crate::io::{emit, emit_json, fmt6, load_graph, parse_index_list};

/// Fidelity below which `circuit verify` fails.
const VERIFY_TOL: f64 = 1e-10;

#[derive(Parser)]
#[command(
    name = "hyperstate",
    version,
    about = "Entanglement of hypergraph excitation states"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Emit a named family instance as hypergraph JSON.
    Families(FamiliesArgs),
    /// Build excitation states and reduced density matrices.
    #[command(subcommand)]
    State(StateCmd),
    /// Pair concurrences, entanglement ratio and separability of a hypergraph state.
    Analyze(AnalyzeArgs),
    /// Permutation symmetries of states.
    #[command(subcommand)]
    Symmetry(SymmetryCmd),
    /// Preparation circuits for graph states.
    #[command(subcommand)]
    Circuit(CircuitCmd),
    /// Top eigenpair of a Hamiltonian restricted to a fixed-excitation sector.
    Hamiltonian(HamiltonianArgs),
    /// Signal/noise split and decay fit of measured counts.
    FitNoise(FitNoiseArgs),
    /// Reference tables as CSV.
    Export(ExportArgs),
}

#[derive(Args)]
struct FamiliesArgs {
    #[command(subcommand)]
    family: FamilyCmd,
    /// Output file (stdout when absent).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum FamilyCmd {
    /// Complete k-uniform hypergraph on n vertices.
    Dicke {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
    },
    /// Cycle graph on n vertices.
    Cycle {
        #[arg(long)]
        n: usize,
    },
    /// Platonic solid, by edges or by faces.
    Platonic {
        #[arg(long, value_parser = parse_solid)]
        solid: Solid,
        #[arg(long, value_enum, default_value_t = ModeArg::Edges)]
        mode: ModeArg,
    },
    /// All k-subsets of the m+1 simplex vertices.
    Simplex {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        k: usize,
    },
    /// k-subsets of the 2m orthoplex vertices containing no antipodal pair.
    Orthoplex {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        k: usize,
    },
    /// Skeleton of the m-dimensional hypercube.
    Hypercube {
        #[arg(long)]
        m: usize,
    },
    /// Periodic honeycomb with rows x cols vertices.
    HexTorus {
        #[arg(long)]
        rows: usize,
        #[arg(long)]
        cols: usize,
    },
    /// Periodic triangular lattice with rows x cols vertices.
    TriTorus {
        #[arg(long)]
        rows: usize,
        #[arg(long)]
        cols: usize,
    },
    /// Four parties with edges {0,1,2,3}, {0}, {1,2}.
    Telescope,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Edges,
    Faces,
}

fn parse_solid(s: &str) -> std::result::Result<Solid, String> {
    s.parse().map_err(|e: hyperstate::Error| e.to_string())
}

impl FamilyCmd {
    fn spec(&self) -> FamilySpec {
        match *self {
            FamilyCmd::Dicke { n, k } => FamilySpec::Dicke { n, k },
            FamilyCmd::Cycle { n } => FamilySpec::Cycle { n },
            FamilyCmd::Platonic { solid, mode } => FamilySpec::Platonic {
                solid,
                mode: match mode {
                    ModeArg::Edges => PlatonicMode::Edges,
                    ModeArg::Faces => PlatonicMode::Faces,
                },
            },
            FamilyCmd::Simplex { m, k } => FamilySpec::Simplex { m, k },
            FamilyCmd::Orthoplex { m, k } => FamilySpec::Orthoplex { m, k },
            FamilyCmd::Hypercube { m } => FamilySpec::Hypercube { m },
            FamilyCmd::HexTorus { rows, cols } => FamilySpec::HexTorus { rows, cols },
            FamilyCmd::TriTorus { rows, cols } => FamilySpec::TriTorus { rows, cols },
            FamilyCmd::Telescope => FamilySpec::Telescope,
        }
    }
}

#[derive(Subcommand)]
enum StateCmd {
    /// Excitation state of a hypergraph as state JSON.
    Build {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Reduced density matrix on a set of qubits.
    Reduce {
        #[command(flatten)]
        source: StateSource,
        /// Comma separated qubit indices, e.g. 0,2.
        #[arg(long)]
        qubits: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct StateSource {
    /// State JSON file.
    #[arg(long)]
    state: Option<PathBuf>,
    /// Hypergraph JSON file; its excitation state is used.
    #[arg(long)]
    graph: Option<PathBuf>,
}

impl StateSource {
    fn load(&self) -> Result<SparseState> {
        match (&self.state, &self.graph) {
            (Some(p), _) => io::load_state(p),
            (None, Some(p)) => Ok(excitation_state(&load_graph(p)?)?),
            (None, None) => bail!("either --state or --graph is required"),
        }
    }
}

#[derive(Args)]
struct AnalyzeArgs {
    #[arg(long)]
    graph: PathBuf,
    /// Analyze a single vertex instead of all of them.
    #[arg(long)]
    vertex: Option<usize>,
    /// Family label for the CSV rows (defaults to the file stem).
    #[arg(long)]
    family: Option<String>,
    /// JSON report file (stdout when absent).
    #[arg(long)]
    out: Option<PathBuf>,
    /// CSV rows `n,family,gamma_v,c_dist1,c_dist2`.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Subcommand)]
enum SymmetryCmd {
    /// Permutations of the parties leaving a state invariant.
    Stabilizer {
        #[command(flatten)]
        source: StateSource,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Whether a group is the full symmetry group of some qubit state.
    Realizable {
        #[command(flatten)]
        group: GroupSource,
    },
    /// Weight-k sector split into orbits of a group.
    OrbitBasis {
        #[command(flatten)]
        group: GroupSource,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct GroupSource {
    /// Preset (symmetric, cyclic, dihedral, alternating, trivial) or product
    /// such as `S2xS2@[0,2|1,3]`; needs --n.
    #[arg(long, requires = "n", conflicts_with = "group_file")]
    group: Option<String>,
    /// Number of parties for --group.
    #[arg(long)]
    n: Option<usize>,
    /// Group JSON `{"n": N, "generators": [[...], ...]}`.
    #[arg(long, required_unless_present = "group")]
    group_file: Option<PathBuf>,
}

impl GroupSource {
    fn load(&self) -> Result<(String, hyperstate::symmetry::PermutationGroup)> {
        match (&self.group, self.n, &self.group_file) {
            (Some(spec), Some(n), _) => Ok((format!("{spec}@{n}"), parse_group(spec, n)?)),
            (_, _, Some(p)) => Ok((p.display().to_string(), io::load_group(p)?)),
            _ => bail!("either --group with --n or --group-file is required"),
        }
    }
}

#[derive(Subcommand)]
enum CircuitCmd {
    /// Preparation circuit (or disentangler) for a graph state.
    Synth {
        #[arg(long)]
        graph: PathBuf,
        /// Vertex deletion order, e.g. 0,1,2,3.
        #[arg(long)]
        order: Option<String>,
        /// Emit the disentangler instead of the preparation circuit.
        #[arg(long)]
        disentangler: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Simulate a preparation circuit from the all-zero state and compare with
    /// the excitation state. Fails with exit code 1 below fidelity 1 - 1e-10.
    Verify {
        #[arg(long)]
        graph: PathBuf,
        /// Circuit JSON to check; synthesized when absent.
        #[arg(long)]
        circuit: Option<PathBuf>,
        #[arg(long, conflicts_with = "circuit")]
        order: Option<String>,
    },
    /// CNOT count of the synthesized circuit and the coarse regime estimate.
    Cost {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        order: Option<String>,
    },
}

#[derive(Args)]
struct HamiltonianArgs {
    #[arg(long)]
    graph: PathBuf,
    /// Excitation number of the sector.
    #[arg(long)]
    k: usize,
    #[arg(long, value_enum, default_value_t = ModelArg::Jj)]
    model: ModelArg,
    /// `auto` (the Dicke state for jj, the excitation state otherwise),
    /// `none`, or a state JSON file.
    #[arg(long, default_value = "auto")]
    target: String,
    /// Include the full sector spectrum in the report.
    #[arg(long)]
    spectrum: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelArg {
    Jj,
    Hg,
    #[value(name = "3body")]
    ThreeBody,
}

impl From<ModelArg> for Model {
    fn from(m: ModelArg) -> Model {
        match m {
            ModelArg::Jj => Model::Jj,
            ModelArg::Hg => Model::Hg,
            ModelArg::ThreeBody => Model::ThreeBody,
        }
    }
}

#[derive(Args)]
struct FitNoiseArgs {
    /// Counts as JSON `{"counts": {"00011": 812, ...}}` or CSV `bitstring,count`.
    #[arg(long)]
    counts: PathBuf,
    /// Read bitstrings right to left.
    #[arg(long)]
    reverse_bits: bool,
    /// JSON report file (stdout when absent).
    #[arg(long)]
    out: Option<PathBuf>,
    /// CSV rows `k,mean,fit`.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct ExportArgs {
    #[arg(value_enum)]
    table: ExportKind,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ExportKind {
    Table1,
    FigComparison,
    FigPolytope,
    FigFigz,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code().clamp(0, 255) as u8);
        }
    };
    if let Err(msg) = limits::check_env() {
        eprintln!("error: {}: {msg}", limits::ENV_VAR);
        return ExitCode::from(2);
    }
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Families(args) => {
            let g = args.family.spec().build()?;
            emit_json(args.out.as_deref(), &g.to_json())
        }
        Command::State(StateCmd::Build { graph, out }) => {
            let state = excitation_state(&load_graph(&graph)?)?;
            emit_json(out.as_deref(), &state.to_json())
        }
        Command::State(StateCmd::Reduce {
            source,
            qubits,
            out,
        }) => {
            let state = source.load()?;
            let rho = reduced_density(&state, &parse_index_list(&qubits)?)?;
            emit_json(out.as_deref(), &rho.to_json())
        }
        Command::Analyze(args) => analyze(&args),
        Command::Symmetry(cmd) => symmetry(cmd),
        Command::Circuit(cmd) => circuit(cmd),
        Command::Hamiltonian(args) => hamiltonian(&args),
        Command::FitNoise(args) => fit_noise(&args),
        Command::Export(args) => {
            let text = match args.table {
                ExportKind::Table1 => export::table1()?,
                ExportKind::FigComparison => export::fig_comparison()?,
                ExportKind::FigPolytope => export::fig_polytope()?,
                ExportKind::FigFigz => export::fig_figz()?,
            };
            emit(args.out.as_deref(), &text)
        }
    }
}

#[derive(Serialize)]
struct Separability {
    /// Blocks of the finest product decomposition, e.g. `02|13`.
    partition: Option<String>,
    blocks: Option<Vec<Vec<usize>>>,
    /// State-level confirmation that the excitation state factorizes.
    state_check: Option<bool>,
}

#[derive(Serialize)]
struct AnalyzeReport {
    n: usize,
    edge_count: usize,
    predicates: Predicates,
    multipartite: Option<Multipartite>,
    separability: Separability,
    nodes: Vec<NodeEntanglement>,
}

/// `02|13` for small graphs, `0,2|1,3` once labels need two digits.
fn partition_string(blocks: &[Vec<usize>], n: usize) -> String {
    let sep = if n <= 10 { "" } else { "," };
    blocks
        .iter()
        .map(|b| b.iter().map(usize::to_string).collect::<Vec<_>>().join(sep))
        .collect::<Vec<_>>()
        .join("|")
}

fn separability(g: &Hypergraph) -> Result<Separability> {
    let Some(dec) = g.product_decompose()? else {
        return Ok(Separability {
            partition: None,
            blocks: None,
            state_check: None,
        });
    };
    let state = excitation_state(g)?;
    Ok(Separability {
        partition: Some(partition_string(&dec.blocks, g.n())),
        state_check: Some(separability_check(&state, &dec.blocks)?),
        blocks: Some(dec.blocks),
    })
}

fn analyze(args: &AnalyzeArgs) -> Result<()> {
    let g = load_graph(&args.graph)?;
    let vertices: Vec<usize> = match args.vertex {
        Some(v) if v >= g.n() => bail!("vertex {v} out of range for n = {}", g.n()),
        Some(v) => vec![v],
        None => (0..g.n()).collect(),
    };
    let nodes = vertices
        .iter()
        .map(|&v| node_entanglement(&g, v).with_context(|| format!("vertex {v}")))
        .collect::<Result<Vec<_>>>()?;
    let report = AnalyzeReport {
        n: g.n(),
        edge_count: g.edge_count(),
        predicates: g.predicates(),
        multipartite: g.is_complete_multipartite()?,
        separability: separability(&g)?,
        nodes,
    };
    if let Some(path) = &args.csv {
        let family = args
            .family
            .clone()
            .unwrap_or_else(|| file_stem(&args.graph));
        let rows: Vec<Vec<String>> = report
            .nodes
            .iter()
            .map(|node| {
                vec![
                    g.n().to_string(),
                    family.clone(),
                    fmt6(node.gamma),
                    fmt6(node.max_at_distance(1)),
                    fmt6(node.max_at_distance(2)),
                ]
            })
            .collect();
        let text = io::csv_string(&["n", "family", "gamma_v", "c_dist1", "c_dist2"], &rows)?;
        emit(Some(path), &text)?;
    }
    emit_json(args.out.as_deref(), &report)
}

fn file_stem(p: &Path) -> String {
    p.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default()
}

#[derive(Serialize)]
struct StabilizerReport {
    order: usize,
    group: GroupJson,
}

#[derive(Serialize)]
struct RealizableReport {
    group: String,
    order: usize,
    closure_order: usize,
    realizable: bool,
}

fn symmetry(cmd: SymmetryCmd) -> Result<()> {
    match cmd {
        SymmetryCmd::Stabilizer { source, out } => {
            let h = stabilizer_group(&source.load()?)?;
            let report = StabilizerReport {
                order: h.order(),
                group: h.to_json(),
            };
            emit_json(out.as_deref(), &report)
        }
        SymmetryCmd::Realizable { group } => {
            let (name, h) = group.load()?;
            let closure = realizable_closure(&h)?;
            let report = RealizableReport {
                group: name,
                order: h.order(),
                closure_order: closure.order(),
                realizable: is_realizable(&h)?,
            };
            emit_json(None, &report)
        }
        SymmetryCmd::OrbitBasis { group, k, out } => {
            let (_, h) = group.load()?;
            let basis: Vec<StateJson> = orbit_basis(&h, k)?
                .iter()
                .map(SparseState::to_json)
                .collect();
            emit_json(out.as_deref(), &basis)
        }
    }
}

fn parse_order(order: &Option<String>) -> Result<Option<Vec<usize>>> {
    order.as_deref().map(parse_index_list).transpose()
}

#[derive(Serialize)]
struct VerifyReport {
    n: usize,
    fidelity: f64,
    cnot_cost: usize,
    passed: bool,
}

#[derive(Serialize)]
struct CostReport {
    cnot_cost: usize,
    gate_counts: std::collections::BTreeMap<String, usize>,
    regime: RegimeEstimate,
}

fn circuit(cmd: CircuitCmd) -> Result<()> {
    match cmd {
        CircuitCmd::Synth {
            graph,
            order,
            disentangler,
            out,
        } => {
            let g = load_graph(&graph)?;
            let order = parse_order(&order)?;
            let c = if disentangler {
                synthesize_disentangler(&g, order.as_deref())?
            } else {
                preparation_circuit(&g, order.as_deref())?
            };
            emit_json(out.as_deref(), &c)
        }
        CircuitCmd::Verify {
            graph,
            circuit,
            order,
        } => {
            let g = load_graph(&graph)?;
            let c: Circuit = match &circuit {
                Some(p) => io::load_circuit(p)?,
                None => preparation_circuit(&g, parse_order(&order)?.as_deref())?,
            };
            if c.n != g.n() {
                bail!("circuit acts on {} qubits but the graph has {}", c.n, g.n());
            }
            let vacuum = SparseState::basis(g.n(), 2, 0)?;
            let f = fidelity(&apply_circuit(&vacuum, &c)?, &excitation_state(&g)?)?;
            let report = VerifyReport {
                n: g.n(),
                fidelity: f,
                cnot_cost: cnot_cost(&c),
                passed: f >= 1.0 - VERIFY_TOL,
            };
            emit_json(None, &report)?;
            if !report.passed {
                bail!("verification failed: fidelity {f}");
            }
            Ok(())
        }
        CircuitCmd::Cost { graph, order } => {
            let g = load_graph(&graph)?;
            let c = preparation_circuit(&g, parse_order(&order)?.as_deref())?;
            let report = CostReport {
                cnot_cost: cnot_cost(&c),
                gate_counts: c.gate_counts(),
                regime: regime_estimate(&g),
            };
            emit_json(None, &report)
        }
    }
}

#[derive(Serialize)]
struct HamiltonianReport {
    model: String,
    k: usize,
    /// Literature value for comparison; not asserted.
    reference_top_eigenvalue: Option<f64>,
    report: SpectrumReport,
}

fn hamiltonian(args: &HamiltonianArgs) -> Result<()> {
    let g = load_graph(&args.graph)?;
    let model = Model::from(args.model);
    let op = build(model, &g, args.k)?;
    let target = match args.target.as_str() {
        "none" => None,
        "auto" => match model {
            Model::Jj => Some(excitation_state(&complete_kuniform(g.n(), args.k)?)?),
            _ if g.uniformity() == Some(args.k) => Some(excitation_state(&g)?),
            _ => None,
        },
        path => Some(io::load_state(Path::new(path))?),
    };
    let mut report = top_eigenpair(&op, target.as_ref())?;
    if !args.spectrum {
        report.spectrum.clear();
    }
    let out = HamiltonianReport {
        model: model.to_string(),
        k: args.k,
        reference_top_eigenvalue: reference_top_eigenvalue(model, &g, args.k),
        report,
    };
    emit_json(args.out.as_deref(), &out)
}

#[derive(Serialize)]
struct FitNoiseReport {
    n: usize,
    total: u64,
    signal_probability: f64,
    /// Mean probability of the non-signal strings per Hamming weight; null for
    /// empty strata.
    stratum_means: Vec<Option<f64>>,
    fit: NoiseFit,
}

fn fit_noise(args: &FitNoiseArgs) -> Result<()> {
    let h = io::load_counts(&args.counts, args.reverse_bits)?;
    let fit = fit_noise_model(&fit_input(&h)?)?;
    if let Some(path) = &args.csv {
        let rows: Vec<Vec<String>> = fit
            .means
            .iter()
            .zip(&fit.fitted)
            .enumerate()
            .map(|(k, (m, f))| vec![k.to_string(), fmt6(*m), fmt6(*f)])
            .collect();
        emit(Some(path), &io::csv_string(&["k", "mean", "fit"], &rows)?)?;
    }
    let report = FitNoiseReport {
        n: h.n(),
        total: h.total(),
        signal_probability: signal_probability(&h)?,
        stratum_means: stratum_means(&h)?,
        fit,
    };
    emit_json(args.out.as_deref(), &report)
}
