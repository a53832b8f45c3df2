use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use hyperstate::hypergraph::HypergraphJson;
use hyperstate::state::StateJson;
use serde_json::Value;

fn data(rel: &str) -> PathBuf {
    Path::new(concat!(env!("CARGO_MANIFEST_DIR"), "/../../data")).join(rel)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hyperstate"))
        .args(args)
        .env_remove("HYPERSTATE_LIMITS")
        .output()
        .expect("binary runs")
}

fn stdout_ok(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn json_ok(args: &[&str]) -> Value {
    serde_json::from_str(&stdout_ok(args)).unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn graph_fixtures() -> Vec<PathBuf> {
    let mut v: Vec<PathBuf> = std::fs::read_dir(data("graphs"))
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "json"))
        .collect();
    v.sort();
    v
}

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    r.records()
        .map(|rec| rec.unwrap().iter().map(String::from).collect())
        .collect()
}

#[test]
fn families_emit_canonical_json() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("c6.json");
    stdout_ok(&["families", "cycle", "--n", "6", "--out", s(&out)]);
    let text = std::fs::read_to_string(&out).unwrap();
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["n"], 6);
    assert_eq!(v["edges"][5], serde_json::json!([4, 5]));
    // parsing back into the typed form and re-serializing gives the same bytes
    let typed: HypergraphJson = serde_json::from_str(&text).unwrap();
    assert_eq!(serde_json::to_string_pretty(&typed).unwrap() + "\n", text);
    let fixture: Value =
        serde_json::from_str(&std::fs::read_to_string(data("graphs/c6.json")).unwrap()).unwrap();
    assert_eq!(fixture["n"], v["n"]);
    let mut a = fixture["edges"].as_array().unwrap().clone();
    a.sort_by_key(|e| e.to_string());
    let mut b = v["edges"].as_array().unwrap().clone();
    b.sort_by_key(|e| e.to_string());
    assert_eq!(a, b);
}

#[test]
fn families_platonic_and_telescope() {
    let v = json_ok(&["families", "platonic", "--solid", "icosahedron"]);
    assert_eq!(v["edges"].as_array().unwrap().len(), 30);
    let v = json_ok(&["families", "platonic", "--solid", "cube", "--mode", "faces"]);
    assert_eq!(v["edges"].as_array().unwrap().len(), 6);
    let v = json_ok(&["families", "telescope"]);
    assert_eq!(v["n"], 4);
    assert_eq!(
        run(&["families", "platonic", "--solid", "torus"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn export_table1_matches_reference() {
    let rows = csv_rows(&stdout_ok(&["export", "table1"]));
    let expected = [
        ("tetrahedron", "0.333333", "0.333333"),
        ("octahedron", "0.666667", "0.500000"),
        ("cube", "0.333333", "0.444444"),
        ("icosahedron", "0.133333", "0.160000"),
        ("dodecahedron", "0.066667", "0.074074"),
    ];
    assert_eq!(rows.len(), 5);
    for (row, (name, c, g)) in rows.iter().zip(expected) {
        assert_eq!(
            (row[0].as_str(), row[2].as_str(), row[3].as_str()),
            (name, c, g)
        );
    }
}

#[test]
fn export_fig_comparison_points() {
    let rows = csv_rows(&stdout_ok(&["export", "fig-comparison"]));
    let cell = |n: &str, col: usize| rows.iter().find(|r| r[0] == n).unwrap()[col].clone();
    assert_eq!(cell("5", 1), "0.267949");
    assert_eq!(cell("10", 1), "0.203777");
    assert_eq!(cell("8", 2), "0.341977");
    assert_eq!(cell("16", 3), "0.214286");
    assert_eq!(cell("6", 4), "0.250000");
    assert_eq!(cell("24", 5), "0.060606");
    assert_eq!(cell("20", 6), "0.074074");
    assert_eq!(cell("7", 2), "");
}

#[test]
fn export_polytope_and_figz() {
    let rows = csv_rows(&stdout_ok(&["export", "fig-polytope"]));
    assert_eq!(rows[1], ["8", "0.341977", "0.008644", "0.333333"]);
    let rows = csv_rows(&stdout_ok(&["export", "fig-figz"]));
    assert_eq!(rows.len(), 18);
    assert_eq!(rows.iter().find(|r| r[0] == "10").unwrap()[1], "0.640000");
    // every float cell has exactly six decimals
    assert!(rows
        .iter()
        .all(|r| r[1].split('.').nth(1).unwrap().len() == 6));
}

#[test]
fn analyze_reports_separability() {
    let v = json_ok(&["analyze", "--graph", s(&data("graphs/c4.json"))]);
    assert_eq!(v["separability"]["partition"], "02|13");
    assert_eq!(v["separability"]["state_check"], true);
    assert_eq!(v["nodes"].as_array().unwrap().len(), 4);
    let v = json_ok(&[
        "analyze",
        "--graph",
        s(&data("graphs/k222.json")),
        "--vertex",
        "0",
    ]);
    assert_eq!(v["separability"]["partition"], "05|13|24");
    assert_eq!(v["separability"]["state_check"], true);
    for c in ["c5", "c6", "c7"] {
        let v = json_ok(&[
            "analyze",
            "--graph",
            s(&data(&format!("graphs/{c}.json"))),
            "--vertex",
            "0",
        ]);
        assert!(v["separability"]["partition"].is_null(), "{c}");
    }
}

#[test]
fn analyze_csv_rows() {
    let dir = tempfile::tempdir().unwrap();
    let csv_path = dir.path().join("rows.csv");
    let out = dir.path().join("report.json");
    stdout_ok(&[
        "analyze",
        "--graph",
        s(&data("graphs/c6.json")),
        "--vertex",
        "2",
        "--csv",
        s(&csv_path),
        "--out",
        s(&out),
    ]);
    let rows = csv_rows(&std::fs::read_to_string(&csv_path).unwrap());
    assert_eq!(
        rows,
        vec![vec!["6", "c6", "0.250000", "0.000000", "0.333333"]]
    );
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["nodes"][0]["vertex"], 2);
}

#[test]
fn circuit_verify_on_graph_fixtures() {
    for path in graph_fixtures() {
        let g: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
        let max_edge = g["edges"]
            .as_array()
            .unwrap()
            .iter()
            .map(|e| e.as_array().unwrap().len())
            .max()
            .unwrap();
        let out = run(&["circuit", "verify", "--graph", s(&path)]);
        if max_edge <= 2 {
            assert!(
                out.status.success(),
                "{}: {}",
                path.display(),
                String::from_utf8_lossy(&out.stderr)
            );
            let v: Value = serde_json::from_slice(&out.stdout).unwrap();
            assert!(v["fidelity"].as_f64().unwrap() > 1.0 - 1e-10);
        } else {
            // synthesis is defined for graphs only
            assert_eq!(out.status.code(), Some(1), "{}", path.display());
            assert!(String::from_utf8_lossy(&out.stderr).contains("at most two vertices"));
        }
    }
}

#[test]
fn circuit_synth_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let c = dir.path().join("c5_circuit.json");
    stdout_ok(&[
        "circuit",
        "synth",
        "--graph",
        s(&data("graphs/c5.json")),
        "--order",
        "2,3,4,0,1",
        "--out",
        s(&c),
    ]);
    let v = json_ok(&[
        "circuit",
        "verify",
        "--graph",
        s(&data("graphs/c5.json")),
        "--circuit",
        s(&c),
    ]);
    assert_eq!(v["passed"], true);
    // a circuit for a different graph fails verification
    let out = run(&[
        "circuit",
        "verify",
        "--graph",
        s(&data("graphs/w6.json")),
        "--circuit",
        s(&c),
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn circuit_cost_reports_regime() {
    let v = json_ok(&["circuit", "cost", "--graph", s(&data("graphs/c5.json"))]);
    assert_eq!(v["cnot_cost"], 22);
    assert_eq!(v["regime"]["formula"], "4(|V|-1)");
}

#[test]
fn hamiltonian_models() {
    let v = json_ok(&[
        "hamiltonian",
        "--graph",
        s(&data("graphs/c6.json")),
        "--k",
        "2",
        "--model",
        "jj",
    ]);
    assert!((v["report"]["top_eigenvalue"].as_f64().unwrap() - 10.0).abs() < 1e-9);
    assert_eq!(v["report"]["degeneracy"], 1);
    assert!(v["report"]["overlap"].as_f64().unwrap() > 1.0 - 1e-10);
    assert!(v["report"]["spectrum"].as_array().unwrap().is_empty());
    let v = json_ok(&[
        "hamiltonian",
        "--graph",
        s(&data("graphs/c6.json")),
        "--k",
        "2",
        "--model",
        "3body",
        "--spectrum",
    ]);
    assert!(v["report"]["target_residual"].as_f64().unwrap() < 1e-10);
    assert_eq!(v["report"]["spectrum"].as_array().unwrap().len(), 15);
    let out = run(&[
        "hamiltonian",
        "--graph",
        s(&data("graphs/c6.json")),
        "--k",
        "2",
        "--model",
        "xx",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn symmetry_subcommands() {
    let v = json_ok(&["symmetry", "realizable", "--group", "S2@[0,1]", "--n", "3"]);
    assert_eq!(v["realizable"], true);
    let v = json_ok(&["symmetry", "realizable", "--group", "cyclic", "--n", "4"]);
    assert_eq!(v["realizable"], false);
    let v = json_ok(&[
        "symmetry",
        "stabilizer",
        "--graph",
        s(&data("graphs/c4.json")),
    ]);
    assert_eq!(v["order"], 8);
    let v = json_ok(&[
        "symmetry",
        "orbit-basis",
        "--group",
        "cyclic",
        "--n",
        "4",
        "--k",
        "2",
    ]);
    assert_eq!(v.as_array().unwrap().len(), 2);
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("group.json");
    std::fs::write(&g, r#"{"n": 3, "generators": [[1, 0, 2]]}"#).unwrap();
    let v = json_ok(&["symmetry", "realizable", "--group-file", s(&g)]);
    assert_eq!(v["order"], 2);
    assert_eq!(run(&["symmetry", "realizable"]).status.code(), Some(2));
}

#[test]
fn state_build_and_reduce_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let st = dir.path().join("c4_state.json");
    stdout_ok(&[
        "state",
        "build",
        "--graph",
        s(&data("graphs/c4.json")),
        "--out",
        s(&st),
    ]);
    let text = std::fs::read_to_string(&st).unwrap();
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["amps"].as_object().unwrap().len(), 4);
    let typed: StateJson = serde_json::from_str(&text).unwrap();
    assert_eq!(serde_json::to_string_pretty(&typed).unwrap() + "\n", text);
    let a = json_ok(&["state", "reduce", "--state", s(&st), "--qubits", "0,2"]);
    let b = json_ok(&[
        "state",
        "reduce",
        "--graph",
        s(&data("graphs/c4.json")),
        "--qubits",
        "0,2",
    ]);
    assert_eq!(a, b);
    assert_eq!(a["dim"], 4);
}

#[test]
fn fit_noise_on_pooled_counts() {
    let dir = tempfile::tempdir().unwrap();
    let csv_path = dir.path().join("fit.csv");
    let v = json_ok(&[
        "fit-noise",
        "--counts",
        s(&data("counts/pooled_counts.json")),
        "--csv",
        s(&csv_path),
    ]);
    assert!((v["signal_probability"].as_f64().unwrap() - 0.487).abs() < 1e-3);
    assert_eq!(v["fit"]["converged"], true);
    let rows = csv_rows(&std::fs::read_to_string(&csv_path).unwrap());
    assert_eq!(rows.len(), 5);
    assert_eq!(rows[0][1], "0.086041");
}

#[test]
fn fit_noise_reverse_bits_and_csv_input() {
    let dir = tempfile::tempdir().unwrap();
    let counts = dir.path().join("counts.csv");
    std::fs::write(
        &counts,
        "bitstring,count\n00011,30\n00001,10\n10000,20\n00000,40\n",
    )
    .unwrap();
    let a = json_ok(&["fit-noise", "--counts", s(&counts)]);
    let b = json_ok(&["fit-noise", "--counts", s(&counts), "--reverse-bits"]);
    assert_eq!(a["total"], 100);
    // 00011 and 11000 are both signal strings, so the split is unchanged
    assert_eq!(a["signal_probability"], b["signal_probability"]);
    assert_eq!(a["stratum_means"], b["stratum_means"]);
}

#[test]
fn malformed_json_reports_position() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"n\": 3,\n \"edges\": [[0,1],]}").unwrap();
    let out = run(&["analyze", "--graph", s(&bad)]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 2"), "{err}");
    assert!(err.contains("column"), "{err}");
}

#[test]
fn domain_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("range.json");
    std::fs::write(&bad, r#"{"n": 3, "edges": [[0, 5]]}"#).unwrap();
    assert_eq!(run(&["analyze", "--graph", s(&bad)]).status.code(), Some(1));
    assert_eq!(
        run(&["analyze", "--graph", "/nonexistent/g.json"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        run(&["families", "cycle", "--n", "2"]).status.code(),
        Some(1)
    );
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["analyze", "--bogus"]).status.code(), Some(2));
    assert_eq!(run(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(run(&["export"]).status.code(), Some(2));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn budget_override_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_hyperstate"))
        .args([
            "symmetry",
            "stabilizer",
            "--graph",
            s(&data("graphs/c4.json")),
        ])
        .env("HYPERSTATE_LIMITS", "symmetric_search_max_n=3")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("limit 3"));
    let out = Command::new(env!("CARGO_BIN_EXE_hyperstate"))
        .args(["export", "table1"])
        .env("HYPERSTATE_LIMITS", "nonsense=1")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn output_is_deterministic() {
    for args in [
        vec!["export", "fig-comparison"],
        vec!["analyze", "--graph", s(&data("graphs/cube_edges.json"))],
        vec![
            "circuit",
            "synth",
            "--graph",
            s(&data("graphs/icosahedron_edges.json")),
        ],
    ] {
        assert_eq!(stdout_ok(&args), stdout_ok(&args));
    }
}
