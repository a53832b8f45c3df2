mod common;

use std::collections::BTreeSet;

use hyperstate::circuit::{
    apply_circuit, cnot_cost, invert, preparation_circuit, synthesize_disentangler,
};
use hyperstate::entanglement::{
    c_v_rest_closed, c_v_rest_state, concurrence_excitation, concurrence_wootters,
    node_entanglement,
};
use hyperstate::families::k_subsets;
use hyperstate::hamiltonian::{build, Model};
use hyperstate::linalg::{complex_eigenvalues, jacobi_eigen};
use hyperstate::noisefit::{
    fit_decay_only, fit_noise_model, model, noise_strata, signal_probability, signal_set,
    stratum_means, CountsHistogram,
};
use hyperstate::state::{excitation_state, fidelity, reduced_2q_closed_form, reduced_density};
use hyperstate::symmetry::{orbit_basis, stabilizer_group, Permutation, PermutationGroup};
use hyperstate::{Hypergraph, SparseState};
use num_complex::Complex64;
use proptest::prelude::*;

/// Random k-uniform hypergraph with at least one edge.
fn uniform_hypergraph(max_n: usize) -> impl Strategy<Value = Hypergraph> {
    (2..=max_n)
        .prop_flat_map(|n| (Just(n), 1..n))
        .prop_flat_map(|(n, k)| {
            let all = k_subsets(n, k);
            let len = all.len();
            (
                Just(n),
                Just(all),
                proptest::collection::vec(any::<bool>(), len),
            )
        })
        .prop_filter_map("needs an edge", |(n, all, keep)| {
            let edges: Vec<Vec<usize>> = all
                .into_iter()
                .zip(keep)
                .filter(|(_, k)| *k)
                .map(|(e, _)| e)
                .collect();
            (!edges.is_empty()).then(|| Hypergraph::new(n, edges).unwrap())
        })
}

/// Random connected graph: a random spanning tree plus random chords.
fn connected_graph(min_n: usize, max_n: usize) -> impl Strategy<Value = Hypergraph> {
    (min_n..=max_n)
        .prop_flat_map(|n| {
            let parents: Vec<_> = (1..n).map(|i| 0..i).collect();
            (
                Just(n),
                parents,
                proptest::collection::vec(any::<bool>(), n * (n - 1) / 2),
            )
        })
        .prop_map(|(n, parents, chords)| {
            let mut edges: BTreeSet<Vec<usize>> = BTreeSet::new();
            for (i, p) in parents.into_iter().enumerate() {
                edges.insert(vec![p, i + 1]);
            }
            for (e, keep) in k_subsets(n, 2).into_iter().zip(chords) {
                if keep {
                    edges.insert(e);
                }
            }
            Hypergraph::new(n, edges.into_iter().collect()).unwrap()
        })
}

fn permutation(n: usize) -> impl Strategy<Value = Permutation> {
    Just((0..n).collect::<Vec<_>>())
        .prop_shuffle()
        .prop_map(|v| Permutation::new(v).unwrap())
}

fn random_state(n: usize) -> impl Strategy<Value = SparseState> {
    proptest::collection::vec((0u128..(1 << n), -1.0f64..1.0, -1.0f64..1.0), 1..12).prop_filter_map(
        "nonzero",
        move |terms| {
            SparseState::new(
                n,
                2,
                terms
                    .into_iter()
                    .map(|(l, re, im)| (l, Complex64::new(re, im))),
            )
            .ok()
        },
    )
}

fn degree_multiset(g: &Hypergraph) -> Vec<usize> {
    let mut d: Vec<usize> = (0..g.n()).map(|v| g.degree(v).unwrap()).collect();
    d.sort();
    d
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn canonical_json_round_trip(g in uniform_hypergraph(7)) {
        let j = g.to_json();
        let back = Hypergraph::new(j.n, j.edges.clone()).unwrap();
        prop_assert_eq!(&back, &g);
        let text = serde_json::to_string(&j).unwrap();
        let again: hyperstate::hypergraph::HypergraphJson = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(again, j);
    }

    #[test]
    fn relabel_preserves_invariants((g, p) in uniform_hypergraph(7).prop_flat_map(|g| { let n = g.n(); (Just(g), permutation(n)) })) {
        let h = g.relabel(&p).unwrap();
        prop_assert_eq!(h.edge_count(), g.edge_count());
        prop_assert_eq!(h.uniformity(), g.uniformity());
        prop_assert_eq!(degree_multiset(&h), degree_multiset(&g));
        prop_assert_eq!(h.relabel(&p.inverse()).unwrap(), g);
    }

    #[test]
    fn distances_are_symmetric(g in uniform_hypergraph(7)) {
        for v in 0..g.n() {
            for w in (0..g.n()).filter(|&w| w != v) {
                prop_assert_eq!(g.distance(v, w).unwrap(), g.distance(w, v).unwrap());
            }
        }
    }

    #[test]
    fn excitation_state_is_normalized(g in uniform_hypergraph(8)) {
        let s = excitation_state(&g).unwrap();
        prop_assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
        prop_assert_eq!(s.support_size(), g.edge_count());
    }

    #[test]
    fn reductions_are_density_matrices(g in uniform_hypergraph(7), a in 0usize..7, b in 0usize..7) {
        let n = g.n();
        let (a, b) = (a % n, b % n);
        prop_assume!(a != b);
        let rho = reduced_density(&excitation_state(&g).unwrap(), &[a, b]).unwrap();
        prop_assert!((rho.trace().re - 1.0).abs() < 1e-12);
        prop_assert!(rho.hermiticity_error() < 1e-12);
        let re: Vec<f64> = rho.data().iter().map(|z| z.re).collect();
        let eig = jacobi_eigen(4, &re).unwrap();
        prop_assert!(eig.values[3] > -1e-12);
    }

    #[test]
    fn closed_form_matches_partial_trace(g in uniform_hypergraph(7)) {
        let state = excitation_state(&g).unwrap();
        for (v, w) in k_subsets(g.n(), 2).into_iter().map(|p| (p[0], p[1])) {
            let explicit = reduced_density(&state, &[v, w]).unwrap();
            let closed = reduced_2q_closed_form(&g, v, w).unwrap();
            prop_assert!(closed.max_abs_diff(&explicit) < 1e-12);
            let c = concurrence_wootters(&explicit).unwrap();
            prop_assert!((-1e-12..=1.0 + 1e-12).contains(&c));
            prop_assert!((concurrence_excitation(&g, v, w).unwrap() - c).abs() < 1e-9);
        }
    }

    #[test]
    fn monogamy_holds(g in uniform_hypergraph(7)) {
        for v in 0..g.n() {
            match node_entanglement(&g, v) {
                Ok(node) => {
                    prop_assert!(node.monogamy_gap >= -1e-10, "gap {}", node.monogamy_gap);
                    prop_assert!(node.gamma >= 0.0 && node.gamma <= 1.0 + 1e-10);
                }
                // a vertex in every edge or in none is not entangled with the rest
                Err(hyperstate::Error::Precondition(_)) => {
                    let d = g.degree(v).unwrap();
                    prop_assert!(d == 0 || d == g.edge_count());
                }
                Err(e) => return Err(TestCaseError::fail(e.to_string())),
            }
        }
    }

    #[test]
    fn generalized_concurrence_closed_form(g in uniform_hypergraph(7)) {
        let state = excitation_state(&g).unwrap();
        for v in 0..g.n() {
            let c = c_v_rest_state(&state, v).unwrap();
            prop_assert!((c_v_rest_closed(&g, v).unwrap() - c).abs() < 1e-9);
        }
    }

    #[test]
    fn permutation_algebra((p, q) in (2usize..9).prop_flat_map(|n| (permutation(n), permutation(n)))) {
        prop_assert!(p.compose(&p.inverse()).is_identity());
        let pq = p.compose(&q);
        for i in 0..p.len() {
            prop_assert_eq!(pq.image()[i], p.image()[q.image()[i]]);
        }
        prop_assert_eq!(pq.inverse(), q.inverse().compose(&p.inverse()));
        prop_assert_eq!(pq.is_even(), p.is_even() == q.is_even());
    }

    #[test]
    fn generated_groups_are_closed(gens in (2usize..6).prop_flat_map(|n| proptest::collection::vec(permutation(n), 1..3))) {
        let n = gens[0].len();
        let h = PermutationGroup::generate(n, gens).unwrap();
        prop_assert_eq!(720 % h.order(), 0);
        for a in h.elements() {
            prop_assert!(h.contains(&a.inverse()));
            for b in h.elements() {
                prop_assert!(h.contains(&a.compose(b)));
            }
        }
    }

    #[test]
    fn automorphisms_stabilize_the_state(g in uniform_hypergraph(6)) {
        let aut = g.automorphism_group().unwrap();
        let stab = stabilizer_group(&excitation_state(&g).unwrap()).unwrap();
        prop_assert!(aut.is_subgroup_of(&stab));
        prop_assert_eq!(aut.order(), stab.order());
    }

    #[test]
    fn orbit_basis_partitions_sector((gens, k) in (2usize..7).prop_flat_map(|n| (proptest::collection::vec(permutation(n), 1..3), 0..=n))) {
        let n = gens[0].len();
        let h = PermutationGroup::generate(n, gens).unwrap();
        let basis = orbit_basis(&h, k).unwrap();
        let total: usize = basis.iter().map(SparseState::support_size).sum();
        prop_assert_eq!(total, k_subsets(n, k).len());
        for (i, a) in basis.iter().enumerate() {
            for b in &basis[i + 1..] {
                prop_assert!(a.inner(b).unwrap().norm() < 1e-12);
            }
        }
    }

    #[test]
    fn circuit_round_trip((g, order) in connected_graph(2, 8).prop_flat_map(|g| { let n = g.n(); (Just(g), Just((0..n).collect::<Vec<_>>()).prop_shuffle()) })) {
        let prep = preparation_circuit(&g, Some(&order)).unwrap();
        let vacuum = SparseState::basis(g.n(), 2, 0).unwrap();
        let out = apply_circuit(&vacuum, &prep).unwrap();
        prop_assert!(fidelity(&out, &excitation_state(&g).unwrap()).unwrap() > 1.0 - 1e-10);
        let dis = synthesize_disentangler(&g, Some(&order)).unwrap();
        let single = apply_circuit(&excitation_state(&g).unwrap(), &dis).unwrap();
        prop_assert_eq!(single.support_size(), 1);
        prop_assert_eq!(single.amplitudes().keys().next().unwrap().count_ones(), 1);
    }

    #[test]
    fn circuits_are_unitary(g in connected_graph(3, 6), seed in random_state(6)) {
        let c = synthesize_disentangler(&g, None).unwrap();
        let n = g.n();
        // restrict the random state to the circuit width
        let terms = seed.amplitudes().iter().map(|(&l, &a)| (l >> (6 - n), a));
        let Ok(s) = SparseState::new(n, 2, terms) else { return Ok(()) };
        let raw: f64 = s.amplitudes().values().map(|a| a.norm_sqr()).sum();
        let out = apply_circuit(&s, &c).unwrap();
        let after: f64 = out.amplitudes().values().map(|a| a.norm_sqr()).sum();
        prop_assert!((after - raw).abs() < 1e-10);
        let back = apply_circuit(&out, &invert(&c)).unwrap();
        prop_assert!(back.distance(&s).unwrap() < 1e-10);
    }

    #[test]
    fn circuit_cost_is_additive(g in connected_graph(2, 9)) {
        let c = preparation_circuit(&g, None).unwrap();
        let sum: usize = c.gates.iter().map(|x| x.kind.cnot_cost()).sum();
        prop_assert_eq!(cnot_cost(&c), sum);
        prop_assert_eq!(c.cnot_cost, sum);
        prop_assert_eq!(invert(&invert(&c)), c.clone());
        for gate in &c.gates {
            let m = gate.matrix();
            let d = (m.len() as f64).sqrt() as usize;
            for i in 0..d {
                for j in 0..d {
                    let dot: f64 = (0..d).map(|r| m[r * d + i] * m[r * d + j]).sum();
                    let want = f64::from(u8::from(i == j));
                    prop_assert!((dot - want).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn sector_matches_full_space(g in connected_graph(3, 7), k in 1usize..7) {
        let k = 1 + k % (g.n() - 1);
        for m in [Model::Jj, Model::Hg, Model::ThreeBody] {
            if m == Model::Hg && k < 2 {
                continue;
            }
            let op = build(m, &g, k).unwrap();
            prop_assert!(op.symmetry_error() < 1e-12);
            let oracle = common::full_space_block(m, &g, k);
            prop_assert_eq!(&op.matrix, &oracle, "model {}", m);
        }
    }

    #[test]
    fn strata_partition_and_probability(counts in proptest::collection::vec(0u64..50, 32)) {
        prop_assume!(counts.iter().sum::<u64>() > 0);
        let pairs = counts.iter().enumerate().map(|(i, &c)| (format!("{i:05b}"), c));
        let h = CountsHistogram::from_pairs(pairs, false).unwrap();
        let signal = signal_set(5).unwrap();
        let strata = noise_strata(5).unwrap();
        let mut all: Vec<u128> = signal.clone();
        for s in &strata {
            all.extend(s);
        }
        all.sort();
        prop_assert_eq!(all, (0..32).collect::<Vec<u128>>());
        let means = stratum_means(&h).unwrap();
        let total: f64 = signal_probability(&h).unwrap()
            + strata.iter().zip(&means).map(|(s, m)| s.len() as f64 * m.unwrap_or(0.0)).sum::<f64>();
        prop_assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn extra_parameter_never_hurts(means in proptest::collection::vec(0.0f64..0.2, 5)) {
        let full = fit_noise_model(&means).unwrap();
        let decay = fit_decay_only(&means).unwrap();
        prop_assert!(full.residual <= decay.residual + 1e-12);
        prop_assert!(full.alpha >= 0.0 && full.beta >= 0.0 && full.gamma >= 0.0);
    }

    #[test]
    fn exact_decay_is_recovered(alpha in 0.01f64..0.2, beta in 0.2f64..3.0) {
        let means: Vec<f64> = (0..5).map(|k| model(alpha, beta, 0.0, k)).collect();
        let fit = fit_noise_model(&means).unwrap();
        prop_assert!(fit.residual < 1e-12);
        prop_assert!((fit.alpha - alpha).abs() < 1e-6 && (fit.beta - beta).abs() < 1e-6);
    }

    #[test]
    fn jacobi_diagonalizes(entries in proptest::collection::vec(-5.0f64..5.0, 36)) {
        let n = 6;
        let mut a = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..=i {
                a[i * n + j] = entries[i * n + j];
                a[j * n + i] = entries[i * n + j];
            }
        }
        let eig = jacobi_eigen(n, &a).unwrap();
        let trace: f64 = (0..n).map(|i| a[i * n + i]).sum();
        prop_assert!((eig.values.iter().sum::<f64>() - trace).abs() < 1e-9);
        for j in 0..n {
            let v = eig.vector(j);
            for i in 0..n {
                let av: f64 = (0..n).map(|c| a[i * n + c] * v[c]).sum();
                prop_assert!((av - eig.values[j] * v[i]).abs() < 1e-9);
            }
        }
        prop_assert!(eig.values.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn complex_eigenvalues_match_invariants(re in proptest::collection::vec(-2.0f64..2.0, 16), im in proptest::collection::vec(-2.0f64..2.0, 16)) {
        let a: Vec<Complex64> = re.iter().zip(&im).map(|(&r, &i)| Complex64::new(r, i)).collect();
        let ev = complex_eigenvalues(4, &a).unwrap();
        let trace: Complex64 = (0..4).map(|i| a[i * 4 + i]).sum();
        prop_assert!((ev.iter().sum::<Complex64>() - trace).norm() < 1e-9);
        let prod: Complex64 = ev.iter().product();
        prop_assert!((prod - det4(&a)).norm() < 1e-8 * (1.0 + det4(&a).norm()));
    }
}

/// Laplace expansion along the first row.
fn det4(a: &[Complex64]) -> Complex64 {
    fn det(m: &[Complex64], n: usize) -> Complex64 {
        if n == 1 {
            return m[0];
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for c in 0..n {
            let minor: Vec<Complex64> = (1..n)
                .flat_map(|r| (0..n).filter(move |&cc| cc != c).map(move |cc| (r, cc)))
                .map(|(r, cc)| m[r * n + cc])
                .collect();
            let sign = if c % 2 == 0 { 1.0 } else { -1.0 };
            acc += m[c] * sign * det(&minor, n - 1);
        }
        acc
    }
    det(a, 4)
}
