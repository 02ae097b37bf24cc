mod common;

use netrank_core::centrality::{self, compute_all, InformationIntermediate};
use netrank_core::linalg::sym_eigen;
use netrank_core::{Graph, Measure};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

fn arb_connected() -> impl Strategy<Value = Graph> {
    (3usize..14, 0.0f64..0.6, any::<u64>()).prop_map(|(n, extra, seed)| {
        common::random_connected(n, extra, &mut ChaCha8Rng::seed_from_u64(seed))
    })
}

fn arb_permuted() -> impl Strategy<Value = (Graph, Vec<usize>)> {
    arb_connected().prop_flat_map(|g| {
        let n = g.n();
        (Just(g), Just((0..n).collect::<Vec<_>>()).prop_shuffle())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn relabeling_permutes_every_measure((g, perm) in arb_permuted()) {
        let h = g.permute(&perm);
        let before = compute_all(&g, &Measure::ALL).unwrap();
        let after = compute_all(&h, &Measure::ALL).unwrap();
        for (x, y) in before.iter().zip(&after) {
            let scale = x.values.iter().fold(1.0f64, |m, v| m.max(v.abs()));
            for v in 0..g.n() {
                prop_assert!(
                    (x.values[v] - y.values[perm[v]]).abs() <= 1e-9 * scale,
                    "{:?} vertex {}", x.measure, v
                );
            }
        }
    }

    #[test]
    fn betweenness_matches_path_enumeration(g in arb_connected()) {
        let fast = centrality::betweenness(&g).unwrap().values;
        prop_assert!(max_diff(&fast, &common::brute_force_betweenness(&g)) <= 1e-9);
    }

    #[test]
    fn walk_betweenness_matches_pairwise_solves(g in arb_connected()) {
        let fast = centrality::walk_betweenness(&g).unwrap().values;
        prop_assert!(max_diff(&fast, &common::current_flow_by_pairs(&g)) <= 1e-8);
    }

    #[test]
    fn information_rows_share_one_sum(g in arb_connected()) {
        prop_assert!(InformationIntermediate::new(&g).unwrap().max_row_sum_deviation() <= 1e-8);
    }

    #[test]
    fn subgraph_trace_is_sum_of_exponentials(g in arb_connected()) {
        let values = centrality::subgraph(&g).unwrap().values;
        prop_assert!(values.iter().all(|&v| v >= 1.0 - 1e-12));
        let eig = sym_eigen(&common::adjacency(&g, 0.0)).unwrap();
        let trace: f64 = eig.values.iter().map(|l| l.exp()).sum();
        prop_assert!((values.iter().sum::<f64>() - trace).abs() <= 1e-9 * trace);
    }

    #[test]
    fn eigenvector_sums_to_one(g in arb_connected()) {
        let values = centrality::eigenvector(&g).unwrap().values;
        prop_assert!((values.iter().sum::<f64>() - 1.0).abs() <= 1e-12);
        prop_assert!(max_diff(&values, &common::dominant_eigenvector(&g)) <= 1e-8);
    }
}

#[test]
fn vertex_transitive_graphs_are_flat() {
    for g in [Graph::cycle(9), Graph::complete(7), Graph::cycle(12)] {
        for v in compute_all(&g, &Measure::ALL).unwrap() {
            let first = v.values[0];
            assert!(
                v.values
                    .iter()
                    .all(|x| (x - first).abs() <= 1e-9 * first.abs().max(1.0)),
                "{:?}",
                v.measure
            );
        }
    }
}

#[test]
fn star_center_dominates() {
    let g = Graph::star(8);
    for v in compute_all(&g, &Measure::ALL).unwrap() {
        let leaf = v.values[1];
        assert!(v.values[1..].iter().all(|&x| (x - leaf).abs() < 1e-9));
        assert!(v.values[0] > leaf, "{:?}", v.measure);
    }
}

#[test]
fn path_of_three_by_hand() {
    let g = Graph::path(3);
    let all = compute_all(&g, &Measure::ALL).unwrap();
    let get = |m: Measure| all.iter().find(|v| v.measure == m).unwrap().values.clone();
    assert_eq!(get(Measure::Degree), vec![1.0, 2.0, 1.0]);
    assert_eq!(get(Measure::Betweenness), vec![0.0, 1.0, 0.0]);
    assert_eq!(get(Measure::Eccentricity), vec![0.5, 1.0, 0.5]);
    assert!(max_diff(&get(Measure::Closeness), &[1.0 / 3.0, 0.5, 1.0 / 3.0]) < 1e-12);
    assert!(max_diff(&get(Measure::Information), &[1.0, 1.5, 1.0]) < 1e-9);
    assert!(max_diff(&get(Measure::WalkBetweenness), &[2.0, 3.0, 2.0]) < 1e-9);
    // A+I has dominant eigenvector (1, sqrt 2, 1)
    let s = 2f64.sqrt();
    let e = [1.0 / (2.0 + s), s / (2.0 + s), 1.0 / (2.0 + s)];
    assert!(max_diff(&get(Measure::Eigenvector), &e) < 1e-10);
    // spectrum of P3 is -sqrt2, 0, sqrt2
    let end = (s.exp() + (-s).exp() + 2.0) / 4.0;
    let mid = (s.exp() + (-s).exp()) / 2.0;
    assert!(max_diff(&get(Measure::Subgraph), &[end, mid, end]) < 1e-10);
}

#[test]
fn trees_satisfy_walk_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for n in [2, 3, 5, 17, 40] {
        let t = common::random_tree(n, &mut rng);
        let b = centrality::betweenness(&t).unwrap().values;
        let w = centrality::walk_betweenness(&t).unwrap().values;
        for k in 0..n {
            assert!((w[k] - b[k] - (n as f64 - 1.0)).abs() <= 1e-6);
        }
    }
}

#[test]
fn disconnected_graphs_are_rejected_where_required() {
    let g = Graph::from_edges(4, [(0, 1), (2, 3)]).unwrap();
    for m in Measure::ALL {
        let result = compute_all(&g, &[m]);
        assert_eq!(result.is_err(), m.requires_connected(), "{m:?}");
    }
}
