use proptest::prelude::*;

use hcchroma::constructions::{
    necessary_construction, semi_bipartite_extract, ConstructionOptions, LambdaMode,
    SemiBipartiteOptions,
};
use hcchroma::dpcolor::{
    finishing_blow_hypothesis, from_list_assignment, lll_evaluate, random_cover,
    random_list_assignment, solve, validate_cover, verify_dp_colouring, PartialDpState,
    SolveOptions,
};
use hcchroma::fractional::{
    choose_local_weights, colour_bound, extract_independent_set, greedy_fractional_colouring,
    validate_colouring, GreedyOptions, HardCoreOracle,
};
use hcchroma::graph::generators::random_triangle_free;
use hcchroma::graph::io::{parse_edge_list, write_edge_list};
use hcchroma::graph::{Graph, VertexSet};
use hcchroma::hardcore::{
    conditional_fact_check, enumerate_stats, hcm_lower_bound, ExactConfig, Fugacity,
};
use hcchroma::numerics::lambert_w0;
use hcchroma::scalar::{ratio, Rational};

fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .collect();
        let m = pairs.len();
        proptest::collection::vec(any::<bool>(), m).prop_map(move |keep| {
            let edges = pairs.iter().zip(&keep).filter(|(_, &k)| k).map(|(&e, _)| e);
            Graph::from_edges(n, edges).unwrap()
        })
    })
}

fn arb_triangle_free(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n, 0.05f64..0.6, any::<u64>())
        .prop_map(|(n, p, seed)| random_triangle_free(n, p, seed))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn edge_list_round_trips(g in arb_graph(12)) {
        prop_assert_eq!(parse_edge_list(&write_edge_list(&g)).unwrap(), g);
    }

    #[test]
    fn distance_layers_partition_the_component(g in arb_graph(10), v in 0usize..10) {
        let v = v % g.n();
        let layers = g.distance_layers(v, g.n()).unwrap();
        let mut seen: Vec<usize> = layers.iter().flat_map(|l| l.iter()).collect();
        seen.sort_unstable();
        prop_assert_eq!(seen, g.component(v).unwrap().into_vec());
        for j in 1..layers.len() {
            for w in layers[j].iter() {
                // every vertex at distance j has a neighbour at distance j - 1
                prop_assert!(g.neighbours(w).iter().any(|&x| layers[j - 1].contains(x)));
            }
        }
    }

    #[test]
    fn induced_subgraph_keeps_exactly_the_inner_edges(g in arb_graph(10), mask in any::<u16>()) {
        let keep: VertexSet = (0..g.n()).filter(|&v| mask >> v & 1 == 1).collect();
        let h = g.induced_subgraph(&keep).unwrap();
        let inner = g.edges().filter(|&(u, v)| keep.contains(u) && keep.contains(v)).count();
        prop_assert_eq!(h.graph.edge_count(), inner);
        for (a, b) in h.graph.edges() {
            prop_assert!(g.has_edge(h.to_parent[a], h.to_parent[b]));
        }
    }

    #[test]
    fn lambert_w_inverts(w in 0.0f64..30.0) {
        let back: f64 = lambert_w0(w * w.exp()).unwrap();
        prop_assert!((back - w).abs() <= 1e-10 * (1.0 + w));
    }

    #[test]
    fn lambert_w_is_increasing(x in 0.0f64..1e6, dx in 1e-3f64..10.0) {
        let a: f64 = lambert_w0(x).unwrap();
        let b: f64 = lambert_w0(x + dx).unwrap();
        prop_assert!(b > a);
    }

    #[test]
    fn facts_hold_exactly(g in arb_triangle_free(8), num in 1i64..6, den in 1i64..4) {
        let lambda = Fugacity::new(ratio(num, den)).unwrap();
        let r = conditional_fact_check::<Rational>(&g, &lambda, ExactConfig::default()).unwrap();
        prop_assert_eq!(r.fact1_residual, ratio(0, 1));
        prop_assert_eq!(r.fact2_residual, ratio(0, 1));
    }

    #[test]
    fn occupancy_lower_bound_holds(
        g in arb_triangle_free(10),
        lambda in 0.1f64..4.0,
        alpha in 0.1f64..20.0,
        beta in 0.1f64..20.0,
    ) {
        let stats = enumerate_stats(&g, &Fugacity::new(lambda).unwrap(), 1, ExactConfig::default()).unwrap();
        for v in 0..g.n() {
            let lhs = alpha * stats.occupancy[v] + beta * stats.neighbour_occupancy(v, 1);
            prop_assert!(lhs >= hcm_lower_bound(lambda, alpha, beta) - 1e-10);
        }
    }

    #[test]
    fn expected_size_matches_the_derivative_of_log_z(g in arb_triangle_free(9), lambda in 0.2f64..3.0) {
        // λ d/dλ log Z = E|I|
        let config = ExactConfig::default();
        let h = 1e-5 * lambda;
        let up = enumerate_stats(&g, &Fugacity::new(lambda + h).unwrap(), 1, config).unwrap();
        let down = enumerate_stats(&g, &Fugacity::new(lambda - h).unwrap(), 1, config).unwrap();
        let here = enumerate_stats(&g, &Fugacity::new(lambda).unwrap(), 1, config).unwrap();
        let derivative = lambda * (up.log_partition - down.log_partition) / (2.0 * h);
        prop_assert!((derivative - here.expected_size()).abs() < 1e-5);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn greedy_colouring_is_valid(g in arb_triangle_free(12), eps in 0.25f64..=4.0) {
        let (lambda, weights) = choose_local_weights::<f64>(&g, eps).unwrap();
        let lam = *lambda.value();
        for v in 0..g.n() {
            let a = weights.alpha(v);
            prop_assert!((hcm_lower_bound(lam, a[0], a[1]) - 1.0).abs() < 1e-9);
        }
        let out = greedy_fractional_colouring(&g, &weights, &HardCoreOracle::new(lambda), GreedyOptions::default())
            .unwrap();
        prop_assert!(out.trace.len() <= g.n());
        let total: f64 = out.trace.iter().map(|r| r.tau).sum();
        prop_assert!((total - out.colouring.total()).abs() < 1e-9);
        let bound: Vec<f64> = (0..g.n()).map(|v| colour_bound(lam, g.degree(v)).unwrap()).collect();
        let report = validate_colouring(&g, &out.colouring, &bound);
        prop_assert!(report.is_valid(), "{:?}", report.failures);
        let set = extract_independent_set(&g, &out.colouring).unwrap();
        prop_assert!(g.is_independent(&set));
        prop_assert!(set.len() as f64 >= g.n() as f64 / out.colouring.total() - 1e-9);
    }

    #[test]
    fn solver_output_is_a_cover_colouring(
        g in arb_triangle_free(60),
        density in 0.1f64..1.0,
        seed in any::<u64>(),
    ) {
        let c = random_cover(&g, 16, 2, density, seed);
        prop_assert!(validate_cover(&c).is_ok());
        let ell = vec![16; g.n()];
        prop_assert!(finishing_blow_hypothesis(&c, &ell).unwrap().passes());
        let cert = lll_evaluate(&c, &ell).unwrap();
        prop_assert!(cert.certified());
        let out = solve(&c, &SolveOptions { seed, ell: Some(ell), ..Default::default() }).unwrap();
        prop_assert!(verify_dp_colouring(&c, &out.choice).is_ok());
    }

    #[test]
    fn list_covers_project_to_list_colourings(g in arb_triangle_free(30), seed in any::<u64>()) {
        let palette = 8 * (g.max_degree() as u32 + 1);
        let lists = random_list_assignment(&g, 8, palette, seed);
        let lc = from_list_assignment(&g, &lists).unwrap();
        prop_assert!(validate_cover(&lc.cover).is_ok());
        let out = solve(&lc.cover, &SolveOptions { seed, max_resamples: 200_000, ..Default::default() });
        if let Ok(out) = out {
            let labels = lc.project(&out.choice);
            for (u, v) in g.edges() {
                prop_assert_ne!(labels[u], labels[v]);
            }
            for u in 0..g.n() {
                prop_assert!(lists[u].contains(&labels[u]));
            }
        }
    }

    #[test]
    fn residual_lists_match_a_recount(g in arb_triangle_free(15), seed in any::<u64>(), picks in proptest::collection::vec(any::<usize>(), 0..10)) {
        let c = random_cover(&g, 5, 5, 0.8, seed);
        let mut state = PartialDpState::new(&c);
        for p in picks {
            let u = p % g.n();
            let residual = state.residual(u);
            if state.chosen(u).is_none() && !residual.is_empty() {
                state.choose(residual[p % residual.len()]).unwrap();
            }
            for w in 0..g.n() {
                prop_assert_eq!(state.residual(w), state.residual_from_scratch(w));
            }
        }
    }

    #[test]
    fn semi_bipartite_parts_are_consistent(g in arb_triangle_free(14), seed in any::<u64>(), lambda in 0.2f64..3.0) {
        let opts = SemiBipartiteOptions { lambda: LambdaMode::Fixed(lambda), trials: 8, seed, ..Default::default() };
        let out = semi_bipartite_extract(&g, opts).unwrap();
        prop_assert!(g.is_independent(&out.a));
        prop_assert_eq!(out.a.len() + out.b.len(), g.n());
        prop_assert!(out.a.iter().all(|v| !out.b.contains(v)));
        prop_assert_eq!(g.edges_between(&out.a, &out.b), out.cut_edges);
        prop_assert_eq!(out.cut_edges, out.a.iter().map(|v| g.degree(v)).sum::<usize>());
    }
}

#[test]
fn construction_properties_hold_where_materialisable() {
    for delta in 3..=8 {
        for level in 0..=1 {
            let inst =
                necessary_construction(delta, level, ConstructionOptions::default()).unwrap();
            assert!(
                inst.check_properties().all_hold(),
                "delta {delta}, level {level}"
            );
        }
    }
}
