//! Invariants as properties over random small instances.

mod common;

use std::collections::BTreeSet;

use common::*;
use greenroute::bounds::{cut_load_bound, spanning_tree_load_bound, tree_load};
use greenroute::exact::{exact_min_edges, ExactStatus};
use greenroute::graph::{cut_of_partition, generate_topology, Capacity, DemandSet, Topology};
use greenroute::heuristics::{lle_heuristic, removal_attempt_seed};
use greenroute::io::{parse_graph_text, write_graph_text};
use greenroute::routing::{route_demands, route_demands_on, validate_routing, RoutingOptions};
use proptest::prelude::*;

fn instance() -> impl Strategy<Value = (u64, usize, usize, usize)> {
    // (rng seed, nodes, extra edges, demands)
    (any::<u64>(), 3usize..=7, 0usize..=6, 1usize..=6)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn native_text_round_trips((seed, n, extra, d) in instance()) {
        let mut rng = seeded(seed);
        let net = random_network(&mut rng, n, (n - 1 + extra).min(n * (n - 1) / 2), &[Some(1), Some(3), Some(7), None]);
        let dem = random_distinct_demands(&mut rng, n, d, 3);
        let text = write_graph_text(&net, &dem);
        let (net2, dem2) = parse_graph_text(&text).unwrap();
        prop_assert_eq!(net2, net);
        prop_assert_eq!(dem2, dem);
    }

    #[test]
    fn residuals_match_paths((seed, n, extra, d) in instance(), cap in 2i64..=12) {
        let mut rng = seeded(seed);
        let net = random_connected(&mut rng, n, n - 1 + extra, Capacity::finite(cap));
        let dem = random_demands(&mut rng, n, d, 2);
        if let Ok(state) = route_demands(&net, &dem, RoutingOptions::seeded(seed)) {
            prop_assert!(validate_routing(&net, &dem, &state).is_ok());
            let mut flow = vec![r(0); net.edge_count()];
            for (i, p) in state.assignment().iter().enumerate() {
                for &e in p.as_ref().unwrap().edges() {
                    flow[e] += dem.get(i).volume;
                }
            }
            for e in 0..net.edge_count() {
                prop_assert_eq!(state.flow()[e], flow[e]);
                prop_assert_eq!(state.residual()[e].as_finite(), Some(r(cap) - flow[e]));
            }
        }
    }

    #[test]
    fn heuristics_are_deterministic((seed, n, extra, _d) in instance(), cap in 2i64..=12) {
        let mut rng = seeded(seed);
        let net = random_connected(&mut rng, n, n - 1 + extra, Capacity::finite(cap));
        let dem = DemandSet::all_to_all(n, r(1));
        let a = lle_heuristic(&net, &dem, RoutingOptions::seeded(seed));
        let b = lle_heuristic(&net, &dem, RoutingOptions::seeded(seed));
        prop_assert_eq!(a, b);
    }

    #[test]
    fn lle_result_is_locally_minimal((seed, n, extra, _d) in instance(), cap in 4i64..=20) {
        let mut rng = seeded(seed);
        let net = random_connected(&mut rng, n, n - 1 + extra, Capacity::finite(cap));
        let dem = DemandSet::all_to_all(n, r(1));
        let opts = RoutingOptions::seeded(seed);
        if let Ok(sol) = lle_heuristic(&net, &dem, opts) {
            prop_assert!(validate_routing(&net, &dem, &sol.witness).is_ok());
            prop_assert_eq!(&sol.unremovable, &sol.kept);
            // re-run each final removal attempt with its recorded seed
            for &e in &sol.kept {
                let mut active: Vec<bool> = (0..net.edge_count()).map(|x| sol.kept.contains(&x)).collect();
                active[e] = false;
                let attempt = RoutingOptions {
                    seed: removal_attempt_seed(seed, sol.kept.len(), e),
                    retries: opts.retries,
                };
                prop_assert!(route_demands_on(&net, &active, &dem, attempt).is_err());
            }
        }
    }

    #[test]
    fn bounds_scale_with_kappa(n in 3usize..=40, delta in 2usize..=6, k in 1i64..=9) {
        let kappa = r(k);
        let one = spanning_tree_load_bound(n, delta, r(1)).unwrap();
        prop_assert_eq!(spanning_tree_load_bound(n, delta, kappa).unwrap(), one * kappa);

        let path = generate_topology(Topology::Path(n), Capacity::finite(1)).unwrap();
        prop_assert_eq!(tree_load(&path, kappa).unwrap(), tree_load(&path, r(1)).unwrap() * kappa);

        let half: BTreeSet<usize> = (0..n / 2).collect();
        let cut = cut_of_partition(&path, &half).unwrap();
        prop_assert_eq!(cut_load_bound(&cut, kappa).unwrap(), cut_load_bound(&cut, r(1)).unwrap() * kappa);
    }
}

// Exact optimum is non-increasing as capacity grows.
#[test]
fn exact_optimum_monotone_in_lambda() {
    for topo in [Topology::Complete(4), Topology::Cycle(5), Topology::Grid(2)] {
        let n = generate_topology(topo, Capacity::finite(1)).unwrap().node_count();
        let dem = DemandSet::all_to_all(n, r(1));
        let mut prev: Option<usize> = None;
        for lambda in 1..=12 {
            let net = generate_topology(topo, Capacity::finite(lambda)).unwrap();
            let res = exact_min_edges(&net, &dem, 10_000_000).unwrap();
            let now = match res.status {
                ExactStatus::Optimal => Some(res.edges.unwrap().len()),
                ExactStatus::Infeasible => None,
                ExactStatus::BudgetExceeded => panic!("{topo} at {lambda}: budget"),
            };
            if let (Some(p), now) = (prev, now) {
                assert!(now.is_some_and(|x| x <= p), "{topo} at {lambda}: {now:?} after {p}");
            }
            prev = now.or(prev);
        }
        assert_eq!(prev, Some(n - 1), "{topo} should end on a tree");
    }
}
