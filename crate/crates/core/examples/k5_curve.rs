//! Optimal and heuristic edge counts on K5 with all-to-all unit demands.
//!
//! cargo run --release --example k5_curve

use greenroute::bounds::complete_graph_edge_bound;
use greenroute::exact::{exact_min_edges, ExactStatus};
use greenroute::graph::{generate_topology, rat, Capacity, DemandSet, Topology};
use greenroute::heuristics::lle_heuristic;
use greenroute::routing::RoutingOptions;

fn main() {
    let demands = DemandSet::all_to_all(5, rat(1));
    println!("lambda  bound  exact  lle(best of 5)");
    for lambda in 2..=8 {
        let k5 = generate_topology(Topology::Complete(5), Capacity::finite(lambda)).unwrap();
        let bound = complete_graph_edge_bound(5, rat(lambda), rat(1)).unwrap();
        let exact = exact_min_edges(&k5, &demands, 50_000_000).unwrap();
        assert_eq!(exact.status, ExactStatus::Optimal);
        let lle = (0..5)
            .filter_map(|seed| lle_heuristic(&k5, &demands, RoutingOptions::seeded(seed)).ok())
            .map(|s| s.edge_count())
            .min()
            .unwrap();
        println!(
            "{lambda:>6}  {bound:>5}  {:>5}  {lle:>5}",
            exact.edges.as_ref().unwrap().len()
        );
    }
}
