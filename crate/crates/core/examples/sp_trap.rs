//! A network where greedy shortest-path routing keeps far more links than
//! necessary: three unit demands, each with its own short path, versus one
//! longer path of unbounded capacity shared by all.
//!
//! cargo run --example sp_trap

use greenroute::exact::exact_min_edges;
use greenroute::graph::sp_trap;
use greenroute::routing::{baseline_route, BaselineStrategy};

fn main() {
    let trap = sp_trap(3, None).unwrap();
    let (net, dem) = (&trap.network, &trap.demands);
    println!("{} nodes, {} edges, {} demands", net.node_count(), net.edge_count(), dem.len());

    for strategy in [BaselineStrategy::ShortestPath, BaselineStrategy::MinNewEdges] {
        let (_, used) = baseline_route(net, dem, strategy, 0).unwrap();
        println!("{strategy:?}: {} edges", used.len());
    }
    let exact = exact_min_edges(net, dem, 1_000_000).unwrap();
    let kept = exact.edges.unwrap();
    println!("optimum: {} edges", kept.len());
    let long: Vec<_> = trap.long_path.iter().filter(|e| kept.contains(e)).collect();
    println!("long path edges in the optimum: {}/{}", long.len(), trap.long_path.len());
}
