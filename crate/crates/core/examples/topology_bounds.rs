//! Lower bounds for the bundled SNDLib topologies, or one named topology
//! as CSV.
//!
//! cargo run --release --example topology_bounds
//! cargo run --release --example topology_bounds -- atlanta

use greenroute::bounds::{evaluate_all, BoundsConfig};
use greenroute::graph::Capacity;
use greenroute::io::{load_sndlib, write_bounds_csv, BUILTIN_TOPOLOGIES};

fn main() {
    if let Some(name) = std::env::args().nth(1) {
        let net = load_sndlib(&name).unwrap().network(Capacity::finite(1));
        print!("{}", write_bounds_csv(&evaluate_all(&net, &BoundsConfig::default()).unwrap()));
        return;
    }
    println!("{:<14} {:>4} {:>4} {:>4} {:>10} {:>10}", "topology", "n", "m", "cut", "lambda_cut", "lambda_tree");
    for name in BUILTIN_TOPOLOGIES {
        let net = load_sndlib(name).unwrap().network(Capacity::finite(1));
        let rows = evaluate_all(&net, &BoundsConfig::default()).unwrap();
        let get = |key: &str| {
            rows.iter()
                .find(|r| r.name == key)
                .and_then(|r| r.value)
                .map_or("-".to_string(), |v| v.to_string())
        };
        println!(
            "{:<14} {:>4} {:>4} {:>4} {:>10} {:>10}",
            name,
            net.node_count(),
            net.edge_count(),
            get("bisection_cut"),
            get("lambda_feasible"),
            get("lambda_tree")
        );
    }
}
