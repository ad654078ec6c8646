//! Metrics of a reduced network and the yearly energy it saves.
//!
//! cargo run --example energy

use std::collections::BTreeSet;

use greenroute::graph::{fmt_rational, generate_topology, rat, Capacity, DemandSet, Path, Topology};
use greenroute::metrics::{energy_estimate, metrics_row, EnergyParams};
use greenroute::routing::RoutingState;

fn main() {
    // K5 reduced to a star around node 0.
    let k5 = generate_topology(Topology::Complete(5), Capacity::finite(8)).unwrap();
    let dem = DemandSet::all_to_all(5, rat(1));
    let kept: BTreeSet<usize> = (1..5).map(|v| k5.edge_between(0, v).unwrap()).collect();
    let paths = dem
        .iter()
        .map(|d| {
            let nodes = if d.source == 0 || d.target == 0 {
                vec![d.source, d.target]
            } else {
                vec![d.source, 0, d.target]
            };
            Some(Path::from_nodes(&k5, nodes).unwrap())
        })
        .collect();
    let witness = RoutingState::from_assignment(&k5, &dem, paths);
    let row = metrics_row(&k5, &dem, &kept, &witness, None, EnergyParams::default()).unwrap();
    println!(
        "K5 star: stretch {}, disjoint paths {}",
        fmt_rational(&row.stretch.unwrap()),
        row.avg_disjoint_paths
    );

    // A 57-link backbone with 37% of links asleep.
    let spared = (57.0 * 0.37_f64).round();
    println!(
        "{spared} links off: {:.1} MWh/year",
        energy_estimate(spared, EnergyParams::default())
    );
}
