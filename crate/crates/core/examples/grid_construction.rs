//! Grid load bounds against explicit constructions: the full grid, the
//! pinwheel spanning tree and comb-shaped regions joined through hubs.
//!
//! cargo run --release --example grid_construction

use greenroute::bounds::{
    grid_construction, grid_edge_count, grid_full_load_bound, grid_subgraph_load_bound, grid_tree_load,
    measured_tree_load,
};

fn main() {
    println!("side  full_bound  tree_load  measured");
    for a in 3..=8 {
        let tree = grid_tree_load(a).unwrap();
        println!(
            "{a:>4}  {:>10}  {:>9}  {:>8}",
            grid_full_load_bound(a).unwrap(),
            tree.load,
            measured_tree_load(&tree)
        );
    }
    let a = 6;
    println!("\nside {a}: load bound for k kept edges");
    for k in (a * a - 1..=grid_edge_count(a)).step_by(5) {
        println!("  k {k:>3}: {:.2}", to_f64(grid_subgraph_load_bound(a, k).unwrap()));
    }
    println!("\nside {a}: constructions");
    for q in 1..=3 {
        let c = grid_construction(a, q).unwrap();
        println!(
            "  q {q}: {} edges, measured load {}, estimate {:.1}",
            c.edges.len(),
            c.measured_load,
            c.stated_estimate
        );
    }
}

fn to_f64(r: greenroute::graph::Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}
