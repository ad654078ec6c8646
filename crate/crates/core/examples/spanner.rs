//! Fault-tolerant spanners: every node pair keeps γ edge-disjoint paths
//! whose hop total fits γ(α·d + β), where d is the distance in the full
//! network.
//!
//! cargo run --release --example spanner

use std::collections::BTreeSet;

use greenroute::graph::{fmt_rational, generate_topology, rat, Capacity, Path, Topology};
use greenroute::io::report::fmt_decimal;
use greenroute::io::{load_sndlib, parse_lp_mini};
use greenroute::spanner::{
    exact_spanner_small, export_spanner_lp, validate_spanner, SpannerOutcome, SpannerParams,
    SpannerSolution,
};

fn main() {
    // Exact search on a small instance.
    let params = SpannerParams::new(rat(1), rat(1), 2).unwrap();
    let k5 = generate_topology(Topology::Complete(5), Capacity::Unbounded).unwrap();
    if let SpannerOutcome::Optimal(sol) = exact_spanner_small(&k5, &params, 100_000).unwrap() {
        println!(
            "K5 (1,1,2): {} of 10 edges kept, stretch {}",
            sol.kept.len(),
            fmt_rational(&sol.mean_stretch.unwrap())
        );
    }

    // Atlanta (1,3,2): three links can go.
    let net = load_sndlib("atlanta").unwrap().network(Capacity::Unbounded);
    let params = SpannerParams::new(rat(1), rat(3), 2).unwrap();
    let kept: BTreeSet<usize> = (0..net.edge_count()).filter(|e| ![3, 13, 21].contains(e)).collect();
    let sol = SpannerSolution::from_kept(&net, kept, &params);
    let report = validate_spanner(&net, &sol, &params);
    println!(
        "Atlanta (1,3,2): {} violations, {}% spared",
        report.violations.len(),
        fmt_decimal(&report.spared_percent, 2)
    );
    for p in &sol.families[&(5, 13)] {
        println!("  5-13 via {:?}", p.nodes());
    }

    // Two paths sharing a link are rejected.
    let mut bad = sol.clone();
    let shared = Path::from_nodes(&net, vec![5, 0, 6, 13]).unwrap();
    bad.families.insert((5, 13), vec![shared.clone(), shared]);
    for v in validate_spanner(&net, &bad, &params).violations {
        println!("  rejected: {v}");
    }

    let lp = export_spanner_lp(&net, &params).unwrap();
    let text = lp.to_lp_string();
    assert_eq!(parse_lp_mini(&text).unwrap(), lp.model);
    println!("LP model: {} lines, {} variables", text.lines().count(), lp.model.variables().len());
}
