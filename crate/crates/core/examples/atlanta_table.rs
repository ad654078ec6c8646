//! Heuristic thresholds and savings on Atlanta: λ₁ (first feasible λ),
//! λ_tree (first λ routable on a spanning tree) and the share of links
//! spared at overprovisioning factors 1 to 4.
//!
//! cargo run --release --example atlanta_table

use greenroute::graph::{rat, Capacity};
use greenroute::heuristics::{
    find_lambda_threshold, sweep, Heuristic, SweepConfig, ThresholdConfig, ThresholdMethod, ThresholdTarget,
};
use greenroute::io::load_sndlib;
use greenroute::io::report::fmt_decimal;

fn main() {
    let net = load_sndlib("atlanta").unwrap().network(Capacity::finite(1));
    let seeds: Vec<u64> = (0..20).collect();
    let threshold = |target| {
        let cfg = ThresholdConfig {
            seeds: seeds.clone(),
            ..ThresholdConfig::new(rat(1), target, ThresholdMethod::Heuristic(Heuristic::Lle))
        };
        find_lambda_threshold(&net, &cfg).unwrap()
    };
    let l1 = threshold(ThresholdTarget::Feasible);
    let ltree = threshold(ThresholdTarget::Tree);
    println!("lambda1 {l1}, lambda_tree {ltree}, ratio {:.2}", ltree as f64 / l1 as f64);

    let lambdas = (1..=4).map(|of| rat(of * l1 as i64)).collect();
    let mut cfg = SweepConfig::new(rat(1), lambdas, Heuristic::Lle, seeds);
    cfg.with_metrics = false;
    for row in sweep(&net, &cfg).best_rows() {
        println!(
            "OF {}: {} of {} links kept, {}% spared",
            row.lambda / rat(l1 as i64),
            row.kept_edges.unwrap(),
            row.total_edges,
            fmt_decimal(row.spared_percent.as_ref().unwrap(), 1)
        );
    }
}
