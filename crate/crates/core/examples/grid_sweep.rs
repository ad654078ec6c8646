//! λ sweep on the 4×4 grid, best of 20 seeds, as CSV on stdout.
//!
//! cargo run --release --example grid_sweep

use greenroute::bounds::{cut_load_bound, min_bisection, BisectionMode};
use greenroute::graph::{generate_topology, parse_rational, rat, Capacity, Topology};
use greenroute::heuristics::{sweep, Heuristic, SweepConfig};
use greenroute::io::{write_sweep_csv, ReportOptions};

fn main() {
    let grid = generate_topology(Topology::Grid(4), Capacity::finite(1)).unwrap();
    let cut = min_bisection(&grid, BisectionMode::Exact).unwrap();
    let lambda1 = cut_load_bound(&cut, rat(1)).unwrap().ceil();
    eprintln!("bisection cut {}, lambda1 >= {}", cut.cut_size(), lambda1);

    let lambdas = (32..=96).step_by(8).map(|l| parse_rational(&l.to_string()).unwrap()).collect();
    let mut cfg = SweepConfig::new(rat(1), lambdas, Heuristic::Lle, (0..20).collect());
    cfg.with_metrics = false;
    let report = sweep(&grid, &cfg);
    for row in report.best_rows() {
        let kept = row.kept_edges.map_or("-".to_string(), |k| k.to_string());
        eprintln!("lambda {:>3}: {kept} edges kept", row.lambda);
    }
    print!("{}", write_sweep_csv(&report, &ReportOptions::default()));
}
