//! Writes the minimum-edges integer program for a small instance in LP
//! format, ready for an external MILP solver.
//!
//! cargo run --example lp_export > k4.lp

use greenroute::exact::export_merp_lp;
use greenroute::graph::{generate_topology, rat, Capacity, DemandSet, Topology};
use greenroute::io::parse_lp_mini;

fn main() {
    let k4 = generate_topology(Topology::Complete(4), Capacity::finite(3)).unwrap();
    let dem = DemandSet::all_to_all(4, rat(1));
    let text = export_merp_lp(&k4, &dem).unwrap();
    let model = parse_lp_mini(&text).unwrap();
    eprintln!("{} rows, {} variables", model.rows.len(), model.variables().len());
    print!("{text}");
}
