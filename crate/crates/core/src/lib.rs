//! Energy-efficient routing by switching off links.
//!
//! Given an undirected network with link capacities and a set of demands,
//! the goal is a routing where every demand follows one elementary path,
//! no link is overloaded, and as few links as possible carry traffic.
//! The remaining links can be put to sleep.
//!
//! - [`graph`]: networks, demands, paths, generators.
//! - [`routing`]: the load-aware feasible routing and its validator.
//! - [`heuristics`]: edge-removal heuristics, λ sweeps and thresholds.
//! - [`exact`]: backtracking feasibility, optimal edge sets, LP export.
//! - [`bounds`]: lower bounds and grid constructions.
//! - [`spanner`]: fault-tolerant spanner model, solver and validator.
//! - [`metrics`]: stretch, disjoint paths, energy.
//! - [`io`]: native text, SNDLib, solution, LP and CSV formats.
//!
//! ```
//! use greenroute::graph::{generate_topology, rat, Capacity, DemandSet, Topology};
//! use greenroute::heuristics::lle_heuristic;
//! use greenroute::routing::RoutingOptions;
//!
//! let k5 = generate_topology(Topology::Complete(5), Capacity::finite(8)).unwrap();
//! let demands = DemandSet::all_to_all(5, rat(1));
//! let best = (0..20)
//!     .map(|seed| lle_heuristic(&k5, &demands, RoutingOptions::seeded(seed)).unwrap())
//!     .min_by_key(|sol| sol.edge_count())
//!     .unwrap();
//! assert_eq!(best.edge_count(), 4);
//! ```

pub mod bounds;
pub mod cli;
pub mod exact;
pub mod flow;
pub mod graph;
pub mod heuristics;
pub mod io;
pub mod metrics;
pub mod routing;
pub mod spanner;
