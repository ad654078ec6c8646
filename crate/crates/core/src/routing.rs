//! Unsplittable routing of a demand set: the randomized feasible-routing
//! heuristic, an independent validator, and the greedy baselines.

use std::collections::BTreeSet;
use std::fmt;

use num_traits::{ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph::{
    hop_shortest_path, shortest_path, Capacity, DemandSet, EdgeId, EdgeWeight, GraphError,
    Network, Path, Rational,
};

/// Weight floor: unbounded edges, and already-used edges in the
/// min-new-edges baseline, cost this much instead of zero.
pub const MIN_WEIGHT: f64 = 1.0 / 1_048_576.0;

/// Demand orders tried by [`route_demands`] before giving up.
pub const DEFAULT_RETRIES: usize = 5;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RoutingError {
    /// The heuristic failed on every order it tried. This does not prove
    /// that no valid routing exists.
    #[error("no valid routing found after {orders} demand orders")]
    InfeasibleByHeuristic { orders: usize },
    #[error("retries must be at least 1")]
    ZeroRetries,
    #[error("active-edge mask has {got} entries, network has {expected} edges")]
    MaskLength { expected: usize, got: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RoutingOptions {
    pub seed: u64,
    pub retries: usize,
}

impl Default for RoutingOptions {
    fn default() -> Self {
        RoutingOptions {
            seed: 0,
            retries: DEFAULT_RETRIES,
        }
    }
}

impl RoutingOptions {
    pub fn seeded(seed: u64) -> Self {
        RoutingOptions {
            seed,
            ..Default::default()
        }
    }
}

/// One path per demand plus the per-edge flow and residual capacity it induces.
#[derive(Clone, Debug, PartialEq)]
pub struct RoutingState {
    assignment: Vec<Option<Path>>,
    flow: Vec<Rational>,
    residual: Vec<Capacity>,
    seed: Option<u64>,
}

impl RoutingState {
    /// Builds the state for an explicit assignment. Flows are pooled over
    /// both directions; residuals may go negative for invalid assignments.
    pub fn from_assignment(
        network: &Network,
        demands: &DemandSet,
        assignment: Vec<Option<Path>>,
    ) -> Self {
        let mut flow = vec![Rational::zero(); network.edge_count()];
        for (d, path) in demands.iter().zip(&assignment) {
            if let Some(p) = path {
                for &e in p.edges() {
                    if let Some(f) = flow.get_mut(e) {
                        *f += d.volume;
                    }
                }
            }
        }
        let residual = network
            .edges()
            .iter()
            .zip(&flow)
            .map(|(e, f)| e.capacity.minus(f))
            .collect();
        RoutingState {
            assignment,
            flow,
            residual,
            seed: None,
        }
    }

    pub fn assignment(&self) -> &[Option<Path>] {
        &self.assignment
    }

    pub fn path(&self, demand: usize) -> Option<&Path> {
        self.assignment.get(demand).and_then(Option::as_ref)
    }

    pub fn flow(&self) -> &[Rational] {
        &self.flow
    }

    pub fn residual(&self) -> &[Capacity] {
        &self.residual
    }

    /// Seed of the demand order that produced this routing, if any.
    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    /// Edges carrying positive flow.
    pub fn used_edges(&self) -> BTreeSet<EdgeId> {
        self.flow
            .iter()
            .enumerate()
            .filter(|(_, f)| !f.is_zero())
            .map(|(e, _)| e)
            .collect()
    }

    /// Largest flow carried by a single edge.
    pub fn max_edge_flow(&self) -> Rational {
        self.flow.iter().copied().max().unwrap_or_else(Rational::zero)
    }
}

fn check_mask(network: &Network, active: &[bool]) -> Result<(), RoutingError> {
    if active.len() != network.edge_count() {
        return Err(RoutingError::MaskLength {
            expected: network.edge_count(),
            got: active.len(),
        });
    }
    Ok(())
}

fn load_weight(capacity: &Capacity, residual: &Capacity) -> f64 {
    match (capacity, residual) {
        (Capacity::Finite(c), Capacity::Finite(r)) => {
            if r.is_zero() {
                f64::INFINITY
            } else {
                (c / r).to_f64().unwrap_or(f64::INFINITY)
            }
        }
        _ => MIN_WEIGHT,
    }
}

/// Routes every demand on the full network. See [`route_demands_on`].
pub fn route_demands(
    network: &Network,
    demands: &DemandSet,
    options: RoutingOptions,
) -> Result<RoutingState, RoutingError> {
    route_demands_on(network, &vec![true; network.edge_count()], demands, options)
}

/// Randomized feasible-routing heuristic restricted to `active` edges.
///
/// Demands are inserted one at a time in a seeded random order. Each takes
/// the shortest path under the weight `c_e / r_e`, where `r_e` is the
/// residual left by the demands already placed and edges with
/// `r_e < volume` are excluded. Unbounded edges weigh [`MIN_WEIGHT`]. When
/// a demand cannot be placed the next seeded order is tried, up to
/// `options.retries` orders in total.
pub fn route_demands_on(
    network: &Network,
    active: &[bool],
    demands: &DemandSet,
    options: RoutingOptions,
) -> Result<RoutingState, RoutingError> {
    if options.retries == 0 {
        return Err(RoutingError::ZeroRetries);
    }
    check_mask(network, active)?;
    demands.check_against(network)?;
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    let mut order: Vec<usize> = (0..demands.len()).collect();
    for _ in 0..options.retries {
        order.sort_unstable();
        order.shuffle(&mut rng);
        if let Some(mut state) = route_in_order(network, active, demands, &order) {
            state.seed = Some(options.seed);
            return Ok(state);
        }
    }
    Err(RoutingError::InfeasibleByHeuristic {
        orders: options.retries,
    })
}

fn route_in_order(
    network: &Network,
    active: &[bool],
    demands: &DemandSet,
    order: &[usize],
) -> Option<RoutingState> {
    let m = network.edge_count();
    let mut residual: Vec<Capacity> = network.edges().iter().map(|e| e.capacity).collect();
    let mut metric: Vec<f64> = network
        .edges()
        .iter()
        .map(|e| load_weight(&e.capacity, &e.capacity))
        .collect();
    let mut weights = vec![EdgeWeight::Excluded; m];
    let mut assignment = vec![None; demands.len()];
    for &i in order {
        let d = demands.get(i);
        for e in 0..m {
            weights[e] = if active[e] && residual[e].admits(&d.volume) {
                EdgeWeight::Weight(metric[e])
            } else {
                EdgeWeight::Excluded
            };
        }
        let path = shortest_path(network, &weights, d.source, d.target)?;
        for &e in path.edges() {
            residual[e] = residual[e].minus(&d.volume);
            metric[e] = load_weight(&network.edge(e).capacity, &residual[e]);
        }
        assignment[i] = Some(path);
    }
    Some(RoutingState::from_assignment(network, demands, assignment))
}

/// Greedy baselines that ignore the load metric.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BaselineStrategy {
    /// Fewest hops among edges with enough residual capacity.
    ShortestPath,
    /// Fewest edges not already used by earlier demands; ties go to the
    /// shorter path, then the lexicographically smaller one.
    MinNewEdges,
}

/// Routes demands greedily in one seeded order. Returns the routing and
/// the set of edges it uses.
pub fn baseline_route(
    network: &Network,
    demands: &DemandSet,
    strategy: BaselineStrategy,
    order_seed: u64,
) -> Result<(RoutingState, BTreeSet<EdgeId>), RoutingError> {
    demands.check_against(network)?;
    let m = network.edge_count();
    let mut rng = ChaCha8Rng::seed_from_u64(order_seed);
    let mut order: Vec<usize> = (0..demands.len()).collect();
    order.shuffle(&mut rng);

    let mut residual: Vec<Capacity> = network.edges().iter().map(|e| e.capacity).collect();
    let mut used = vec![false; m];
    let mut assignment = vec![None; demands.len()];
    for &i in &order {
        let d = demands.get(i);
        let weights: Vec<EdgeWeight> = (0..m)
            .map(|e| {
                if !residual[e].admits(&d.volume) {
                    EdgeWeight::Excluded
                } else if strategy == BaselineStrategy::MinNewEdges && used[e] {
                    EdgeWeight::Weight(MIN_WEIGHT)
                } else {
                    EdgeWeight::Weight(1.0)
                }
            })
            .collect();
        let path = shortest_path(network, &weights, d.source, d.target)
            .ok_or(RoutingError::InfeasibleByHeuristic { orders: 1 })?;
        for &e in path.edges() {
            residual[e] = residual[e].minus(&d.volume);
            used[e] = true;
        }
        assignment[i] = Some(path);
    }
    let mut state = RoutingState::from_assignment(network, demands, assignment);
    state.seed = Some(order_seed);
    let used = state.used_edges();
    Ok((state, used))
}

/// Every demand on its hop-shortest path, capacities ignored. This is the
/// reference routing for stretch measurements; it need not be valid.
pub fn unconstrained_shortest_routing(
    network: &Network,
    demands: &DemandSet,
    active: Option<&BTreeSet<EdgeId>>,
) -> RoutingState {
    let assignment = demands
        .iter()
        .map(|d| {
            hop_shortest_path(network, d.source, d.target, |e| {
                active.is_none_or(|a| a.contains(&e))
            })
        })
        .collect();
    RoutingState::from_assignment(network, demands, assignment)
}

/// A reason a routing is not valid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    AssignmentCount { expected: usize, got: usize },
    MissingPath { demand: usize },
    WrongEndpoints { demand: usize },
    NotElementary { demand: usize },
    InvalidEdge { demand: usize, edge: EdgeId },
    InactiveEdge { demand: usize, edge: EdgeId },
    CapacityExceeded {
        edge: EdgeId,
        flow: Rational,
        capacity: Rational,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::AssignmentCount { expected, got } => {
                write!(f, "{got} assignments for {expected} demands")
            }
            Violation::MissingPath { demand } => write!(f, "demand {demand} has no path"),
            Violation::WrongEndpoints { demand } => {
                write!(f, "path of demand {demand} has wrong endpoints")
            }
            Violation::NotElementary { demand } => {
                write!(f, "path of demand {demand} repeats a node")
            }
            Violation::InvalidEdge { demand, edge } => {
                write!(f, "path of demand {demand} uses invalid edge {edge}")
            }
            Violation::InactiveEdge { demand, edge } => {
                write!(f, "path of demand {demand} uses removed edge {edge}")
            }
            Violation::CapacityExceeded {
                edge,
                flow,
                capacity,
            } => write!(f, "edge {edge} carries {flow} > capacity {capacity}"),
        }
    }
}

/// Checks a routing from its paths alone; stored flows are not trusted.
pub fn validate_routing(
    network: &Network,
    demands: &DemandSet,
    routing: &RoutingState,
) -> Result<(), Vec<Violation>> {
    validate_routing_within(network, demands, routing, None)
}

/// [`validate_routing`] that additionally rejects edges outside `kept`.
pub fn validate_routing_within(
    network: &Network,
    demands: &DemandSet,
    routing: &RoutingState,
    kept: Option<&BTreeSet<EdgeId>>,
) -> Result<(), Vec<Violation>> {
    let mut violations = Vec::new();
    let assignment = routing.assignment();
    if assignment.len() != demands.len() {
        violations.push(Violation::AssignmentCount {
            expected: demands.len(),
            got: assignment.len(),
        });
    }
    let mut flow = vec![Rational::zero(); network.edge_count()];
    for (i, d) in demands.iter().enumerate() {
        let Some(Some(path)) = assignment.get(i) else {
            violations.push(Violation::MissingPath { demand: i });
            continue;
        };
        if path.source() != d.source || path.target() != d.target {
            violations.push(Violation::WrongEndpoints { demand: i });
        }
        if !path.is_elementary() {
            violations.push(Violation::NotElementary { demand: i });
        }
        for (k, &e) in path.edges().iter().enumerate() {
            let (a, b) = (path.nodes()[k], path.nodes()[k + 1]);
            if e >= network.edge_count() || network.edge_between(a, b) != Some(e) {
                violations.push(Violation::InvalidEdge { demand: i, edge: e });
                continue;
            }
            if kept.is_some_and(|k| !k.contains(&e)) {
                violations.push(Violation::InactiveEdge { demand: i, edge: e });
            }
            flow[e] += d.volume;
        }
    }
    for (e, f) in flow.iter().enumerate() {
        if let Capacity::Finite(c) = network.edge(e).capacity {
            if *f > c {
                violations.push(Violation::CapacityExceeded {
                    edge: e,
                    flow: *f,
                    capacity: c,
                });
            }
        }
    }
    if violations.is_empty() {
        Ok(())
    } else {
        Err(violations)
    }
}
