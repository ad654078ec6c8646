//! Network and demand data model.
//!
//! A [`Network`] is a simple undirected graph whose edges carry a
//! [`Capacity`]. Node ids are `0..n` and edge ids are `0..m`, both dense.
//! Capacities and demand volumes are exact rationals so that residual
//! bookkeeping never drifts.

mod cuts;
mod generators;
mod paths;

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use num_rational::Ratio;
use num_traits::{Signed, Zero};
use thiserror::Error;

pub use cuts::{cut_of_partition, CutPartition};
pub use generators::{
    generate_topology, long_path_augment, partition_gadget, partition_gadget_equal, sp_trap,
    SpTrap, Topology,
};
pub use paths::{
    all_pairs_distances, enumerate_paths, hop_distances_from, hop_shortest_path,
    ordered_distance_sum, shortest_path, DistanceMatrix, EdgeWeight,
};

/// Exact rational used for capacities, volumes and bound values.
pub type Rational = Ratio<i64>;

pub type NodeId = usize;
pub type EdgeId = usize;

/// Shorthand for an integral [`Rational`].
pub fn rat(v: i64) -> Rational {
    Rational::from_integer(v)
}

/// Formats a rational as `p` or `p/q`.
pub fn fmt_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `p`, `p/q` or a finite decimal such as `2.75` into an exact rational.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let text = text.trim();
    if let Some((p, q)) = text.split_once('/') {
        let p: i64 = p.trim().parse().ok()?;
        let q: i64 = q.trim().parse().ok()?;
        if q == 0 {
            return None;
        }
        return Some(Rational::new(p, q));
    }
    if let Some((int, frac)) = text.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) || frac.len() > 15 {
            return None;
        }
        let negative = int.starts_with('-');
        let int_part: i64 = match int.trim_start_matches(['-', '+']) {
            "" => 0,
            digits => digits.parse().ok()?,
        };
        let scale = 10i64.checked_pow(frac.len() as u32)?;
        let frac_part: i64 = frac.parse().ok()?;
        let magnitude = int_part.checked_mul(scale)?.checked_add(frac_part)?;
        let numer = if negative { -magnitude } else { magnitude };
        return Some(Rational::new(numer, scale));
    }
    text.parse::<i64>().ok().map(Rational::from_integer)
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("{what} must be at least {min}, got {value}")]
    InvalidSize {
        what: &'static str,
        min: usize,
        value: usize,
    },
    #[error("self-loop on node {0}")]
    SelfLoop(NodeId),
    #[error("parallel edge between nodes {0} and {1}")]
    ParallelEdge(NodeId, NodeId),
    #[error("node {node} out of range (network has {count} nodes)")]
    NodeOutOfRange { node: NodeId, count: usize },
    #[error("edge {0} does not exist")]
    EdgeOutOfRange(EdgeId),
    #[error("edge {0} has a negative capacity")]
    NegativeCapacity(EdgeId),
    #[error("no edge between nodes {0} and {1}")]
    MissingEdge(NodeId, NodeId),
    #[error("demand {index} is invalid: {reason}")]
    InvalidDemand { index: usize, reason: String },
    #[error("duplicate demand from {0} to {1}")]
    DuplicateDemand(NodeId, NodeId),
    #[error("network is disconnected")]
    Disconnected,
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("expected {expected} node labels, got {got}")]
    LabelCount { expected: usize, got: usize },
    #[error("network is not a tree")]
    NotATree,
}

/// Edge capacity: a finite non-negative rational or the unbounded sentinel.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Capacity {
    Finite(Rational),
    Unbounded,
}

impl Capacity {
    pub fn finite(v: i64) -> Self {
        Capacity::Finite(rat(v))
    }

    pub fn is_unbounded(&self) -> bool {
        matches!(self, Capacity::Unbounded)
    }

    pub fn as_finite(&self) -> Option<Rational> {
        match self {
            Capacity::Finite(c) => Some(*c),
            Capacity::Unbounded => None,
        }
    }

    /// True when at least `volume` can still be pushed through.
    pub fn admits(&self, volume: &Rational) -> bool {
        match self {
            Capacity::Finite(c) => c >= volume,
            Capacity::Unbounded => true,
        }
    }

    pub fn minus(&self, volume: &Rational) -> Capacity {
        match self {
            Capacity::Finite(c) => Capacity::Finite(c - volume),
            Capacity::Unbounded => Capacity::Unbounded,
        }
    }
}

impl fmt::Display for Capacity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Capacity::Finite(c) => f.write_str(&fmt_rational(c)),
            Capacity::Unbounded => f.write_str("INF"),
        }
    }
}

/// An undirected edge, stored with `u < v`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Edge {
    pub u: NodeId,
    pub v: NodeId,
    pub capacity: Capacity,
}

impl Edge {
    pub fn other(&self, x: NodeId) -> NodeId {
        if x == self.u {
            self.v
        } else {
            self.u
        }
    }

    pub fn touches(&self, x: NodeId) -> bool {
        self.u == x || self.v == x
    }
}

/// Simple undirected capacitated graph.
#[derive(Clone, Debug)]
pub struct Network {
    node_count: usize,
    edges: Vec<Edge>,
    labels: Option<Vec<String>>,
    adjacency: Vec<Vec<(NodeId, EdgeId)>>,
    index: HashMap<(NodeId, NodeId), EdgeId>,
}

impl PartialEq for Network {
    fn eq(&self, other: &Self) -> bool {
        self.node_count == other.node_count
            && self.edges == other.edges
            && self.labels == other.labels
    }
}

impl Network {
    /// Builds a network; edge ids follow the iteration order.
    pub fn new<I>(node_count: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (NodeId, NodeId, Capacity)>,
    {
        if node_count == 0 {
            return Err(GraphError::InvalidSize {
                what: "node count",
                min: 1,
                value: 0,
            });
        }
        let mut stored = Vec::new();
        let mut index = HashMap::new();
        let mut adjacency = vec![Vec::new(); node_count];
        for (id, (a, b, capacity)) in edges.into_iter().enumerate() {
            for x in [a, b] {
                if x >= node_count {
                    return Err(GraphError::NodeOutOfRange {
                        node: x,
                        count: node_count,
                    });
                }
            }
            if a == b {
                return Err(GraphError::SelfLoop(a));
            }
            if let Capacity::Finite(c) = capacity {
                if c.is_negative() {
                    return Err(GraphError::NegativeCapacity(id));
                }
            }
            let (u, v) = (a.min(b), a.max(b));
            if index.insert((u, v), id).is_some() {
                return Err(GraphError::ParallelEdge(u, v));
            }
            adjacency[u].push((v, id));
            adjacency[v].push((u, id));
            stored.push(Edge { u, v, capacity });
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Ok(Network {
            node_count,
            edges: stored,
            labels: None,
            adjacency,
            index,
        })
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self, GraphError> {
        if labels.len() != self.node_count {
            return Err(GraphError::LabelCount {
                expected: self.node_count,
                got: labels.len(),
            });
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, id: EdgeId) -> &Edge {
        &self.edges[id]
    }

    /// Neighbors of `u` as `(neighbor, edge)` pairs, sorted by neighbor id.
    pub fn neighbors(&self, u: NodeId) -> &[(NodeId, EdgeId)] {
        &self.adjacency[u]
    }

    pub fn edge_between(&self, a: NodeId, b: NodeId) -> Option<EdgeId> {
        self.index.get(&(a.min(b), a.max(b))).copied()
    }

    pub fn degree(&self, u: NodeId) -> usize {
        self.adjacency[u].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn label(&self, u: NodeId) -> Option<&str> {
        self.labels.as_ref().map(|l| l[u].as_str())
    }

    /// Looks a node up by label.
    pub fn node_by_label(&self, label: &str) -> Option<NodeId> {
        self.labels.as_ref()?.iter().position(|l| l == label)
    }

    /// The common capacity of every edge, if there is one.
    pub fn uniform_capacity(&self) -> Option<Capacity> {
        let first = self.edges.first()?.capacity;
        self.edges
            .iter()
            .all(|e| e.capacity == first)
            .then_some(first)
    }

    /// Copy of the network with every capacity replaced by `capacity`.
    pub fn with_uniform_capacity(&self, capacity: Capacity) -> Network {
        let mut out = self.clone();
        for e in &mut out.edges {
            e.capacity = capacity;
        }
        out
    }

    /// Same node set, only the `kept` edges (renumbered in increasing id order).
    pub fn subnetwork(&self, kept: &BTreeSet<EdgeId>) -> Network {
        let edges = kept
            .iter()
            .map(|&e| (self.edges[e].u, self.edges[e].v, self.edges[e].capacity));
        let mut net = Network::new(self.node_count, edges).expect("subset of a valid network");
        net.labels = self.labels.clone();
        net
    }

    /// Connected components restricted to the edges for which `active` holds.
    pub fn components_with(&self, active: impl Fn(EdgeId) -> bool) -> Vec<usize> {
        let mut comp = vec![usize::MAX; self.node_count];
        let mut next = 0;
        let mut stack = Vec::new();
        for start in 0..self.node_count {
            if comp[start] != usize::MAX {
                continue;
            }
            comp[start] = next;
            stack.push(start);
            while let Some(u) = stack.pop() {
                for &(v, e) in &self.adjacency[u] {
                    if comp[v] == usize::MAX && active(e) {
                        comp[v] = next;
                        stack.push(v);
                    }
                }
            }
            next += 1;
        }
        comp
    }

    pub fn is_connected(&self) -> bool {
        self.components_with(|_| true).iter().all(|&c| c == 0)
    }

    pub fn is_tree(&self) -> bool {
        self.edge_count() + 1 == self.node_count && self.is_connected()
    }
}

/// A single demand of `volume` units from `source` to `target`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Demand {
    pub source: NodeId,
    pub target: NodeId,
    pub volume: Rational,
}

impl Demand {
    pub fn new(source: NodeId, target: NodeId, volume: Rational) -> Self {
        Demand {
            source,
            target,
            volume,
        }
    }
}

/// Ordered list of demands. `D_st` and `D_ts` are distinct demands.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DemandSet {
    demands: Vec<Demand>,
}

impl DemandSet {
    /// Validates `s != t`, positive volumes and no repeated ordered pair.
    pub fn new(demands: Vec<Demand>) -> Result<Self, GraphError> {
        Self::check(&demands)?;
        let mut seen = BTreeSet::new();
        for d in &demands {
            if !seen.insert((d.source, d.target)) {
                return Err(GraphError::DuplicateDemand(d.source, d.target));
            }
        }
        Ok(DemandSet { demands })
    }

    /// Like [`DemandSet::new`] but accepts several demands on the same
    /// ordered pair (needed by the partition gadget).
    pub fn with_parallel(demands: Vec<Demand>) -> Result<Self, GraphError> {
        Self::check(&demands)?;
        Ok(DemandSet { demands })
    }

    fn check(demands: &[Demand]) -> Result<(), GraphError> {
        for (index, d) in demands.iter().enumerate() {
            if d.source == d.target {
                return Err(GraphError::InvalidDemand {
                    index,
                    reason: "source equals target".into(),
                });
            }
            if d.volume <= Rational::zero() {
                return Err(GraphError::InvalidDemand {
                    index,
                    reason: "volume must be positive".into(),
                });
            }
        }
        Ok(())
    }

    /// Every ordered pair of distinct nodes with volume `kappa`, sorted by (s, t).
    pub fn all_to_all(node_count: usize, kappa: Rational) -> Self {
        let mut demands = Vec::with_capacity(node_count * node_count.saturating_sub(1));
        for s in 0..node_count {
            for t in 0..node_count {
                if s != t {
                    demands.push(Demand::new(s, t, kappa));
                }
            }
        }
        DemandSet { demands }
    }

    pub fn empty() -> Self {
        DemandSet {
            demands: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.demands.len()
    }

    pub fn is_empty(&self) -> bool {
        self.demands.is_empty()
    }

    pub fn get(&self, i: usize) -> &Demand {
        &self.demands[i]
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Demand> {
        self.demands.iter()
    }

    pub fn as_slice(&self) -> &[Demand] {
        &self.demands
    }

    /// The common volume κ when every demand has the same volume.
    pub fn uniform_volume(&self) -> Option<Rational> {
        let first = self.demands.first()?.volume;
        self.demands
            .iter()
            .all(|d| d.volume == first)
            .then_some(first)
    }

    pub fn total_volume(&self) -> Rational {
        self.demands.iter().map(|d| d.volume).sum()
    }

    /// Checks every endpoint exists in `network`.
    pub fn check_against(&self, network: &Network) -> Result<(), GraphError> {
        for d in &self.demands {
            for x in [d.source, d.target] {
                if x >= network.node_count() {
                    return Err(GraphError::NodeOutOfRange {
                        node: x,
                        count: network.node_count(),
                    });
                }
            }
        }
        Ok(())
    }
}

impl<'a> IntoIterator for &'a DemandSet {
    type Item = &'a Demand;
    type IntoIter = std::slice::Iter<'a, Demand>;

    fn into_iter(self) -> Self::IntoIter {
        self.demands.iter()
    }
}

/// A walk through the network given as node and edge sequences.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path {
    nodes: Vec<NodeId>,
    edges: Vec<EdgeId>,
}

impl Path {
    /// Resolves the edges between consecutive nodes. Repeated nodes are
    /// accepted here; [`Path::is_elementary`] reports them.
    pub fn from_nodes(network: &Network, nodes: Vec<NodeId>) -> Result<Path, GraphError> {
        if nodes.is_empty() {
            return Err(GraphError::InvalidSize {
                what: "path node count",
                min: 1,
                value: 0,
            });
        }
        for &x in &nodes {
            if x >= network.node_count() {
                return Err(GraphError::NodeOutOfRange {
                    node: x,
                    count: network.node_count(),
                });
            }
        }
        let edges = nodes
            .windows(2)
            .map(|w| {
                network
                    .edge_between(w[0], w[1])
                    .ok_or(GraphError::MissingEdge(w[0], w[1]))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Path { nodes, edges })
    }

    pub(crate) fn from_parts(nodes: Vec<NodeId>, edges: Vec<EdgeId>) -> Path {
        debug_assert_eq!(nodes.len(), edges.len() + 1);
        Path { nodes, edges }
    }

    pub fn nodes(&self) -> &[NodeId] {
        &self.nodes
    }

    pub fn edges(&self) -> &[EdgeId] {
        &self.edges
    }

    pub fn hops(&self) -> usize {
        self.edges.len()
    }

    pub fn source(&self) -> NodeId {
        self.nodes[0]
    }

    pub fn target(&self) -> NodeId {
        *self.nodes.last().expect("paths are non-empty")
    }

    pub fn is_elementary(&self) -> bool {
        let mut seen = BTreeSet::new();
        self.nodes.iter().all(|n| seen.insert(*n))
    }

    pub fn reversed(&self) -> Path {
        let mut nodes = self.nodes.clone();
        let mut edges = self.edges.clone();
        nodes.reverse();
        edges.reverse();
        Path { nodes, edges }
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.nodes.iter().map(|n| n.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_parallel_and_loops() {
        let c = Capacity::finite(1);
        assert_eq!(
            Network::new(3, [(0, 1, c), (1, 0, c)]).unwrap_err(),
            GraphError::ParallelEdge(0, 1)
        );
        assert_eq!(
            Network::new(3, [(2, 2, c)]).unwrap_err(),
            GraphError::SelfLoop(2)
        );
        assert!(matches!(
            Network::new(2, [(0, 5, c)]),
            Err(GraphError::NodeOutOfRange { node: 5, .. })
        ));
    }

    #[test]
    fn demand_set_invariants() {
        let one = rat(1);
        assert!(DemandSet::new(vec![Demand::new(0, 0, one)]).is_err());
        assert!(DemandSet::new(vec![Demand::new(0, 1, rat(0))]).is_err());
        assert_eq!(
            DemandSet::new(vec![Demand::new(0, 1, one), Demand::new(0, 1, one)]).unwrap_err(),
            GraphError::DuplicateDemand(0, 1)
        );
        let both = DemandSet::new(vec![Demand::new(0, 1, one), Demand::new(1, 0, one)]).unwrap();
        assert_eq!(both.len(), 2);
        assert!(DemandSet::with_parallel(vec![Demand::new(0, 1, one), Demand::new(0, 1, one)]).is_ok());
        let all = DemandSet::all_to_all(5, rat(2));
        assert_eq!(all.len(), 20);
        assert_eq!(all.uniform_volume(), Some(rat(2)));
    }

    #[test]
    fn rational_parsing() {
        assert_eq!(parse_rational("7"), Some(rat(7)));
        assert_eq!(parse_rational("3/6"), Some(Rational::new(1, 2)));
        assert_eq!(parse_rational("2.75"), Some(Rational::new(11, 4)));
        assert_eq!(parse_rational("-0.5"), Some(Rational::new(-1, 2)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("x"), None);
        assert_eq!(fmt_rational(&Rational::new(4, 6)), "2/3");
    }

    #[test]
    fn path_from_nodes() {
        let net = generate_topology(Topology::Path(4), Capacity::finite(1)).unwrap();
        let p = Path::from_nodes(&net, vec![0, 1, 2]).unwrap();
        assert_eq!(p.hops(), 2);
        assert!(p.is_elementary());
        assert_eq!(
            Path::from_nodes(&net, vec![0, 2]).unwrap_err(),
            GraphError::MissingEdge(0, 2)
        );
        assert!(!Path::from_nodes(&net, vec![0, 1, 0]).unwrap().is_elementary());
    }
}
