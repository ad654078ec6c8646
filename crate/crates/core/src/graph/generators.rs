use std::fmt;
use std::str::FromStr;

use super::{Capacity, Demand, DemandSet, EdgeId, GraphError, Network, NodeId, Rational};

/// Regular topology families with canonical node numbering.
///
/// Grids are numbered row-major: node `r * a + c` sits at row `r`, column `c`.
/// Stars have their center at node 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Topology {
    Complete(usize),
    Grid(usize),
    Star(usize),
    Path(usize),
    Cycle(usize),
}

impl Topology {
    fn size(&self) -> usize {
        match *self {
            Topology::Complete(n)
            | Topology::Grid(n)
            | Topology::Star(n)
            | Topology::Path(n)
            | Topology::Cycle(n) => n,
        }
    }
}

impl fmt::Display for Topology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Topology::Complete(n) => write!(f, "complete:{n}"),
            Topology::Grid(a) => write!(f, "grid:{a}"),
            Topology::Star(n) => write!(f, "star:{n}"),
            Topology::Path(n) => write!(f, "path:{n}"),
            Topology::Cycle(n) => write!(f, "cycle:{n}"),
        }
    }
}

impl FromStr for Topology {
    type Err = String;

    /// Parses `kind:size`, e.g. `grid:4` or `complete:5`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (kind, size) = s
            .split_once(':')
            .ok_or_else(|| format!("expected <kind>:<size>, got `{s}`"))?;
        let size: usize = size
            .trim()
            .parse()
            .map_err(|_| format!("invalid size in `{s}`"))?;
        match kind.trim() {
            "complete" | "k" => Ok(Topology::Complete(size)),
            "grid" => Ok(Topology::Grid(size)),
            "star" => Ok(Topology::Star(size)),
            "path" => Ok(Topology::Path(size)),
            "cycle" | "ring" => Ok(Topology::Cycle(size)),
            other => Err(format!("unknown topology kind `{other}`")),
        }
    }
}

/// Builds `kind` with every edge at `capacity`.
pub fn generate_topology(kind: Topology, capacity: Capacity) -> Result<Network, GraphError> {
    let size = kind.size();
    let min = if matches!(kind, Topology::Cycle(_)) { 3 } else { 1 };
    if size < min {
        return Err(GraphError::InvalidSize {
            what: "topology size",
            min,
            value: size,
        });
    }
    let mut pairs = Vec::new();
    let node_count = match kind {
        Topology::Complete(n) => {
            for i in 0..n {
                for j in i + 1..n {
                    pairs.push((i, j));
                }
            }
            n
        }
        Topology::Grid(a) => {
            for r in 0..a {
                for c in 0..a {
                    let id = r * a + c;
                    if c + 1 < a {
                        pairs.push((id, id + 1));
                    }
                    if r + 1 < a {
                        pairs.push((id, id + a));
                    }
                }
            }
            a * a
        }
        Topology::Star(n) => {
            pairs.extend((1..n).map(|i| (0, i)));
            n
        }
        Topology::Path(n) => {
            pairs.extend((1..n).map(|i| (i - 1, i)));
            n
        }
        Topology::Cycle(n) => {
            pairs.extend((1..n).map(|i| (i - 1, i)));
            pairs.push((0, n - 1));
            n
        }
    };
    Network::new(node_count, pairs.into_iter().map(|(u, v)| (u, v, capacity)))
}

/// The shortest-path trap: greedy shortest-path routing uses `(x+2)|D|`
/// edges while routing everything over the long unbounded path uses
/// `2|D| + x + 1`.
#[derive(Clone, Debug)]
pub struct SpTrap {
    pub network: Network,
    pub demands: DemandSet,
    pub u: NodeId,
    pub v: NodeId,
    /// The `x+1` unbounded edges from `u` to `v`.
    pub long_path: Vec<EdgeId>,
    /// One unit-capacity `x`-edge path per demand.
    pub short_paths: Vec<Vec<EdgeId>>,
    /// `(s_i–u, v–t_i)` pendant edges per demand.
    pub pendants: Vec<(EdgeId, EdgeId)>,
}

/// Builds the trap with `demand_count` unit demands. `middle_len` is the
/// number of edges on each unit-capacity middle path (default 3); the
/// unbounded path then has one more edge.
pub fn sp_trap(demand_count: usize, middle_len: Option<usize>) -> Result<SpTrap, GraphError> {
    let x = middle_len.unwrap_or(3);
    if demand_count == 0 {
        return Err(GraphError::InvalidSize {
            what: "demand count",
            min: 1,
            value: 0,
        });
    }
    if x == 0 {
        return Err(GraphError::InvalidSize {
            what: "middle path length",
            min: 1,
            value: 0,
        });
    }
    let unit = Capacity::finite(1);
    let (u, v) = (0, 1);
    let mut next = 2;
    let mut edges: Vec<(NodeId, NodeId, Capacity)> = Vec::new();

    let chain = |len: usize, cap: Capacity, edges: &mut Vec<_>, next: &mut usize| {
        let mut ids = Vec::with_capacity(len);
        let mut prev = u;
        for step in 0..len {
            let to = if step + 1 == len {
                v
            } else {
                *next += 1;
                *next - 1
            };
            ids.push(edges.len());
            edges.push((prev, to, cap));
            prev = to;
        }
        ids
    };

    let long_path = chain(x + 1, Capacity::Unbounded, &mut edges, &mut next);
    let short_paths: Vec<Vec<EdgeId>> = (0..demand_count)
        .map(|_| chain(x, unit, &mut edges, &mut next))
        .collect();

    let mut pendants = Vec::new();
    let mut demands = Vec::new();
    for _ in 0..demand_count {
        let (s, t) = (next, next + 1);
        next += 2;
        pendants.push((edges.len(), edges.len() + 1));
        edges.push((s, u, unit));
        edges.push((v, t, unit));
        demands.push(Demand::new(s, t, Rational::from_integer(1)));
    }
    let network = Network::new(next, edges)?;
    Ok(SpTrap {
        network,
        demands: DemandSet::new(demands)?,
        u,
        v,
        long_path,
        short_paths,
        pendants,
    })
}

/// Partition gadget: three 2-edge `u–v` paths plus one `x`-edge `u–v` path
/// per demand, all edges at `capacity`. Every demand goes from `u` (node 0)
/// to `v` (node 1) and the volumes must sum to `3 * capacity`.
pub fn partition_gadget(
    volumes: &[Rational],
    capacity: Rational,
    x: usize,
) -> Result<(Network, DemandSet), GraphError> {
    if volumes.is_empty() {
        return Err(GraphError::InvalidSize {
            what: "demand count",
            min: 1,
            value: 0,
        });
    }
    if x == 0 {
        return Err(GraphError::InvalidSize {
            what: "long path length",
            min: 1,
            value: 0,
        });
    }
    let total: Rational = volumes.iter().copied().sum();
    if total != capacity * Rational::from_integer(3) {
        return Err(GraphError::InvalidDemand {
            index: 0,
            reason: format!("volumes sum to {total}, expected three times the capacity"),
        });
    }
    let cap = Capacity::Finite(capacity);
    let (u, v) = (0usize, 1usize);
    let mut next = 2;
    let mut edges = Vec::new();
    for _ in 0..3 {
        edges.push((u, next, cap));
        edges.push((next, v, cap));
        next += 1;
    }
    for _ in volumes {
        let mut prev = u;
        for step in 0..x {
            let to = if step + 1 == x {
                v
            } else {
                next += 1;
                next - 1
            };
            edges.push((prev, to, cap));
            prev = to;
        }
    }
    let network = Network::new(next, edges)?;
    let demands = DemandSet::with_parallel(
        volumes.iter().map(|&vol| Demand::new(u, v, vol)).collect(),
    )?;
    Ok((network, demands))
}

/// [`partition_gadget`] with `count` equal volumes of `3c / count`.
pub fn partition_gadget_equal(
    count: usize,
    capacity: Rational,
    x: usize,
) -> Result<(Network, DemandSet), GraphError> {
    if count == 0 {
        return Err(GraphError::InvalidSize {
            what: "demand count",
            min: 1,
            value: 0,
        });
    }
    let each = capacity * Rational::from_integer(3) / Rational::from_integer(count as i64);
    partition_gadget(&vec![each; count], capacity, x)
}

/// Copies `base` and adds, for every demand, an `x`-edge path of unbounded
/// capacity between its endpoints. Edge ids of `base` are preserved.
pub fn long_path_augment(
    base: &Network,
    demands: &DemandSet,
    x: usize,
) -> Result<(Network, DemandSet), GraphError> {
    if x == 0 {
        return Err(GraphError::InvalidSize {
            what: "augmenting path length",
            min: 1,
            value: 0,
        });
    }
    demands.check_against(base)?;
    let mut edges: Vec<_> = base.edges().iter().map(|e| (e.u, e.v, e.capacity)).collect();
    let mut next = base.node_count();
    let mut labels = base.labels().map(<[String]>::to_vec);
    for (i, d) in demands.iter().enumerate() {
        let mut prev = d.source;
        for step in 0..x {
            let to = if step + 1 == x {
                d.target
            } else {
                if let Some(l) = labels.as_mut() {
                    l.push(format!("aug{i}_{step}"));
                }
                next += 1;
                next - 1
            };
            edges.push((prev, to, Capacity::Unbounded));
            prev = to;
        }
    }
    let mut network = Network::new(next, edges)?;
    if let Some(l) = labels {
        network = network.with_labels(l)?;
    }
    Ok((network, demands.clone()))
}
