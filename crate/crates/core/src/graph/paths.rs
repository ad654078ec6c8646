use std::cmp::Ordering;
use std::collections::{BinaryHeap, VecDeque};

use super::{EdgeId, GraphError, Network, NodeId, Path};

/// Per-edge weight for [`shortest_path`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum EdgeWeight {
    Weight(f64),
    Excluded,
}

impl EdgeWeight {
    pub fn value(&self) -> Option<f64> {
        match self {
            EdgeWeight::Weight(w) => Some(*w),
            EdgeWeight::Excluded => None,
        }
    }
}

// Relative tolerance under which two path weights count as equal. Must stay
// well below the smallest weight the routing code hands out.
const TIE_TOLERANCE: f64 = 1e-12;

fn same_weight(a: f64, b: f64) -> bool {
    (a - b).abs() <= TIE_TOLERANCE * a.abs().max(b.abs()).max(1.0)
}

#[derive(PartialEq)]
struct Entry(f64, NodeId);

impl Eq for Entry {}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        other.0.total_cmp(&self.0).then_with(|| other.1.cmp(&self.1))
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Distance from every node to `target` over non-excluded edges.
fn distances_to(network: &Network, weights: &[EdgeWeight], target: NodeId) -> Vec<f64> {
    let mut dist = vec![f64::INFINITY; network.node_count()];
    let mut heap = BinaryHeap::new();
    dist[target] = 0.0;
    heap.push(Entry(0.0, target));
    while let Some(Entry(d, u)) = heap.pop() {
        if d > dist[u] {
            continue;
        }
        for &(v, e) in network.neighbors(u) {
            if let EdgeWeight::Weight(w) = weights[e] {
                let nd = d + w;
                if nd < dist[v] {
                    dist[v] = nd;
                    heap.push(Entry(nd, v));
                }
            }
        }
    }
    dist
}

/// Minimum-weight elementary path from `s` to `t`.
///
/// Among all minimum-weight paths the one with the lexicographically
/// smallest node sequence is returned, so the result is fully determined by
/// the inputs. Weights must be positive. Returns `None` when `t` cannot be
/// reached through non-excluded edges.
pub fn shortest_path(
    network: &Network,
    weights: &[EdgeWeight],
    s: NodeId,
    t: NodeId,
) -> Option<Path> {
    debug_assert_eq!(weights.len(), network.edge_count());
    if s == t {
        return Some(Path::from_parts(vec![s], Vec::new()));
    }
    let dist = distances_to(network, weights, t);
    if !dist[s].is_finite() {
        return None;
    }
    let mut nodes = vec![s];
    let mut edges = Vec::new();
    let mut u = s;
    while u != t {
        let mut chosen = None;
        let mut fallback: Option<(f64, NodeId, EdgeId)> = None;
        for &(v, e) in network.neighbors(u) {
            let Some(w) = weights[e].value() else { continue };
            if !dist[v].is_finite() || dist[v] >= dist[u] {
                continue;
            }
            let through = w + dist[v];
            if same_weight(through, dist[u]) {
                chosen = Some((v, e));
                break;
            }
            if fallback.is_none_or(|(best, _, _)| through < best) {
                fallback = Some((through, v, e));
            }
        }
        let (v, e) = chosen.or(fallback.map(|(_, v, e)| (v, e)))?;
        nodes.push(v);
        edges.push(e);
        u = v;
    }
    Some(Path::from_parts(nodes, edges))
}

/// Fewest-hop path using only edges accepted by `usable`, lexicographic tie-break.
pub fn hop_shortest_path(
    network: &Network,
    s: NodeId,
    t: NodeId,
    usable: impl Fn(EdgeId) -> bool,
) -> Option<Path> {
    let weights: Vec<EdgeWeight> = (0..network.edge_count())
        .map(|e| {
            if usable(e) {
                EdgeWeight::Weight(1.0)
            } else {
                EdgeWeight::Excluded
            }
        })
        .collect();
    shortest_path(network, &weights, s, t)
}

/// BFS hop distances from `source` over edges accepted by `usable`.
pub fn hop_distances_from(
    network: &Network,
    source: NodeId,
    usable: impl Fn(EdgeId) -> bool,
) -> Vec<Option<u32>> {
    let mut dist = vec![None; network.node_count()];
    let mut queue = VecDeque::new();
    dist[source] = Some(0);
    queue.push_back(source);
    while let Some(u) = queue.pop_front() {
        let du = dist[u].expect("queued nodes are reached");
        for &(v, e) in network.neighbors(u) {
            if dist[v].is_none() && usable(e) {
                dist[v] = Some(du + 1);
                queue.push_back(v);
            }
        }
    }
    dist
}

/// Symmetric hop-distance matrix; `None` marks disconnected pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistanceMatrix {
    n: usize,
    dist: Vec<Option<u32>>,
}

impl DistanceMatrix {
    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: NodeId, j: NodeId) -> Option<u32> {
        self.dist[i * self.n + j]
    }

    pub fn is_connected(&self) -> bool {
        self.dist.iter().all(Option::is_some)
    }
}

pub fn all_pairs_distances(network: &Network) -> DistanceMatrix {
    let n = network.node_count();
    let mut dist = Vec::with_capacity(n * n);
    for s in 0..n {
        dist.extend(hop_distances_from(network, s, |_| true));
    }
    DistanceMatrix { n, dist }
}

/// Sum of `d(i, j)` over all ordered pairs, i.e. twice the Wiener index.
pub fn ordered_distance_sum(network: &Network) -> Result<u64, GraphError> {
    let matrix = all_pairs_distances(network);
    let mut total = 0u64;
    for d in &matrix.dist {
        total += u64::from(d.ok_or(GraphError::Disconnected)?);
    }
    Ok(total)
}

/// All elementary `s`–`t` paths over usable edges with at most `max_hops`
/// edges, ordered by hop count then node sequence.
pub fn enumerate_paths(
    network: &Network,
    s: NodeId,
    t: NodeId,
    max_hops: usize,
    usable: impl Fn(EdgeId) -> bool,
) -> Vec<Path> {
    let mut out = Vec::new();
    let mut on_path = vec![false; network.node_count()];
    let mut nodes = vec![s];
    let mut edges = Vec::new();
    on_path[s] = true;
    // remaining-hop pruning: BFS distance to t must fit in the budget
    let to_t = hop_distances_from(network, t, &usable);
    if to_t[s].is_none() {
        return out;
    }
    fn walk(
        network: &Network,
        t: NodeId,
        max_hops: usize,
        usable: &dyn Fn(EdgeId) -> bool,
        to_t: &[Option<u32>],
        on_path: &mut [bool],
        nodes: &mut Vec<NodeId>,
        edges: &mut Vec<EdgeId>,
        out: &mut Vec<Path>,
    ) {
        let u = *nodes.last().expect("non-empty");
        if u == t {
            out.push(Path::from_parts(nodes.clone(), edges.clone()));
            return;
        }
        for &(v, e) in network.neighbors(u) {
            if on_path[v] || !usable(e) {
                continue;
            }
            match to_t[v] {
                Some(d) if edges.len() + 1 + d as usize <= max_hops => {}
                _ => continue,
            }
            on_path[v] = true;
            nodes.push(v);
            edges.push(e);
            walk(network, t, max_hops, usable, to_t, on_path, nodes, edges, out);
            edges.pop();
            nodes.pop();
            on_path[v] = false;
        }
    }
    walk(
        network,
        t,
        max_hops,
        &usable,
        &to_t,
        &mut on_path,
        &mut nodes,
        &mut edges,
        &mut out,
    );
    out.sort_by(|a, b| a.hops().cmp(&b.hops()).then_with(|| a.nodes().cmp(b.nodes())));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate_topology, Capacity, Topology};

    fn unit(net: &Network) -> Vec<EdgeWeight> {
        vec![EdgeWeight::Weight(1.0); net.edge_count()]
    }

    #[test]
    fn complete_graph_direct_edge() {
        let k5 = generate_topology(Topology::Complete(5), Capacity::finite(1)).unwrap();
        let p = shortest_path(&k5, &unit(&k5), 0, 1).unwrap();
        assert_eq!(p.nodes(), &[0, 1]);
    }

    #[test]
    fn grid_corner_to_corner_lexicographic() {
        let g = generate_topology(Topology::Grid(3), Capacity::finite(1)).unwrap();
        // Oracle: enumerate every elementary path, keep the shortest ones,
        // take the lexicographic minimum.
        let all = enumerate_paths(&g, 0, 8, 8, |_| true);
        let best = all.iter().map(Path::hops).min().unwrap();
        let shortest: Vec<_> = all.iter().filter(|p| p.hops() == best).collect();
        assert_eq!(shortest.len(), 6);
        let lexmin = shortest.iter().map(|p| p.nodes().to_vec()).min().unwrap();
        assert_eq!(lexmin, vec![0, 1, 2, 5, 8]);

        let p = shortest_path(&g, &unit(&g), 0, 8).unwrap();
        assert_eq!(p.hops(), 4);
        assert_eq!(p.nodes(), lexmin.as_slice());
    }

    #[test]
    fn all_excluded_is_none() {
        let k5 = generate_topology(Topology::Complete(5), Capacity::finite(1)).unwrap();
        let w = vec![EdgeWeight::Excluded; k5.edge_count()];
        assert!(shortest_path(&k5, &w, 0, 3).is_none());
    }

    #[test]
    fn weighted_detour() {
        let k3 = generate_topology(Topology::Complete(3), Capacity::finite(1)).unwrap();
        let mut w = unit(&k3);
        w[k3.edge_between(0, 2).unwrap()] = EdgeWeight::Weight(5.0);
        assert_eq!(shortest_path(&k3, &w, 0, 2).unwrap().nodes(), &[0, 1, 2]);
    }

    #[test]
    fn distances() {
        let k5 = generate_topology(Topology::Complete(5), Capacity::finite(1)).unwrap();
        let d = all_pairs_distances(&k5);
        for i in 0..5 {
            for j in 0..5 {
                assert_eq!(d.get(i, j), Some(u32::from(i != j)));
            }
        }
        assert_eq!(ordered_distance_sum(&k5).unwrap(), 20);

        let p4 = generate_topology(Topology::Path(4), Capacity::finite(1)).unwrap();
        assert_eq!(all_pairs_distances(&p4).get(0, 3), Some(3));

        let g = generate_topology(Topology::Grid(5), Capacity::finite(1)).unwrap();
        let d = all_pairs_distances(&g);
        for i in 0..25usize {
            for j in 0..25 {
                let manhattan = (i / 5).abs_diff(j / 5) + (i % 5).abs_diff(j % 5);
                assert_eq!(d.get(i, j), Some(manhattan as u32));
            }
        }

        let split = Network::new(3, [(0, 1, Capacity::finite(1))]).unwrap();
        assert_eq!(ordered_distance_sum(&split), Err(GraphError::Disconnected));
        assert_eq!(all_pairs_distances(&split).get(0, 2), None);
    }

    #[test]
    fn grid_distance_sum_closed_form() {
        for a in 2..=5u64 {
            let g = generate_topology(Topology::Grid(a as usize), Capacity::finite(1)).unwrap();
            // brute force: sum of Manhattan distances over ordered pairs
            let mut brute = 0;
            for i in 0..a * a {
                for j in 0..a * a {
                    brute += (i / a).abs_diff(j / a) + (i % a).abs_diff(j % a);
                }
            }
            assert_eq!(ordered_distance_sum(&g).unwrap(), brute);
            assert_eq!(brute, 2 * a.pow(3) * (a * a - 1) / 3);
        }
    }
}
