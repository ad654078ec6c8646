//! Unit-capacity flows on the undirected network: edge-disjoint path counts
//! and minimum-hop families of edge-disjoint paths.

use std::collections::VecDeque;

use crate::graph::{EdgeId, Network, NodeId, Path};

// Net flow per edge in {-1, 0, 1}; positive means u -> v with u < v.
struct UnitFlow<'a> {
    network: &'a Network,
    net: Vec<i8>,
    usable: Vec<bool>,
}

impl<'a> UnitFlow<'a> {
    fn new(network: &'a Network, usable: impl Fn(EdgeId) -> bool) -> Self {
        UnitFlow {
            network,
            net: vec![0; network.edge_count()],
            usable: (0..network.edge_count()).map(usable).collect(),
        }
    }

    // +1 / -1 when pushing one unit from `from` along `e`.
    fn direction(&self, e: EdgeId, from: NodeId) -> i8 {
        if self.network.edge(e).u == from {
            1
        } else {
            -1
        }
    }

    fn can_push(&self, e: EdgeId, from: NodeId) -> bool {
        self.usable[e] && self.net[e] != self.direction(e, from)
    }

    fn push_cost(&self, e: EdgeId) -> i64 {
        if self.net[e] == 0 {
            1
        } else {
            -1
        }
    }

    fn augment(&mut self, t: NodeId, pred: &[Option<(NodeId, EdgeId)>]) {
        let mut x = t;
        while let Some((p, e)) = pred[x] {
            let d = self.direction(e, p);
            self.net[e] += d;
            x = p;
        }
    }

    fn bfs_augment(&mut self, s: NodeId, t: NodeId) -> bool {
        let n = self.network.node_count();
        let mut pred: Vec<Option<(NodeId, EdgeId)>> = vec![None; n];
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([s]);
        seen[s] = true;
        while let Some(u) = queue.pop_front() {
            for &(v, e) in self.network.neighbors(u) {
                if !seen[v] && self.can_push(e, u) {
                    seen[v] = true;
                    pred[v] = Some((u, e));
                    if v == t {
                        self.augment(t, &pred);
                        return true;
                    }
                    queue.push_back(v);
                }
            }
        }
        false
    }

    // Cheapest augmenting path by Bellman-Ford; residual costs can be negative.
    fn cheapest_augment(&mut self, s: NodeId, t: NodeId) -> bool {
        let n = self.network.node_count();
        let mut dist: Vec<Option<i64>> = vec![None; n];
        let mut pred: Vec<Option<(NodeId, EdgeId)>> = vec![None; n];
        dist[s] = Some(0);
        for _ in 0..n {
            let mut changed = false;
            for u in 0..n {
                let Some(du) = dist[u] else { continue };
                for &(v, e) in self.network.neighbors(u) {
                    if v == s || !self.can_push(e, u) {
                        continue;
                    }
                    let nd = du + self.push_cost(e);
                    if dist[v].is_none_or(|dv| nd < dv) {
                        dist[v] = Some(nd);
                        pred[v] = Some((u, e));
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        if dist[t].is_none() {
            return false;
        }
        self.augment(t, &pred);
        true
    }

    fn decompose(&self, s: NodeId, t: NodeId, count: usize) -> Vec<Path> {
        let mut left = self.net.clone();
        let mut paths = Vec::with_capacity(count);
        for _ in 0..count {
            let mut nodes = vec![s];
            let mut edges = Vec::new();
            let mut u = s;
            while u != t {
                let &(v, e) = self
                    .network
                    .neighbors(u)
                    .iter()
                    .find(|&&(_, e)| left[e] == self.direction(e, u))
                    .expect("flow conservation");
                left[e] = 0;
                nodes.push(v);
                edges.push(e);
                u = v;
            }
            paths.push(Path::from_parts(nodes, edges));
        }
        paths.sort_by(|a, b| a.hops().cmp(&b.hops()).then_with(|| a.nodes().cmp(b.nodes())));
        paths
    }
}

/// Maximum number of pairwise edge-disjoint `s`–`t` paths over usable edges.
pub fn edge_disjoint_count(
    network: &Network,
    s: NodeId,
    t: NodeId,
    usable: impl Fn(EdgeId) -> bool,
) -> usize {
    if s == t {
        return 0;
    }
    let mut flow = UnitFlow::new(network, usable);
    let mut count = 0;
    while flow.bfs_augment(s, t) {
        count += 1;
    }
    count
}

/// `k` pairwise edge-disjoint `s`–`t` paths of minimum total hop count, or
/// `None` when fewer than `k` exist. The paths are elementary and sorted
/// by hop count, then node sequence.
pub fn min_hop_disjoint_paths(
    network: &Network,
    s: NodeId,
    t: NodeId,
    k: usize,
    usable: impl Fn(EdgeId) -> bool,
) -> Option<Vec<Path>> {
    if s == t {
        return None;
    }
    let mut flow = UnitFlow::new(network, usable);
    for _ in 0..k {
        if !flow.cheapest_augment(s, t) {
            return None;
        }
    }
    Some(flow.decompose(s, t, k))
}
