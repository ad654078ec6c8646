use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::BoundError;
use crate::graph::{cut_of_partition, CutPartition, Network, NodeId};

/// How [`min_bisection`] searches.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BisectionMode {
    /// Branch and bound over balanced partitions; exponential in n.
    Exact,
    /// Swap-based local search from seeded random starts.
    Heuristic { seed: u64, restarts: usize },
    /// Exact up to [`EXACT_BISECTION_LIMIT`] nodes, heuristic above.
    Auto,
}

pub const EXACT_BISECTION_LIMIT: usize = 24;

/// Smallest cut splitting the nodes into sides of sizes ⌈n/2⌉ and ⌊n/2⌋.
/// Any balanced partition gives a valid load bound, so the heuristic
/// result is only possibly weaker.
pub fn min_bisection(network: &Network, mode: BisectionMode) -> Result<CutPartition, BoundError> {
    let n = network.node_count();
    if n < 2 {
        return Err(BoundError::TooSmall {
            what: "bisection",
            min: 2,
        });
    }
    let exact = match mode {
        BisectionMode::Exact => true,
        BisectionMode::Heuristic { .. } => false,
        BisectionMode::Auto => n <= EXACT_BISECTION_LIMIT,
    };
    let (seed, restarts) = match mode {
        BisectionMode::Heuristic { seed, restarts } => (seed, restarts.max(1)),
        _ => (0, 20),
    };
    let start = swap_search(network, seed, restarts);
    let side = if exact {
        exact_search(network, start)
    } else {
        start
    };
    let set: BTreeSet<NodeId> = (0..n).filter(|&v| side[v]).collect();
    Ok(cut_of_partition(network, &set)?)
}

fn cut_size(network: &Network, side: &[bool]) -> usize {
    network
        .edges()
        .iter()
        .filter(|e| side[e.u] != side[e.v])
        .count()
}

fn swap_search(network: &Network, seed: u64, restarts: usize) -> Vec<bool> {
    let n = network.node_count();
    let big = n.div_ceil(2);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<(usize, Vec<bool>)> = None;
    for _ in 0..restarts {
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(&mut rng);
        let mut side = vec![false; n];
        for &v in &order[..big] {
            side[v] = true;
        }
        let mut cost = cut_size(network, &side);
        loop {
            // gain of moving v to the other side
            let gain: Vec<i64> = (0..n)
                .map(|v| {
                    network
                        .neighbors(v)
                        .iter()
                        .map(|&(w, _)| if side[w] == side[v] { -1 } else { 1 })
                        .sum()
                })
                .collect();
            let mut best_swap: Option<(i64, usize, usize)> = None;
            for a in (0..n).filter(|&v| side[v]) {
                for b in (0..n).filter(|&v| !side[v]) {
                    let joined = i64::from(network.edge_between(a, b).is_some());
                    let g = gain[a] + gain[b] - 2 * joined;
                    if g > 0 && best_swap.is_none_or(|(bg, _, _)| g > bg) {
                        best_swap = Some((g, a, b));
                    }
                }
            }
            let Some((g, a, b)) = best_swap else { break };
            side[a] = false;
            side[b] = true;
            cost -= g as usize;
        }
        if best.as_ref().is_none_or(|(c, _)| cost < *c) {
            best = Some((cost, side));
        }
    }
    best.map(|b| b.1).unwrap_or_else(|| vec![true; n])
}

struct Exact<'a> {
    network: &'a Network,
    order: Vec<NodeId>,
    // 0 unassigned, 1 side A, 2 side B
    state: Vec<u8>,
    cap: [usize; 2],
    used: [usize; 2],
    best: usize,
    best_side: Vec<bool>,
}

impl Exact<'_> {
    fn lower_bound(&self, cut: usize) -> usize {
        let mut extra = 0;
        for &v in &self.order {
            if self.state[v] != 0 {
                continue;
            }
            let (mut a, mut b) = (0, 0);
            for &(w, _) in self.network.neighbors(v) {
                match self.state[w] {
                    1 => a += 1,
                    2 => b += 1,
                    _ => {}
                }
            }
            let room_a = self.used[0] < self.cap[0];
            let room_b = self.used[1] < self.cap[1];
            extra += match (room_a, room_b) {
                (true, true) => a.min(b),
                (true, false) => b,
                (false, true) => a,
                (false, false) => 0,
            };
        }
        cut + extra
    }

    fn go(&mut self, depth: usize, cut: usize) {
        if depth == self.order.len() {
            if cut < self.best {
                self.best = cut;
                self.best_side = self.state.iter().map(|&s| s == 1).collect();
            }
            return;
        }
        if self.lower_bound(cut) >= self.best {
            return;
        }
        let v = self.order[depth];
        for s in [1u8, 2] {
            let k = usize::from(s - 1);
            if self.used[k] == self.cap[k] {
                continue;
            }
            let added = self
                .network
                .neighbors(v)
                .iter()
                .filter(|&&(w, _)| self.state[w] != 0 && self.state[w] != s)
                .count();
            self.state[v] = s;
            self.used[k] += 1;
            self.go(depth + 1, cut + added);
            self.used[k] -= 1;
            self.state[v] = 0;
        }
    }
}

fn exact_search(network: &Network, start: Vec<bool>) -> Vec<bool> {
    let n = network.node_count();
    // BFS order from a maximum-degree node keeps the partial cut informative
    let root = (0..n).max_by_key(|&v| (network.degree(v), std::cmp::Reverse(v))).unwrap_or(0);
    let mut order = vec![root];
    let mut seen = vec![false; n];
    seen[root] = true;
    let mut i = 0;
    while order.len() < n {
        if i < order.len() {
            let u = order[i];
            i += 1;
            for &(w, _) in network.neighbors(u) {
                if !seen[w] {
                    seen[w] = true;
                    order.push(w);
                }
            }
        } else {
            let v = (0..n).find(|&v| !seen[v]).expect("unseen node");
            seen[v] = true;
            order.push(v);
        }
    }
    let big = n.div_ceil(2);
    let small = n / 2;
    let start_cut = cut_size(network, &start);
    let mut best = (start_cut, start);
    // The root sits on side A; A takes either size when n is odd.
    let sizes: Vec<usize> = if big == small { vec![big] } else { vec![big, small] };
    for a_size in sizes {
        let mut search = Exact {
            network,
            order: order.clone(),
            state: vec![0; n],
            cap: [a_size, n - a_size],
            used: [0, 0],
            best: best.0,
            best_side: Vec::new(),
        };
        search.state[root] = 1;
        search.used[0] = 1;
        search.go(1, 0);
        if search.best < best.0 {
            best = (search.best, search.best_side);
        }
    }
    let side = best.1;
    // report the larger side as S
    if side.iter().filter(|&&x| x).count() < big {
        side.iter().map(|x| !x).collect()
    } else {
        side
    }
}
