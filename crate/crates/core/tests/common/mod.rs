//! Random instances and brute-force oracles shared by the integration
//! tests. Nothing here calls into the library's search code.

#![allow(dead_code)]

use std::collections::{BTreeSet, VecDeque};

use greenroute::graph::{Capacity, Demand, DemandSet, Network, Rational};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn r(v: i64) -> Rational {
    Rational::from_integer(v)
}

/// Random simple network with `n` nodes and `m` distinct edges, capacities
/// drawn from `caps` (`None` meaning unbounded).
pub fn random_network(rng: &mut ChaCha8Rng, n: usize, m: usize, caps: &[Option<i64>]) -> Network {
    let mut pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    pairs.shuffle(rng);
    pairs.truncate(m);
    pairs.sort();
    let edges = pairs.into_iter().map(|(u, v)| {
        let cap = match caps[rng.gen_range(0..caps.len())] {
            Some(c) => Capacity::finite(c),
            None => Capacity::Unbounded,
        };
        (u, v, cap)
    });
    Network::new(n, edges).unwrap()
}

/// Random connected network: a random spanning tree plus extra edges.
pub fn random_connected(rng: &mut ChaCha8Rng, n: usize, m: usize, cap: Capacity) -> Network {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut pairs = BTreeSet::new();
    for i in 1..n {
        let j = rng.gen_range(0..i);
        let (a, b) = (order[i], order[j]);
        pairs.insert((a.min(b), a.max(b)));
    }
    let mut rest: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .filter(|p| !pairs.contains(p))
        .collect();
    rest.shuffle(rng);
    for p in rest.into_iter().take(m.saturating_sub(n - 1)) {
        pairs.insert(p);
    }
    Network::new(n, pairs.into_iter().map(|(u, v)| (u, v, cap))).unwrap()
}

pub fn random_demands(rng: &mut ChaCha8Rng, n: usize, count: usize, max_volume: i64) -> DemandSet {
    let demands = (0..count)
        .map(|_| {
            let s = rng.gen_range(0..n);
            let mut t = rng.gen_range(0..n - 1);
            if t >= s {
                t += 1;
            }
            Demand::new(s, t, r(rng.gen_range(1..=max_volume)))
        })
        .collect();
    DemandSet::with_parallel(demands).unwrap()
}

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Every elementary s–t path over `allowed` edges, as edge id lists.
pub fn all_paths(net: &Network, allowed: &BTreeSet<usize>, s: usize, t: usize) -> Vec<Vec<usize>> {
    fn go(
        net: &Network,
        allowed: &BTreeSet<usize>,
        at: usize,
        t: usize,
        seen: &mut Vec<bool>,
        path: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if at == t {
            out.push(path.clone());
            return;
        }
        for (id, e) in net.edges().iter().enumerate() {
            if !allowed.contains(&id) || !e.touches(at) {
                continue;
            }
            let next = e.other(at);
            if seen[next] {
                continue;
            }
            seen[next] = true;
            path.push(id);
            go(net, allowed, next, t, seen, path, out);
            path.pop();
            seen[next] = false;
        }
    }
    let mut seen = vec![false; net.node_count()];
    seen[s] = true;
    let mut out = Vec::new();
    go(net, allowed, s, t, &mut seen, &mut Vec::new(), &mut out);
    out
}

fn cap_of(net: &Network, e: usize) -> Option<Rational> {
    net.edge(e).capacity.as_finite()
}

/// Tries every combination of one path per demand.
pub fn brute_feasible(net: &Network, dem: &DemandSet, allowed: &BTreeSet<usize>) -> bool {
    let options: Vec<Vec<Vec<usize>>> = dem
        .iter()
        .map(|d| all_paths(net, allowed, d.source, d.target))
        .collect();
    if options.iter().any(Vec::is_empty) {
        return false;
    }
    let mut load = vec![r(0); net.edge_count()];
    fn rec(net: &Network, dem: &DemandSet, options: &[Vec<Vec<usize>>], i: usize, load: &mut Vec<Rational>) -> bool {
        if i == options.len() {
            return true;
        }
        let v = dem.get(i).volume;
        for p in &options[i] {
            if p.iter().all(|&e| cap_of(net, e).is_none_or(|c| load[e] + v <= c)) {
                for &e in p {
                    load[e] += v;
                }
                let ok = rec(net, dem, options, i + 1, load);
                for &e in p {
                    load[e] -= v;
                }
                if ok {
                    return true;
                }
            }
        }
        false
    }
    rec(net, dem, &options, 0, &mut load)
}

pub fn subsets_of_size(m: usize, k: usize) -> Vec<BTreeSet<usize>> {
    (0u32..1 << m)
        .filter(|mask| mask.count_ones() as usize == k)
        .map(|mask| (0..m).filter(|&e| mask >> e & 1 == 1).collect())
        .collect()
}

/// Smallest feasible edge subset size, by exhaustive enumeration.
pub fn brute_min_edges(net: &Network, dem: &DemandSet) -> Option<usize> {
    let m = net.edge_count();
    (0..=m).find(|&k| subsets_of_size(m, k).iter().any(|s| brute_feasible(net, dem, s)))
}

pub fn bfs_hops(net: &Network, allowed: Option<&BTreeSet<usize>>, s: usize) -> Vec<Option<u32>> {
    let mut dist = vec![None; net.node_count()];
    dist[s] = Some(0);
    let mut q = VecDeque::from([s]);
    while let Some(u) = q.pop_front() {
        for (id, e) in net.edges().iter().enumerate() {
            if allowed.is_some_and(|a| !a.contains(&id)) || !e.touches(u) {
                continue;
            }
            let v = e.other(u);
            if dist[v].is_none() {
                dist[v] = Some(dist[u].unwrap() + 1);
                q.push_back(v);
            }
        }
    }
    dist
}

/// γ pairwise edge-disjoint paths per unordered pair with hop total at
/// most γ(α·d + β), checked by trying all path combinations.
pub fn brute_spanner_ok(
    net: &Network,
    allowed: &BTreeSet<usize>,
    alpha: Rational,
    beta: Rational,
    gamma: usize,
) -> bool {
    let n = net.node_count();
    for s in 0..n {
        let d = bfs_hops(net, None, s);
        for t in s + 1..n {
            let budget = Rational::from_integer(gamma as i64) * (alpha * r(d[t].unwrap() as i64) + beta);
            let paths = all_paths(net, allowed, s, t);
            if !pick_disjoint(&paths, 0, gamma, &mut BTreeSet::new(), 0, budget) {
                return false;
            }
        }
    }
    true
}

fn pick_disjoint(
    paths: &[Vec<usize>],
    from: usize,
    left: usize,
    used: &mut BTreeSet<usize>,
    hops: usize,
    budget: Rational,
) -> bool {
    if left == 0 {
        return r(hops as i64) <= budget;
    }
    for i in from..paths.len() {
        let p = &paths[i];
        if p.iter().any(|e| used.contains(e)) {
            continue;
        }
        used.extend(p.iter().copied());
        let ok = pick_disjoint(paths, i + 1, left - 1, used, hops + p.len(), budget);
        for e in p {
            used.remove(e);
        }
        if ok {
            return true;
        }
    }
    false
}

pub fn brute_min_spanner(net: &Network, alpha: Rational, beta: Rational, gamma: usize) -> Option<usize> {
    let m = net.edge_count();
    (0..=m).find(|&k| {
        subsets_of_size(m, k)
            .iter()
            .any(|s| brute_spanner_ok(net, s, alpha, beta, gamma))
    })
}

/// As [`random_demands`] but at most one demand per ordered pair.
pub fn random_distinct_demands(rng: &mut ChaCha8Rng, n: usize, count: usize, max_volume: i64) -> DemandSet {
    let mut seen = BTreeSet::new();
    let kept = random_demands(rng, n, count, max_volume)
        .iter()
        .filter(|d| seen.insert((d.source, d.target)))
        .cloned()
        .collect();
    DemandSet::new(kept).unwrap()
}
