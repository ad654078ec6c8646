//! Square-grid loads, the balanced 4-branch spanning tree, and the
//! region construction interpolating between tree and full grid.

use std::collections::{BTreeSet, VecDeque};

use super::{tree_load, BoundError};
use crate::graph::{generate_topology, rat, Capacity, DemandSet, EdgeId, Network, NodeId, Rational, Topology};
use crate::routing::unconstrained_shortest_routing;

fn check_side(a: usize, min: usize) -> Result<(), BoundError> {
    if a < min {
        Err(BoundError::TooSmall { what: "grid side", min })
    } else {
        Ok(())
    }
}

fn grid(a: usize) -> Network {
    generate_topology(Topology::Grid(a), Capacity::finite(1)).expect("grid side checked")
}

/// Edges of the a×a grid.
pub fn grid_edge_count(a: usize) -> usize {
    2 * a * a.saturating_sub(1)
}

/// Sum of hop distances over ordered pairs of the a×a grid: 2a³(a²−1)/3.
pub fn grid_distance_sum(a: usize) -> u64 {
    let a = a as u64;
    2 * a * a * a * (a * a).saturating_sub(1) / 3
}

/// A spanning tree of the grid with a degree-4 centroid.
#[derive(Clone, Debug)]
pub struct GridTree {
    pub side: usize,
    pub center: NodeId,
    /// Edge ids of the a×a grid as built by `generate_topology`.
    pub edges: BTreeSet<EdgeId>,
    /// Node sets of the four branches.
    pub branches: [Vec<NodeId>; 4],
    pub load: u64,
}

impl GridTree {
    pub fn network(&self) -> Network {
        grid(self.side).subnetwork(&self.edges)
    }
}

/// Load of the best spanning tree of the a×a grid,
/// 2⌈(a²−1)/4⌉(a² − ⌈(a²−1)/4⌉), together with a tree attaining it.
pub fn grid_tree_load(a: usize) -> Result<GridTree, BoundError> {
    check_side(a, 3)?;
    let n = a * a;
    let big = (n - 1).div_ceil(4);
    let load = 2 * (big * (n - big)) as u64;

    // parts in (row, col); order: top, right, bottom, left
    let (mut size, mut center, mut parts): (usize, (usize, usize), [Vec<(usize, usize)>; 4]) =
        if a % 2 == 1 {
            (
                3,
                (1, 1),
                [
                    vec![(0, 1), (0, 2)],
                    vec![(1, 2), (2, 2)],
                    vec![(2, 1), (2, 0)],
                    vec![(1, 0), (0, 0)],
                ],
            )
        } else {
            (
                4,
                (1, 1),
                [
                    vec![(0, 1), (0, 2), (0, 3), (1, 3)],
                    vec![(1, 2), (2, 2), (2, 3), (3, 3)],
                    vec![(2, 1), (3, 1), (3, 2)],
                    vec![(1, 0), (0, 0), (2, 0), (3, 0)],
                ],
            )
        };
    while size < a {
        for part in &mut parts {
            for p in part.iter_mut() {
                *p = (p.0 + 1, p.1 + 1);
            }
        }
        center = (center.0 + 1, center.1 + 1);
        let s = size;
        parts[0].extend((0..=s).map(|c| (0, c)));
        parts[1].extend((0..=s).map(|r| (r, s + 1)));
        parts[2].extend((1..=s + 1).map(|c| (s + 1, c)));
        parts[3].extend((1..=s + 1).map(|r| (r, 0)));
        size += 2;
    }

    let g = grid(a);
    let id = |(r, c): (usize, usize)| r * a + c;
    let center = id(center);
    let mut edges = BTreeSet::new();
    let branches = parts.map(|part| part.into_iter().map(id).collect::<Vec<_>>());
    for branch in &branches {
        let mut allowed = vec![false; n];
        for &v in branch {
            allowed[v] = true;
        }
        allowed[center] = true;
        let mut seen = vec![false; n];
        seen[center] = true;
        let mut queue = VecDeque::from([center]);
        while let Some(u) = queue.pop_front() {
            for &(w, e) in g.neighbors(u) {
                if allowed[w] && !seen[w] {
                    seen[w] = true;
                    edges.insert(e);
                    queue.push_back(w);
                }
            }
        }
    }
    Ok(GridTree {
        side: a,
        center,
        edges,
        branches,
        load,
    })
}

/// Load lower bound for the full a×a grid (κ = 1): a³/2 for even a,
/// (a³/2)(1 − 1/a + 1/a² − 1/a³) for odd a.
pub fn grid_full_load_bound(a: usize) -> Result<Rational, BoundError> {
    check_side(a, 2)?;
    let a = rat(a as i64);
    let half_cube = a * a * a / rat(2);
    Ok(if a.to_integer() % 2 == 0 {
        half_cube
    } else {
        let one = rat(1);
        half_cube * (one - one / a + one / (a * a) - one / (a * a * a))
    })
}

/// Load lower bound (κ = 1) for any k-edge subgraph of the a×a grid.
///
/// Dividing the ordered distance sum by k bounds the load from below.
/// Removed edges lengthen paths: whole removed columns add 2a(a−1) each,
/// and the remaining r = |E|−k−⌊(|E|−k)/a⌋(a−1) removals add 4Σ_{i≤r}(a−i).
pub fn grid_subgraph_load_bound(a: usize, k: usize) -> Result<Rational, BoundError> {
    check_side(a, 2)?;
    let m = grid_edge_count(a);
    let n = a * a;
    if k < n - 1 || k > m {
        return Err(BoundError::OutOfRange {
            what: "edge count",
            value: k as i64,
            min: (n - 1) as i64,
            max: m as i64,
        });
    }
    let removed = (m - k) as i64;
    let a = a as i64;
    let columns = removed / a;
    let rest = removed - columns * (a - 1);
    let tail: i64 = (1..=rest).map(|i| a - i).sum();
    let total = grid_distance_sum(a as usize) as i64 + columns * 2 * a * (a - 1) + 4 * tail;
    Ok(Rational::new(total, k as i64))
}

/// The region construction on an a×a grid with p = q² regions.
#[derive(Clone, Debug)]
pub struct GridConstruction {
    pub side: usize,
    pub q: usize,
    /// Edge ids of the a×a grid.
    pub edges: BTreeSet<EdgeId>,
    /// Region node sets, row-major over the q×q region grid.
    pub regions: Vec<Vec<NodeId>>,
    pub hubs: Vec<NodeId>,
    /// Largest edge flow when every all-to-all unit demand takes a
    /// hop-shortest path inside the construction.
    pub measured_load: Rational,
    /// n²/(4√p) + 3n²/(8p²) with n = a²; an estimate only, often below
    /// the measured load and even below the full-grid bound.
    pub stated_estimate: f64,
}

impl GridConstruction {
    pub fn network(&self) -> Network {
        grid(self.side).subnetwork(&self.edges)
    }
}

// Splits 0..a into q contiguous blocks of sizes ⌈a/q⌉ or ⌊a/q⌋.
fn blocks(a: usize, q: usize) -> Vec<std::ops::Range<usize>> {
    let (base, extra) = (a / q, a % q);
    let mut start = 0;
    (0..q)
        .map(|i| {
            let len = base + usize::from(i < extra);
            let r = start..start + len;
            start += len;
            r
        })
        .collect()
}

/// Builds the a×a grid subgraph with q² regions: each region is spanned
/// by a comb (its hub row plus every column), and neighbouring regions are
/// joined by one edge on the shared hub row or hub column. The result has
/// a² + p − 2√p edges.
pub fn grid_construction(a: usize, q: usize) -> Result<GridConstruction, BoundError> {
    check_side(a, 2)?;
    if q == 0 || q > a {
        return Err(BoundError::OutOfRange {
            what: "region grid side",
            value: q as i64,
            min: 1,
            max: a as i64,
        });
    }
    let g = grid(a);
    let id = |r: usize, c: usize| r * a + c;
    let edge = |x: NodeId, y: NodeId| g.edge_between(x, y).expect("grid neighbours");
    let rows = blocks(a, q);
    let cols = rows.clone();
    let hub_row: Vec<usize> = rows.iter().map(|r| r.start + (r.len() - 1) / 2).collect();
    let hub_col = hub_row.clone();

    let mut edges = BTreeSet::new();
    let mut regions = Vec::new();
    let mut hubs = Vec::new();
    for (bi, rr) in rows.iter().enumerate() {
        for (bj, cc) in cols.iter().enumerate() {
            let hr = hub_row[bi];
            for c in cc.start..cc.end - 1 {
                edges.insert(edge(id(hr, c), id(hr, c + 1)));
            }
            for c in cc.clone() {
                for r in rr.start..rr.end - 1 {
                    edges.insert(edge(id(r, c), id(r + 1, c)));
                }
            }
            regions.push(rr.clone().flat_map(|r| cc.clone().map(move |c| id(r, c))).collect());
            hubs.push(id(hr, hub_col[bj]));
            if bj + 1 < q {
                edges.insert(edge(id(hr, cc.end - 1), id(hr, cc.end)));
            }
            if bi + 1 < q {
                let hc = hub_col[bj];
                edges.insert(edge(id(rr.end - 1, hc), id(rr.end, hc)));
            }
        }
    }

    let sub = g.subnetwork(&edges);
    let demands = DemandSet::all_to_all(a * a, rat(1));
    let measured_load = unconstrained_shortest_routing(&sub, &demands, None).max_edge_flow();
    let n = (a * a) as f64;
    let p = (q * q) as f64;
    Ok(GridConstruction {
        side: a,
        q,
        edges,
        regions,
        hubs,
        measured_load,
        stated_estimate: n * n / (4.0 * p.sqrt()) + 3.0 * n * n / (8.0 * p * p),
    })
}

/// Load of the tree returned by [`grid_tree_load`], recomputed from its edges.
pub fn measured_tree_load(tree: &GridTree) -> Rational {
    tree_load(&tree.network(), rat(1)).expect("grid tree is a tree")
}
