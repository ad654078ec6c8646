//! Lower bounds on the number of kept edges and on the capacity a routing
//! needs, plus the grid constructions that come close to them.
//!
//! Load bounds are stated for all-to-all demands of volume κ on uniformly
//! provisioned links. A load bound L means no routing exists below
//! capacity L, so ⌈L/κ⌉ bounds the overprovisioning threshold λ.

mod bisection;
mod grid;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::graph::{
    all_pairs_distances, fmt_rational, rat, Capacity, CutPartition, DemandSet, GraphError,
    Network, Rational,
};

pub use bisection::{min_bisection, BisectionMode, EXACT_BISECTION_LIMIT};
pub use grid::{
    grid_construction, grid_distance_sum, grid_edge_count, grid_full_load_bound,
    grid_subgraph_load_bound, grid_tree_load, measured_tree_load, GridConstruction, GridTree,
};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BoundError {
    #[error("{what} must be at least {min}")]
    TooSmall { what: &'static str, min: usize },
    #[error("{what} {value} outside {min}..={max}")]
    OutOfRange {
        what: &'static str,
        value: i64,
        min: i64,
        max: i64,
    },
    #[error("bound needs a uniform finite positive capacity")]
    NonUniformCapacity,
    #[error("demand {0}->{1} has no path")]
    Disconnected(usize, usize),
    #[error("the partition cuts no edge")]
    EmptyCut,
    #[error("capacity {capacity} is below 2κ = {needed}; no routing exists")]
    CapacityTooSmall { capacity: String, needed: String },
    #[error("{0} is not an integer number of edges")]
    NonIntegral(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// What a bound constrains.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundKind {
    /// Minimum number of kept edges.
    Edges,
    /// Minimum capacity per link.
    Load,
    /// Minimum overprovisioning factor λ = c/κ.
    Lambda,
    /// A structural quantity feeding other bounds (cut size, degree).
    Structure,
}

impl BoundKind {
    pub fn as_str(self) -> &'static str {
        match self {
            BoundKind::Edges => "edges",
            BoundKind::Load => "load",
            BoundKind::Lambda => "lambda",
            BoundKind::Structure => "structure",
        }
    }
}

/// One evaluated bound. `value` is `None` when the bound does not apply.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundReport {
    pub name: String,
    pub value: Option<Rational>,
    pub params: Vec<(String, String)>,
    pub kind: BoundKind,
    pub note: String,
}

impl BoundReport {
    fn new(name: &str, value: Rational, kind: BoundKind, params: &[(&str, String)], note: &str) -> Self {
        BoundReport {
            name: name.into(),
            value: Some(value),
            params: params.iter().map(|(k, v)| (k.to_string(), v.clone())).collect(),
            kind,
            note: note.into(),
        }
    }

    fn absent(name: &str, kind: BoundKind, note: &str) -> Self {
        BoundReport {
            name: name.into(),
            value: None,
            params: Vec::new(),
            kind,
            note: note.into(),
        }
    }

    /// Parameters as `k=v;k=v`.
    pub fn params_text(&self) -> String {
        self.params
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect::<Vec<_>>()
            .join(";")
    }
}

fn ceil_usize(r: Rational) -> usize {
    r.ceil().to_integer().max(0) as usize
}

/// ⌈Σ d(s,t)·D_st / c⌉: the kept edges must jointly carry every unit of
/// demand over at least its hop distance.
pub fn path_length_edge_bound(network: &Network, demands: &DemandSet) -> Result<usize, BoundError> {
    let c = match network.uniform_capacity() {
        Some(Capacity::Finite(c)) if c.is_positive() => c,
        _ => return Err(BoundError::NonUniformCapacity),
    };
    demands.check_against(network)?;
    let dist = all_pairs_distances(network);
    let mut total = Rational::zero();
    for d in demands {
        let hops = dist
            .get(d.source, d.target)
            .ok_or(BoundError::Disconnected(d.source, d.target))?;
        total += d.volume * rat(i64::from(hops));
    }
    Ok(ceil_usize(total / c))
}

/// 2κ|S||S̄| / |E_SS̄|: the cut edges carry every demand crossing it.
pub fn cut_load_bound(partition: &CutPartition, kappa: Rational) -> Result<Rational, BoundError> {
    if partition.cut_size() == 0 {
        return Err(BoundError::EmptyCut);
    }
    let s = partition.side_s.len() as i64;
    let t = partition.side_s_bar.len() as i64;
    Ok(rat(2) * kappa * rat(s * t) / rat(partition.cut_size() as i64))
}

/// Load of all-to-all routing on a tree: max over edges of 2κ·v(n−v), v the
/// node count on one side.
pub fn tree_load(tree: &Network, kappa: Rational) -> Result<Rational, BoundError> {
    if !tree.is_tree() {
        return Err(GraphError::NotATree.into());
    }
    let n = tree.node_count();
    if n < 2 {
        return Ok(Rational::zero());
    }
    // subtree sizes from a DFS rooted at 0
    let mut parent = vec![usize::MAX; n];
    let mut order = Vec::with_capacity(n);
    let mut stack = vec![0];
    parent[0] = 0;
    while let Some(u) = stack.pop() {
        order.push(u);
        for &(w, _) in tree.neighbors(u) {
            if parent[w] == usize::MAX {
                parent[w] = u;
                stack.push(w);
            }
        }
    }
    let mut size = vec![1usize; n];
    let mut best = 0usize;
    for &u in order.iter().rev().filter(|&&u| u != 0) {
        size[parent[u]] += size[u];
        best = best.max(size[u] * (n - size[u]));
    }
    Ok(rat(2) * kappa * rat(best as i64))
}

/// Rounding used by [`spanning_tree_load_bound_with`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum TreeBoundRounding {
    /// B = ⌈(n−1)/δ⌉ on both factors.
    #[default]
    Balanced,
    /// ⌈(n−1)/δ⌉ on the first factor, ⌊(n−1)/δ⌋ on the second. Weaker
    /// for most n; kept for comparison.
    Mixed,
}

/// Load lower bound of every spanning tree with maximum degree δ:
/// 2κB(n−B), B = ⌈(n−1)/δ⌉.
pub fn spanning_tree_load_bound(n: usize, max_degree: usize, kappa: Rational) -> Result<Rational, BoundError> {
    spanning_tree_load_bound_with(n, max_degree, kappa, TreeBoundRounding::Balanced)
}

pub fn spanning_tree_load_bound_with(
    n: usize,
    max_degree: usize,
    kappa: Rational,
    rounding: TreeBoundRounding,
) -> Result<Rational, BoundError> {
    if n < 2 {
        return Err(BoundError::TooSmall { what: "node count", min: 2 });
    }
    if max_degree < 1 {
        return Err(BoundError::TooSmall { what: "maximum degree", min: 1 });
    }
    let up = (n - 1).div_ceil(max_degree);
    let second = match rounding {
        TreeBoundRounding::Balanced => up,
        TreeBoundRounding::Mixed => (n - 1) / max_degree,
    };
    Ok(rat(2) * kappa * rat((up * (n - second)) as i64))
}

/// Edges any all-to-all routing on K_n needs at capacity c:
/// ⌈max(2κn(n−1)/(c+2κ), n−1)⌉.
pub fn complete_graph_edge_bound(n: usize, capacity: Rational, kappa: Rational) -> Result<usize, BoundError> {
    if n < 2 {
        return Err(BoundError::TooSmall { what: "node count", min: 2 });
    }
    let two_k = rat(2) * kappa;
    if capacity < two_k {
        return Err(BoundError::CapacityTooSmall {
            capacity: fmt_rational(&capacity),
            needed: fmt_rational(&two_k),
        });
    }
    let nn = rat(n as i64);
    let x = two_k * nn * (nn - rat(1)) / (capacity + two_k);
    Ok(ceil_usize(x).max(n - 1))
}

fn binomial(n: u64, k: u64) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Probability that removing μ|E| edges chosen uniformly at random avoids
/// every edge of a fixed optimal set of size |E*|:
/// C(|E|−|E*|, μ|E|) / C(|E|, μ|E|).
pub fn random_trial_success_probability(
    total_edges: usize,
    optimal_edges: usize,
    removal_fraction: Rational,
) -> Result<BigRational, BoundError> {
    if optimal_edges > total_edges {
        return Err(BoundError::OutOfRange {
            what: "optimal edge count",
            value: optimal_edges as i64,
            min: 0,
            max: total_edges as i64,
        });
    }
    let removed = removal_fraction * rat(total_edges as i64);
    if !removed.is_integer() {
        return Err(BoundError::NonIntegral(fmt_rational(&removed)));
    }
    let removed = removed.to_integer();
    let spare = (total_edges - optimal_edges) as i64;
    if removed < 0 || removed > spare {
        return Err(BoundError::OutOfRange {
            what: "removed edge count",
            value: removed,
            min: 0,
            max: spare,
        });
    }
    let r = removed as u64;
    Ok(BigRational::new(
        binomial(spare as u64, r),
        binomial(total_edges as u64, r),
    ))
}

/// Decimal approximation of a probability.
pub fn probability_to_f64(p: &BigRational) -> f64 {
    // scale into range before converting to keep precision on tiny values
    let (num, den) = (p.numer(), p.denom());
    let shift = den.bits().saturating_sub(num.bits()).saturating_sub(60);
    let scaled: BigInt = num << shift;
    let q = BigRational::new(scaled, den.clone());
    let (qn, qd) = (q.numer().to_f64(), q.denom().to_f64());
    match (qn, qd) {
        (Some(a), Some(b)) if b.is_finite() && a.is_finite() => a / b / 2f64.powi(shift as i32),
        _ => 0.0,
    }
}

/// The side a for which `network` is exactly the a×a grid of
/// `generate_topology`, if any.
pub fn detect_grid(network: &Network) -> Option<usize> {
    let n = network.node_count();
    let a = (n as f64).sqrt().round() as usize;
    if a < 2 || a * a != n || network.edge_count() != grid_edge_count(a) {
        return None;
    }
    let ok = network.edges().iter().all(|e| {
        let (lo, hi) = (e.u.min(e.v), e.u.max(e.v));
        hi - lo == a || (hi - lo == 1 && lo / a == hi / a)
    });
    ok.then_some(a)
}

pub fn is_complete(network: &Network) -> bool {
    let n = network.node_count();
    n >= 2 && network.edge_count() == n * (n - 1) / 2
}

/// Inputs to [`evaluate_all`].
#[derive(Clone, Debug)]
pub struct BoundsConfig {
    pub kappa: Rational,
    /// Overprovisioning factor for the edge-count bounds; capacity is λκ.
    pub lambda: Option<Rational>,
    pub bisection: BisectionMode,
}

impl Default for BoundsConfig {
    fn default() -> Self {
        BoundsConfig {
            kappa: rat(1),
            lambda: None,
            bisection: BisectionMode::Auto,
        }
    }
}

/// Every bound that applies to all-to-all routing on `network`.
/// Grid and complete-graph bounds are reported as absent elsewhere.
pub fn evaluate_all(network: &Network, config: &BoundsConfig) -> Result<Vec<BoundReport>, BoundError> {
    if !network.is_connected() {
        return Err(GraphError::Disconnected.into());
    }
    let n = network.node_count();
    let kappa = config.kappa;
    let kp = ("kappa", fmt_rational(&kappa));
    let mut out = Vec::new();

    let cut = min_bisection(network, config.bisection)?;
    let exact_cut = match config.bisection {
        BisectionMode::Exact => true,
        BisectionMode::Heuristic { .. } => false,
        BisectionMode::Auto => n <= EXACT_BISECTION_LIMIT,
    };
    let cut_note = if exact_cut { "minimum bisection" } else { "best bisection found" };
    out.push(BoundReport::new(
        "bisection_cut",
        rat(cut.cut_size() as i64),
        BoundKind::Structure,
        &[("side_s", cut.side_s.len().to_string()), ("side_s_bar", cut.side_s_bar.len().to_string())],
        cut_note,
    ));
    let cut_load = cut_load_bound(&cut, kappa)?;
    out.push(BoundReport::new("cut_load", cut_load, BoundKind::Load, std::slice::from_ref(&kp), "capacity needed across the bisection"));
    out.push(BoundReport::new(
        "lambda_feasible",
        (cut_load / kappa).ceil(),
        BoundKind::Lambda,
        &[],
        "no routing below this overprovisioning factor",
    ));

    let delta = network.max_degree();
    out.push(BoundReport::new("max_degree", rat(delta as i64), BoundKind::Structure, &[], "largest node degree"));
    let tree = spanning_tree_load_bound(n, delta, kappa)?;
    out.push(BoundReport::new(
        "tree_load",
        tree,
        BoundKind::Load,
        &[kp.clone(), ("max_degree", delta.to_string())],
        "load of any spanning tree",
    ));
    out.push(BoundReport::new(
        "lambda_tree",
        (tree / kappa).ceil(),
        BoundKind::Lambda,
        &[],
        "a spanning tree cannot suffice below this overprovisioning factor",
    ));

    let demands = DemandSet::all_to_all(n, kappa);
    match config.lambda {
        Some(lambda) => {
            let capacity = lambda * kappa;
            let net = network.with_uniform_capacity(Capacity::Finite(capacity));
            let lp = ("lambda", fmt_rational(&lambda));
            let edges = path_length_edge_bound(&net, &demands)?.max(n - 1);
            out.push(BoundReport::new(
                "edges_path_length",
                rat(edges as i64),
                BoundKind::Edges,
                &[kp.clone(), lp.clone()],
                "kept edges needed to carry every demand over its distance",
            ));
            if is_complete(network) {
                let bound = complete_graph_edge_bound(n, capacity, kappa)?;
                out.push(BoundReport::new(
                    "edges_complete_graph",
                    rat(bound as i64),
                    BoundKind::Edges,
                    &[kp.clone(), lp],
                    "kept edges needed on a complete graph",
                ));
            } else {
                out.push(BoundReport::absent("edges_complete_graph", BoundKind::Edges, "not a complete graph"));
            }
        }
        None => {
            out.push(BoundReport::absent("edges_path_length", BoundKind::Edges, "no lambda given"));
            out.push(BoundReport::absent("edges_complete_graph", BoundKind::Edges, "no lambda given"));
        }
    }

    match detect_grid(network) {
        Some(a) => {
            let ap = ("a", a.to_string());
            let full = grid_full_load_bound(a)?;
            out.push(BoundReport::new(
                "grid_full_load",
                full * kappa,
                BoundKind::Load,
                &[kp.clone(), ap.clone()],
                "capacity needed by the full grid",
            ));
            if a >= 3 {
                let t = grid_tree_load(a)?;
                out.push(BoundReport::new(
                    "grid_tree_load",
                    rat(t.load as i64) * kappa,
                    BoundKind::Load,
                    &[kp, ap],
                    "load of the best spanning tree; attained by a constructed tree",
                ));
            } else {
                out.push(BoundReport::absent("grid_tree_load", BoundKind::Load, "grid side below 3"));
            }
        }
        None => {
            out.push(BoundReport::absent("grid_full_load", BoundKind::Load, "not a square grid"));
            out.push(BoundReport::absent("grid_tree_load", BoundKind::Load, "not a square grid"));
        }
    }
    Ok(out)
}
