//! Fault-tolerant spanners: keep as few edges as possible while every pair
//! of nodes keeps γ edge-disjoint paths whose total hop count stays within
//! γ(α·d_G + β).
//!
//! The budget is pooled over the γ paths of a pair. Pairs are unordered;
//! the family of (t, s) is the reversed family of (s, t).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{Signed, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::exact::{conservation_rows, edge_var, flow_var};
use crate::flow::min_hop_disjoint_paths;
use crate::graph::{all_pairs_distances, fmt_rational, rat, EdgeId, Network, NodeId, Path, Rational};
use crate::io::lp::{Comparison, LpModel, LpRow, Sense, VarBound};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SpannerParams {
    pub alpha: Rational,
    pub beta: Rational,
    pub gamma: usize,
}

impl SpannerParams {
    pub fn new(alpha: Rational, beta: Rational, gamma: usize) -> Result<Self, SpannerError> {
        if alpha < rat(1) {
            return Err(SpannerError::InvalidParams(format!("alpha {} below 1", fmt_rational(&alpha))));
        }
        if beta.is_negative() {
            return Err(SpannerError::InvalidParams(format!("beta {} negative", fmt_rational(&beta))));
        }
        if gamma == 0 {
            return Err(SpannerError::InvalidParams("gamma must be at least 1".into()));
        }
        Ok(SpannerParams { alpha, beta, gamma })
    }

    /// Hop budget γ(α·d + β) shared by the γ paths of a pair at distance d.
    pub fn budget(&self, distance: u32) -> Rational {
        rat(self.gamma as i64) * (self.alpha * rat(i64::from(distance)) + self.beta)
    }
}

#[derive(Debug, Error)]
pub enum SpannerError {
    #[error("invalid spanner parameters: {0}")]
    InvalidParams(String),
    #[error("nodes {0} and {1} are disconnected")]
    Disconnected(NodeId, NodeId),
}

/// Kept edges with a path family per unordered pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpannerSolution {
    pub kept: BTreeSet<EdgeId>,
    /// Keyed by `(s, t)` with `s < t`.
    pub families: BTreeMap<(NodeId, NodeId), Vec<Path>>,
    pub spared_percent: Rational,
    pub mean_stretch: Option<Rational>,
}

fn pairs(n: usize) -> impl Iterator<Item = (NodeId, NodeId)> {
    (0..n).flat_map(move |s| (s + 1..n).map(move |t| (s, t)))
}

fn spared(network: &Network, kept: usize) -> Rational {
    let m = network.edge_count();
    if m == 0 {
        Rational::zero()
    } else {
        rat(100) * rat((m - kept) as i64) / rat(m as i64)
    }
}

// Mean over pairs of (hops used in H) / (fewest hops of γ disjoint paths in G).
fn mean_stretch(
    network: &Network,
    families: &BTreeMap<(NodeId, NodeId), Vec<Path>>,
    gamma: usize,
) -> Option<Rational> {
    let ratios: Vec<Rational> = families
        .par_iter()
        .filter_map(|(&(s, t), fam)| {
            let base = min_hop_disjoint_paths(network, s, t, gamma, |_| true)?;
            let base: usize = base.iter().map(Path::hops).sum();
            let used: usize = fam.iter().map(Path::hops).sum();
            (base > 0).then(|| rat(used as i64) / rat(base as i64))
        })
        .collect();
    if ratios.is_empty() {
        None
    } else {
        let len = rat(ratios.len() as i64);
        Some(ratios.into_iter().sum::<Rational>() / len)
    }
}

impl SpannerSolution {
    /// Builds the solution for `kept`, giving every pair the γ disjoint
    /// paths of fewest total hops inside it. Pairs without γ such paths get
    /// whatever fewer paths exist, which validation then reports.
    pub fn from_kept(network: &Network, kept: BTreeSet<EdgeId>, params: &SpannerParams) -> Self {
        let all: Vec<(NodeId, NodeId)> = pairs(network.node_count()).collect();
        let families: BTreeMap<_, _> = all
            .par_iter()
            .map(|&(s, t)| {
                let fam = (1..=params.gamma)
                    .rev()
                    .find_map(|k| min_hop_disjoint_paths(network, s, t, k, |e| kept.contains(&e)))
                    .unwrap_or_default();
                ((s, t), fam)
            })
            .collect();
        let mean = mean_stretch(network, &families, params.gamma);
        SpannerSolution {
            spared_percent: spared(network, kept.len()),
            kept,
            families,
            mean_stretch: mean,
        }
    }
}

/// A reason a spanner solution is rejected.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SpannerViolation {
    UnknownEdge(EdgeId),
    MissingPair { pair: (NodeId, NodeId) },
    PathCount { pair: (NodeId, NodeId), expected: usize, got: usize },
    WrongEndpoints { pair: (NodeId, NodeId) },
    NotElementary { pair: (NodeId, NodeId) },
    DroppedEdge { pair: (NodeId, NodeId), edge: EdgeId },
    SharedEdge { pair: (NodeId, NodeId), edge: EdgeId },
    OverBudget { pair: (NodeId, NodeId), hops: usize, budget: Rational },
    Disconnected { pair: (NodeId, NodeId) },
}

impl fmt::Display for SpannerViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpannerViolation::UnknownEdge(e) => write!(f, "kept edge {e} is not in the network"),
            SpannerViolation::MissingPair { pair: (s, t) } => write!(f, "pair {s}-{t} has no path family"),
            SpannerViolation::PathCount { pair: (s, t), expected, got } => {
                write!(f, "pair {s}-{t} has {got} paths, needs {expected}")
            }
            SpannerViolation::WrongEndpoints { pair: (s, t) } => {
                write!(f, "a path of pair {s}-{t} does not join {s} and {t}")
            }
            SpannerViolation::NotElementary { pair: (s, t) } => {
                write!(f, "a path of pair {s}-{t} repeats a node")
            }
            SpannerViolation::DroppedEdge { pair: (s, t), edge } => {
                write!(f, "pair {s}-{t} uses edge {edge}, which is not kept")
            }
            SpannerViolation::SharedEdge { pair: (s, t), edge } => {
                write!(f, "paths of pair {s}-{t} share edge {edge}")
            }
            SpannerViolation::OverBudget { pair: (s, t), hops, budget } => {
                write!(f, "pair {s}-{t} uses {hops} hops, budget {}", fmt_rational(budget))
            }
            SpannerViolation::Disconnected { pair: (s, t) } => {
                write!(f, "pair {s}-{t} is disconnected in the network")
            }
        }
    }
}

/// Checks one pair's family against the kept set and the hop budget.
pub fn check_pair_family(
    kept: &BTreeSet<EdgeId>,
    params: &SpannerParams,
    pair: (NodeId, NodeId),
    distance: u32,
    family: &[Path],
) -> Vec<SpannerViolation> {
    let mut out = Vec::new();
    if family.len() != params.gamma {
        out.push(SpannerViolation::PathCount {
            pair,
            expected: params.gamma,
            got: family.len(),
        });
    }
    let mut seen = BTreeSet::new();
    for p in family {
        let ends = (p.source(), p.target());
        if ends != pair && ends != (pair.1, pair.0) {
            out.push(SpannerViolation::WrongEndpoints { pair });
        }
        if !p.is_elementary() {
            out.push(SpannerViolation::NotElementary { pair });
        }
        for &e in p.edges() {
            if !kept.contains(&e) {
                out.push(SpannerViolation::DroppedEdge { pair, edge: e });
            }
            if !seen.insert(e) {
                out.push(SpannerViolation::SharedEdge { pair, edge: e });
            }
        }
    }
    let hops: usize = family.iter().map(Path::hops).sum();
    let budget = params.budget(distance);
    if rat(hops as i64) > budget {
        out.push(SpannerViolation::OverBudget { pair, hops, budget });
    }
    out
}

/// Result of [`validate_spanner`]; `violations` is empty when valid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpannerValidation {
    pub violations: Vec<SpannerViolation>,
    pub spared_percent: Rational,
    pub mean_stretch: Option<Rational>,
}

impl SpannerValidation {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks every pair's family: γ paths, pairwise edge-disjoint, on kept
/// edges only, within the pooled hop budget. Recomputes spared % and
/// mean stretch from the solution itself.
pub fn validate_spanner(network: &Network, solution: &SpannerSolution, params: &SpannerParams) -> SpannerValidation {
    let mut violations: Vec<SpannerViolation> = solution
        .kept
        .iter()
        .filter(|&&e| e >= network.edge_count())
        .map(|&e| SpannerViolation::UnknownEdge(e))
        .collect();
    let dist = all_pairs_distances(network);
    for pair in pairs(network.node_count()) {
        let Some(d) = dist.get(pair.0, pair.1) else {
            violations.push(SpannerViolation::Disconnected { pair });
            continue;
        };
        match solution.families.get(&pair) {
            None => violations.push(SpannerViolation::MissingPair { pair }),
            Some(fam) => violations.extend(check_pair_family(&solution.kept, params, pair, d, fam)),
        }
    }
    SpannerValidation {
        violations,
        spared_percent: spared(network, solution.kept.len()),
        mean_stretch: mean_stretch(network, &solution.families, params.gamma),
    }
}

/// Whether `kept` admits a valid family for every pair.
pub fn spanner_feasible(network: &Network, kept: &BTreeSet<EdgeId>, params: &SpannerParams) -> bool {
    let dist = all_pairs_distances(network);
    let all: Vec<(NodeId, NodeId)> = pairs(network.node_count()).collect();
    all.par_iter().all(|&(s, t)| {
        let Some(d) = dist.get(s, t) else { return false };
        min_hop_disjoint_paths(network, s, t, params.gamma, |e| kept.contains(&e)).is_some_and(|fam| {
            rat(fam.iter().map(Path::hops).sum::<usize>() as i64) <= params.budget(d)
        })
    })
}

/// Pairs for which even the full network has no valid family.
pub fn infeasible_pairs(network: &Network, params: &SpannerParams) -> Result<Vec<(NodeId, NodeId)>, SpannerError> {
    let dist = all_pairs_distances(network);
    let all: Vec<(NodeId, NodeId)> = pairs(network.node_count()).collect();
    if let Some(&(s, t)) = all.iter().find(|&&(s, t)| dist.get(s, t).is_none()) {
        return Err(SpannerError::Disconnected(s, t));
    }
    let mut bad: Vec<(NodeId, NodeId)> = all
        .par_iter()
        .copied()
        .filter(|&(s, t)| {
            let d = dist.get(s, t).expect("checked above");
            !min_hop_disjoint_paths(network, s, t, params.gamma, |_| true).is_some_and(|fam| {
                rat(fam.iter().map(Path::hops).sum::<usize>() as i64) <= params.budget(d)
            })
        })
        .collect();
    bad.sort_unstable();
    Ok(bad)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SpannerOutcome {
    Optimal(SpannerSolution),
    Infeasible { pairs: Vec<(NodeId, NodeId)> },
    BudgetExceeded { checked: u64, lower_bound: usize },
}

/// Smallest spanner by enumerating edge subsets in increasing size.
/// `budget` caps the number of subsets checked. Meant for about a dozen
/// edges.
pub fn exact_spanner_small(
    network: &Network,
    params: &SpannerParams,
    budget: u64,
) -> Result<SpannerOutcome, SpannerError> {
    let bad = infeasible_pairs(network, params)?;
    if !bad.is_empty() {
        return Ok(SpannerOutcome::Infeasible { pairs: bad });
    }
    let n = network.node_count();
    let m = network.edge_count();
    // each node needs γ incident edges, and the kept graph must connect
    let lower = if n < 2 { 0 } else { (n - 1).max((n * params.gamma).div_ceil(2)) };
    let mut checked = 0u64;
    for k in lower.min(m)..=m {
        let mut idx: Vec<usize> = (0..k).collect();
        loop {
            let mut deg = vec![0usize; n];
            for &e in &idx {
                deg[network.edge(e).u] += 1;
                deg[network.edge(e).v] += 1;
            }
            if n < 2 || deg.iter().all(|&d| d >= params.gamma) {
                if checked == budget {
                    return Ok(SpannerOutcome::BudgetExceeded { checked, lower_bound: k });
                }
                checked += 1;
                let kept: BTreeSet<EdgeId> = idx.iter().copied().collect();
                if spanner_feasible(network, &kept, params) {
                    return Ok(SpannerOutcome::Optimal(SpannerSolution::from_kept(network, kept, params)));
                }
            }
            // next k-combination in lexicographic order
            let Some(i) = (0..k).rev().find(|&i| idx[i] < m - k + i) else { break };
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
        }
    }
    unreachable!("the full edge set is feasible once no pair is infeasible")
}

/// The spanner integer program and the pairs that make it infeasible.
#[derive(Clone, Debug)]
pub struct SpannerExport {
    pub model: LpModel,
    /// Pairs with no valid family even in the full network.
    pub infeasible_pairs: Vec<(NodeId, NodeId)>,
}

impl SpannerExport {
    pub fn to_lp_string(&self) -> String {
        self.model.to_lp_string().expect("generated names are short")
    }
}

/// Spanner program over all ordered pairs: γ units of flow per pair,
/// unit flow per edge and pair only on kept edges, and a pooled hop row.
/// Commodity k is the k-th ordered pair (s, t), s-major.
pub fn export_spanner_lp(network: &Network, params: &SpannerParams) -> Result<SpannerExport, SpannerError> {
    let bad = infeasible_pairs(network, params)?;
    let n = network.node_count();
    let m = network.edge_count();
    let dist = all_pairs_distances(network);
    let gamma = rat(params.gamma as i64);
    let one = rat(1);
    let mut rows = Vec::new();
    let mut bounds = Vec::new();
    let mut generals = Vec::new();
    let ordered = (0..n).flat_map(|s| (0..n).filter(move |&t| t != s).map(move |t| (s, t)));
    for (k, (s, t)) in ordered.enumerate() {
        rows.extend(conservation_rows(network, k, s, t, gamma));
        for e in 0..m {
            rows.push(LpRow {
                name: format!("use_{k}_{e}"),
                terms: vec![(flow_var(e, 0, k), one), (flow_var(e, 1, k), one), (edge_var(e), -one)],
                cmp: Comparison::Le,
                rhs: Rational::zero(),
            });
            for dir in 0..2 {
                let v = flow_var(e, dir, k);
                bounds.push(VarBound {
                    name: v.clone(),
                    lower: Rational::zero(),
                    upper: Some(one),
                });
                generals.push(v);
            }
        }
        let limit = params.budget(dist.get(s, t).expect("connectivity checked"));
        let scale = rat(*limit.denom());
        rows.push(LpRow {
            name: format!("dist_{k}"),
            terms: (0..m)
                .flat_map(|e| [(flow_var(e, 0, k), scale), (flow_var(e, 1, k), scale)])
                .collect(),
            cmp: Comparison::Le,
            rhs: limit * scale,
        });
    }
    let mut comments = vec![format!(
        "fault-tolerant spanner: alpha {} beta {} gamma {}",
        fmt_rational(&params.alpha),
        fmt_rational(&params.beta),
        params.gamma
    )];
    if !bad.is_empty() {
        comments.push(format!("INFEASIBLE: {} pairs have no valid path family", bad.len()));
    }
    Ok(SpannerExport {
        model: LpModel {
            comments,
            sense: Sense::Minimize,
            objective_name: "obj".into(),
            objective: (0..m).map(|e| (edge_var(e), one)).collect(),
            rows,
            bounds,
            binaries: (0..m).map(edge_var).collect(),
            generals,
        },
        infeasible_pairs: bad,
    })
}
