//! Exact routing feasibility and exact minimum-edge search for small
//! instances, plus export of the integer program in LP format.

use std::collections::{BTreeSet, HashMap};
use std::rc::Rc;
use std::time::{Duration, Instant};

use num_integer::Integer;
use num_traits::Zero;
use thiserror::Error;

use crate::graph::{
    enumerate_paths, hop_distances_from, Capacity, DemandSet, EdgeId, GraphError, Network,
    NodeId, Path, Rational,
};
use crate::heuristics::lle_heuristic;
use crate::io::lp::{Comparison, LpModel, LpRow, Sense};
use crate::routing::{RoutingOptions, RoutingState};

#[derive(Clone, Debug, PartialEq)]
pub enum FeasibilityOutcome {
    Feasible(RoutingState),
    Infeasible,
    BudgetExceeded,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExactStatus {
    Optimal,
    Infeasible,
    BudgetExceeded,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExactResult {
    pub status: ExactStatus,
    /// Optimal edge set, present when `status` is `Optimal`.
    pub edges: Option<BTreeSet<EdgeId>>,
    pub witness: Option<RoutingState>,
    /// Search nodes spent, counting both subset and path decisions.
    pub explored: u64,
    pub elapsed: Duration,
    /// Every subset smaller than this was ruled out.
    pub lower_bound: usize,
    /// Size of the best feasible subset found.
    pub upper_bound: Option<usize>,
}

struct OutOfBudget;

struct Budget {
    used: u64,
    limit: u64,
}

impl Budget {
    fn tick(&mut self) -> Result<(), OutOfBudget> {
        self.used += 1;
        if self.used > self.limit {
            Err(OutOfBudget)
        } else {
            Ok(())
        }
    }
}

/// Decides whether every demand can be routed on a single elementary path
/// within capacities. Complete backtracking; `Infeasible` is a proof.
pub fn exact_feasible(
    network: &Network,
    demands: &DemandSet,
    budget: u64,
) -> Result<FeasibilityOutcome, GraphError> {
    demands.check_against(network)?;
    let mut b = Budget {
        used: 0,
        limit: budget,
    };
    let usable = vec![true; network.edge_count()];
    Ok(match feasible_on(network, &usable, demands, &mut b) {
        Ok(Some(w)) => FeasibilityOutcome::Feasible(w),
        Ok(None) => FeasibilityOutcome::Infeasible,
        Err(OutOfBudget) => FeasibilityOutcome::BudgetExceeded,
    })
}

struct Search<'a> {
    network: &'a Network,
    usable: &'a [bool],
    vol: Vec<Rational>,
    ends: Vec<(NodeId, NodeId)>,
    candidates: Vec<Rc<Vec<Path>>>,
    same_as_prev: Vec<bool>,
    suffix_load: Vec<Rational>,
    bounded_only: bool,
    residual: Vec<Capacity>,
    chosen: Vec<usize>,
}

impl Search<'_> {
    fn fits(&self, path: &Path, vol: &Rational) -> bool {
        path.edges().iter().all(|&e| self.residual[e].admits(vol))
    }

    fn apply(&mut self, path: &Path, vol: &Rational, sign: i64) {
        let delta = vol * Rational::from_integer(sign);
        for &e in path.edges() {
            self.residual[e] = self.residual[e].minus(&delta);
        }
    }

    fn reachable(&self, s: NodeId, t: NodeId, vol: &Rational) -> bool {
        let mut seen = vec![false; self.network.node_count()];
        let mut stack = vec![s];
        seen[s] = true;
        while let Some(u) = stack.pop() {
            if u == t {
                return true;
            }
            for &(v, e) in self.network.neighbors(u) {
                if !seen[v] && self.usable[e] && self.residual[e].admits(vol) {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        false
    }

    fn promising(&self, from: usize) -> bool {
        if from >= self.vol.len() {
            return true;
        }
        if self.bounded_only {
            let room: Rational = (0..self.residual.len())
                .filter(|&e| self.usable[e])
                .filter_map(|e| self.residual[e].as_finite())
                .sum();
            if room < self.suffix_load[from] {
                return false;
            }
        }
        (from..self.vol.len()).all(|j| self.reachable(self.ends[j].0, self.ends[j].1, &self.vol[j]))
    }

    fn dfs(&mut self, pos: usize, budget: &mut Budget) -> Result<bool, OutOfBudget> {
        if pos == self.vol.len() {
            return Ok(true);
        }
        let start = if self.same_as_prev[pos] {
            self.chosen[pos - 1]
        } else {
            0
        };
        let cands = Rc::clone(&self.candidates[pos]);
        let vol = self.vol[pos];
        for (idx, path) in cands.iter().enumerate().skip(start) {
            if !self.fits(path, &vol) {
                continue;
            }
            budget.tick()?;
            self.apply(path, &vol, 1);
            self.chosen[pos] = idx;
            if self.promising(pos + 1) && self.dfs(pos + 1, budget)? {
                return Ok(true);
            }
            self.apply(path, &vol, -1);
        }
        Ok(false)
    }
}

fn feasible_on(
    network: &Network,
    usable: &[bool],
    demands: &DemandSet,
    budget: &mut Budget,
) -> Result<Option<RoutingState>, OutOfBudget> {
    let n = network.node_count();
    // decreasing volume, interchangeable demands adjacent
    let mut order: Vec<usize> = (0..demands.len()).collect();
    let key = |i: usize| {
        let d = demands.get(i);
        (std::cmp::Reverse(d.volume), d.source.min(d.target), d.source.max(d.target), i)
    };
    order.sort_by_key(|&i| key(i));

    let mut dist_cache: HashMap<NodeId, Vec<Option<u32>>> = HashMap::new();
    let mut path_cache: HashMap<(NodeId, NodeId), Rc<Vec<Path>>> = HashMap::new();
    let mut candidates = Vec::with_capacity(order.len());
    let mut loads = Vec::with_capacity(order.len());
    for &i in &order {
        let d = demands.get(i);
        let (a, b) = (d.source.min(d.target), d.source.max(d.target));
        let dist = dist_cache
            .entry(a)
            .or_insert_with(|| hop_distances_from(network, a, |e| usable[e]));
        let Some(hops) = dist[b] else {
            return Ok(None);
        };
        loads.push(d.volume * Rational::from_integer(i64::from(hops)));
        let paths = path_cache.entry((a, b)).or_insert_with(|| {
            Rc::new(enumerate_paths(network, a, b, n.saturating_sub(1), |e| usable[e]))
        });
        candidates.push(Rc::clone(paths));
    }
    let mut suffix_load = vec![Rational::zero(); order.len() + 1];
    for p in (0..order.len()).rev() {
        suffix_load[p] = suffix_load[p + 1] + loads[p];
    }
    let same_as_prev = (0..order.len())
        .map(|p| {
            p > 0 && {
                let (x, y) = (key(order[p - 1]), key(order[p]));
                (x.0, x.1, x.2) == (y.0, y.1, y.2)
            }
        })
        .collect();
    let bounded_only = (0..network.edge_count())
        .filter(|&e| usable[e])
        .all(|e| !network.edge(e).capacity.is_unbounded());

    let mut search = Search {
        network,
        usable,
        vol: order.iter().map(|&i| demands.get(i).volume).collect(),
        ends: order
            .iter()
            .map(|&i| (demands.get(i).source, demands.get(i).target))
            .collect(),
        candidates,
        same_as_prev,
        suffix_load,
        bounded_only,
        residual: network.edges().iter().map(|e| e.capacity).collect(),
        chosen: vec![0; order.len()],
    };
    if !search.promising(0) || !search.dfs(0, budget)? {
        return Ok(None);
    }
    let mut assignment = vec![None; demands.len()];
    for (pos, &i) in order.iter().enumerate() {
        let path = &search.candidates[pos][search.chosen[pos]];
        let d = demands.get(i);
        assignment[i] = Some(if path.source() == d.source {
            path.clone()
        } else {
            path.reversed()
        });
    }
    Ok(Some(RoutingState::from_assignment(network, demands, assignment)))
}

/// Lower bound on the number of edges of any feasible subgraph: the
/// demand endpoints must be joined by a forest, and the kept capacity must
/// cover every demand's volume times its hop distance.
pub fn edge_lower_bound(network: &Network, demands: &DemandSet) -> Result<usize, GraphError> {
    demands.check_against(network)?;
    let n = network.node_count();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    let mut merges = 0;
    for d in demands {
        let (a, b) = (find(&mut parent, d.source), find(&mut parent, d.target));
        if a != b {
            parent[a] = b;
            merges += 1;
        }
    }

    let mut need = Rational::zero();
    let mut dist_cache: HashMap<NodeId, Vec<Option<u32>>> = HashMap::new();
    for d in demands {
        let dist = dist_cache
            .entry(d.source)
            .or_insert_with(|| hop_distances_from(network, d.source, |_| true));
        let hops = dist[d.target].ok_or(GraphError::Disconnected)?;
        need += d.volume * Rational::from_integer(i64::from(hops));
    }
    let mut caps: Vec<Capacity> = network.edges().iter().map(|e| e.capacity).collect();
    caps.sort_by(|a, b| match (a, b) {
        (Capacity::Unbounded, Capacity::Unbounded) => std::cmp::Ordering::Equal,
        (Capacity::Unbounded, _) => std::cmp::Ordering::Less,
        (_, Capacity::Unbounded) => std::cmp::Ordering::Greater,
        (Capacity::Finite(x), Capacity::Finite(y)) => y.cmp(x),
    });
    let mut total = Rational::zero();
    let mut by_capacity = 0;
    for cap in caps {
        if total >= need {
            break;
        }
        by_capacity += 1;
        match cap {
            Capacity::Unbounded => total = need,
            Capacity::Finite(c) => total += c,
        }
    }
    Ok(merges.max(by_capacity))
}

/// Minimum number of edges on which the demands can be routed.
///
/// Subset sizes are searched from [`edge_lower_bound`] upward, below the
/// size of a heuristic solution. Within a size, subsets are enumerated by
/// include/exclude branching that drops any branch separating a demand
/// pair; each subset must pass the capacity-versus-distance filter before
/// the exact feasibility search runs.
pub fn exact_min_edges(
    network: &Network,
    demands: &DemandSet,
    budget: u64,
) -> Result<ExactResult, GraphError> {
    demands.check_against(network)?;
    let start = Instant::now();
    let mut b = Budget {
        used: 0,
        limit: budget,
    };
    let lower = edge_lower_bound(network, demands).unwrap_or(0);
    let m = network.edge_count();
    let finish = |status, best: Option<(BTreeSet<EdgeId>, RoutingState)>, b: &Budget, lower| {
        let upper = best.as_ref().map(|x| x.0.len());
        let (edges, witness) = match (status, best) {
            (ExactStatus::Optimal, Some((e, w))) => (Some(e), Some(w)),
            _ => (None, None),
        };
        ExactResult {
            status,
            edges,
            witness,
            explored: b.used.min(b.limit),
            elapsed: start.elapsed(),
            lower_bound: lower,
            upper_bound: upper,
        }
    };

    let all = vec![true; m];
    let mut best = match feasible_on(network, &all, demands, &mut b) {
        Err(OutOfBudget) => return Ok(finish(ExactStatus::BudgetExceeded, None, &b, lower)),
        Ok(None) => return Ok(finish(ExactStatus::Infeasible, None, &b, m + 1)),
        Ok(Some(w)) => ((0..m).collect::<BTreeSet<_>>(), w),
    };
    if let Ok(sol) = lle_heuristic(network, demands, RoutingOptions::seeded(0)) {
        if sol.kept.len() < best.0.len() {
            best = (sol.kept, sol.witness);
        }
    }

    for k in lower..best.0.len() {
        let mut enumerator = SubsetSearch {
            network,
            demands,
            k,
            include: vec![false; m],
            exclude: vec![false; m],
            included: 0,
        };
        match enumerator.run(0, &mut b) {
            Err(OutOfBudget) => {
                return Ok(finish(ExactStatus::BudgetExceeded, Some(best), &b, k));
            }
            Ok(Some(found)) => {
                return Ok(finish(ExactStatus::Optimal, Some(found), &b, k));
            }
            Ok(None) => {}
        }
    }
    let size = best.0.len();
    Ok(finish(ExactStatus::Optimal, Some(best), &b, size))
}

struct SubsetSearch<'a> {
    network: &'a Network,
    demands: &'a DemandSet,
    k: usize,
    include: Vec<bool>,
    exclude: Vec<bool>,
    included: usize,
}

impl SubsetSearch<'_> {
    fn separates_demand(&self) -> bool {
        let comp = self.network.components_with(|e| !self.exclude[e]);
        self.demands.iter().any(|d| comp[d.source] != comp[d.target])
    }

    // Kept capacity must cover volume times hop distance inside the subset.
    fn passes_load_filter(&self) -> bool {
        let mut room = Rational::zero();
        for (e, edge) in self.network.edges().iter().enumerate() {
            if self.include[e] {
                match edge.capacity {
                    Capacity::Unbounded => return true,
                    Capacity::Finite(c) => room += c,
                }
            }
        }
        let mut need = Rational::zero();
        let mut cache: HashMap<NodeId, Vec<Option<u32>>> = HashMap::new();
        for d in self.demands {
            let dist = cache
                .entry(d.source)
                .or_insert_with(|| hop_distances_from(self.network, d.source, |e| self.include[e]));
            match dist[d.target] {
                Some(h) => need += d.volume * Rational::from_integer(i64::from(h)),
                None => return false,
            }
        }
        need <= room
    }

    fn run(
        &mut self,
        e: usize,
        budget: &mut Budget,
    ) -> Result<Option<(BTreeSet<EdgeId>, RoutingState)>, OutOfBudget> {
        let m = self.network.edge_count();
        if self.included == self.k {
            // remaining edges are implicitly excluded
            for x in e..m {
                self.exclude[x] = true;
            }
            let result = if self.separates_demand() || !self.passes_load_filter() {
                None
            } else {
                budget.tick()?;
                feasible_on(self.network, &self.include, self.demands, budget)?.map(|w| {
                    let kept = (0..m).filter(|&x| self.include[x]).collect();
                    (kept, w)
                })
            };
            for x in e..m {
                self.exclude[x] = false;
            }
            return Ok(result);
        }
        if e == m || self.included + (m - e) < self.k {
            return Ok(None);
        }
        budget.tick()?;
        self.include[e] = true;
        self.included += 1;
        let found = self.run(e + 1, budget)?;
        self.include[e] = false;
        self.included -= 1;
        if found.is_some() {
            return Ok(found);
        }
        self.exclude[e] = true;
        let found = if self.separates_demand() {
            None
        } else {
            self.run(e + 1, budget)?
        };
        self.exclude[e] = false;
        Ok(found)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExportError {
    #[error("edge {0} has unbounded capacity")]
    UnboundedCapacity(EdgeId),
    #[error("pair ({0}, {1}) is disconnected")]
    Disconnected(NodeId, NodeId),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

fn lcm_den(values: impl IntoIterator<Item = Rational>) -> i64 {
    values.into_iter().fold(1, |acc, v| acc.lcm(v.denom()))
}

/// Flow variable name: `dir` 0 is `u -> v` with `u < v`.
pub fn flow_var(edge: EdgeId, dir: u8, commodity: usize) -> String {
    format!("f_{edge}_{dir}_{commodity}")
}

pub fn edge_var(edge: EdgeId) -> String {
    format!("x_{edge}")
}

/// Conservation rows for one commodity sending `amount` from `s` to `t`.
pub(crate) fn conservation_rows(
    network: &Network,
    commodity: usize,
    s: NodeId,
    t: NodeId,
    amount: Rational,
) -> Vec<LpRow> {
    let scale = Rational::from_integer(*amount.denom());
    (0..network.node_count())
        .map(|v| {
            let mut terms = Vec::new();
            for &(_, e) in network.neighbors(v) {
                let out_dir = u8::from(network.edge(e).u != v);
                terms.push((flow_var(e, out_dir, commodity), scale));
                terms.push((flow_var(e, 1 - out_dir, commodity), -scale));
            }
            terms.sort_by(|a, b| var_order(&a.0, &b.0));
            let rhs = if v == s {
                amount * scale
            } else if v == t {
                -amount * scale
            } else {
                Rational::zero()
            };
            LpRow {
                name: format!("fc_{commodity}_{v}"),
                terms,
                cmp: Comparison::Eq,
                rhs,
            }
        })
        .collect()
}

// Orders variable names by their numeric fields rather than as text.
pub(crate) fn var_order(a: &str, b: &str) -> std::cmp::Ordering {
    let key = |s: &str| -> (String, Vec<u64>) {
        let mut parts = s.split('_');
        let head = parts.next().unwrap_or_default().to_string();
        (head, parts.filter_map(|p| p.parse().ok()).collect())
    };
    key(a).cmp(&key(b))
}

/// The integer program of the minimum edges problem: binary `x_e` per
/// edge, two directed flow variables per edge and demand, conservation
/// rows per demand and node, and one capacity row per edge. Rows are
/// scaled to integer coefficients.
pub fn merp_lp_model(network: &Network, demands: &DemandSet) -> Result<LpModel, ExportError> {
    demands.check_against(network)?;
    let mut caps = Vec::with_capacity(network.edge_count());
    for (e, edge) in network.edges().iter().enumerate() {
        caps.push(
            edge.capacity
                .as_finite()
                .ok_or(ExportError::UnboundedCapacity(e))?,
        );
    }
    let one = Rational::from_integer(1);
    let mut rows = Vec::new();
    for (k, d) in demands.iter().enumerate() {
        rows.extend(conservation_rows(network, k, d.source, d.target, d.volume));
    }
    let vol_den = lcm_den(demands.iter().map(|d| d.volume));
    for (e, &c) in caps.iter().enumerate() {
        let scale = Rational::from_integer(vol_den.lcm(c.denom()));
        let mut terms = Vec::new();
        for k in 0..demands.len() {
            terms.push((flow_var(e, 0, k), scale));
            terms.push((flow_var(e, 1, k), scale));
        }
        terms.push((edge_var(e), -c * scale));
        rows.push(LpRow {
            name: format!("cap_{e}"),
            terms,
            cmp: Comparison::Le,
            rhs: Rational::zero(),
        });
    }
    Ok(LpModel {
        comments: vec![
            "minimum edges routing problem".into(),
            "flows are continuous here: a demand may split over several paths,".into(),
            "which is weaker than routing each demand on one elementary path".into(),
        ],
        sense: Sense::Minimize,
        objective_name: "obj".into(),
        objective: (0..network.edge_count()).map(|e| (edge_var(e), one)).collect(),
        rows,
        bounds: Vec::new(),
        binaries: (0..network.edge_count()).map(edge_var).collect(),
        generals: Vec::new(),
    })
}

/// [`merp_lp_model`] rendered as LP text.
pub fn export_merp_lp(network: &Network, demands: &DemandSet) -> Result<String, ExportError> {
    Ok(merp_lp_model(network, demands)?
        .to_lp_string()
        .expect("generated names are short"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate_topology, rat, sp_trap, Demand, Topology};
    use crate::routing::validate_routing_within;

    #[test]
    fn k5_optimum_curve() {
        for (lambda, expect) in [(2, 10), (4, 7), (8, 4)] {
            let net = generate_topology(Topology::Complete(5), Capacity::finite(lambda)).unwrap();
            let dem = DemandSet::all_to_all(5, rat(1));
            let r = exact_min_edges(&net, &dem, 10_000_000).unwrap();
            assert_eq!(r.status, ExactStatus::Optimal);
            let edges = r.edges.unwrap();
            assert_eq!(edges.len(), expect, "lambda {lambda}");
            assert!(validate_routing_within(&net, &dem, &r.witness.unwrap(), Some(&edges)).is_ok());
        }
    }

    #[test]
    fn star_feasibility() {
        let dem = DemandSet::all_to_all(5, rat(1));
        let star = generate_topology(Topology::Star(5), Capacity::finite(8)).unwrap();
        assert!(matches!(
            exact_feasible(&star, &dem, 1_000_000).unwrap(),
            FeasibilityOutcome::Feasible(_)
        ));
        let tight = star.with_uniform_capacity(Capacity::finite(7));
        assert_eq!(
            exact_feasible(&tight, &dem, 1_000_000).unwrap(),
            FeasibilityOutcome::Infeasible
        );
    }

    #[test]
    fn opposite_unit_demands_on_one_edge() {
        let net = Network::new(2, [(0, 1, Capacity::finite(1))]).unwrap();
        let dem = DemandSet::new(vec![Demand::new(0, 1, rat(1)), Demand::new(1, 0, rat(1))]).unwrap();
        assert_eq!(exact_feasible(&net, &dem, 100).unwrap(), FeasibilityOutcome::Infeasible);
        assert_eq!(exact_min_edges(&net, &dem, 100).unwrap().status, ExactStatus::Infeasible);
    }

    #[test]
    fn trap_optimum() {
        let trap = sp_trap(3, None).unwrap();
        let r = exact_min_edges(&trap.network, &trap.demands, 10_000_000).unwrap();
        assert_eq!(r.status, ExactStatus::Optimal);
        let edges = r.edges.unwrap();
        assert_eq!(edges.len(), 10);
        let mut expected: BTreeSet<_> = trap.long_path.iter().copied().collect();
        for &(a, b) in &trap.pendants {
            expected.insert(a);
            expected.insert(b);
        }
        assert_eq!(edges, expected);
    }

    #[test]
    fn budget_is_reported() {
        let net = generate_topology(Topology::Complete(5), Capacity::finite(4)).unwrap();
        let dem = DemandSet::all_to_all(5, rat(1));
        let r = exact_min_edges(&net, &dem, 3).unwrap();
        assert_eq!(r.status, ExactStatus::BudgetExceeded);
        assert!(r.edges.is_none());
        assert_eq!(
            exact_feasible(&net, &dem, 3).unwrap(),
            FeasibilityOutcome::BudgetExceeded
        );
    }

    #[test]
    fn lower_bounds() {
        let net = generate_topology(Topology::Complete(5), Capacity::finite(4)).unwrap();
        let dem = DemandSet::all_to_all(5, rat(1));
        // forest needs 4, capacity needs ceil(20/4) = 5
        assert_eq!(edge_lower_bound(&net, &dem).unwrap(), 5);
        let trap = sp_trap(3, None).unwrap();
        assert_eq!(edge_lower_bound(&trap.network, &trap.demands).unwrap(), 3);
    }

    #[test]
    fn lp_counts() {
        let net = Network::new(2, [(0, 1, Capacity::finite(5))]).unwrap();
        let dem = DemandSet::new(vec![Demand::new(0, 1, rat(3))]).unwrap();
        let m = merp_lp_model(&net, &dem).unwrap();
        assert_eq!(m.binaries.len(), 1);
        assert_eq!(m.variables().len(), 3);
        assert_eq!(m.rows.len(), 3);

        let k5 = generate_topology(Topology::Complete(5), Capacity::finite(4)).unwrap();
        let m = merp_lp_model(&k5, &DemandSet::all_to_all(5, rat(1))).unwrap();
        assert_eq!(m.binaries.len(), 10);
        assert_eq!(m.variables().len(), 10 + 400);

        let trap = sp_trap(1, None).unwrap();
        assert_eq!(
            merp_lp_model(&trap.network, &trap.demands),
            Err(ExportError::UnboundedCapacity(0))
        );
    }

    #[test]
    fn fractional_data_scales_to_integers() {
        let net = Network::new(2, [(0, 1, Capacity::Finite(Rational::new(5, 2)))]).unwrap();
        let dem = DemandSet::new(vec![Demand::new(0, 1, Rational::new(4, 3))]).unwrap();
        let m = merp_lp_model(&net, &dem).unwrap();
        for row in &m.rows {
            assert!(row.rhs.is_integer());
            assert!(row.terms.iter().all(|(_, c)| c.is_integer()));
        }
        let cap = m.rows.iter().find(|r| r.name == "cap_0").unwrap();
        // f <= 5/2 x scaled by lcm(3, 2)
        assert_eq!(cap.terms.last().unwrap().1, rat(-15));
        assert_eq!(cap.terms[0].1, rat(6));
    }
}
