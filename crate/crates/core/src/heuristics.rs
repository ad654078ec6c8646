//! Edge-removal heuristics, the λ sweep driver and the λ threshold search.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::exact::{exact_feasible, exact_min_edges, ExactStatus, FeasibilityOutcome};
use crate::graph::{Capacity, DemandSet, EdgeId, Network, Rational};
use crate::metrics::{avg_disjoint_paths, reference_routing, spared_percent, stretch};
use crate::routing::{route_demands_on, RoutingError, RoutingOptions, RoutingState};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Heuristic {
    /// Remove the least loaded edge first.
    Lle,
    /// Remove a uniformly random edge.
    Random,
}

impl fmt::Display for Heuristic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Heuristic::Lle => "lle",
            Heuristic::Random => "random",
        })
    }
}

impl FromStr for Heuristic {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "lle" | "less-loaded-edge" => Ok(Heuristic::Lle),
            "random" => Ok(Heuristic::Random),
            other => Err(format!("unknown heuristic `{other}` (expected lle or random)")),
        }
    }
}

/// Where a solution came from.
#[derive(Clone, Debug, PartialEq)]
pub struct Provenance {
    pub method: String,
    pub seed: u64,
    pub lambda: Option<Rational>,
    pub kappa: Option<Rational>,
}

impl Provenance {
    pub fn new(method: impl Into<String>, seed: u64, network: &Network, demands: &DemandSet) -> Self {
        let kappa = demands.uniform_volume();
        let lambda = match (network.uniform_capacity(), kappa) {
            (Some(Capacity::Finite(c)), Some(k)) if !k.is_zero() => Some(c / k),
            _ => None,
        };
        Provenance {
            method: method.into(),
            seed,
            lambda,
            kappa,
        }
    }
}

/// A kept edge set with a witness routing that uses only kept edges.
#[derive(Clone, Debug, PartialEq)]
pub struct SolutionSubgraph {
    pub kept: BTreeSet<EdgeId>,
    pub witness: RoutingState,
    /// Kept edges whose removal was attempted and failed.
    pub unremovable: BTreeSet<EdgeId>,
    pub provenance: Provenance,
}

impl SolutionSubgraph {
    pub fn new(
        kept: BTreeSet<EdgeId>,
        witness: RoutingState,
        provenance: Provenance,
    ) -> SolutionSubgraph {
        SolutionSubgraph {
            kept,
            witness,
            unremovable: BTreeSet::new(),
            provenance,
        }
    }

    pub fn edge_count(&self) -> usize {
        self.kept.len()
    }
}

/// Seed of the routing attempt made when `edge` is tentatively removed
/// from a subgraph with `kept_count` edges. Exposed so that a terminal
/// solution can be re-checked attempt by attempt.
pub fn removal_attempt_seed(run_seed: u64, kept_count: usize, edge: EdgeId) -> u64 {
    fn mix(mut z: u64) -> u64 {
        z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }
    mix(mix(mix(run_seed) ^ kept_count as u64) ^ edge as u64)
}

/// Seed of the first routing on the full network.
pub fn initial_attempt_seed(run_seed: u64) -> u64 {
    removal_attempt_seed(run_seed, usize::MAX, usize::MAX)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum LoadKey {
    Ratio(Rational),
    Saturated,
}

fn load_key(capacity: &Capacity, flow: &Rational) -> LoadKey {
    match capacity {
        Capacity::Unbounded => LoadKey::Ratio(Rational::from_integer(1)),
        Capacity::Finite(c) => {
            let r = c - flow;
            if r <= Rational::zero() {
                LoadKey::Saturated
            } else {
                LoadKey::Ratio(c / r)
            }
        }
    }
}

/// Least loaded edge heuristic: repeatedly drop the untried kept edge with
/// the smallest `c_e / r_e` (ties by a seeded edge ranking, see [`tie_ranks`]) and keep the removal when
/// the feasible-routing heuristic still succeeds.
pub fn lle_heuristic(
    network: &Network,
    demands: &DemandSet,
    options: RoutingOptions,
) -> Result<SolutionSubgraph, RoutingError> {
    remove_edges(network, demands, options, Heuristic::Lle)
}

/// Random heuristic: as [`lle_heuristic`] but the candidate edge is drawn
/// uniformly among the untried kept edges.
pub fn random_heuristic(
    network: &Network,
    demands: &DemandSet,
    options: RoutingOptions,
) -> Result<SolutionSubgraph, RoutingError> {
    remove_edges(network, demands, options, Heuristic::Random)
}

pub fn run_heuristic(
    heuristic: Heuristic,
    network: &Network,
    demands: &DemandSet,
    options: RoutingOptions,
) -> Result<SolutionSubgraph, RoutingError> {
    remove_edges(network, demands, options, heuristic)
}

/// Seeded ranking of edge ids that breaks ties between equally loaded
/// edges. On symmetric inputs every edge starts with the same load, so a
/// fixed id order would make every seed follow the same removal sequence.
pub fn tie_ranks(edge_count: usize, run_seed: u64) -> Vec<usize> {
    let mut order: Vec<usize> = (0..edge_count).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(removal_attempt_seed(run_seed, 0, usize::MAX)));
    let mut rank = vec![0; edge_count];
    for (r, &e) in order.iter().enumerate() {
        rank[e] = r;
    }
    rank
}

fn remove_edges(
    network: &Network,
    demands: &DemandSet,
    options: RoutingOptions,
    heuristic: Heuristic,
) -> Result<SolutionSubgraph, RoutingError> {
    let m = network.edge_count();
    let mut active = vec![true; m];
    let mut kept_count = m;
    let attempt = |seed| RoutingOptions {
        seed,
        retries: options.retries,
    };
    let mut witness = route_demands_on(
        network,
        &active,
        demands,
        attempt(initial_attempt_seed(options.seed)),
    )?;
    let mut tried = vec![false; m];
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    let rank = tie_ranks(m, options.seed);

    loop {
        let candidates: Vec<EdgeId> = (0..m).filter(|&e| active[e] && !tried[e]).collect();
        let pick = match heuristic {
            Heuristic::Lle => candidates
                .iter()
                .copied()
                .min_by_key(|&e| (load_key(&network.edge(e).capacity, &witness.flow()[e]), rank[e])),
            Heuristic::Random => candidates.choose(&mut rng).copied(),
        };
        let Some(e) = pick else { break };
        active[e] = false;
        let seed = removal_attempt_seed(options.seed, kept_count, e);
        match route_demands_on(network, &active, demands, attempt(seed)) {
            Ok(w) => {
                witness = w;
                kept_count -= 1;
                tried.fill(false);
            }
            Err(RoutingError::InfeasibleByHeuristic { .. }) => {
                active[e] = true;
                tried[e] = true;
            }
            Err(other) => return Err(other),
        }
    }

    let kept: BTreeSet<EdgeId> = (0..m).filter(|&e| active[e]).collect();
    let unremovable = kept.iter().copied().filter(|&e| tried[e]).collect();
    Ok(SolutionSubgraph {
        kept,
        witness,
        unremovable,
        provenance: Provenance::new(heuristic.to_string(), options.seed, network, demands),
    })
}

/// One line of a sweep.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub lambda: Rational,
    pub heuristic: Heuristic,
    /// `None` on the best-over-seeds row.
    pub seed: Option<u64>,
    pub total_edges: usize,
    pub kept_edges: Option<usize>,
    pub spared_percent: Option<Rational>,
    pub feasible: bool,
    pub stretch: Option<Rational>,
    pub avg_disjoint_paths: Option<Rational>,
    pub runtime: Duration,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct SweepReport {
    pub rows: Vec<SweepRow>,
}

impl SweepReport {
    /// Best-over-seeds rows only, in λ order.
    pub fn best_rows(&self) -> impl Iterator<Item = &SweepRow> {
        self.rows.iter().filter(|r| r.seed.is_none())
    }

    pub fn best_at(&self, lambda: Rational) -> Option<&SweepRow> {
        self.best_rows().find(|r| r.lambda == lambda)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepConfig {
    pub kappa: Rational,
    pub lambdas: Vec<Rational>,
    pub heuristic: Heuristic,
    pub seeds: Vec<u64>,
    pub retries: usize,
    /// Worker threads; `None` uses the global pool.
    pub jobs: Option<usize>,
    /// Compute stretch and disjoint-path metrics per row.
    pub with_metrics: bool,
}

impl SweepConfig {
    pub fn new(kappa: Rational, lambdas: Vec<Rational>, heuristic: Heuristic, seeds: Vec<u64>) -> Self {
        SweepConfig {
            kappa,
            lambdas,
            heuristic,
            seeds,
            retries: crate::routing::DEFAULT_RETRIES,
            jobs: None,
            with_metrics: true,
        }
    }
}

/// Runs the heuristic for every `(λ, seed)` with uniform capacity `λκ` and
/// all-to-all demands of volume κ. Each λ gets its per-seed rows followed
/// by a best-over-seeds row; rows are sorted by λ.
pub fn sweep(network: &Network, config: &SweepConfig) -> SweepReport {
    let mut lambdas = config.lambdas.clone();
    lambdas.sort();
    lambdas.dedup();
    let demands = DemandSet::all_to_all(network.node_count(), config.kappa);
    let jobs: Vec<(Rational, u64)> = lambdas
        .iter()
        .flat_map(|&l| config.seeds.iter().map(move |&s| (l, s)))
        .collect();

    let run = |&(lambda, seed): &(Rational, u64)| {
        let net = network.with_uniform_capacity(Capacity::Finite(lambda * config.kappa));
        let start = Instant::now();
        let result = run_heuristic(
            config.heuristic,
            &net,
            &demands,
            RoutingOptions {
                seed,
                retries: config.retries,
            },
        );
        let runtime = start.elapsed();
        (lambda, seed, result.ok(), runtime)
    };
    let results: Vec<_> = match config.jobs {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map(|pool| pool.install(|| jobs.par_iter().map(run).collect()))
            .unwrap_or_else(|_| jobs.iter().map(run).collect()),
        None => jobs.par_iter().map(run).collect(),
    };

    let baseline = config
        .with_metrics
        .then(|| reference_routing(network, &demands));
    let m = network.edge_count();
    let make_row = |lambda, seed, sol: Option<&SolutionSubgraph>, runtime| {
        let (stretch_v, dp) = match (sol, &baseline) {
            (Some(s), Some(b)) => (
                stretch(&s.witness, b).ok(),
                Some(avg_disjoint_paths(network, Some(&s.kept))),
            ),
            _ => (None, None),
        };
        SweepRow {
            lambda,
            heuristic: config.heuristic,
            seed,
            total_edges: m,
            kept_edges: sol.map(SolutionSubgraph::edge_count),
            spared_percent: sol.and_then(|s| spared_percent(m, s.edge_count()).ok()),
            feasible: sol.is_some(),
            stretch: stretch_v,
            avg_disjoint_paths: dp,
            runtime,
        }
    };

    let mut rows = Vec::new();
    for &lambda in &lambdas {
        let group: Vec<_> = results.iter().filter(|r| r.0 == lambda).collect();
        for (_, seed, sol, runtime) in &group {
            rows.push(make_row(lambda, Some(*seed), sol.as_ref(), *runtime));
        }
        let best = group
            .iter()
            .filter_map(|(_, _, sol, _)| sol.as_ref())
            .min_by_key(|s| s.edge_count());
        let total: Duration = group.iter().map(|r| r.3).sum();
        rows.push(make_row(lambda, None, best, total));
    }
    SweepReport { rows }
}

/// Criterion for [`find_lambda_threshold`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ThresholdTarget {
    /// All demands can be routed on the full network.
    Feasible,
    /// The demands can be routed on a spanning tree.
    Tree,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ThresholdMethod {
    Heuristic(Heuristic),
    Exact { budget: u64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct ThresholdConfig {
    pub kappa: Rational,
    pub target: ThresholdTarget,
    pub method: ThresholdMethod,
    pub seeds: Vec<u64>,
    pub retries: usize,
    /// Largest λ tried; defaults to n².
    pub lambda_max: Option<u64>,
}

impl ThresholdConfig {
    pub fn new(kappa: Rational, target: ThresholdTarget, method: ThresholdMethod) -> Self {
        ThresholdConfig {
            kappa,
            target,
            method,
            seeds: vec![0],
            retries: crate::routing::DEFAULT_RETRIES,
            lambda_max: None,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ThresholdError {
    #[error("network is not connected")]
    Disconnected,
    #[error("no seeds given")]
    NoSeeds,
    #[error("criterion not met up to lambda {0}")]
    NotReached(u64),
    #[error("exact search budget exceeded at lambda {0}")]
    BudgetExceeded(u64),
}

/// Smallest integer λ ≥ 1 at which the criterion holds with uniform
/// capacity `λκ` and all-to-all demands of volume κ. Binary search, so the
/// criterion is assumed monotone in λ.
pub fn find_lambda_threshold(
    network: &Network,
    config: &ThresholdConfig,
) -> Result<u64, ThresholdError> {
    if !network.is_connected() {
        return Err(ThresholdError::Disconnected);
    }
    if config.seeds.is_empty() {
        return Err(ThresholdError::NoSeeds);
    }
    let n = network.node_count();
    let demands = DemandSet::all_to_all(n, config.kappa);
    let holds = |lambda: u64| -> Result<bool, ThresholdError> {
        let cap = Rational::from_integer(lambda as i64) * config.kappa;
        let net = network.with_uniform_capacity(Capacity::Finite(cap));
        let active = vec![true; net.edge_count()];
        match (config.method, config.target) {
            (ThresholdMethod::Heuristic(_), ThresholdTarget::Feasible) => {
                Ok(config.seeds.iter().any(|&seed| {
                    let opts = RoutingOptions {
                        seed,
                        retries: config.retries,
                    };
                    route_demands_on(&net, &active, &demands, opts).is_ok()
                }))
            }
            (ThresholdMethod::Heuristic(h), ThresholdTarget::Tree) => {
                Ok(config.seeds.par_iter().any(|&seed| {
                    let opts = RoutingOptions {
                        seed,
                        retries: config.retries,
                    };
                    run_heuristic(h, &net, &demands, opts)
                        .is_ok_and(|s| s.edge_count() == n - 1)
                }))
            }
            (ThresholdMethod::Exact { budget }, ThresholdTarget::Feasible) => {
                match exact_feasible(&net, &demands, budget).expect("all-to-all demands are valid") {
                    FeasibilityOutcome::Feasible(_) => Ok(true),
                    FeasibilityOutcome::Infeasible => Ok(false),
                    FeasibilityOutcome::BudgetExceeded => {
                        Err(ThresholdError::BudgetExceeded(lambda))
                    }
                }
            }
            (ThresholdMethod::Exact { budget }, ThresholdTarget::Tree) => {
                let r = exact_min_edges(&net, &demands, budget).expect("all-to-all demands are valid");
                match r.status {
                    ExactStatus::Optimal => Ok(r.edges.is_some_and(|e| e.len() == n - 1)),
                    ExactStatus::Infeasible => Ok(false),
                    ExactStatus::BudgetExceeded => Err(ThresholdError::BudgetExceeded(lambda)),
                }
            }
        }
    };
    let max = config.lambda_max.unwrap_or((n * n).max(1) as u64);
    if !holds(max)? {
        return Err(ThresholdError::NotReached(max));
    }
    let (mut lo, mut hi) = (0u64, max);
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if holds(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate_topology, rat, Topology};
    use crate::routing::validate_routing_within;

    fn k5(lambda: i64) -> (Network, DemandSet) {
        (
            generate_topology(Topology::Complete(5), Capacity::finite(lambda)).unwrap(),
            DemandSet::all_to_all(5, rat(1)),
        )
    }

    #[test]
    fn k5_star_at_lambda_eight() {
        let (net, dem) = k5(8);
        let sol = (0..20)
            .map(|s| lle_heuristic(&net, &dem, RoutingOptions::seeded(s)).unwrap())
            .min_by_key(SolutionSubgraph::edge_count)
            .unwrap();
        assert_eq!(sol.edge_count(), 4);
        assert!(sol.witness.max_edge_flow() <= rat(8));
        assert!(validate_routing_within(&net, &dem, &sol.witness, Some(&sol.kept)).is_ok());
        assert_eq!(sol.provenance.lambda, Some(rat(8)));
        assert_eq!(sol.provenance.kappa, Some(rat(1)));
    }

    #[test]
    fn k5_at_lambda_two_keeps_everything() {
        let (net, dem) = k5(2);
        let sol = lle_heuristic(&net, &dem, RoutingOptions::seeded(3)).unwrap();
        assert_eq!(sol.edge_count(), 10);
        assert_eq!(sol.unremovable, sol.kept);
    }

    #[test]
    fn below_threshold_fails() {
        let (net, dem) = k5(1);
        for h in [Heuristic::Lle, Heuristic::Random] {
            assert!(matches!(
                run_heuristic(h, &net, &dem, RoutingOptions::default()),
                Err(RoutingError::InfeasibleByHeuristic { .. })
            ));
        }
    }

    #[test]
    fn random_reaches_star_on_some_seed() {
        let (net, dem) = k5(8);
        let best = (0..20)
            .map(|s| random_heuristic(&net, &dem, RoutingOptions::seeded(s)).unwrap().edge_count())
            .min();
        assert_eq!(best, Some(4));
    }

    #[test]
    fn removal_seeds_differ() {
        let a = removal_attempt_seed(1, 10, 3);
        assert_ne!(a, removal_attempt_seed(1, 10, 4));
        assert_ne!(a, removal_attempt_seed(1, 9, 3));
        assert_ne!(a, removal_attempt_seed(2, 10, 3));
        assert_eq!(a, removal_attempt_seed(1, 10, 3));
    }

    #[test]
    fn heuristic_names_parse() {
        assert_eq!("LLE".parse::<Heuristic>(), Ok(Heuristic::Lle));
        assert_eq!("random".parse::<Heuristic>(), Ok(Heuristic::Random));
        assert!("greedy".parse::<Heuristic>().is_err());
    }

    #[test]
    fn sweep_rows_are_sorted_with_best_rows() {
        let net = generate_topology(Topology::Complete(5), Capacity::finite(1)).unwrap();
        let cfg = SweepConfig::new(rat(1), vec![rat(8), rat(2)], Heuristic::Lle, (0..20).collect());
        let report = sweep(&net, &cfg);
        assert_eq!(report.rows.len(), 42);
        assert!(report.rows.windows(2).all(|w| w[0].lambda <= w[1].lambda));
        assert_eq!(report.best_at(rat(2)).unwrap().kept_edges, Some(10));
        assert_eq!(report.best_at(rat(8)).unwrap().spared_percent, Some(rat(60)));

        let empty = SweepConfig::new(rat(1), vec![], Heuristic::Lle, vec![0]);
        assert!(sweep(&net, &empty).rows.is_empty());
    }

    #[test]
    fn thresholds_on_small_graphs() {
        let heur = ThresholdConfig::new(
            rat(1),
            ThresholdTarget::Feasible,
            ThresholdMethod::Heuristic(Heuristic::Lle),
        );
        let k5 = generate_topology(Topology::Complete(5), Capacity::finite(1)).unwrap();
        assert_eq!(find_lambda_threshold(&k5, &heur), Ok(2));
        let star = generate_topology(Topology::Star(5), Capacity::finite(1)).unwrap();
        assert_eq!(find_lambda_threshold(&star, &heur), Ok(8));

        let tree = ThresholdConfig {
            seeds: (0..20).collect(),
            ..ThresholdConfig::new(
                rat(1),
                ThresholdTarget::Tree,
                ThresholdMethod::Heuristic(Heuristic::Lle),
            )
        };
        assert_eq!(find_lambda_threshold(&k5, &tree), Ok(8));

        let split = Network::new(3, [(0, 1, Capacity::finite(1))]).unwrap();
        assert_eq!(
            find_lambda_threshold(&split, &heur),
            Err(ThresholdError::Disconnected)
        );
    }
}
