//! Evaluation metrics for a reduced network: route length, stretch,
//! edge-disjoint path counts, spared links, overprovisioning factor and
//! the yearly energy estimate.

use std::collections::BTreeSet;

use num_traits::Zero;
use rayon::prelude::*;
use thiserror::Error;

use crate::flow::edge_disjoint_count;
use crate::graph::{DemandSet, EdgeId, Network, Rational};
use crate::routing::{unconstrained_shortest_routing, RoutingState};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MetricsError {
    #[error("routings cover different demand sets")]
    MismatchedDemands,
    #[error("baseline routing has zero average length")]
    EmptyBaseline,
    #[error("threshold lambda must be positive")]
    ZeroThreshold,
    #[error("lambda {lambda} is below the threshold {threshold}")]
    BelowThreshold { lambda: Rational, threshold: Rational },
    #[error("{kept} kept edges out of {total}")]
    KeptExceedsTotal { kept: usize, total: usize },
}

/// Mean hop count over the assigned paths. Zero when nothing is routed.
pub fn avg_route_length(routing: &RoutingState) -> Rational {
    let mut hops = 0i64;
    let mut count = 0i64;
    for p in routing.assignment().iter().flatten() {
        hops += p.hops() as i64;
        count += 1;
    }
    if count == 0 {
        Rational::zero()
    } else {
        Rational::new(hops, count)
    }
}

/// Ratio of average route lengths, new over baseline.
pub fn stretch(new: &RoutingState, baseline: &RoutingState) -> Result<Rational, MetricsError> {
    let (a, b) = (new.assignment(), baseline.assignment());
    if a.len() != b.len() {
        return Err(MetricsError::MismatchedDemands);
    }
    for (x, y) in a.iter().zip(b) {
        if let (Some(x), Some(y)) = (x, y) {
            if (x.source(), x.target()) != (y.source(), y.target()) {
                return Err(MetricsError::MismatchedDemands);
            }
        }
    }
    let base = avg_route_length(baseline);
    if base.is_zero() {
        return Err(MetricsError::EmptyBaseline);
    }
    Ok(avg_route_length(new) / base)
}

/// Hop-shortest routing of `demands` on the full network, the baseline
/// for stretch.
pub fn reference_routing(network: &Network, demands: &DemandSet) -> RoutingState {
    unconstrained_shortest_routing(network, demands, None)
}

/// Mean over unordered node pairs of the maximum number of edge-disjoint
/// paths, restricted to `kept` edges when given. Separated pairs count 0.
pub fn avg_disjoint_paths(network: &Network, kept: Option<&BTreeSet<EdgeId>>) -> Rational {
    let n = network.node_count();
    if n < 2 {
        return Rational::zero();
    }
    let total: usize = (0..n)
        .into_par_iter()
        .map(|s| {
            (s + 1..n)
                .map(|t| {
                    edge_disjoint_count(network, s, t, |e| kept.is_none_or(|k| k.contains(&e)))
                })
                .sum::<usize>()
        })
        .sum();
    let pairs = (n * (n - 1) / 2) as i64;
    Rational::new(total as i64, pairs)
}

/// `(spared %, OF)` with spared = 100(|E|−|E*|)/|E| and OF = λ/λ₁.
pub fn spared_and_of(
    total_edges: usize,
    kept_edges: usize,
    lambda: Rational,
    lambda1: Rational,
) -> Result<(Rational, Rational), MetricsError> {
    if lambda1 <= Rational::zero() {
        return Err(MetricsError::ZeroThreshold);
    }
    if lambda < lambda1 {
        return Err(MetricsError::BelowThreshold {
            lambda,
            threshold: lambda1,
        });
    }
    Ok((spared_percent(total_edges, kept_edges)?, lambda / lambda1))
}

pub fn spared_percent(total_edges: usize, kept_edges: usize) -> Result<Rational, MetricsError> {
    if kept_edges > total_edges {
        return Err(MetricsError::KeptExceedsTotal {
            kept: kept_edges,
            total: total_edges,
        });
    }
    if total_edges == 0 {
        return Ok(Rational::zero());
    }
    Ok(Rational::new(
        100 * (total_edges - kept_edges) as i64,
        total_edges as i64,
    ))
}

/// Knobs for [`energy_estimate`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EnergyParams {
    pub watts_per_interface: f64,
    pub interfaces_per_edge: f64,
    pub hours_per_year: f64,
}

impl Default for EnergyParams {
    fn default() -> Self {
        EnergyParams {
            watts_per_interface: 100.0,
            interfaces_per_edge: 2.0,
            hours_per_year: 8760.0,
        }
    }
}

/// Yearly energy saved by switching off `spared_edges` links, in MWh.
pub fn energy_estimate(spared_edges: f64, params: EnergyParams) -> f64 {
    spared_edges * params.interfaces_per_edge * params.watts_per_interface * params.hours_per_year
        / 1e6
}

/// All metrics of one reduced network.
#[derive(Clone, Debug, PartialEq)]
pub struct MetricsRow {
    pub total_edges: usize,
    pub kept_edges: usize,
    pub avg_route_length: Rational,
    pub stretch: Option<Rational>,
    pub avg_disjoint_paths: Rational,
    pub spared_percent: Rational,
    pub overprovisioning: Option<Rational>,
    pub energy_mwh_per_year: f64,
}

/// Metrics of a witness routing on `kept`. `thresholds` is `(λ, λ₁)` when
/// the overprovisioning factor should be reported.
pub fn metrics_row(
    network: &Network,
    demands: &DemandSet,
    kept: &BTreeSet<EdgeId>,
    witness: &RoutingState,
    thresholds: Option<(Rational, Rational)>,
    energy: EnergyParams,
) -> Result<MetricsRow, MetricsError> {
    let total = network.edge_count();
    let spared = spared_percent(total, kept.len())?;
    let overprovisioning = match thresholds {
        Some((l, l1)) => Some(spared_and_of(total, kept.len(), l, l1)?.1),
        None => None,
    };
    let baseline = reference_routing(network, demands);
    Ok(MetricsRow {
        total_edges: total,
        kept_edges: kept.len(),
        avg_route_length: avg_route_length(witness),
        stretch: stretch(witness, &baseline).ok(),
        avg_disjoint_paths: avg_disjoint_paths(network, Some(kept)),
        spared_percent: spared,
        overprovisioning,
        energy_mwh_per_year: energy_estimate((total - kept.len()) as f64, energy),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{enumerate_paths, generate_topology, rat, Capacity, Path, Topology};

    fn k5_star_routing(k5: &Network, dem: &DemandSet) -> RoutingState {
        let paths = dem
            .iter()
            .map(|d| {
                let nodes = if d.source == 0 || d.target == 0 {
                    vec![d.source, d.target]
                } else {
                    vec![d.source, 0, d.target]
                };
                Some(Path::from_nodes(k5, nodes).unwrap())
            })
            .collect();
        RoutingState::from_assignment(k5, dem, paths)
    }

    #[test]
    fn k5_star_versus_full() {
        let k5 = generate_topology(Topology::Complete(5), Capacity::finite(8)).unwrap();
        let dem = DemandSet::all_to_all(5, rat(1));
        let full = reference_routing(&k5, &dem);
        let star = k5_star_routing(&k5, &dem);
        assert_eq!(avg_route_length(&full), rat(1));
        // 8 pairs touch the centre, 12 go through it
        assert_eq!(avg_route_length(&star), Rational::new(8 + 12 * 2, 20));
        assert_eq!(stretch(&star, &full).unwrap(), Rational::new(8, 5));
        assert_eq!(stretch(&full, &full).unwrap(), rat(1));

        assert_eq!(avg_disjoint_paths(&k5, None), rat(4));
        let spokes: BTreeSet<_> = star.used_edges();
        assert_eq!(spokes.len(), 4);
        assert_eq!(avg_disjoint_paths(&k5, Some(&spokes)), rat(1));
    }

    #[test]
    fn disjoint_paths_on_cycles_and_trees() {
        for n in 3..8 {
            let c = generate_topology(Topology::Cycle(n), Capacity::finite(1)).unwrap();
            assert_eq!(avg_disjoint_paths(&c, None), rat(2));
            let p = generate_topology(Topology::Path(n), Capacity::finite(1)).unwrap();
            assert_eq!(avg_disjoint_paths(&p, None), rat(1));
        }
    }

    #[test]
    fn disjoint_paths_match_enumeration_on_small_grid() {
        let g = generate_topology(Topology::Grid(2), Capacity::finite(1)).unwrap();
        let mut total = 0;
        for s in 0..4 {
            for t in s + 1..4 {
                // oracle: largest family of pairwise edge-disjoint paths
                let all = enumerate_paths(&g, s, t, 3, |_| true);
                let mut best = 0;
                for mask in 0u32..(1 << all.len()) {
                    let chosen: Vec<_> =
                        (0..all.len()).filter(|i| mask >> i & 1 == 1).collect();
                    let mut seen = BTreeSet::new();
                    if chosen
                        .iter()
                        .all(|&i| all[i].edges().iter().all(|&e| seen.insert(e)))
                    {
                        best = best.max(chosen.len());
                    }
                }
                total += best;
            }
        }
        assert_eq!(avg_disjoint_paths(&g, None), Rational::new(total as i64, 6));
    }

    #[test]
    fn spared_and_overprovisioning() {
        assert_eq!(
            spared_and_of(10, 4, rat(8), rat(2)).unwrap(),
            (rat(60), rat(4))
        );
        assert_eq!(spared_and_of(24, 24, rat(64), rat(32)).unwrap().1, rat(2));
        assert_eq!(spared_percent(24, 24).unwrap(), rat(0));
        assert_eq!(
            spared_and_of(10, 4, rat(8), rat(0)),
            Err(MetricsError::ZeroThreshold)
        );
    }

    #[test]
    fn energy_defaults() {
        let p = EnergyParams::default();
        assert_eq!(energy_estimate(0.0, p), 0.0);
        assert!((energy_estimate(1.0, p) - 1.752).abs() < 1e-12);
        assert!((energy_estimate(21.0, p) - 36.792).abs() < 1e-9);
    }
}
