use std::collections::BTreeSet;

use super::{EdgeId, GraphError, Network, NodeId};

/// A two-sided node partition together with the edges crossing it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CutPartition {
    pub side_s: BTreeSet<NodeId>,
    pub side_s_bar: BTreeSet<NodeId>,
    pub cut_edges: BTreeSet<EdgeId>,
}

impl CutPartition {
    pub fn cut_size(&self) -> usize {
        self.cut_edges.len()
    }
}

/// Cut between `side_s` and its complement.
pub fn cut_of_partition(
    network: &Network,
    side_s: &BTreeSet<NodeId>,
) -> Result<CutPartition, GraphError> {
    let n = network.node_count();
    if let Some(&bad) = side_s.iter().find(|&&x| x >= n) {
        return Err(GraphError::NodeOutOfRange {
            node: bad,
            count: n,
        });
    }
    if side_s.is_empty() || side_s.len() == n {
        return Err(GraphError::InvalidPartition(
            "both sides must be non-empty".into(),
        ));
    }
    let side_s_bar: BTreeSet<NodeId> = (0..n).filter(|x| !side_s.contains(x)).collect();
    let cut_edges = network
        .edges()
        .iter()
        .enumerate()
        .filter(|(_, e)| side_s.contains(&e.u) != side_s.contains(&e.v))
        .map(|(id, _)| id)
        .collect();
    Ok(CutPartition {
        side_s: side_s.clone(),
        side_s_bar,
        cut_edges,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate_topology, Capacity, Topology};

    #[test]
    fn textbook_cuts() {
        let g = generate_topology(Topology::Grid(4), Capacity::finite(1)).unwrap();
        let left: BTreeSet<_> = (0..16).filter(|x| x % 4 < 2).collect();
        assert_eq!(cut_of_partition(&g, &left).unwrap().cut_size(), 4);

        let k5 = generate_topology(Topology::Complete(5), Capacity::finite(1)).unwrap();
        let two: BTreeSet<_> = [0, 1].into();
        assert_eq!(cut_of_partition(&k5, &two).unwrap().cut_size(), 6);

        let star = generate_topology(Topology::Star(5), Capacity::finite(1)).unwrap();
        let center: BTreeSet<_> = [0].into();
        let cut = cut_of_partition(&star, &center).unwrap();
        assert_eq!(cut.cut_size(), 4);
        assert_eq!(cut.side_s_bar.len(), 4);
    }

    #[test]
    fn rejects_trivial_sides() {
        let k3 = generate_topology(Topology::Complete(3), Capacity::finite(1)).unwrap();
        assert!(cut_of_partition(&k3, &BTreeSet::new()).is_err());
        assert!(cut_of_partition(&k3, &[0, 1, 2].into()).is_err());
        assert!(cut_of_partition(&k3, &[7].into()).is_err());
    }
}
