use rand::seq::SliceRandom;
use rand::Rng;
use thiserror::Error;

use crate::graph::{Digraph, Vertex};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PartitionError {
    #[error("balanced partitions need an even vertex count, got {0}")]
    OddVertexCount(usize),
    #[error("at least one sample is required")]
    NoSamples,
}

/// Edges from `first` to its complement. `first[v]` marks membership.
pub fn cross_count(graph: &Digraph, first: &[bool]) -> usize {
    graph.edges().filter(|&(u, v)| first[u] && !first[v]).count()
}

/// The balanced split an ordering induces: `first` holds the later half, so
/// every edge from it to the earlier half is a backedge.
pub fn induced_partition(order: &[Vertex]) -> Vec<bool> {
    let mut first = vec![false; order.len()];
    for &v in &order[order.len() / 2..] {
        first[v] = true;
    }
    first
}

/// Smallest cross count over `num_samples` uniformly random balanced
/// partitions. An upper bound on the true minimum over all partitions.
pub fn partition_cross_min<R: Rng + ?Sized>(
    graph: &Digraph,
    num_samples: usize,
    rng: &mut R,
) -> Result<usize, PartitionError> {
    let n = graph.vertex_count();
    if n % 2 == 1 {
        return Err(PartitionError::OddVertexCount(n));
    }
    if num_samples == 0 {
        return Err(PartitionError::NoSamples);
    }
    let mut perm: Vec<Vertex> = (0..n).collect();
    let mut best = usize::MAX;
    for _ in 0..num_samples {
        perm.shuffle(rng);
        best = best.min(cross_count(graph, &induced_partition(&perm)));
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::backedges;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn path(n: usize) -> Digraph {
        let lists = (0..n).map(|v| if v + 1 < n { vec![v + 1] } else { vec![] }).collect();
        Digraph::from_lists(1, lists).unwrap()
    }

    #[test]
    fn path_can_cross_once() {
        let g = path(6);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert_eq!(partition_cross_min(&g, 2000, &mut rng).unwrap(), 0);
        // first half as the source side: only the middle edge crosses
        let first = [true, true, true, false, false, false];
        assert_eq!(cross_count(&g, &first), 1);
    }

    #[test]
    fn errors() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert_eq!(partition_cross_min(&path(5), 10, &mut rng), Err(PartitionError::OddVertexCount(5)));
        assert_eq!(partition_cross_min(&path(4), 0, &mut rng), Err(PartitionError::NoSamples));
    }

    #[test]
    fn backedges_dominate_induced_cross_edges() {
        let g = Digraph::from_lists(2, vec![vec![1, 2], vec![2, 3], vec![3, 0], vec![0, 1]]).unwrap();
        let edges: Vec<_> = g.edges().collect();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut order: Vec<usize> = (0..4).collect();
        for _ in 0..50 {
            order.shuffle(&mut rng);
            assert!(backedges(4, &edges, &order) >= cross_count(&g, &induced_partition(&order)));
        }
    }
}
