use rand::seq::{index, SliceRandom};
use rand::Rng;
use thiserror::Error;

use super::color::{gen_coloring, Coloring};
use super::digraph::{Digraph, DigraphError};
use super::params::BrParams;
use super::Vertex;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("cannot draw {want} distinct vertices from a pool of {pool}")]
    InfeasibleSampling { want: usize, pool: usize },
    #[error("coloring has {found} vertices, parameters need {expected}")]
    ColoringMismatch { expected: usize, found: usize },
    #[error("vertex count {0} must be even and positive")]
    OddVertexCount(usize),
    #[error("outdegree must be at least 1")]
    ZeroOutdeg,
    #[error(transparent)]
    Digraph(#[from] DigraphError),
}

/// A hidden coloring with the layered graph generated from it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BrPair {
    pub params: BrParams,
    pub coloring: Coloring,
    pub graph: Digraph,
}

impl BrPair {
    /// Assembles a pair without checking the edge rules; run
    /// [`validate_br`](super::validate_br) to audit it.
    pub fn from_parts(params: BrParams, coloring: Coloring, graph: Digraph) -> Self {
        Self {
            params,
            coloring,
            graph,
        }
    }
}

/// Builds out-lists from a fixed coloring.
///
/// RNG consumption: blue lists in increasing vertex order, then red lists
/// layer by layer (1..L-1), each layer in increasing vertex order.
pub fn gen_br_graph<R: Rng + ?Sized>(
    coloring: &Coloring,
    params: &BrParams,
    rng: &mut R,
) -> Result<Digraph, GenError> {
    let v_count = params.vertex_count();
    if coloring.len() != v_count {
        return Err(GenError::ColoringMismatch {
            expected: v_count,
            found: coloring.len(),
        });
    }
    let d = params.outdeg();
    let mut lists: Vec<Vec<Vertex>> = vec![Vec::new(); v_count];

    // Blue targets: all blue vertices plus the top half of the red layers.
    let mut pool: Vec<Vertex> = coloring.blue().to_vec();
    for i in 1..=params.layers() / 2 {
        pool.extend_from_slice(coloring.layer(i));
    }
    pool.sort_unstable();
    let avail = pool.len() - 1;
    if d > avail {
        return Err(GenError::InfeasibleSampling { want: d, pool: avail });
    }
    for &u in coloring.blue() {
        let hole = pool.binary_search(&u).expect("blue vertex is in its own pool");
        lists[u] = index::sample(rng, avail, d)
            .into_iter()
            .map(|j| if j < hole { pool[j] } else { pool[j + 1] })
            .collect();
    }

    for i in 1..params.layers() {
        let next = coloring.layer(i + 1);
        if d > next.len() {
            return Err(GenError::InfeasibleSampling {
                want: d,
                pool: next.len(),
            });
        }
        for &u in coloring.layer(i) {
            lists[u] = index::sample(rng, next.len(), d).into_iter().map(|j| next[j]).collect();
        }
    }
    Ok(Digraph::from_lists(d, lists)?)
}

/// Coloring first, then the graph, from the same generator.
pub fn gen_br_pair<R: Rng + ?Sized>(params: &BrParams, rng: &mut R) -> Result<BrPair, GenError> {
    let coloring = gen_coloring(params, rng);
    let graph = gen_br_graph(&coloring, params, rng)?;
    Ok(BrPair {
        params: *params,
        coloring,
        graph,
    })
}

/// Union of `d` uniform perfect matchings from one random half to the other
/// and `d` back. List slot `k` of a vertex holds its partner in matching `k`,
/// so lists can repeat a target.
///
/// RNG consumption: one shuffle of all vertices (first half is `S1`), then the
/// `d` matchings `S1 -> S2`, then the `d` matchings `S2 -> S1`, each a shuffle
/// of the target half.
pub fn gen_br_simple<R: Rng + ?Sized>(n: usize, d: usize, rng: &mut R) -> Result<Digraph, GenError> {
    if n == 0 || !n.is_multiple_of(2) {
        return Err(GenError::OddVertexCount(n));
    }
    if d == 0 {
        return Err(GenError::ZeroOutdeg);
    }
    let mut order: Vec<Vertex> = (0..n).collect();
    order.shuffle(rng);
    let (s1, s2) = order.split_at(n / 2);
    let mut lists: Vec<Vec<Vertex>> = vec![Vec::with_capacity(d); n];
    for (from, to) in [(s1, s2), (s2, s1)] {
        for _ in 0..d {
            let mut perm = to.to_vec();
            perm.shuffle(rng);
            for (&u, &v) in from.iter().zip(&perm) {
                lists[u].push(v);
            }
        }
    }
    Ok(Digraph::from_multi_lists(d, lists)?)
}

/// Side of each vertex in a BR_simple graph is not stored; this recovers the
/// bipartition from the edges (vertex 0's side is `true`).
pub fn simple_sides(graph: &Digraph) -> Vec<bool> {
    let n = graph.vertex_count();
    let mut side = vec![None; n];
    let mut stack = Vec::new();
    for s in 0..n {
        if side[s].is_some() {
            continue;
        }
        side[s] = Some(true);
        stack.push(s);
        while let Some(u) = stack.pop() {
            let su = side[u].unwrap();
            for &v in graph.out(u) {
                if side[v].is_none() {
                    side[v] = Some(!su);
                    stack.push(v);
                }
            }
        }
    }
    side.into_iter().map(|s| s.unwrap_or(true)).collect()
}
