use itertools::Itertools;
use thiserror::Error;

use crate::graph::{Digraph, Vertex};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FasError {
    #[error("{vertices} vertices exceeds the cap of {cap}")]
    TooLarge { vertices: usize, cap: usize },
    #[error("edge ({0}, {1}) leaves the vertex range")]
    OutOfRange(Vertex, Vertex),
}

pub const EXACT_CAP: usize = 22;
pub const BRUTE_CAP: usize = 9;

/// Minimum feedback arc set with an ordering that attains it.
#[derive(Debug, Clone, PartialEq)]
pub struct FasResult {
    pub min_fas: usize,
    pub witness_ordering: Vec<Vertex>,
    /// `min_fas / (d * V)`.
    pub epsilon: f64,
}

/// Edges `u -> v` with `u` placed after `v` in `order`. Parallel edges count
/// separately.
pub fn backedges(vertices: usize, edges: &[(Vertex, Vertex)], order: &[Vertex]) -> usize {
    let mut pos = vec![usize::MAX; vertices];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    edges.iter().filter(|&&(u, v)| pos[u] > pos[v]).count()
}

fn check(vertices: usize, edges: &[(Vertex, Vertex)], cap: usize) -> Result<(), FasError> {
    if vertices > cap {
        return Err(FasError::TooLarge { vertices, cap });
    }
    match edges.iter().find(|&&(u, v)| u >= vertices || v >= vertices) {
        Some(&(u, v)) => Err(FasError::OutOfRange(u, v)),
        None => Ok(()),
    }
}

fn epsilon(min_fas: usize, outdeg: usize, vertices: usize) -> f64 {
    if outdeg == 0 || vertices == 0 {
        0.0
    } else {
        min_fas as f64 / (outdeg * vertices) as f64
    }
}

fn max_outdeg(vertices: usize, edges: &[(Vertex, Vertex)]) -> usize {
    let mut deg = vec![0usize; vertices];
    for &(u, _) in edges {
        deg[u] += 1;
    }
    deg.into_iter().max().unwrap_or(0)
}

/// Exact minimum over all orderings by dynamic programming on the set of
/// vertices placed so far: appending `v` after `S` costs the edges from `v`
/// into `S`.
pub fn min_fas_exact(graph: &Digraph) -> Result<FasResult, FasError> {
    let edges: Vec<_> = graph.edges().collect();
    let mut r = min_fas_exact_edges(graph.vertex_count(), &edges)?;
    r.epsilon = epsilon(r.min_fas, graph.outdeg(), graph.vertex_count());
    Ok(r)
}

/// [`min_fas_exact`] on a bare edge list; `epsilon` uses the largest outdegree.
pub fn min_fas_exact_edges(vertices: usize, edges: &[(Vertex, Vertex)]) -> Result<FasResult, FasError> {
    check(vertices, edges, EXACT_CAP)?;
    let n = vertices;
    // layers[v][k]: targets of v with multiplicity above k
    let mut mult = vec![vec![0u32; n]; n];
    for &(u, v) in edges {
        if u != v {
            mult[u][v] += 1;
        }
    }
    let layers: Vec<Vec<u32>> = (0..n)
        .map(|v| {
            let top = mult[v].iter().copied().max().unwrap_or(0);
            (0..top)
                .map(|k| (0..n).filter(|&u| mult[v][u] > k).fold(0u32, |m, u| m | 1 << u))
                .collect()
        })
        .collect();
    let self_loops = edges.iter().filter(|&&(u, v)| u == v).count();

    let full = (1usize << n) - 1;
    let mut dp = vec![u32::MAX; full + 1];
    let mut last = vec![0u8; full + 1];
    dp[0] = 0;
    for s in 1..=full {
        let mut best = u32::MAX;
        let mut arg = 0u8;
        let mut rest = s;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let prev = s & !(1 << v);
            let cost: u32 = layers[v].iter().map(|m| (m & prev as u32).count_ones()).sum();
            let total = dp[prev] + cost;
            if total < best {
                best = total;
                arg = v as u8;
            }
        }
        dp[s] = best;
        last[s] = arg;
    }
    let mut order = Vec::with_capacity(n);
    let mut s = full;
    while s != 0 {
        let v = last[s] as usize;
        order.push(v);
        s &= !(1 << v);
    }
    order.reverse();
    let min_fas = dp[full] as usize + self_loops;
    Ok(FasResult {
        min_fas,
        witness_ordering: order,
        epsilon: epsilon(min_fas, max_outdeg(n, edges), n),
    })
}

/// Exact minimum by trying every ordering. Only for checking the DP.
pub fn min_fas_bruteforce(graph: &Digraph) -> Result<FasResult, FasError> {
    let edges: Vec<_> = graph.edges().collect();
    let mut r = min_fas_bruteforce_edges(graph.vertex_count(), &edges)?;
    r.epsilon = epsilon(r.min_fas, graph.outdeg(), graph.vertex_count());
    Ok(r)
}

pub fn min_fas_bruteforce_edges(vertices: usize, edges: &[(Vertex, Vertex)]) -> Result<FasResult, FasError> {
    check(vertices, edges, BRUTE_CAP)?;
    let (min_fas, order) = (0..vertices)
        .permutations(vertices)
        .map(|p| (backedges(vertices, edges, &p), p))
        .min_by_key(|(b, _)| *b)
        .unwrap_or((0, Vec::new()));
    Ok(FasResult {
        min_fas,
        witness_ordering: order,
        epsilon: epsilon(min_fas, max_outdeg(vertices, edges), vertices),
    })
}

/// Greedy ordering of Eades, Lin and Smyth: peel sinks to the back and
/// sources to the front, otherwise move the vertex with the largest
/// outdegree minus indegree to the front. Its backedge count is an upper
/// bound on the minimum.
pub fn greedy_ordering(vertices: usize, edges: &[(Vertex, Vertex)]) -> Vec<Vertex> {
    let mut outs = vec![Vec::new(); vertices];
    let mut ins = vec![Vec::new(); vertices];
    for &(u, v) in edges {
        if u != v {
            outs[u].push(v);
            ins[v].push(u);
        }
    }
    let mut outdeg: Vec<isize> = outs.iter().map(|o| o.len() as isize).collect();
    let mut indeg: Vec<isize> = ins.iter().map(|i| i.len() as isize).collect();
    let mut alive = vec![true; vertices];
    let mut left = vertices;
    let (mut front, mut back) = (Vec::new(), Vec::new());

    let remove = |v: usize, alive: &mut Vec<bool>, outdeg: &mut Vec<isize>, indeg: &mut Vec<isize>| {
        alive[v] = false;
        for &w in &outs[v] {
            indeg[w] -= 1;
        }
        for &w in &ins[v] {
            outdeg[w] -= 1;
        }
    };
    while left > 0 {
        let pick = if let Some(v) = (0..vertices).find(|&v| alive[v] && outdeg[v] == 0) {
            back.push(v);
            v
        } else if let Some(v) = (0..vertices).find(|&v| alive[v] && indeg[v] == 0) {
            front.push(v);
            v
        } else {
            let v = (0..vertices)
                .filter(|&v| alive[v])
                .max_by_key(|&v| (outdeg[v] - indeg[v], std::cmp::Reverse(v)))
                .expect("some vertex alive");
            front.push(v);
            v
        };
        remove(pick, &mut alive, &mut outdeg, &mut indeg);
        left -= 1;
    }
    back.reverse();
    front.extend(back);
    front
}
