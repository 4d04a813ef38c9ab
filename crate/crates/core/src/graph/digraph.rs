use thiserror::Error;

use super::Vertex;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DigraphError {
    #[error("vertex {vertex} has out-list of length {len}, expected 0 or {outdeg}")]
    BadOutdegree { vertex: Vertex, len: usize, outdeg: usize },
    #[error("vertex {0} has a self-loop")]
    SelfLoop(Vertex),
    #[error("vertex {vertex} lists {target} more than once")]
    Duplicate { vertex: Vertex, target: Vertex },
    #[error("vertex {vertex} points at {target}, outside 0..{count}")]
    OutOfRange { vertex: Vertex, target: Vertex, count: usize },
}

/// Immutable digraph over `0..V` stored as concatenated ordered out-lists.
/// Every out-list has length `outdeg` or 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Digraph {
    outdeg: usize,
    offsets: Vec<usize>,
    targets: Vec<Vertex>,
    parallel: bool,
}

impl Digraph {
    /// Strict constructor: no self-loops, no repeated target within a list.
    pub fn from_lists(outdeg: usize, lists: Vec<Vec<Vertex>>) -> Result<Self, DigraphError> {
        Self::build(outdeg, lists, false)
    }

    /// Like [`Digraph::from_lists`] but a list may repeat a target, as happens
    /// when several independent matchings pick the same pair.
    pub fn from_multi_lists(outdeg: usize, lists: Vec<Vec<Vertex>>) -> Result<Self, DigraphError> {
        Self::build(outdeg, lists, true)
    }

    fn build(outdeg: usize, lists: Vec<Vec<Vertex>>, parallel: bool) -> Result<Self, DigraphError> {
        let count = lists.len();
        let mut offsets = Vec::with_capacity(count + 1);
        let mut targets = Vec::with_capacity(count * outdeg);
        offsets.push(0);
        for (u, list) in lists.into_iter().enumerate() {
            if !list.is_empty() && list.len() != outdeg {
                return Err(DigraphError::BadOutdegree {
                    vertex: u,
                    len: list.len(),
                    outdeg,
                });
            }
            for (k, &v) in list.iter().enumerate() {
                if v >= count {
                    return Err(DigraphError::OutOfRange { vertex: u, target: v, count });
                }
                if v == u {
                    return Err(DigraphError::SelfLoop(u));
                }
                if !parallel && list[..k].contains(&v) {
                    return Err(DigraphError::Duplicate { vertex: u, target: v });
                }
            }
            targets.extend_from_slice(&list);
            offsets.push(targets.len());
        }
        Ok(Self {
            outdeg,
            offsets,
            targets,
            parallel,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn outdeg(&self) -> usize {
        self.outdeg
    }

    /// Whether lists were allowed to repeat targets.
    pub fn allows_parallel(&self) -> bool {
        self.parallel
    }

    pub fn out(&self, u: Vertex) -> &[Vertex] {
        &self.targets[self.offsets[u]..self.offsets[u + 1]]
    }

    pub fn is_sink(&self, u: Vertex) -> bool {
        self.offsets[u] == self.offsets[u + 1]
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.out(u).contains(&v)
    }

    pub fn edge_count(&self) -> usize {
        self.targets.len()
    }

    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        (0..self.vertex_count()).flat_map(move |u| self.out(u).iter().map(move |&v| (u, v)))
    }

    pub fn to_lists(&self) -> Vec<Vec<Vertex>> {
        (0..self.vertex_count()).map(|u| self.out(u).to_vec()).collect()
    }

    pub fn in_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.vertex_count()];
        for &v in &self.targets {
            deg[v] += 1;
        }
        deg
    }
}
