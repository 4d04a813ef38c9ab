use std::fmt;
use std::time::Instant;

use thiserror::Error;

use super::history::{EpochDecomposition, QueryHistory, QueryRecord};
use super::knowledge::{knowledge_graph_of, KnowledgeGraph};
use crate::graph::{edge_allowed, BrPair, Color, Coloring, Digraph, PartialColoring, Vertex};

/// What a caller may ask the oracle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Model {
    /// `(u, i)` returns the `i`-th out-neighbor of `u`.
    AdjList,
    /// `u` returns the whole ordered out-list of `u`.
    Vertex,
    /// Vertex queries plus the colors of every seen vertex at each epoch end.
    ColorRevelation,
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Model::AdjList => "adjacency-list",
            Model::Vertex => "vertex",
            Model::ColorRevelation => "color-revelation",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("vertex {vertex} outside 0..{count}")]
    VertexOutOfRange { vertex: Vertex, count: usize },
    #[error("neighbor index {index} outside 1..={outdeg}")]
    IndexOutOfRange { index: usize, outdeg: usize },
    #[error("vertex {0} was already queried")]
    RepeatedQuery(Vertex),
    #[error("{op} is not available in the {model} model")]
    WrongModel { model: Model, op: &'static str },
    #[error("color revelation needs a hidden coloring")]
    NoColoring,
    #[error("trial deadline exceeded")]
    DeadlineExceeded,
}

/// Mediates every access to a hidden instance and counts queries.
///
/// The hidden graph (and coloring, when present) is never handed out; callers
/// see answers, the transcript, the knowledge graph and, in the
/// color-revelation model, the revealed colors.
#[derive(Debug, Clone)]
pub struct Oracle<'g> {
    graph: &'g Digraph,
    coloring: Option<&'g Coloring>,
    model: Model,
    lenient: bool,
    history: QueryHistory,
    epochs: EpochDecomposition,
    revealed: PartialColoring,
    reveal_log: Vec<Vec<(Vertex, Color)>>,
    pending_reveal: Vec<Vertex>,
    seen: Vec<bool>,
    queried: Vec<bool>,
    kg: KnowledgeGraph,
    vertex_queries: u64,
    adj_queries: u64,
    deadline: Option<Instant>,
}

impl<'g> Oracle<'g> {
    /// Oracle over a layered pair; epochs time out after `L/2` queries.
    pub fn new(pair: &'g BrPair, model: Model) -> Self {
        Self::build(&pair.graph, Some(&pair.coloring), model, pair.params.epoch_cap())
    }

    /// Oracle over a bare graph (no hidden coloring). Epochs close only on
    /// surprises unless a cap is set with [`Oracle::with_epoch_cap`].
    pub fn for_graph(graph: &'g Digraph, model: Model) -> Result<Self, OracleError> {
        if model == Model::ColorRevelation {
            return Err(OracleError::NoColoring);
        }
        Ok(Self::build(graph, None, model, usize::MAX))
    }

    fn build(graph: &'g Digraph, coloring: Option<&'g Coloring>, model: Model, cap: usize) -> Self {
        let n = graph.vertex_count();
        Self {
            graph,
            coloring,
            model,
            lenient: false,
            history: QueryHistory::new(),
            epochs: EpochDecomposition::new(cap),
            revealed: PartialColoring::new(),
            reveal_log: Vec::new(),
            pending_reveal: Vec::new(),
            seen: vec![false; n],
            queried: vec![false; n],
            kg: KnowledgeGraph::new(),
            vertex_queries: 0,
            adj_queries: 0,
            deadline: None,
        }
    }

    pub fn with_epoch_cap(mut self, cap: usize) -> Self {
        assert!(self.history.is_empty(), "set the epoch cap before querying");
        self.epochs = EpochDecomposition::new(cap);
        self
    }

    /// In lenient mode a repeated vertex query returns the cached list for
    /// free instead of failing.
    pub fn with_lenient(mut self, lenient: bool) -> Self {
        self.lenient = lenient;
        self
    }

    pub fn with_deadline(mut self, deadline: Option<Instant>) -> Self {
        self.deadline = deadline;
        self
    }

    pub fn model(&self) -> Model {
        self.model
    }

    pub fn vertex_count(&self) -> usize {
        self.graph.vertex_count()
    }

    pub fn outdeg(&self) -> usize {
        self.graph.outdeg()
    }

    pub fn history(&self) -> &QueryHistory {
        &self.history
    }

    pub fn epochs(&self) -> &EpochDecomposition {
        &self.epochs
    }

    pub fn revealed(&self) -> &PartialColoring {
        &self.revealed
    }

    /// Colors revealed at each closed epoch, in closing order
    /// (color-revelation model only).
    pub fn reveal_log(&self) -> &[Vec<(Vertex, Color)>] {
        &self.reveal_log
    }

    pub fn knowledge(&self) -> &KnowledgeGraph {
        &self.kg
    }

    /// Knowledge graph of the open epoch only.
    pub fn current_epoch_knowledge(&self) -> KnowledgeGraph {
        knowledge_graph_of(&self.history.records()[self.epochs.current()])
    }

    pub fn vertex_query_count(&self) -> u64 {
        self.vertex_queries
    }

    pub fn adj_query_count(&self) -> u64 {
        self.adj_queries
    }

    /// All charged queries, vertex and adjacency.
    pub fn query_count(&self) -> u64 {
        self.vertex_queries + self.adj_queries
    }

    pub fn is_queried(&self, u: Vertex) -> bool {
        self.queried.get(u).copied().unwrap_or(false)
    }

    /// Whether `u` appears anywhere in the knowledge graph.
    pub fn is_seen(&self, u: Vertex) -> bool {
        self.seen.get(u).copied().unwrap_or(false)
    }

    fn check_deadline(&self) -> Result<(), OracleError> {
        match self.deadline {
            Some(d) if Instant::now() >= d => Err(OracleError::DeadlineExceeded),
            _ => Ok(()),
        }
    }

    fn check_vertex(&self, u: Vertex) -> Result<(), OracleError> {
        if u >= self.graph.vertex_count() {
            return Err(OracleError::VertexOutOfRange {
                vertex: u,
                count: self.graph.vertex_count(),
            });
        }
        Ok(())
    }

    /// Vertex query. Fails on a repeat unless the oracle is lenient.
    pub fn query_vertex(&mut self, u: Vertex) -> Result<&'g [Vertex], OracleError> {
        if self.model == Model::AdjList {
            return Err(OracleError::WrongModel {
                model: self.model,
                op: "vertex query",
            });
        }
        self.check_vertex(u)?;
        if self.queried[u] {
            return if self.lenient {
                Ok(self.graph.out(u))
            } else {
                Err(OracleError::RepeatedQuery(u))
            };
        }
        self.check_deadline()?;
        let answer = self.graph.out(u);
        let surprise = answer.iter().any(|&v| self.seen[v]);

        self.queried[u] = true;
        self.mark_seen(u);
        for &v in answer {
            self.mark_seen(v);
        }
        let record = QueryRecord::new(u, answer.to_vec());
        self.kg.add_record(&record);
        self.history.push(record).expect("fresh vertex");
        self.vertex_queries += 1;

        if self.epochs.push(surprise).is_some() && self.model == Model::ColorRevelation {
            self.reveal();
        }
        Ok(answer)
    }

    /// Cached answer if `u` was queried before (free), a fresh query otherwise.
    pub fn recall(&mut self, u: Vertex) -> Result<&'g [Vertex], OracleError> {
        self.check_vertex(u)?;
        if self.queried[u] {
            return Ok(self.graph.out(u));
        }
        self.query_vertex(u)
    }

    /// Adjacency-list query with 1-based index `i`. Repeats are charged.
    pub fn query_adj(&mut self, u: Vertex, i: usize) -> Result<Option<Vertex>, OracleError> {
        if self.model != Model::AdjList {
            return Err(OracleError::WrongModel {
                model: self.model,
                op: "adjacency query",
            });
        }
        self.check_vertex(u)?;
        let d = self.graph.outdeg();
        if i == 0 || i > d {
            return Err(OracleError::IndexOutOfRange { index: i, outdeg: d });
        }
        self.check_deadline()?;
        self.adj_queries += 1;
        let answer = self.graph.out(u).get(i - 1).copied();
        self.mark_seen(u);
        if let Some(v) = answer {
            self.mark_seen(v);
            self.kg.add_edge(u, v);
        }
        Ok(answer)
    }

    fn mark_seen(&mut self, v: Vertex) {
        if !self.seen[v] {
            self.seen[v] = true;
            self.pending_reveal.push(v);
        }
    }

    fn reveal(&mut self) {
        let coloring = self.coloring.expect("color revelation requires a coloring");
        let batch: Vec<(Vertex, Color)> = self
            .pending_reveal
            .drain(..)
            .map(|v| (v, coloring.color(v)))
            .collect();
        self.revealed.extend(batch.iter().copied());
        self.reveal_log.push(batch);
    }
}

/// Answers a vertex query using adjacency queries `(u, 1), (u, 2), ...`,
/// stopping at the first empty slot. Costs at most `d` adjacency queries.
pub fn query_vertex_via_adj(oracle: &mut Oracle<'_>, u: Vertex) -> Result<Vec<Vertex>, OracleError> {
    let mut out = Vec::with_capacity(oracle.outdeg());
    for i in 1..=oracle.outdeg() {
        match oracle.query_adj(u, i)? {
            Some(v) => out.push(v),
            None => break,
        }
    }
    Ok(out)
}

/// Checks that `(history, revealed)` is a valid knowledge pair, using the
/// hidden pair as the witness: the history is well formed, `revealed` covers
/// exactly the vertices seen in closed epochs, the hidden coloring extends it,
/// and the hidden graph produced every answer.
pub fn check_knowledge_pair(
    history: &QueryHistory,
    revealed: &PartialColoring,
    epochs: &EpochDecomposition,
    pair: &BrPair,
) -> Result<(), String> {
    let d = pair.params.outdeg();
    for r in history.records() {
        let a = &r.answer;
        if !(a.is_empty() || a.len() == d) {
            return Err(format!("answer of {} has length {}", r.vertex, a.len()));
        }
        if a.contains(&r.vertex) {
            return Err(format!("answer of {} contains itself", r.vertex));
        }
        if pair.graph.out(r.vertex) != a.as_slice() {
            return Err(format!("answer of {} disagrees with the hidden graph", r.vertex));
        }
    }
    let closed = knowledge_graph_of(&history.records()[..epochs.closed_len()]);
    if closed.vertex_count() != revealed.len() || closed.vertices().any(|v| !revealed.contains_key(&v)) {
        return Err("revealed domain differs from the closed-epoch vertex set".into());
    }
    for (&v, &c) in revealed {
        if pair.coloring.color(v) != c {
            return Err(format!("revealed color of {v} disagrees with the hidden coloring"));
        }
    }
    // The hidden pair itself must obey the edge rules on every known edge.
    let layers = pair.params.layers();
    for r in history.records() {
        let cu = pair.coloring.color(r.vertex);
        if r.answer.is_empty() && cu != Color::Red(layers) {
            return Err(format!("sink {} is not in the last layer", r.vertex));
        }
        if r.answer.iter().any(|&v| !edge_allowed(cu, pair.coloring.color(v), layers)) {
            return Err(format!("edge from {} breaks the layer rules", r.vertex));
        }
    }
    Ok(())
}
