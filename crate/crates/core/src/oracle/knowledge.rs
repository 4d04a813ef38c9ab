use std::collections::{HashMap, HashSet, VecDeque};

use indexmap::IndexMap;

use super::history::{QueryHistory, QueryRecord};
use crate::graph::{Digraph, Vertex};

#[derive(Debug, Clone, Default, PartialEq, Eq)]
struct Node {
    out: Vec<Vertex>,
    inc: Vec<Vertex>,
    queried: bool,
}

/// The digraph revealed by a transcript: every queried vertex and answer
/// entry, with the returned edges. Vertices iterate in discovery order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct KnowledgeGraph {
    nodes: IndexMap<Vertex, Node>,
    edge_count: usize,
}

impl KnowledgeGraph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds the vertex and its answered out-list. Repeated targets within the
    /// answer collapse to one edge.
    pub fn add_record(&mut self, record: &QueryRecord) {
        self.nodes.entry(record.vertex).or_default().queried = true;
        for &v in &record.answer {
            self.add_edge(record.vertex, v);
        }
    }

    /// Adds `v` with no edges if it is not present yet.
    pub fn add_vertex(&mut self, v: Vertex) {
        self.nodes.entry(v).or_default();
    }

    /// Adds a single observed edge without marking `u` as queried.
    pub fn add_edge(&mut self, u: Vertex, v: Vertex) {
        self.nodes.entry(u).or_default();
        if self.nodes[&u].out.contains(&v) {
            self.nodes.entry(v).or_default();
            return;
        }
        self.nodes.get_mut(&u).unwrap().out.push(v);
        self.nodes.entry(v).or_default().inc.push(u);
        self.edge_count += 1;
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.nodes.contains_key(&v)
    }

    pub fn vertex_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.nodes.keys().copied()
    }

    pub fn out(&self, v: Vertex) -> &[Vertex] {
        self.nodes.get(&v).map_or(&[], |n| &n.out)
    }

    pub fn inc(&self, v: Vertex) -> &[Vertex] {
        self.nodes.get(&v).map_or(&[], |n| &n.inc)
    }

    pub fn is_queried(&self, v: Vertex) -> bool {
        self.nodes.get(&v).is_some_and(|n| n.queried)
    }

    /// Queried with an empty answer.
    pub fn is_sink(&self, v: Vertex) -> bool {
        self.nodes.get(&v).is_some_and(|n| n.queried && n.out.is_empty())
    }

    pub fn sinks(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.nodes
            .iter()
            .filter(|(_, n)| n.queried && n.out.is_empty())
            .map(|(&v, _)| v)
    }

    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.nodes
            .iter()
            .flat_map(|(&u, n)| n.out.iter().map(move |&v| (u, v)))
    }

    /// Vertices other than `u` with a directed path to `u`, in BFS order.
    pub fn ancestors(&self, u: Vertex) -> Vec<Vertex> {
        if !self.contains(u) {
            return Vec::new();
        }
        let mut seen = HashSet::from([u]);
        let mut queue = VecDeque::from([u]);
        let mut out = Vec::new();
        while let Some(x) = queue.pop_front() {
            for &p in self.inc(x) {
                if seen.insert(p) {
                    out.push(p);
                    queue.push_back(p);
                }
            }
        }
        out
    }

    /// True when every vertex has in-degree at most 1 and there is no cycle,
    /// i.e. the graph is a vertex-disjoint union of out-trees.
    pub fn is_out_forest(&self) -> bool {
        if self.nodes.values().any(|n| n.inc.len() > 1) {
            return false;
        }
        // In-degree <= 1: a cycle exists iff some vertex has no root above it.
        let mut reached = 0usize;
        let mut queue: VecDeque<Vertex> = self
            .nodes
            .iter()
            .filter(|(_, n)| n.inc.is_empty())
            .map(|(&v, _)| v)
            .collect();
        while let Some(x) = queue.pop_front() {
            reached += 1;
            queue.extend(self.out(x).iter().copied());
        }
        reached == self.nodes.len()
    }
}

/// Knowledge graph of a full history.
pub fn knowledge_graph(history: &QueryHistory) -> KnowledgeGraph {
    knowledge_graph_of(history.records())
}

/// Knowledge graph of a slice of records, e.g. one epoch.
pub fn knowledge_graph_of(records: &[QueryRecord]) -> KnowledgeGraph {
    let mut kg = KnowledgeGraph::new();
    for r in records {
        kg.add_record(r);
    }
    kg
}

/// Looks for a directed cycle through `last.vertex` that uses one of its
/// answer edges, searching backwards from `last.vertex` inside `kg`.
///
/// Returns the cycle as `[u, a, ..., x]` with edges `u->a`, ..., `x->u`.
pub fn detect_cycle(kg: &KnowledgeGraph, last: &QueryRecord) -> Option<Vec<Vertex>> {
    let u = last.vertex;
    // Only entries that already have out-edges can lead back to u.
    let targets: HashSet<Vertex> = last
        .answer
        .iter()
        .copied()
        .filter(|&a| a != u && !kg.out(a).is_empty())
        .collect();
    if targets.is_empty() {
        return None;
    }
    // toward[x] = successor of x on a shortest path from x to u.
    let mut toward: HashMap<Vertex, Vertex> = HashMap::new();
    let mut queue = VecDeque::from([u]);
    let mut visited = HashSet::from([u]);
    while let Some(x) = queue.pop_front() {
        for &p in kg.inc(x) {
            if !visited.insert(p) {
                continue;
            }
            toward.insert(p, x);
            if targets.contains(&p) {
                let mut cycle = vec![u, p];
                let mut cur = p;
                while let Some(&next) = toward.get(&cur) {
                    if next == u {
                        break;
                    }
                    cycle.push(next);
                    cur = next;
                }
                return Some(cycle);
            }
            queue.push_back(p);
        }
    }
    None
}

/// True iff `cycle` lists distinct vertices and each consecutive pair,
/// wrapping around, is an edge of `graph`.
pub fn verify_cycle(graph: &Digraph, cycle: &[Vertex]) -> bool {
    if cycle.len() < 2 {
        return false;
    }
    let n = graph.vertex_count();
    if cycle.iter().any(|&v| v >= n) {
        return false;
    }
    let distinct: HashSet<_> = cycle.iter().collect();
    if distinct.len() != cycle.len() {
        return false;
    }
    cycle
        .iter()
        .zip(cycle.iter().cycle().skip(1))
        .all(|(&a, &b)| graph.has_edge(a, b))
}
