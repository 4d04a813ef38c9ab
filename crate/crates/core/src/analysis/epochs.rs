use std::collections::{HashMap, HashSet, VecDeque};

use crate::graph::{Coloring, Vertex};
use crate::oracle::{decompose_epochs, knowledge_graph, knowledge_graph_of, EpochEnd, KnowledgeGraph, QueryHistory};

/// Per-run epoch counts measured against the hidden coloring.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EpochStats {
    /// Closed epochs plus the current one if it holds any query.
    pub num_epochs: usize,
    pub num_surprise: usize,
    /// Surprise epochs whose closing query was a blue vertex.
    pub num_blue_surprise: usize,
    /// Longest all-blue path (in edges) in each epoch's own knowledge graph.
    pub max_blue_path_per_epoch: Vec<usize>,
    /// Largest ancestor set of a blue vertex in the final knowledge graph.
    pub max_ancestors_blue: usize,
}

/// Replays `history` with epoch cap `cap` and measures it against `coloring`.
pub fn epoch_stats(history: &QueryHistory, cap: usize, coloring: &Coloring) -> EpochStats {
    let epochs = decompose_epochs(history, cap);
    let records = history.records();
    let mut stats = EpochStats::default();
    for e in epochs.closed() {
        if e.end == EpochEnd::Surprise {
            stats.num_surprise += 1;
            let last = records[e.range.end - 1].vertex;
            if coloring.color(last).is_blue() {
                stats.num_blue_surprise += 1;
            }
        }
    }
    for range in epochs.nonempty_ranges() {
        let kg = knowledge_graph_of(&records[range]);
        stats.max_blue_path_per_epoch.push(max_blue_path(&kg, coloring));
    }
    stats.num_epochs = stats.max_blue_path_per_epoch.len();
    stats.max_ancestors_blue = max_ancestors_blue(&knowledge_graph(history), coloring);
    stats
}

/// Number of vertices other than `u` with a directed path to `u`.
pub fn ancestor_count(kg: &KnowledgeGraph, u: Vertex) -> usize {
    kg.ancestors(u).len()
}

/// Longest directed path, counted in edges, whose vertices are all blue.
pub fn max_blue_path(kg: &KnowledgeGraph, coloring: &Coloring) -> usize {
    let blue: Vec<Vertex> = kg.vertices().filter(|&v| coloring.color(v).is_blue()).collect();
    let is_blue = |v: Vertex| coloring.color(v).is_blue();
    let blue_out = |v: Vertex| kg.out(v).iter().copied().filter(move |&w| is_blue(w));

    // Kahn's algorithm on the blue subgraph; longest path falls out of the
    // topological sweep when it finishes.
    let mut indeg: HashMap<Vertex, usize> = blue.iter().map(|&v| (v, 0)).collect();
    for &v in &blue {
        for w in blue_out(v) {
            *indeg.get_mut(&w).unwrap() += 1;
        }
    }
    let mut best: HashMap<Vertex, usize> = HashMap::new();
    let mut queue: VecDeque<Vertex> = blue.iter().copied().filter(|v| indeg[v] == 0).collect();
    let mut done = 0;
    let mut longest = 0;
    while let Some(v) = queue.pop_front() {
        done += 1;
        let here = best.get(&v).copied().unwrap_or(0);
        longest = longest.max(here);
        for w in blue_out(v) {
            let e = best.entry(w).or_insert(0);
            *e = (*e).max(here + 1);
            let d = indeg.get_mut(&w).unwrap();
            *d -= 1;
            if *d == 0 {
                queue.push_back(w);
            }
        }
    }
    if done == blue.len() {
        return longest;
    }
    // A blue cycle: fall back to exhaustive search for the longest simple path.
    let mut longest = 0;
    let mut on = HashSet::new();
    for &s in &blue {
        longest_simple_from(s, 0, &blue_out, &mut on, &mut longest);
    }
    longest
}

fn longest_simple_from<F, I>(
    v: Vertex,
    len: usize,
    out: &F,
    on: &mut HashSet<Vertex>,
    best: &mut usize,
) where
    F: Fn(Vertex) -> I,
    I: Iterator<Item = Vertex>,
{
    *best = (*best).max(len);
    on.insert(v);
    for w in out(v) {
        if !on.contains(&w) {
            longest_simple_from(w, len + 1, out, on, best);
        }
    }
    on.remove(&v);
}

/// `max |anc(u)|` over blue `u`. A vertex with a single parent that is not
/// on a cycle with it inherits the parent's ancestors plus the parent, so
/// full searches run only where in-edges merge or cycles exist.
pub fn max_ancestors_blue(kg: &KnowledgeGraph, coloring: &Coloring) -> usize {
    let on_cycle = cyclic_vertices(kg);
    let mut memo: HashMap<Vertex, usize> = HashMap::new();
    let mut best = 0;
    for u in kg.vertices() {
        if !coloring.color(u).is_blue() {
            continue;
        }
        // Climb single-parent links until a vertex whose count is known or
        // needs a search.
        let mut chain = Vec::new();
        let mut cur = u;
        let base = loop {
            if let Some(&c) = memo.get(&cur) {
                break c;
            }
            let inc = kg.inc(cur);
            if inc.is_empty() {
                break 0;
            }
            if inc.len() == 1 && !on_cycle.contains(&cur) {
                chain.push(cur);
                cur = inc[0];
                continue;
            }
            break ancestor_count(kg, cur);
        };
        memo.insert(cur, base);
        let mut count = base;
        for &v in chain.iter().rev() {
            count += 1;
            memo.insert(v, count);
        }
        best = best.max(memo[&u]);
    }
    best
}

/// Vertices lying on some directed cycle, via an iterative Tarjan pass.
fn cyclic_vertices(kg: &KnowledgeGraph) -> HashSet<Vertex> {
    let verts: Vec<Vertex> = kg.vertices().collect();
    let id: HashMap<Vertex, usize> = verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let n = verts.len();
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut next = 0;
    let mut result = HashSet::new();
    for root in 0..n {
        if index[root] != usize::MAX {
            continue;
        }
        let mut call = vec![(root, 0usize)];
        index[root] = next;
        low[root] = next;
        next += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&mut (v, ref mut k)) = call.last_mut() {
            let out = kg.out(verts[v]);
            if *k < out.len() {
                let w = id[&out[*k]];
                *k += 1;
                if index[w] == usize::MAX {
                    index[w] = next;
                    low[w] = next;
                    next += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            call.pop();
            if let Some(&(p, _)) = call.last() {
                low[p] = low[p].min(low[v]);
            }
            if low[v] == index[v] {
                let mut comp = Vec::new();
                loop {
                    let w = stack.pop().unwrap();
                    on_stack[w] = false;
                    comp.push(w);
                    if w == v {
                        break;
                    }
                }
                if comp.len() > 1 {
                    for w in comp {
                        result.insert(verts[w]);
                    }
                }
            }
        }
    }
    result
}
