use std::collections::{HashSet, VecDeque};

use thiserror::Error;

use crate::graph::{Color, PartialColoring, Vertex};
use crate::oracle::{knowledge_graph_of, EpochDecomposition, KnowledgeGraph, QueryHistory};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("the epoch knowledge graph is not a forest of out-trees")]
    NotAForest,
    #[error("root {0} was seen in an earlier epoch but its color is not revealed")]
    UnrevealedRoot(Vertex),
    #[error("forced color of vertex {0} falls outside the red layers")]
    Inconsistent(Vertex),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TreeKind {
    /// Root seen before, revealed red.
    Type1,
    /// Root seen before, revealed blue.
    Type2,
    /// New root, some vertex is a sink.
    Type3,
    /// New root, no sink.
    Type4,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TreeNode {
    pub vertex: Vertex,
    pub parent: Option<Vertex>,
    pub depth: usize,
}

/// One out-tree of the current epoch's knowledge graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeType {
    pub root: Vertex,
    pub kind: TreeKind,
    pub height: usize,
    /// Breadth-first order, root first.
    pub nodes: Vec<TreeNode>,
    /// Depth of the shallowest sink, if any.
    pub sink_depth: Option<usize>,
}

/// Vertices seen before the current epoch, and the current epoch's own
/// knowledge graph.
pub fn split_current_epoch(history: &QueryHistory, epochs: &EpochDecomposition) -> (HashSet<Vertex>, KnowledgeGraph) {
    let records = history.records();
    let cur = epochs.current();
    let prior = knowledge_graph_of(&records[..cur.start]).vertices().collect();
    (prior, knowledge_graph_of(&records[cur]))
}

/// Splits `epoch_kg` into out-trees and types each one.
pub fn classify_trees(
    epoch_kg: &KnowledgeGraph,
    prior_vkg: &HashSet<Vertex>,
    revealed: &PartialColoring,
) -> Result<Vec<TreeType>, TreeError> {
    if !epoch_kg.is_out_forest() {
        return Err(TreeError::NotAForest);
    }
    let mut trees = Vec::new();
    for root in epoch_kg.vertices().filter(|&v| epoch_kg.inc(v).is_empty()) {
        let mut nodes = Vec::new();
        let mut queue = VecDeque::from([TreeNode {
            vertex: root,
            parent: None,
            depth: 0,
        }]);
        while let Some(node) = queue.pop_front() {
            nodes.push(node);
            queue.extend(epoch_kg.out(node.vertex).iter().map(|&c| TreeNode {
                vertex: c,
                parent: Some(node.vertex),
                depth: node.depth + 1,
            }));
        }
        let height = nodes.last().map_or(0, |n| n.depth);
        let sink_depth = nodes.iter().find(|n| epoch_kg.is_sink(n.vertex)).map(|n| n.depth);
        let kind = if prior_vkg.contains(&root) {
            match revealed.get(&root) {
                Some(Color::Blue) => TreeKind::Type2,
                Some(Color::Red(_)) => TreeKind::Type1,
                None => return Err(TreeError::UnrevealedRoot(root)),
            }
        } else if sink_depth.is_some() {
            TreeKind::Type3
        } else {
            TreeKind::Type4
        };
        trees.push(TreeType {
            root,
            kind,
            height,
            nodes,
            sink_depth,
        });
    }
    Ok(trees)
}

/// The colors every good partial coloring must use: the revealed colors of
/// earlier vertices plus the whole of each type-1 and type-3 tree.
pub fn forced_coloring(
    trees: &[TreeType],
    prior_vkg: &HashSet<Vertex>,
    revealed: &PartialColoring,
    layers: usize,
) -> Result<PartialColoring, TreeError> {
    let mut forced: PartialColoring = revealed
        .iter()
        .filter(|(v, _)| prior_vkg.contains(v))
        .map(|(&v, &c)| (v, c))
        .collect();
    for t in trees {
        let top = match (t.kind, revealed.get(&t.root)) {
            (TreeKind::Type1, Some(&Color::Red(i))) => i as isize,
            (TreeKind::Type3, _) => layers as isize - t.sink_depth.expect("type 3 has a sink") as isize,
            _ => continue,
        };
        for n in &t.nodes {
            let layer = top + n.depth as isize;
            if layer < 1 || layer > layers as isize {
                return Err(TreeError::Inconsistent(n.vertex));
            }
            forced.insert(n.vertex, Color::Red(layer as usize));
        }
    }
    Ok(forced)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::QueryRecord;

    fn epoch(records: &[(usize, &[usize])]) -> KnowledgeGraph {
        let recs: Vec<_> = records.iter().map(|&(u, a)| QueryRecord::new(u, a.to_vec())).collect();
        knowledge_graph_of(&recs)
    }

    #[test]
    fn isolated_new_vertex_is_type4() {
        let mut kg = KnowledgeGraph::new();
        kg.add_vertex(7);
        let t = classify_trees(&kg, &HashSet::new(), &PartialColoring::new()).unwrap();
        assert_eq!(t.len(), 1);
        assert_eq!((t[0].kind, t[0].height), (TreeKind::Type4, 0));
    }

    #[test]
    fn four_kinds() {
        let kg = epoch(&[(0, &[1, 2]), (3, &[4, 5]), (6, &[7, 8]), (8, &[]), (9, &[10, 11])]);
        let prior = HashSet::from([0, 3]);
        let revealed = PartialColoring::from([(0, Color::Red(1)), (3, Color::Blue)]);
        let t = classify_trees(&kg, &prior, &revealed).unwrap();
        let kinds: Vec<_> = t.iter().map(|t| (t.root, t.kind, t.height)).collect();
        assert_eq!(
            kinds,
            vec![
                (0, TreeKind::Type1, 1),
                (3, TreeKind::Type2, 1),
                (6, TreeKind::Type3, 1),
                (9, TreeKind::Type4, 1)
            ]
        );
        let f = forced_coloring(&t, &prior, &revealed, 4).unwrap();
        assert_eq!(f[&1], Color::Red(2));
        assert_eq!(f[&6], Color::Red(3));
        assert_eq!(f[&7], Color::Red(4));
        assert_eq!(f[&8], Color::Red(4));
        assert_eq!(f[&3], Color::Blue);
        assert!(!f.contains_key(&4) && !f.contains_key(&9));
    }

    #[test]
    fn deep_sink_forces_the_whole_tree() {
        let kg = epoch(&[(0, &[1, 2]), (1, &[3, 4]), (3, &[])]);
        let t = classify_trees(&kg, &HashSet::new(), &PartialColoring::new()).unwrap();
        assert_eq!(t[0].kind, TreeKind::Type3);
        assert_eq!(t[0].sink_depth, Some(2));
        let f = forced_coloring(&t, &HashSet::new(), &PartialColoring::new(), 8).unwrap();
        assert_eq!(f[&0], Color::Red(6));
        assert_eq!(f[&2], Color::Red(7));
        assert_eq!(f[&4], Color::Red(8));
    }

    #[test]
    fn errors() {
        let mut kg = KnowledgeGraph::new();
        kg.add_edge(0, 2);
        kg.add_edge(1, 2);
        assert_eq!(
            classify_trees(&kg, &HashSet::new(), &PartialColoring::new()),
            Err(TreeError::NotAForest)
        );
        let kg = epoch(&[(0, &[1])]);
        assert_eq!(
            classify_trees(&kg, &HashSet::from([0]), &PartialColoring::new()),
            Err(TreeError::UnrevealedRoot(0))
        );
    }
}
