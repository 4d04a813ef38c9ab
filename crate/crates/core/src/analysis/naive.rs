use rand::Rng;
use thiserror::Error;

use super::trees::{TreeKind, TreeType};
use crate::graph::{BrParams, Color, PartialColoring, Vertex};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NaiveError {
    #[error("tree rooted at {root} has height {height}, which needs fewer than {layers} layers")]
    InvalidTreeHeight { root: Vertex, height: usize, layers: usize },
    #[error("vertex {0} would be pushed below the last red layer")]
    LayerOverflow(Vertex),
    #[error("vertex {0} should carry a forced color but has none")]
    MissingForced(Vertex),
}

fn check_heights(trees: &[TreeType], layers: usize) -> Result<(), NaiveError> {
    match trees.iter().find(|t| t.kind == TreeKind::Type4 && t.height >= layers) {
        Some(t) => Err(NaiveError::InvalidTreeHeight {
            root: t.root,
            height: t.height,
            layers,
        }),
        None => Ok(()),
    }
}

/// Draws one partial coloring from the naive distribution: forced colors are
/// copied, each type-4 root is drawn as if uniform among the colors its
/// height allows, and colors then flow down each type-2 and type-4 tree.
pub fn sample_naive_coloring<R: Rng + ?Sized>(
    trees: &[TreeType],
    forced: &PartialColoring,
    params: &BrParams,
    rng: &mut R,
) -> Result<PartialColoring, NaiveError> {
    let (n, l, w) = (params.n_blue(), params.layers(), params.width());
    check_heights(trees, l)?;
    let mut s = forced.clone();
    for t in trees {
        match t.kind {
            TreeKind::Type1 | TreeKind::Type3 => continue,
            TreeKind::Type2 => {
                if !s.contains_key(&t.root) {
                    return Err(NaiveError::MissingForced(t.root));
                }
            }
            TreeKind::Type4 => {
                let x = rng.gen_range(0..3 * n - t.height * w);
                let c = if x < n { Color::Blue } else { Color::Red((x - n) / w + 1) };
                s.insert(t.root, c);
            }
        }
        for node in &t.nodes[1..] {
            let parent = s[&node.parent.expect("non-root")];
            let c = match parent {
                Color::Blue => {
                    let x = rng.gen_range(0..l);
                    if x < l / 2 {
                        Color::Red(x + 1)
                    } else {
                        Color::Blue
                    }
                }
                Color::Red(i) if i < l => Color::Red(i + 1),
                Color::Red(_) => return Err(NaiveError::LayerOverflow(node.vertex)),
            };
            s.insert(node.vertex, c);
        }
    }
    Ok(s)
}

/// Probability that [`sample_naive_coloring`] returns exactly `s`.
pub fn naive_probability(
    trees: &[TreeType],
    forced: &PartialColoring,
    params: &BrParams,
    s: &PartialColoring,
) -> Result<f64, NaiveError> {
    let (n, l, w) = (params.n_blue(), params.layers(), params.width());
    check_heights(trees, l)?;
    if forced.iter().any(|(v, c)| s.get(v) != Some(c)) {
        return Ok(0.0);
    }
    let mut p = 1.0;
    for t in trees {
        if matches!(t.kind, TreeKind::Type1 | TreeKind::Type3) {
            continue;
        }
        let Some(&root) = s.get(&t.root) else { return Ok(0.0) };
        if t.kind == TreeKind::Type4 {
            let denom = (3 * n - t.height * w) as f64;
            p *= match root {
                Color::Blue => n as f64 / denom,
                Color::Red(i) if (1..=l - t.height).contains(&i) => w as f64 / denom,
                Color::Red(_) => 0.0,
            };
        }
        for node in &t.nodes[1..] {
            let (Some(&pc), Some(&c)) = (s.get(&node.parent.expect("non-root")), s.get(&node.vertex)) else {
                return Ok(0.0);
            };
            p *= match (pc, c) {
                (Color::Blue, Color::Blue) => 0.5,
                (Color::Blue, Color::Red(i)) if (1..=l / 2).contains(&i) => 1.0 / l as f64,
                (Color::Red(i), Color::Red(j)) if j == i + 1 => 1.0,
                _ => 0.0,
            };
        }
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::trees::{classify_trees, forced_coloring};
    use crate::graph::edge_allowed;
    use crate::oracle::{knowledge_graph_of, KnowledgeGraph, QueryRecord};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::collections::HashSet;

    fn kg(records: &[(usize, &[usize])]) -> KnowledgeGraph {
        let recs: Vec<_> = records.iter().map(|&(u, a)| QueryRecord::new(u, a.to_vec())).collect();
        knowledge_graph_of(&recs)
    }

    #[test]
    fn isolated_root_is_blue_a_third_of_the_time() {
        let params = BrParams::new(64, 8, 16, 2).unwrap();
        let mut g = KnowledgeGraph::new();
        g.add_vertex(5);
        let trees = classify_trees(&g, &HashSet::new(), &PartialColoring::new()).unwrap();
        let empty = PartialColoring::new();
        let blue = PartialColoring::from([(5, Color::Blue)]);
        let p = naive_probability(&trees, &empty, &params, &blue).unwrap();
        assert!((p - 1.0 / 3.0).abs() < 1e-12);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let hits = (0..30_000)
            .filter(|_| sample_naive_coloring(&trees, &empty, &params, &mut rng).unwrap()[&5].is_blue())
            .count();
        assert!((hits as f64 / 30_000.0 - 1.0 / 3.0).abs() < 0.01);
    }

    #[test]
    fn type1_tree_is_deterministic() {
        let params = BrParams::new(64, 8, 16, 2).unwrap();
        let g = kg(&[(0, &[1, 2]), (1, &[3, 4])]);
        let prior = HashSet::from([0]);
        let revealed = PartialColoring::from([(0, Color::Red(2))]);
        let trees = classify_trees(&g, &prior, &revealed).unwrap();
        let forced = forced_coloring(&trees, &prior, &revealed, 8).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let s = sample_naive_coloring(&trees, &forced, &params, &mut rng).unwrap();
        assert_eq!(s[&3], Color::Red(4));
        assert_eq!(naive_probability(&trees, &forced, &params, &s).unwrap(), 1.0);
    }

    #[test]
    fn samples_are_good_and_probabilities_match_frequencies() {
        let params = BrParams::new(4, 4, 2, 2).unwrap();
        let g = kg(&[(0, &[1, 2]), (1, &[3, 4])]);
        let trees = classify_trees(&g, &HashSet::new(), &PartialColoring::new()).unwrap();
        let forced = PartialColoring::new();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut counts = std::collections::BTreeMap::new();
        let draws = 40_000;
        for _ in 0..draws {
            let s = sample_naive_coloring(&trees, &forced, &params, &mut rng).unwrap();
            for (u, v) in g.edges() {
                assert!(edge_allowed(s[&u], s[&v], 4), "{s:?}");
            }
            *counts.entry(s.into_iter().collect::<Vec<_>>()).or_insert(0usize) += 1;
        }
        let mut total = 0.0;
        for (s, k) in &counts {
            let p = naive_probability(&trees, &forced, &params, &s.iter().copied().collect()).unwrap();
            total += p;
            let sd = (p * (1.0 - p) / draws as f64).sqrt();
            assert!((*k as f64 / draws as f64 - p).abs() < 5.0 * sd + 1e-3);
        }
        assert!((total - 1.0).abs() < 1e-9, "support mass {total}");
    }

    #[test]
    fn tall_type4_tree_is_rejected() {
        let params = BrParams::new(4, 2, 4, 2).unwrap();
        let g = kg(&[(0, &[1, 2]), (1, &[3, 4])]);
        let trees = classify_trees(&g, &HashSet::new(), &PartialColoring::new()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(matches!(
            sample_naive_coloring(&trees, &PartialColoring::new(), &params, &mut rng),
            Err(NaiveError::InvalidTreeHeight { .. })
        ));
    }
}
