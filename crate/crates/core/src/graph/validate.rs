use std::fmt;

use super::color::Color;
use super::generate::BrPair;
use super::Vertex;

/// One broken rule found by [`validate_br`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    VertexCount { expected: usize, found: usize },
    ClassSize { color: Color, expected: usize, found: usize },
    LayerOutOfRange { vertex: Vertex, layer: usize },
    Outdegree { vertex: Vertex, len: usize },
    Edge { from: Vertex, to: Vertex, from_color: Color, to_color: Color },
    NonTerminalSink { vertex: Vertex, color: Color },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::VertexCount { expected, found } => {
                write!(f, "vertex count {found}, expected {expected}")
            }
            Violation::ClassSize { color, expected, found } => {
                write!(f, "class {color} has {found} vertices, expected {expected}")
            }
            Violation::LayerOutOfRange { vertex, layer } => {
                write!(f, "vertex {vertex} in nonexistent layer {layer}")
            }
            Violation::Outdegree { vertex, len } => {
                write!(f, "vertex {vertex} has outdegree {len}")
            }
            Violation::Edge { from, to, from_color, to_color } => {
                write!(f, "illegal edge {from}->{to} ({from_color}->{to_color})")
            }
            Violation::NonTerminalSink { vertex, color } => {
                write!(f, "non-red_L sink {vertex} ({color})")
            }
        }
    }
}

/// Whether an edge between these colors can occur in a layered instance with
/// `layers` red layers.
pub fn edge_allowed(from: Color, to: Color, layers: usize) -> bool {
    match (from, to) {
        (Color::Blue, Color::Blue) => true,
        (Color::Blue, Color::Red(i)) => i <= layers / 2,
        (Color::Red(i), Color::Red(j)) => i < layers && j == i + 1,
        (Color::Red(_), Color::Blue) => false,
    }
}

/// Audits a pair against the layered-instance rules and returns every
/// violation found (empty when the pair is valid).
pub fn validate_br(pair: &BrPair) -> Vec<Violation> {
    let p = &pair.params;
    let g = &pair.graph;
    let c = &pair.coloring;
    let layers = p.layers();
    let mut out = Vec::new();

    let v_count = p.vertex_count();
    if g.vertex_count() != v_count || c.len() != v_count {
        out.push(Violation::VertexCount {
            expected: v_count,
            found: g.vertex_count().max(c.len()),
        });
        return out;
    }

    let mut counts = vec![0usize; layers + 1];
    for v in 0..v_count {
        match c.color(v) {
            Color::Blue => counts[0] += 1,
            Color::Red(i) if (1..=layers).contains(&i) => counts[i] += 1,
            Color::Red(i) => out.push(Violation::LayerOutOfRange { vertex: v, layer: i }),
        }
    }
    if counts[0] != p.n_blue() {
        out.push(Violation::ClassSize {
            color: Color::Blue,
            expected: p.n_blue(),
            found: counts[0],
        });
    }
    for (i, &n) in counts.iter().enumerate().skip(1) {
        if n != p.width() {
            out.push(Violation::ClassSize {
                color: Color::Red(i),
                expected: p.width(),
                found: n,
            });
        }
    }

    for u in 0..v_count {
        let list = g.out(u);
        let cu = c.color(u);
        if !list.is_empty() && list.len() != p.outdeg() {
            out.push(Violation::Outdegree { vertex: u, len: list.len() });
        }
        if list.is_empty() && cu != Color::Red(layers) {
            out.push(Violation::NonTerminalSink { vertex: u, color: cu });
        }
        for &v in list {
            let cv = c.color(v);
            if !edge_allowed(cu, cv, layers) {
                out.push(Violation::Edge {
                    from: u,
                    to: v,
                    from_color: cu,
                    to_color: cv,
                });
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{gen_br_pair, BrParams, Digraph};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn pair() -> BrPair {
        gen_br_pair(&BrParams::new(4, 4, 2, 2).unwrap(), &mut ChaCha8Rng::seed_from_u64(11)).unwrap()
    }

    #[test]
    fn generated_pair_is_clean() {
        assert!(validate_br(&pair()).is_empty());
    }

    #[test]
    fn injected_skip_edge_is_reported() {
        let mut p = pair();
        let r2 = p.coloring.layer(2)[0];
        let r3 = p.coloring.layer(3).to_vec();
        let r4 = p.coloring.layer(4)[0];
        let mut lists = p.graph.to_lists();
        // Replace one red_2 -> red_3 edge by red_2 -> red_4.
        let slot = lists[r2].iter().position(|v| r3.contains(v)).unwrap();
        lists[r2][slot] = r4;
        p.graph = Digraph::from_lists(2, lists).unwrap();
        let v = validate_br(&p);
        assert_eq!(v.len(), 1, "{v:?}");
        assert!(matches!(v[0], Violation::Edge { from, to, .. } if from == r2 && to == r4));
    }

    #[test]
    fn blue_sink_is_reported() {
        let mut p = pair();
        let b = p.coloring.blue()[0];
        let mut lists = p.graph.to_lists();
        lists[b].clear();
        p.graph = Digraph::from_lists(2, lists).unwrap();
        let v = validate_br(&p);
        assert_eq!(v.len(), 1);
        assert!(v[0].to_string().contains("non-red_L sink"));
    }

    #[test]
    fn edge_rule_table() {
        assert!(edge_allowed(Color::Blue, Color::Blue, 4));
        assert!(edge_allowed(Color::Blue, Color::Red(2), 4));
        assert!(!edge_allowed(Color::Blue, Color::Red(3), 4));
        assert!(edge_allowed(Color::Red(3), Color::Red(4), 4));
        assert!(!edge_allowed(Color::Red(4), Color::Red(5), 4));
        assert!(!edge_allowed(Color::Red(1), Color::Blue, 4));
        assert!(!edge_allowed(Color::Red(1), Color::Red(3), 4));
    }
}
