use std::collections::BTreeMap;

use thiserror::Error;

use crate::graph::{edge_allowed, BrParams, Color, PartialColoring, Vertex};
use crate::oracle::{knowledge_graph, QueryHistory};

/// Largest knowledge graph the enumerator accepts.
pub const CONDITIONAL_CAP: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConditionalError {
    #[error("knowledge graph has {vertices} vertices, the enumeration cap is {cap}")]
    TooLarge { vertices: usize, cap: usize },
    #[error("no coloring is consistent with the transcript and revealed colors")]
    Infeasible,
}

/// Exact law of the hidden coloring restricted to the seen vertices, given
/// the transcript and the revealed colors.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionalDistribution {
    /// Seen vertices in discovery order; keys of `probs` follow this order.
    pub vertices: Vec<Vertex>,
    pub probs: BTreeMap<Vec<Color>, f64>,
}

impl ConditionalDistribution {
    pub fn key_of(&self, s: &PartialColoring) -> Option<Vec<Color>> {
        self.vertices.iter().map(|v| s.get(v).copied()).collect()
    }

    /// Probability of `s` restricted to the seen vertices.
    pub fn prob(&self, s: &PartialColoring) -> f64 {
        self.key_of(s).and_then(|k| self.probs.get(&k).copied()).unwrap_or(0.0)
    }

    pub fn marginal(&self, v: Vertex) -> BTreeMap<Color, f64> {
        let mut m = BTreeMap::new();
        if let Some(i) = self.vertices.iter().position(|&x| x == v) {
            for (k, p) in &self.probs {
                *m.entry(k[i]).or_insert(0.0) += p;
            }
        }
        m
    }
}

fn ln_fact(n: usize) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

fn ln_falling(n: usize, k: usize) -> f64 {
    (0..k).map(|j| ((n - j) as f64).ln()).sum()
}

/// Enumerates every coloring of the seen vertices that extends `revealed`,
/// respects the edge rules and makes every queried sink `Red(L)`. Each gets
/// weight (number of full colorings extending it) times (probability the
/// random graph answers every query as recorded), which factorizes over the
/// queried vertices.
pub fn enumerate_conditional_colorings(
    history: &QueryHistory,
    revealed: &PartialColoring,
    params: &BrParams,
) -> Result<ConditionalDistribution, ConditionalError> {
    let kg = knowledge_graph(history);
    let vertices: Vec<Vertex> = kg.vertices().collect();
    if vertices.len() > CONDITIONAL_CAP {
        return Err(ConditionalError::TooLarge {
            vertices: vertices.len(),
            cap: CONDITIONAL_CAP,
        });
    }
    let (n, l, w) = (params.n_blue(), params.layers(), params.width());
    let answers: BTreeMap<Vertex, &[Vertex]> =
        history.records().iter().map(|r| (r.vertex, r.answer.as_slice())).collect();
    let pos: BTreeMap<Vertex, usize> = vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let palette: Vec<Color> = std::iter::once(Color::Blue).chain((1..=l).map(Color::Red)).collect();

    let mut ctx = Search {
        vertices: &vertices,
        kg: &kg,
        pos: &pos,
        answers: &answers,
        revealed,
        palette: &palette,
        layers: l,
        assign: Vec::with_capacity(vertices.len()),
        blue_left: n,
        red_left: vec![w; l + 1],
        found: Vec::new(),
    };
    ctx.go();
    if ctx.found.is_empty() {
        return Err(ConditionalError::Infeasible);
    }

    let total = 3 * n;
    let k = vertices.len();
    let weights: Vec<(Vec<Color>, f64)> = ctx
        .found
        .into_iter()
        .map(|s| {
            let blue = s.iter().filter(|c| c.is_blue()).count();
            let mut reds = vec![0usize; l + 1];
            for c in &s {
                if let Color::Red(i) = c {
                    reds[*i] += 1;
                }
            }
            let mut lw = ln_fact(total - k) - ln_fact(n - blue);
            lw -= (1..=l).map(|i| ln_fact(w - reds[i])).sum::<f64>();
            for (&u, ans) in &answers {
                lw -= match s[pos[&u]] {
                    Color::Blue => ln_falling(2 * n - 1, ans.len()),
                    Color::Red(i) if i < l => ln_falling(w, ans.len()),
                    Color::Red(_) => 0.0,
                };
            }
            (s, lw)
        })
        .collect();
    let top = weights.iter().map(|(_, x)| *x).fold(f64::NEG_INFINITY, f64::max);
    let z: f64 = weights.iter().map(|(_, x)| (x - top).exp()).sum();
    let probs = weights.into_iter().map(|(s, x)| (s, (x - top).exp() / z)).collect();
    Ok(ConditionalDistribution { vertices, probs })
}

struct Search<'a> {
    vertices: &'a [Vertex],
    kg: &'a crate::oracle::KnowledgeGraph,
    pos: &'a BTreeMap<Vertex, usize>,
    answers: &'a BTreeMap<Vertex, &'a [Vertex]>,
    revealed: &'a PartialColoring,
    palette: &'a [Color],
    layers: usize,
    assign: Vec<Color>,
    blue_left: usize,
    red_left: Vec<usize>,
    found: Vec<Vec<Color>>,
}

impl Search<'_> {
    fn fits(&self, v: Vertex, c: Color) -> bool {
        if self.revealed.get(&v).is_some_and(|&p| p != c) {
            return false;
        }
        let free = match c {
            Color::Blue => self.blue_left,
            Color::Red(i) => self.red_left[i],
        };
        if free == 0 {
            return false;
        }
        if let Some(ans) = self.answers.get(&v) {
            if ans.is_empty() != (c == Color::Red(self.layers)) {
                return false;
            }
        }
        let placed = |x: &Vertex| self.pos.get(x).filter(|&&i| i < self.assign.len()).map(|&i| self.assign[i]);
        self.kg
            .out(v)
            .iter()
            .filter_map(placed)
            .all(|t| edge_allowed(c, t, self.layers))
            && self
                .kg
                .inc(v)
                .iter()
                .filter_map(placed)
                .all(|f| edge_allowed(f, c, self.layers))
    }

    fn go(&mut self) {
        let depth = self.assign.len();
        if depth == self.vertices.len() {
            self.found.push(self.assign.clone());
            return;
        }
        let v = self.vertices[depth];
        for &c in self.palette {
            if !self.fits(v, c) {
                continue;
            }
            match c {
                Color::Blue => self.blue_left -= 1,
                Color::Red(i) => self.red_left[i] -= 1,
            }
            self.assign.push(c);
            self.go();
            self.assign.pop();
            match c {
                Color::Blue => self.blue_left += 1,
                Color::Red(i) => self.red_left[i] += 1,
            }
        }
    }
}
