use std::collections::BTreeMap;

use rand::Rng;

use super::walk::{walk_inner, WalkEnd};
use super::{Halt, Probe};
use crate::graph::{Color, Vertex};
use crate::oracle::{Oracle, OracleError};

/// Color guess produced by a walk-based identifier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Blue,
    Red(usize),
    Unknown,
}

impl Verdict {
    pub fn is_blue(self) -> bool {
        self == Verdict::Blue
    }

    /// Whether the verdict names `color` exactly.
    pub fn matches(self, color: Color) -> bool {
        match (self, color) {
            (Verdict::Blue, Color::Blue) => true,
            (Verdict::Red(i), Color::Red(j)) => i == j,
            _ => false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColorEstimate {
    pub verdict: Verdict,
    /// Sink distances of the walks that terminated, in walk order.
    pub lengths: Vec<usize>,
    pub walks_used: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SinkWalkConfig {
    pub num_walks: usize,
    pub max_walk_len: usize,
    pub layers: usize,
}

impl SinkWalkConfig {
    /// `num_walks` walks, each cut off after `3L` steps.
    pub fn new(num_walks: usize, layers: usize) -> Self {
        Self {
            num_walks,
            max_walk_len: 3 * layers,
            layers,
        }
    }
}

/// Applies the sink-distance rule: every walk from a `Red(i)` vertex ends
/// after exactly `L - i` steps, so equal lengths below `L` name a red layer
/// and anything else is blue.
pub fn sink_verdict(lengths: &[usize], layers: usize) -> Verdict {
    let Some(&first) = lengths.first() else {
        return Verdict::Unknown;
    };
    if lengths.iter().all(|&l| l == first) && first < layers {
        Verdict::Red(layers - first)
    } else {
        Verdict::Blue
    }
}

pub(crate) fn identify_inner<R: Rng + ?Sized>(
    probe: &mut Probe<'_, '_>,
    v: Vertex,
    cfg: &SinkWalkConfig,
    rng: &mut R,
) -> Result<ColorEstimate, Halt> {
    let mut lengths = Vec::with_capacity(cfg.num_walks);
    for _ in 0..cfg.num_walks {
        probe.bump("walks", 1);
        // A cycle along the way is impossible below red and irrelevant for
        // blue: drop the walk.
        if let WalkEnd::Sink { steps } = walk_inner(probe, v, cfg.max_walk_len, rng)? {
            lengths.push(steps);
        }
    }
    probe.bump("color_ids", 1);
    Ok(ColorEstimate {
        verdict: sink_verdict(&lengths, cfg.layers),
        lengths,
        walks_used: cfg.num_walks,
    })
}

/// Guesses the color of `v` from the sink distances of `cfg.num_walks`
/// random walks. Queried vertices are re-read for free.
pub fn identify_color<R: Rng + ?Sized>(
    oracle: &mut Oracle<'_>,
    v: Vertex,
    cfg: &SinkWalkConfig,
    rng: &mut R,
) -> Result<ColorEstimate, OracleError> {
    let mut probe = Probe::unlimited(oracle);
    identify_inner(&mut probe, v, cfg, rng).map_err(|h| match h {
        Halt::Oracle(e) => e,
        Halt::Deadline => OracleError::DeadlineExceeded,
        Halt::Budget => unreachable!("unlimited probe"),
    })
}

/// Tally helper shared with the wall identifier.
pub(crate) fn tally<T: Ord + Copy>(values: &[T]) -> BTreeMap<T, usize> {
    let mut m = BTreeMap::new();
    for &v in values {
        *m.entry(v).or_insert(0) += 1;
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{gen_br_pair, BrParams};
    use crate::oracle::Model;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn rule_table() {
        assert_eq!(sink_verdict(&[], 8), Verdict::Unknown);
        assert_eq!(sink_verdict(&[3, 3, 3], 8), Verdict::Red(5));
        assert_eq!(sink_verdict(&[0], 8), Verdict::Red(8));
        assert_eq!(sink_verdict(&[3, 4], 8), Verdict::Blue);
        assert_eq!(sink_verdict(&[8, 8], 8), Verdict::Blue);
    }

    #[test]
    fn red_vertices_are_always_exact() {
        let params = BrParams::new(128, 8, 32, 4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let pair = gen_br_pair(&params, &mut rng).unwrap();
        let cfg = SinkWalkConfig::new(6, 8);
        let mut oracle = Oracle::new(&pair, Model::Vertex);
        for v in 0..pair.graph.vertex_count() {
            let c = pair.coloring.color(v);
            let est = identify_color(&mut oracle, v, &cfg, &mut rng).unwrap();
            if !c.is_blue() {
                assert!(est.verdict.matches(c), "{v}: {c} vs {:?}", est.verdict);
            }
        }
    }

    #[test]
    fn blue_vertices_are_mostly_blue() {
        let params = BrParams::new(256, 8, 64, 8).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let pair = gen_br_pair(&params, &mut rng).unwrap();
        let cfg = SinkWalkConfig::new(6, 8);
        let mut oracle = Oracle::new(&pair, Model::Vertex);
        let blue = pair.coloring.blue().to_vec();
        let hits = blue
            .iter()
            .filter(|&&v| identify_color(&mut oracle, v, &cfg, &mut rng).unwrap().verdict.is_blue())
            .count();
        assert!(hits as f64 >= 0.95 * blue.len() as f64, "{hits}/{}", blue.len());
    }
}
