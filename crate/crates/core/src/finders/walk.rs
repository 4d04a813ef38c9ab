use std::collections::HashMap;

use rand::Rng;

use super::{conclude, FinderOutcome, Halt, Probe};
use crate::graph::Vertex;
use crate::oracle::{Oracle, OracleError};

/// How a single random walk ended.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WalkEnd {
    /// The walk stepped back onto its own trail. The cycle is listed from
    /// the revisited vertex onward.
    Cycle(Vec<Vertex>),
    /// Reached a sink after `steps` edges.
    Sink { steps: usize },
    /// Hit the step cap first.
    Cutoff,
}

pub(crate) fn walk_inner<R: Rng + ?Sized>(
    probe: &mut Probe<'_, '_>,
    start: Vertex,
    max_steps: usize,
    rng: &mut R,
) -> Result<WalkEnd, Halt> {
    let mut trail = vec![start];
    let mut pos: HashMap<Vertex, usize> = HashMap::from([(start, 0)]);
    let mut cur = start;
    loop {
        let out = probe.look(cur)?;
        if out.is_empty() {
            return Ok(WalkEnd::Sink { steps: trail.len() - 1 });
        }
        if trail.len() > max_steps {
            return Ok(WalkEnd::Cutoff);
        }
        let next = out[rng.gen_range(0..out.len())];
        if let Some(&i) = pos.get(&next) {
            return Ok(WalkEnd::Cycle(trail.split_off(i)));
        }
        pos.insert(next, trail.len());
        trail.push(next);
        cur = next;
    }
}

/// One uniform random walk from `start`, re-reading queried vertices for free.
pub fn random_walk_from<R: Rng + ?Sized>(
    oracle: &mut Oracle<'_>,
    start: Vertex,
    max_steps: usize,
    rng: &mut R,
) -> Result<WalkEnd, OracleError> {
    let mut probe = Probe::unlimited(oracle);
    walk_inner(&mut probe, start, max_steps, rng).map_err(|h| match h {
        Halt::Oracle(e) => e,
        Halt::Deadline => OracleError::DeadlineExceeded,
        Halt::Budget => unreachable!("unlimited probe"),
    })
}

/// Repeated random walks from uniform starting vertices until one closes a
/// cycle or `max_queries` charged queries are used.
pub fn run_random_walk_finder<R: Rng + ?Sized>(
    oracle: &mut Oracle<'_>,
    max_queries: u64,
    rng: &mut R,
) -> FinderOutcome {
    let n = oracle.vertex_count();
    let mut probe = Probe::new(oracle, max_queries);
    let result = (|| loop {
        let start = rng.gen_range(0..n);
        probe.bump("walks", 1);
        if let WalkEnd::Cycle(c) = walk_inner(&mut probe, start, n, rng)? {
            return Ok(c);
        }
    })();
    conclude(probe, result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{gen_br_pair, gen_br_simple, BrParams, Color};
    use crate::oracle::{verify_cycle, Model};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn walk_from_red_reaches_sink() {
        let params = BrParams::new(64, 4, 32, 4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let pair = gen_br_pair(&params, &mut rng).unwrap();
        for u in 0..pair.graph.vertex_count() {
            let Color::Red(i) = pair.coloring.color(u) else { continue };
            let mut oracle = Oracle::new(&pair, Model::Vertex);
            match random_walk_from(&mut oracle, u, 1000, &mut rng).unwrap() {
                WalkEnd::Sink { steps } => assert_eq!(steps, 4 - i),
                other => panic!("red walk ended with {other:?}"),
            }
        }
    }

    #[test]
    fn finder_cycles_are_real() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let g = gen_br_simple(200, 3, &mut rng).unwrap();
        for seed in 0..5 {
            let mut oracle = Oracle::for_graph(&g, Model::Vertex).unwrap();
            let mut r = ChaCha8Rng::seed_from_u64(seed);
            let out = run_random_walk_finder(&mut oracle, 10_000, &mut r);
            let cycle = out.cycle.expect("strongly connected regular graph");
            assert!(verify_cycle(&g, &cycle));
            assert!(out.queries_used <= 10_000);
        }
    }

    #[test]
    fn budget_is_respected() {
        let params = BrParams::new(512, 4, 256, 4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let pair = gen_br_pair(&params, &mut rng).unwrap();
        let mut oracle = Oracle::new(&pair, Model::Vertex);
        let out = run_random_walk_finder(&mut oracle, 5, &mut rng);
        assert!(out.queries_used <= 5);
        assert_eq!(oracle.query_count(), out.queries_used);
    }
}
