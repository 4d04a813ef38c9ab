use std::collections::{HashSet, VecDeque};

use rand::Rng;

use super::{conclude, FinderOutcome, Halt, Probe};
use crate::graph::Vertex;
use crate::oracle::{detect_cycle, Oracle, QueryRecord};

/// `ceil(c * V / log2 V)`.
pub fn default_explore_budget(repetitions: usize, vertices: usize) -> usize {
    let v = vertices.max(2) as f64;
    (repetitions as f64 * v / v.log2()).ceil() as usize
}

/// Runs up to `repetitions` breadth-first searches from uniform random
/// starts. Each search stops after exploring `explore_budget` vertices.
/// Every explored vertex is checked for a cycle closing through it.
pub fn run_bfs_heuristic<R: Rng + ?Sized>(
    oracle: &mut Oracle<'_>,
    repetitions: usize,
    explore_budget: usize,
    rng: &mut R,
) -> FinderOutcome {
    let n = oracle.vertex_count();
    let mut probe = Probe::unlimited(oracle);
    let mut result = Err(Halt::Budget);
    for _ in 0..repetitions {
        probe.bump("runs", 1);
        let start = rng.gen_range(0..n);
        match bfs_from(&mut probe, start, explore_budget) {
            Ok(None) => continue,
            Ok(Some(c)) => {
                result = Ok(c);
                break;
            }
            Err(h) => {
                result = Err(h);
                break;
            }
        }
    }
    conclude(probe, result)
}

fn bfs_from(probe: &mut Probe<'_, '_>, start: Vertex, budget: usize) -> Result<Option<Vec<Vertex>>, Halt> {
    let mut queue = VecDeque::from([start]);
    let mut seen = HashSet::from([start]);
    let mut explored = 0;
    while let Some(u) = queue.pop_front() {
        if explored == budget {
            break;
        }
        explored += 1;
        let out = probe.look(u)?;
        let record = QueryRecord::new(u, out.to_vec());
        if let Some(c) = detect_cycle(probe.oracle().knowledge(), &record) {
            return Ok(Some(c));
        }
        queue.extend(out.iter().copied().filter(|&v| seen.insert(v)));
    }
    Ok(None)
}
