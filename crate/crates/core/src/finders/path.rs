use std::collections::{HashMap, HashSet};

use rand::seq::SliceRandom;
use rand::Rng;

use super::color::{identify_inner, ColorEstimate, SinkWalkConfig, Verdict};
use super::{conclude, FinderOutcome, Halt, Probe};
use crate::graph::{BrParams, Vertex};
use crate::oracle::{detect_cycle, Oracle, QueryRecord};

/// Settings for the blue-path finder that identifies colors by sink walks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Alg1Config {
    pub num_walks: usize,
    pub max_walk_len: usize,
    /// Cycle checks start once the path has `ceil(mult * sqrt(N))` vertices.
    /// Zero checks from the first vertex.
    pub path_target_mult: f64,
    pub budget: u64,
}

impl Alg1Config {
    /// Six walks, `3L` step cap, target `2 sqrt(N)`, budget `100 L sqrt(N)`.
    pub fn for_params(params: &BrParams) -> Self {
        Self {
            num_walks: 6,
            max_walk_len: 3 * params.layers(),
            path_target_mult: 2.0,
            budget: default_budget(params),
        }
    }

    pub fn path_target(&self, params: &BrParams) -> usize {
        (self.path_target_mult * (params.n_blue() as f64).sqrt()).ceil() as usize
    }
}

pub(crate) fn default_budget(params: &BrParams) -> u64 {
    (100.0 * params.layers() as f64 * (params.n_blue() as f64).sqrt()).ceil() as u64
}

/// Grows a path of vertices judged blue, backtracking out of dead ends, and
/// checks each new head for a cycle once the path reaches `target`.
/// Every child identification is appended to `log`.
pub(crate) fn grow_blue_path<R, F>(
    probe: &mut Probe<'_, '_>,
    target: usize,
    identify: &mut F,
    log: &mut Vec<(Vertex, ColorEstimate)>,
    rng: &mut R,
) -> Result<Vec<Vertex>, Halt>
where
    R: Rng + ?Sized,
    F: FnMut(&mut Probe<'_, '_>, Vertex, &mut R) -> Result<ColorEstimate, Halt>,
{
    let n = probe.vertex_count();
    let mut verdicts: HashMap<Vertex, Verdict> = HashMap::new();
    let mut dead: HashSet<Vertex> = HashSet::new();
    let mut path: Vec<Vertex> = Vec::new();
    let mut on_path: HashSet<Vertex> = HashSet::new();
    let mut longest = 0usize;
    // Seed draws that hit a cached verdict cost nothing, so bound them.
    let mut idle_draws = 0usize;

    let result = loop {
        let Some(&head) = path.last() else {
            let v = rng.gen_range(0..n);
            if dead.contains(&v) || verdicts.contains_key(&v) {
                idle_draws += 1;
                if idle_draws > 64 * n {
                    break Err(Halt::Budget);
                }
                continue;
            }
            probe.bump("seeds", 1);
            let verdict = match verdicts.get(&v) {
                Some(&x) => x,
                None => {
                    let est = identify(probe, v, rng)?;
                    verdicts.insert(v, est.verdict);
                    est.verdict
                }
            };
            if verdict.is_blue() {
                path.push(v);
                on_path.insert(v);
            }
            continue;
        };

        let children = probe.look(head)?;
        if path.len() >= target {
            let record = QueryRecord::new(head, children.to_vec());
            if let Some(c) = detect_cycle(probe.oracle().knowledge(), &record) {
                break Ok(c);
            }
        }
        let mut order = children.to_vec();
        order.shuffle(rng);
        let mut next = None;
        for c in order {
            if dead.contains(&c) || on_path.contains(&c) {
                continue;
            }
            let verdict = match verdicts.get(&c) {
                Some(&x) => x,
                None => {
                    let est = identify(probe, c, rng)?;
                    let x = est.verdict;
                    log.push((c, est));
                    verdicts.insert(c, x);
                    x
                }
            };
            if verdict.is_blue() {
                next = Some(c);
                break;
            }
        }
        match next {
            Some(c) => {
                path.push(c);
                on_path.insert(c);
                longest = longest.max(path.len());
            }
            None => {
                probe.bump("backtracks", 1);
                dead.insert(head);
                on_path.remove(&head);
                path.pop();
            }
        }
    };
    probe.bump("path_len", path.len() as u64);
    probe.bump("longest_path", longest as u64);
    result
}

/// Blue-path finder with sink-walk color identification.
pub fn run_algorithm1<R: Rng + ?Sized>(
    oracle: &mut Oracle<'_>,
    params: &BrParams,
    cfg: &Alg1Config,
    rng: &mut R,
) -> FinderOutcome {
    let walk_cfg = SinkWalkConfig {
        num_walks: cfg.num_walks,
        max_walk_len: cfg.max_walk_len,
        layers: params.layers(),
    };
    let target = cfg.path_target(params);
    let mut probe = Probe::new(oracle, cfg.budget);
    let mut identify = |p: &mut Probe<'_, '_>, v: Vertex, r: &mut R| identify_inner(p, v, &walk_cfg, r);
    let mut log = Vec::new();
    let result = grow_blue_path(&mut probe, target, &mut identify, &mut log, rng);
    conclude(probe, result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finders::StopReason;
    use crate::graph::gen_br_pair;
    use crate::oracle::{verify_cycle, Model};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn finds_verified_cycles_on_small_instances() {
        let params = BrParams::new(1024, 8, 256, 8).unwrap();
        let cfg = Alg1Config::for_params(&params);
        let mut found = 0;
        for seed in 0..5 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let pair = gen_br_pair(&params, &mut rng).unwrap();
            let mut oracle = Oracle::new(&pair, Model::Vertex);
            let out = run_algorithm1(&mut oracle, &params, &cfg, &mut rng);
            assert!(out.queries_used <= cfg.budget);
            if let Some(c) = &out.cycle {
                assert!(verify_cycle(&pair.graph, c));
                assert_eq!(out.stop, StopReason::CycleFound);
                found += 1;
            }
        }
        assert!(found >= 4, "{found}/5");
    }

    #[test]
    fn tiny_budget_stops_cleanly() {
        let params = BrParams::new(1024, 8, 256, 8).unwrap();
        let cfg = Alg1Config {
            budget: 10,
            ..Alg1Config::for_params(&params)
        };
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let pair = gen_br_pair(&params, &mut rng).unwrap();
        let mut oracle = Oracle::new(&pair, Model::Vertex);
        let out = run_algorithm1(&mut oracle, &params, &cfg, &mut rng);
        assert_eq!(out.stop, StopReason::BudgetExhausted);
        assert!(out.queries_used <= 10);
    }
}
