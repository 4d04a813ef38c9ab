use std::collections::HashSet;

use rand::Rng;

use super::{FinderOutcome, Halt, Probe};
use crate::oracle::{detect_cycle, Oracle, QueryRecord};

/// Adjacency-list sampler: queries distinct uniform `(u, i)` slots until the
/// budget runs out. A collision is a slot whose target was already in the
/// knowledge graph before the query. Keeps the first cycle that closes but
/// spends the whole budget so the collision count covers all of it.
pub fn run_birthday_sampler<R: Rng + ?Sized>(
    oracle: &mut Oracle<'_>,
    max_queries: u64,
    rng: &mut R,
) -> FinderOutcome {
    let n = oracle.vertex_count();
    let d = oracle.outdeg();
    let budget = max_queries.min((n as u64).saturating_mul(d as u64));
    let mut probe = Probe::new(oracle, budget);
    let mut used = HashSet::new();
    let mut seen = HashSet::new();
    let mut cycle = None;
    let mut halt = None;
    probe.bump("collisions", 0);
    while probe.spent() < budget {
        let (u, i) = loop {
            let s = (rng.gen_range(0..n), rng.gen_range(1..=d));
            if used.insert(s) {
                break s;
            }
        };
        let target = match probe.adj(u, i) {
            Ok(t) => t,
            Err(Halt::Oracle(e)) => panic!("birthday sampler misused the oracle: {e}"),
            Err(h) => {
                halt = Some(h);
                break;
            }
        };
        let fresh_u = seen.insert(u);
        let Some(v) = target else { continue };
        if !seen.insert(v) {
            probe.bump("collisions", 1);
            if cycle.is_none() && !fresh_u {
                cycle = detect_cycle(probe.oracle().knowledge(), &QueryRecord::new(u, vec![v]));
            }
        }
    }
    probe.finish(cycle, halt)
}
