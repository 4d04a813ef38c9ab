//! Cycle finders that see the instance only through an [`Oracle`].

mod bfs;
mod birthday;
mod color;
mod path;
mod walk;
mod wall;

use std::collections::BTreeMap;

use crate::graph::Vertex;
use crate::oracle::{Oracle, OracleError};

pub use bfs::{default_explore_budget, run_bfs_heuristic};
pub use birthday::run_birthday_sampler;
pub use color::{identify_color, ColorEstimate, SinkWalkConfig, Verdict};
pub use path::{run_algorithm1, Alg1Config};
pub use walk::{random_walk_from, run_random_walk_finder, WalkEnd};
pub use wall::{
    build_wall, default_num_walls, default_wall_p, run_algorithm2, wall_depth, Alg2Config, Alg2Report, Wall, WallSet,
    WallVerdictRule,
};

/// Why a finder stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StopReason {
    CycleFound,
    BudgetExhausted,
    Deadline,
}

/// Result of one finder run. `aux` holds named counters such as `walks`,
/// `color_ids`, `walls_built`, `wall_failures`, `backtracks`,
/// `stage1_queries` and `stage2_queries`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinderOutcome {
    pub cycle: Option<Vec<Vertex>>,
    pub queries_used: u64,
    pub stop: StopReason,
    pub aux: BTreeMap<&'static str, u64>,
}

impl FinderOutcome {
    pub fn found(&self) -> bool {
        self.cycle.is_some()
    }

    pub fn aux(&self, key: &str) -> u64 {
        self.aux.get(key).copied().unwrap_or(0)
    }
}

/// Reason a probe refused to continue.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Halt {
    Budget,
    Deadline,
    Oracle(OracleError),
}

impl From<OracleError> for Halt {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::DeadlineExceeded => Halt::Deadline,
            other => Halt::Oracle(other),
        }
    }
}

/// Budgeted view of an oracle. Re-reading an already queried vertex is free;
/// a fresh vertex query fails with [`Halt::Budget`] once `limit` charged
/// queries have been spent since the probe was created.
pub(crate) struct Probe<'a, 'g> {
    oracle: &'a mut Oracle<'g>,
    start: u64,
    limit: u64,
    looks: u64,
    pub aux: BTreeMap<&'static str, u64>,
}

impl<'a, 'g> Probe<'a, 'g> {
    pub fn unlimited(oracle: &'a mut Oracle<'g>) -> Self {
        Self::new(oracle, u64::MAX)
    }

    pub fn new(oracle: &'a mut Oracle<'g>, limit: u64) -> Self {
        let start = oracle.query_count();
        Self {
            oracle,
            start,
            limit,
            looks: 0,
            aux: BTreeMap::new(),
        }
    }

    pub fn spent(&self) -> u64 {
        self.oracle.query_count() - self.start
    }

    pub fn oracle(&self) -> &Oracle<'g> {
        self.oracle
    }

    pub fn vertex_count(&self) -> usize {
        self.oracle.vertex_count()
    }

    pub fn bump(&mut self, key: &'static str, by: u64) {
        *self.aux.entry(key).or_insert(0) += by;
    }

    pub fn look(&mut self, u: Vertex) -> Result<&'g [Vertex], Halt> {
        // Free re-reads never touch the deadline, so cap them too.
        self.looks += 1;
        if self.looks > self.limit.saturating_mul(64).max(1 << 22) {
            return Err(Halt::Budget);
        }
        if !self.oracle.is_queried(u) && self.spent() >= self.limit {
            return Err(Halt::Budget);
        }
        Ok(self.oracle.recall(u)?)
    }

    pub fn adj(&mut self, u: Vertex, i: usize) -> Result<Option<Vertex>, Halt> {
        if self.spent() >= self.limit {
            return Err(Halt::Budget);
        }
        Ok(self.oracle.query_adj(u, i)?)
    }

    pub fn finish(self, cycle: Option<Vec<Vertex>>, halt: Option<Halt>) -> FinderOutcome {
        let stop = match (&cycle, halt) {
            (Some(_), _) => StopReason::CycleFound,
            (None, Some(Halt::Deadline)) => StopReason::Deadline,
            (None, _) => StopReason::BudgetExhausted,
        };
        FinderOutcome {
            cycle,
            queries_used: self.spent(),
            stop,
            aux: self.aux,
        }
    }
}

/// Turns a search loop result into an outcome. Oracle misuse other than a
/// deadline is a programming error in the finder.
pub(crate) fn conclude(probe: Probe<'_, '_>, result: Result<Vec<Vertex>, Halt>) -> FinderOutcome {
    match result {
        Ok(cycle) => probe.finish(Some(cycle), None),
        Err(Halt::Oracle(e)) => panic!("finder misused the oracle: {e}"),
        Err(h) => probe.finish(None, Some(h)),
    }
}
