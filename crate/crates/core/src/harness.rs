//! Seeded experiment runner, CSV output and scaling fits.

use std::collections::BTreeMap;
use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::analysis::epoch_stats;
use crate::finders::{
    default_explore_budget, run_algorithm1, run_algorithm2, run_bfs_heuristic, run_birthday_sampler,
    run_random_walk_finder, Alg1Config, Alg2Config, FinderOutcome,
};
use crate::graph::{gen_br_pair, gen_br_simple, paper_params, BrPair, BrParams, Digraph, DEFAULT_OUTDEG};
use crate::oracle::{verify_cycle, Model, Oracle};

pub const SCHEMA: &str = "v1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Dist {
    Br,
    Brsimple,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algo {
    Walk,
    Birthday,
    Alg1,
    Alg2,
    Bfs,
}

impl fmt::Display for Dist {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Dist::Br => "br",
            Dist::Brsimple => "brsimple",
        })
    }
}

impl fmt::Display for Algo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Algo::Walk => "walk",
            Algo::Birthday => "birthday",
            Algo::Alg1 => "alg1",
            Algo::Alg2 => "alg2",
            Algo::Bfs => "bfs",
        })
    }
}

impl FromStr for Dist {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "br" => Ok(Dist::Br),
            "brsimple" => Ok(Dist::Brsimple),
            _ => Err(format!("unknown distribution {s:?}")),
        }
    }
}

impl FromStr for Algo {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "walk" => Ok(Algo::Walk),
            "birthday" => Ok(Algo::Birthday),
            "alg1" => Ok(Algo::Alg1),
            "alg2" => Ok(Algo::Alg2),
            "bfs" => Ok(Algo::Bfs),
            _ => Err(format!("unknown algorithm {s:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("no sizes given")]
    NoSizes,
    #[error("{algo} needs a colored instance; use --dist br")]
    NeedsColoring { algo: Algo },
    #[error("size {n}: {msg}")]
    BadSize { n: usize, msg: String },
    #[error("{0}")]
    Invalid(String),
}

/// One sweep. For `br`, a size is the blue count N and the layering comes
/// from `paper_params` unless overridden; for `brsimple` it is the total
/// vertex count.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub dist: Dist,
    pub algo: Algo,
    pub sizes: Vec<usize>,
    pub layers: Option<usize>,
    pub outdeg: Option<usize>,
    pub trials: usize,
    pub base_seed: u64,
    /// Query budget; for `bfs` the per-run exploration budget.
    pub budget: Option<u64>,
    pub num_walks: Option<usize>,
    pub walls: Option<usize>,
    pub wall_p: Option<usize>,
    pub path_target_mult: Option<f64>,
    pub bfs_repetitions: usize,
    pub deadline: Duration,
    /// Fill the `ms` column. Off by default so reruns are byte-identical.
    pub timing: bool,
}

impl ExperimentConfig {
    pub fn new(dist: Dist, algo: Algo, sizes: Vec<usize>, trials: usize, base_seed: u64) -> Self {
        Self {
            dist,
            algo,
            sizes,
            layers: None,
            outdeg: None,
            trials,
            base_seed,
            budget: None,
            num_walks: None,
            walls: None,
            wall_p: None,
            path_target_mult: None,
            bfs_repetitions: 4,
            deadline: Duration::from_secs(60),
            timing: false,
        }
    }

    /// Parameters for one BR size, with overrides applied.
    pub fn br_params(&self, n: usize) -> Result<BrParams, ConfigError> {
        let bad = |e: crate::graph::ParamError| ConfigError::BadSize { n, msg: e.to_string() };
        let mut p = match self.layers {
            Some(l) => {
                let w = (2 * n).checked_div(l).unwrap_or(0);
                BrParams::new(n, l, w, self.outdeg.unwrap_or(DEFAULT_OUTDEG).min(w.max(2))).map_err(bad)?
            }
            None => paper_params(n).map_err(bad)?,
        };
        if let Some(d) = self.outdeg {
            p = p.with_outdeg(d).map_err(bad)?;
        }
        Ok(p)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.sizes.is_empty() {
            return Err(ConfigError::NoSizes);
        }
        if self.dist == Dist::Brsimple && matches!(self.algo, Algo::Alg1 | Algo::Alg2) {
            return Err(ConfigError::NeedsColoring { algo: self.algo });
        }
        for &n in &self.sizes {
            match self.dist {
                Dist::Br => {
                    self.br_params(n)?;
                }
                Dist::Brsimple => {
                    if n < 2 || n % 2 == 1 {
                        return Err(ConfigError::BadSize {
                            n,
                            msg: "needs an even vertex count of at least 2".into(),
                        });
                    }
                }
            }
        }
        if self.outdeg == Some(0) {
            return Err(ConfigError::Invalid("outdegree must be positive".into()));
        }
        Ok(())
    }
}

/// One row of output.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialRecord {
    pub dist: Dist,
    pub algo: Algo,
    pub n: usize,
    pub layers: Option<usize>,
    pub width: Option<usize>,
    pub d: usize,
    pub seed: u64,
    pub queries: u64,
    pub success: bool,
    pub cycle_len: Option<usize>,
    pub epochs: Option<usize>,
    pub surprises: Option<usize>,
    pub blue_surprises: Option<usize>,
    pub max_blue_path: Option<usize>,
    pub max_anc_blue: Option<usize>,
    pub ms: Option<u64>,
    /// The finder claimed a cycle that failed verification.
    pub rejected_cycle: bool,
    pub aux: BTreeMap<&'static str, u64>,
}

enum Instance {
    Br(BrPair),
    Simple(Digraph),
}

fn run_finder<'a>(cfg: &ExperimentConfig, inst: &'a Instance, rng: &mut ChaCha8Rng) -> (FinderOutcome, Oracle<'a>) {
    let model = if cfg.algo == Algo::Birthday { Model::AdjList } else { Model::Vertex };
    let mut oracle = match inst {
        Instance::Br(p) => Oracle::new(p, model),
        Instance::Simple(g) => Oracle::for_graph(g, model).expect("vertex or adjacency model"),
    }
    .with_lenient(true)
    .with_deadline(Some(Instant::now() + cfg.deadline));
    let v = oracle.vertex_count();
    let default_budget = (10.0 * (v as f64).sqrt()).ceil() as u64;
    let out = match (cfg.algo, inst) {
        (Algo::Walk, _) => run_random_walk_finder(&mut oracle, cfg.budget.unwrap_or(default_budget), rng),
        (Algo::Birthday, _) => run_birthday_sampler(&mut oracle, cfg.budget.unwrap_or(default_budget), rng),
        (Algo::Bfs, _) => {
            let explore = cfg
                .budget
                .map_or_else(|| default_explore_budget(cfg.bfs_repetitions, v), |b| b as usize);
            run_bfs_heuristic(&mut oracle, cfg.bfs_repetitions, explore, rng)
        }
        (Algo::Alg1, Instance::Br(p)) => {
            let mut a = Alg1Config::for_params(&p.params);
            a.num_walks = cfg.num_walks.unwrap_or(a.num_walks);
            a.path_target_mult = cfg.path_target_mult.unwrap_or(a.path_target_mult);
            a.budget = cfg.budget.unwrap_or(a.budget);
            run_algorithm1(&mut oracle, &p.params, &a, rng)
        }
        (Algo::Alg2, Instance::Br(p)) => {
            let mut a = Alg2Config::for_params(&p.params);
            a.num_walks = cfg.num_walks.unwrap_or(a.num_walks);
            a.num_walls = cfg.walls.unwrap_or(a.num_walls);
            a.wall_p = cfg.wall_p.unwrap_or(a.wall_p);
            a.path_target_mult = cfg.path_target_mult.unwrap_or(a.path_target_mult);
            a.budget = cfg.budget.unwrap_or(a.budget);
            run_algorithm2(&mut oracle, &p.params, &a, rng).outcome
        }
        _ => unreachable!("rejected by validate"),
    };
    (out, oracle)
}

/// Runs a single trial. `seed` drives both the instance and the finder.
pub fn run_trial(cfg: &ExperimentConfig, n: usize, seed: u64) -> TrialRecord {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = cfg.outdeg.unwrap_or(match cfg.dist {
        Dist::Br => DEFAULT_OUTDEG,
        Dist::Brsimple => 3,
    });
    let inst = match cfg.dist {
        Dist::Br => {
            let p = cfg.br_params(n).expect("validated");
            Instance::Br(gen_br_pair(&p, &mut rng).expect("valid parameters"))
        }
        Dist::Brsimple => Instance::Simple(gen_br_simple(n, d, &mut rng).expect("validated")),
    };
    let (out, oracle) = run_finder(cfg, &inst, &mut rng);
    assert_eq!(out.queries_used, oracle.query_count(), "finder bypassed the query counter");

    let graph = match &inst {
        Instance::Br(p) => &p.graph,
        Instance::Simple(g) => g,
    };
    let verified = out.cycle.as_ref().map(|c| verify_cycle(graph, c));
    let mut rec = TrialRecord {
        dist: cfg.dist,
        algo: cfg.algo,
        n,
        layers: None,
        width: None,
        d: graph.outdeg(),
        seed,
        queries: out.queries_used,
        success: verified == Some(true),
        cycle_len: out.cycle.as_ref().filter(|_| verified == Some(true)).map(Vec::len),
        epochs: None,
        surprises: None,
        blue_surprises: None,
        max_blue_path: None,
        max_anc_blue: None,
        ms: None,
        rejected_cycle: verified == Some(false),
        aux: out.aux.clone(),
    };
    if let Instance::Br(p) = &inst {
        rec.layers = Some(p.params.layers());
        rec.width = Some(p.params.width());
        if oracle.model() != Model::AdjList {
            let s = epoch_stats(oracle.history(), p.params.epoch_cap(), &p.coloring);
            rec.epochs = Some(s.num_epochs);
            rec.surprises = Some(s.num_surprise);
            rec.blue_surprises = Some(s.num_blue_surprise);
            rec.max_blue_path = Some(s.max_blue_path_per_epoch.iter().copied().max().unwrap_or(0));
            rec.max_anc_blue = Some(s.max_ancestors_blue);
        }
    }
    if cfg.timing {
        rec.ms = Some(started.elapsed().as_millis() as u64);
    }
    rec
}

fn jobs(cfg: &ExperimentConfig) -> Vec<(usize, u64)> {
    cfg.sizes
        .iter()
        .flat_map(|&n| (0..cfg.trials as u64).map(move |t| (n, cfg.base_seed + t)))
        .collect()
}

/// Every trial in size-major, trial-minor order.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<TrialRecord>, ConfigError> {
    cfg.validate()?;
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        Ok(jobs(cfg).into_par_iter().map(|(n, s)| run_trial(cfg, n, s)).collect())
    }
    #[cfg(not(feature = "parallel"))]
    {
        run_experiment_serial(cfg)
    }
}

/// Same records as [`run_experiment`], on the calling thread.
pub fn run_experiment_serial(cfg: &ExperimentConfig) -> Result<Vec<TrialRecord>, ConfigError> {
    cfg.validate()?;
    Ok(jobs(cfg).into_iter().map(|(n, s)| run_trial(cfg, n, s)).collect())
}

#[derive(Debug, Serialize, Deserialize)]
struct CsvRow {
    schema: String,
    dist: Dist,
    algo: Algo,
    n: usize,
    layers: Option<usize>,
    width: Option<usize>,
    d: usize,
    seed: u64,
    queries: u64,
    success: bool,
    cycle_len: Option<usize>,
    epochs: Option<usize>,
    surprises: Option<usize>,
    blue_surprises: Option<usize>,
    max_blue_path: Option<usize>,
    max_anc_blue: Option<usize>,
    ms: Option<u64>,
}

#[derive(Debug, Error)]
pub enum CsvError {
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("row {row}: schema {found:?}, expected {SCHEMA:?}")]
    Schema { row: usize, found: String },
}

pub fn write_csv<W: Write>(records: &[TrialRecord], out: W) -> Result<(), CsvError> {
    let mut w = csv::Writer::from_writer(out);
    for r in records {
        w.serialize(CsvRow {
            schema: SCHEMA.into(),
            dist: r.dist,
            algo: r.algo,
            n: r.n,
            layers: r.layers,
            width: r.width,
            d: r.d,
            seed: r.seed,
            queries: r.queries,
            success: r.success,
            cycle_len: r.cycle_len,
            epochs: r.epochs,
            surprises: r.surprises,
            blue_surprises: r.blue_surprises,
            max_blue_path: r.max_blue_path,
            max_anc_blue: r.max_anc_blue,
            ms: r.ms,
        })?;
    }
    if records.is_empty() {
        w.write_record(CSV_HEADER.split(','))?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

pub const CSV_HEADER: &str = "schema,dist,algo,n,layers,width,d,seed,queries,success,cycle_len,epochs,surprises,blue_surprises,max_blue_path,max_anc_blue,ms";

pub fn to_csv_string(records: &[TrialRecord]) -> String {
    let mut buf = Vec::new();
    write_csv(records, &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("csv is utf-8")
}

/// Reads rows written by [`write_csv`]. Aux counters are not stored.
pub fn read_csv<R: Read>(input: R) -> Result<Vec<TrialRecord>, CsvError> {
    let mut rd = csv::Reader::from_reader(input);
    let mut out = Vec::new();
    for (i, row) in rd.deserialize::<CsvRow>().enumerate() {
        let r = row?;
        if r.schema != SCHEMA {
            return Err(CsvError::Schema {
                row: i + 1,
                found: r.schema,
            });
        }
        out.push(TrialRecord {
            dist: r.dist,
            algo: r.algo,
            n: r.n,
            layers: r.layers,
            width: r.width,
            d: r.d,
            seed: r.seed,
            queries: r.queries,
            success: r.success,
            cycle_len: r.cycle_len,
            epochs: r.epochs,
            surprises: r.surprises,
            blue_surprises: r.blue_surprises,
            max_blue_path: r.max_blue_path,
            max_anc_blue: r.max_anc_blue,
            ms: r.ms,
            rejected_cycle: false,
            aux: BTreeMap::new(),
        });
    }
    Ok(out)
}

/// Least-squares line through `(ln size, ln median queries)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalingFit {
    pub exponent: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub points: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FitError {
    #[error("need at least {need_sizes} sizes with {need_successes} successes each; usable sizes: {have}")]
    InsufficientData {
        have: usize,
        need_sizes: usize,
        need_successes: usize,
    },
}

pub const FIT_MIN_SIZES: usize = 3;
pub const FIT_MIN_SUCCESSES: usize = 10;

pub fn median(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    let m = values.len() / 2;
    if values.len() % 2 == 1 {
        values[m]
    } else {
        (values[m - 1] + values[m]) / 2.0
    }
}

/// Fits median queries of successful trials against size. Every size present
/// must have at least ten successes, and there must be three sizes.
pub fn fit_scaling(records: &[TrialRecord]) -> Result<ScalingFit, FitError> {
    let mut by_size: BTreeMap<usize, Vec<f64>> = BTreeMap::new();
    for r in records {
        let e = by_size.entry(r.n).or_default();
        if r.success {
            e.push(r.queries as f64);
        }
    }
    let usable = by_size.values().filter(|q| q.len() >= FIT_MIN_SUCCESSES).count();
    if by_size.len() < FIT_MIN_SIZES || usable < by_size.len() {
        return Err(FitError::InsufficientData {
            have: usable,
            need_sizes: FIT_MIN_SIZES,
            need_successes: FIT_MIN_SUCCESSES,
        });
    }
    let points: Vec<(f64, f64)> = by_size
        .into_iter()
        .map(|(n, mut q)| ((n as f64).ln(), median(&mut q).ln()))
        .collect();
    Ok(fit_points(points))
}

/// Ordinary least squares on the given points.
pub fn fit_points(points: Vec<(f64, f64)>) -> ScalingFit {
    let k = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / k;
    let my = points.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let intercept = my - slope * mx;
    let ss_tot: f64 = points.iter().map(|p| (p.1 - my).powi(2)).sum();
    let ss_res: f64 = points.iter().map(|p| (p.1 - intercept - slope * p.0).powi(2)).sum();
    let r_squared = if ss_res <= 1e-12 * ss_tot.max(1.0) {
        1.0
    } else if ss_tot > 0.0 {
        (1.0 - ss_res / ss_tot).clamp(0.0, 1.0)
    } else {
        0.0
    };
    ScalingFit {
        exponent: slope,
        intercept,
        r_squared,
        points,
    }
}
