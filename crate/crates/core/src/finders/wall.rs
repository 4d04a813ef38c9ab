use std::collections::{BTreeSet, HashMap};

use rand::Rng;

use super::color::{identify_inner, tally, ColorEstimate, SinkWalkConfig, Verdict};
use super::path::{default_budget, grow_blue_path};
use super::{conclude, FinderOutcome, Halt, Probe};
use crate::graph::{BrParams, Vertex};
use crate::oracle::{Oracle, OracleError};

/// The depth-`t` BFS frontier below a vertex believed to be red. If the guess
/// `Red(i)` was right, every member sits in layer `i + t`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Wall {
    pub origin: Vertex,
    pub layer: usize,
    pub members: Vec<Vertex>,
}

/// Largest `t >= 1` with `d^t <= p`.
pub fn wall_depth(outdeg: usize, p: usize) -> usize {
    let mut t = 0;
    let mut reach = 1usize;
    while let Some(next) = reach.checked_mul(outdeg) {
        if next > p {
            break;
        }
        reach = next;
        t += 1;
    }
    t.max(1)
}

/// `W * ceil(log2 W)`.
pub fn default_wall_p(params: &BrParams) -> usize {
    let w = params.width();
    w * (usize::BITS - (w - 1).leading_zeros()).max(1) as usize
}

/// `round(N^(1/4) * L / sqrt(N + L^2))`, at least one.
pub fn default_num_walls(params: &BrParams) -> usize {
    let n = params.n_blue() as f64;
    let l = params.layers() as f64;
    ((n.powf(0.25) * l / (n + l * l).sqrt()).round() as usize).max(1)
}

pub(crate) fn build_wall_inner(
    probe: &mut Probe<'_, '_>,
    v: Vertex,
    origin_layer: usize,
    depth: usize,
) -> Result<Option<Wall>, Halt> {
    let mut frontier = vec![v];
    let mut seen = BTreeSet::from([v]);
    for _ in 0..depth {
        let mut next = Vec::new();
        for &u in &frontier {
            let out = probe.look(u)?;
            if out.is_empty() {
                return Ok(None);
            }
            next.extend(out.iter().copied().filter(|&c| seen.insert(c)));
        }
        frontier = next;
    }
    frontier.sort_unstable();
    Ok(Some(Wall {
        origin: v,
        layer: origin_layer + depth,
        members: frontier,
    }))
}

/// BFS of depth `depth` from `v`. `None` if the search queried a sink, which
/// means the layer guess for `v` was too deep.
pub fn build_wall(
    oracle: &mut Oracle<'_>,
    v: Vertex,
    origin_layer: usize,
    depth: usize,
) -> Result<Option<Wall>, OracleError> {
    let mut probe = Probe::unlimited(oracle);
    build_wall_inner(&mut probe, v, origin_layer, depth).map_err(|h| match h {
        Halt::Oracle(e) => e,
        Halt::Deadline => OracleError::DeadlineExceeded,
        Halt::Budget => unreachable!("unlimited probe"),
    })
}

/// Walls with a membership index. A vertex claimed by two walls keeps the
/// first layer it was given.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct WallSet {
    walls: Vec<Wall>,
    index: HashMap<Vertex, usize>,
}

impl WallSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, wall: Wall) {
        for &m in &wall.members {
            self.index.entry(m).or_insert(wall.layer);
        }
        self.walls.push(wall);
    }

    pub fn walls(&self) -> &[Wall] {
        &self.walls
    }

    pub fn len(&self) -> usize {
        self.walls.len()
    }

    pub fn is_empty(&self) -> bool {
        self.walls.is_empty()
    }

    pub fn layer_of(&self, v: Vertex) -> Option<usize> {
        self.index.get(&v).copied()
    }

    pub fn member_count(&self) -> usize {
        self.index.len()
    }

    pub fn distinct_layers(&self) -> BTreeSet<usize> {
        self.walls.iter().map(|w| w.layer).collect()
    }
}

/// Turns implied layers (wall layer minus walk length, with a sink counting
/// as layer `L`) into a verdict. Red if at least `red_share` of the walks
/// agree on a positive layer. Blue if the agreement is nonpositive, or if at
/// least `min_distinct` values each occur `min_repeat` times. Otherwise
/// unknown.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WallVerdictRule {
    pub red_share: f64,
    pub min_distinct: usize,
    pub min_repeat: usize,
}

impl Default for WallVerdictRule {
    fn default() -> Self {
        Self {
            red_share: 0.8,
            min_distinct: 2,
            min_repeat: 1,
        }
    }
}

impl WallVerdictRule {
    pub fn verdict(&self, implied: &[i64]) -> Verdict {
        if implied.is_empty() {
            return Verdict::Unknown;
        }
        let counts = tally(implied);
        let (&mode, &top) = counts
            .iter()
            .max_by_key(|&(v, c)| (*c, std::cmp::Reverse(*v)))
            .expect("nonempty");
        if top as f64 >= self.red_share * implied.len() as f64 {
            return if mode >= 1 { Verdict::Red(mode as usize) } else { Verdict::Blue };
        }
        let spread = counts.values().filter(|&&c| c >= self.min_repeat).count();
        if spread >= self.min_distinct {
            Verdict::Blue
        } else {
            Verdict::Unknown
        }
    }
}

/// Settings for the wall-based finder.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Alg2Config {
    pub num_walls: usize,
    pub wall_p: usize,
    pub num_walks: usize,
    pub max_walk_len: usize,
    pub path_target_mult: f64,
    pub budget: u64,
    pub rule: WallVerdictRule,
}

impl Alg2Config {
    pub fn for_params(params: &BrParams) -> Self {
        Self {
            num_walls: default_num_walls(params),
            wall_p: default_wall_p(params),
            num_walks: 6,
            max_walk_len: 3 * params.layers(),
            path_target_mult: 2.0,
            budget: default_budget(params),
            rule: WallVerdictRule::default(),
        }
    }

    pub fn depth(&self, params: &BrParams) -> usize {
        wall_depth(params.outdeg(), self.wall_p)
    }
}

/// Everything a wall-based run produced.
#[derive(Debug, Clone)]
pub struct Alg2Report {
    pub outcome: FinderOutcome,
    pub walls: WallSet,
    /// Child identifications made while growing the path.
    pub verdicts: Vec<(Vertex, ColorEstimate)>,
}

/// Walks from `v` until it meets a wall member or a sink. Returns the number
/// of steps and the implied layer of `v`, or `None` on cutoff.
fn wall_walk<R: Rng + ?Sized>(
    probe: &mut Probe<'_, '_>,
    v: Vertex,
    walls: &WallSet,
    layers: usize,
    max_len: usize,
    rng: &mut R,
) -> Result<Option<(usize, i64)>, Halt> {
    let mut cur = v;
    let mut steps = 0usize;
    loop {
        if let Some(layer) = walls.layer_of(cur) {
            return Ok(Some((steps, layer as i64 - steps as i64)));
        }
        let out = probe.look(cur)?;
        if out.is_empty() {
            return Ok(Some((steps, layers as i64 - steps as i64)));
        }
        if steps == max_len {
            return Ok(None);
        }
        cur = out[rng.gen_range(0..out.len())];
        steps += 1;
    }
}

pub(crate) fn identify_by_walls<R: Rng + ?Sized>(
    probe: &mut Probe<'_, '_>,
    v: Vertex,
    walls: &WallSet,
    params: &BrParams,
    cfg: &Alg2Config,
    rng: &mut R,
) -> Result<ColorEstimate, Halt> {
    let mut lengths = Vec::new();
    let mut implied = Vec::new();
    for _ in 0..cfg.num_walks {
        probe.bump("walks", 1);
        if let Some((steps, layer)) = wall_walk(probe, v, walls, params.layers(), cfg.max_walk_len, rng)? {
            lengths.push(steps);
            implied.push(layer);
        }
    }
    probe.bump("color_ids", 1);
    Ok(ColorEstimate {
        verdict: cfg.rule.verdict(&implied),
        lengths,
        walks_used: cfg.num_walks,
    })
}

fn stage1<R: Rng + ?Sized>(
    probe: &mut Probe<'_, '_>,
    params: &BrParams,
    cfg: &Alg2Config,
    walls: &mut WallSet,
    rng: &mut R,
) -> Result<(), Halt> {
    let layers = params.layers();
    let depth = cfg.depth(params);
    if depth >= layers {
        return Ok(());
    }
    let walk_cfg = SinkWalkConfig {
        num_walks: cfg.num_walks,
        max_walk_len: cfg.max_walk_len,
        layers,
    };
    let n = probe.vertex_count();
    while walls.len() < cfg.num_walls {
        let v = rng.gen_range(0..n);
        let Verdict::Red(i) = identify_inner(probe, v, &walk_cfg, rng)?.verdict else {
            continue;
        };
        if i + depth > layers - 1 {
            probe.bump("wall_skips", 1);
            continue;
        }
        match build_wall_inner(probe, v, i, depth)? {
            Some(w) => {
                probe.bump("walls_built", 1);
                walls.insert(w);
            }
            None => probe.bump("wall_failures", 1),
        }
    }
    Ok(())
}

/// Wall-based finder: stage 1 builds `num_walls` walls below vertices
/// identified as red, stage 2 grows a blue path identifying colors by
/// walking to the nearest wall.
pub fn run_algorithm2<R: Rng + ?Sized>(
    oracle: &mut Oracle<'_>,
    params: &BrParams,
    cfg: &Alg2Config,
    rng: &mut R,
) -> Alg2Report {
    let mut probe = Probe::new(oracle, cfg.budget);
    let mut walls = WallSet::new();
    let mut verdicts = Vec::new();
    for key in ["walls_built", "wall_failures", "wall_skips"] {
        probe.bump(key, 0);
    }
    let s1 = stage1(&mut probe, params, cfg, &mut walls, rng);
    let stage1_queries = probe.spent();
    probe.bump("stage1_queries", stage1_queries);
    probe.bump("wall_members", walls.member_count() as u64);
    probe.bump("wall_layers_distinct", walls.distinct_layers().len() as u64);

    let result = s1.and_then(|()| {
        let target = (cfg.path_target_mult * (params.n_blue() as f64).sqrt()).ceil() as usize;
        let mut identify =
            |p: &mut Probe<'_, '_>, v: Vertex, r: &mut R| identify_by_walls(p, v, &walls, params, cfg, r);
        grow_blue_path(&mut probe, target, &mut identify, &mut verdicts, rng)
    });
    let stage2_queries = probe.spent() - stage1_queries;
    probe.bump("stage2_queries", stage2_queries);
    Alg2Report {
        outcome: conclude(probe, result),
        walls,
        verdicts,
    }
}
