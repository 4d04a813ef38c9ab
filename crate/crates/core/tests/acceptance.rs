//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Two criteria cannot hold as stated and are reported without failing the
//! run. Criterion 3 asks every one of 50 tiny BR graphs to be cyclic, but about
//! 2% of them are acyclic. Criterion 9 compares the naive coloring law with the
//! exact conditional law at N=4, where the two are far apart. Every other
//! criterion must pass.

mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use brcycle::analysis::*;
use brcycle::finders::*;
use brcycle::graph::*;
use brcycle::harness::*;
use brcycle::oracle::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const KNOWN_UNATTAINABLE: &[u32] = &[3, 9];

#[derive(Default)]
struct Soundness {
    claimed: usize,
    rejected: usize,
}

impl Soundness {
    fn check(&mut self, graph: &Digraph, cycle: Option<&Vec<Vertex>>) {
        if let Some(c) = cycle {
            self.claimed += 1;
            if !verify_cycle(graph, c) {
                self.rejected += 1;
            }
        }
    }

    fn records(&mut self, recs: &[TrialRecord]) {
        for r in recs {
            if r.success || r.rejected_cycle {
                self.claimed += 1;
            }
            if r.rejected_cycle {
                self.rejected += 1;
            }
        }
    }
}

struct Outcome {
    pass: bool,
    detail: String,
}

fn timed(limit: Option<Duration>, f: impl FnOnce() -> Outcome) -> (Outcome, Duration) {
    let t = Instant::now();
    let mut out = f();
    let took = t.elapsed();
    if let Some(l) = limit {
        if took > l {
            out.pass = false;
            out.detail.push_str(&format!("; over the {}s limit", l.as_secs()));
        }
    }
    (out, took)
}

fn generator_validity() -> Outcome {
    let mut shapes = Vec::new();
    for n in [4usize, 16, 64, 256, 2048] {
        for l in (2..=2 * n).step_by(2) {
            if (2 * n) % l == 0 && 2 * n / l >= 2 {
                let w = 2 * n / l;
                shapes.push(BrParams::new(n, l, w, DEFAULT_OUTDEG.min(w)).unwrap());
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut bad = 0;
    for i in 0..1000 {
        let pair = gen_br_pair(&shapes[i % shapes.len()], &mut rng).unwrap();
        bad += validate_br(&pair).len();
    }
    Outcome {
        pass: bad == 0,
        detail: format!("1000 pairs over {} shapes, {bad} violations", shapes.len()),
    }
}

fn fas_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut mismatches = 0;
    for _ in 0..200 {
        let n = rng.gen_range(1..=8);
        let m = rng.gen_range(0..=3 * n);
        let edges: Vec<_> = (0..m)
            .map(|_| (rng.gen_range(0..n), rng.gen_range(0..n)))
            .filter(|(u, v)| u != v)
            .collect();
        let a = min_fas_exact_edges(n, &edges).unwrap();
        let b = min_fas_bruteforce_edges(n, &edges).unwrap();
        if a.min_fas != b.min_fas || backedges(n, &edges, &a.witness_ordering) != a.min_fas {
            mismatches += 1;
        }
    }
    Outcome {
        pass: mismatches == 0,
        detail: format!("200 digraphs, {mismatches} mismatches"),
    }
}

fn is_acyclic(g: &Digraph) -> bool {
    let mut indeg = g.in_degrees();
    let mut ready: Vec<Vertex> = (0..g.vertex_count()).filter(|&v| indeg[v] == 0).collect();
    let mut removed = 0;
    while let Some(u) = ready.pop() {
        removed += 1;
        for &v in g.out(u) {
            indeg[v] -= 1;
            if indeg[v] == 0 {
                ready.push(v);
            }
        }
    }
    removed == g.vertex_count()
}

fn farness() -> Outcome {
    let params = BrParams::new(6, 2, 6, 4).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut eps = Vec::new();
    let mut acyclic = 0;
    for _ in 0..50 {
        let pair = gen_br_pair(&params, &mut rng).unwrap();
        let r = min_fas_exact(&pair.graph).unwrap();
        if r.min_fas == 0 {
            acyclic += 1;
        }
        eps.push(r.epsilon);
    }
    let lo = eps.iter().cloned().fold(f64::INFINITY, f64::min);
    let extra = 20_000;
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    let hits = (0..extra).filter(|_| is_acyclic(&gen_br_pair(&params, &mut rng).unwrap().graph)).count();
    let p = hits as f64 / extra as f64;
    Outcome {
        pass: acyclic == 0,
        detail: format!(
            "50 pairs at V=18, {acyclic} acyclic, median eps {:.4}, min eps {lo:.4}; \
             {hits}/{extra} more pairs are acyclic, so all 50 cyclic has chance {:.2}",
            median(&mut eps),
            (1.0 - p).powi(50)
        ),
    }
}

fn birthday_baseline(sound: &mut Soundness, csvs: &mut Vec<(ExperimentConfig, String)>) -> Outcome {
    let cfg = ExperimentConfig::new(Dist::Brsimple, Algo::Walk, vec![1_000, 10_000, 100_000], 100, 400);
    let recs = run_experiment(&cfg).unwrap();
    sound.records(&recs);
    let mut rates = Vec::new();
    for &n in &cfg.sizes {
        let ok = recs.iter().filter(|r| r.n == n && r.success).count();
        rates.push((n, ok));
    }
    let fit = fit_scaling(&recs);
    let exp = fit.as_ref().map(|f| f.exponent).unwrap_or(f64::NAN);
    csvs.push((cfg, to_csv_string(&recs)));
    Outcome {
        pass: rates.iter().all(|&(_, ok)| ok >= 95) && (0.4..=0.6).contains(&exp),
        detail: format!("successes per size {rates:?}, exponent {exp:.3}"),
    }
}

fn standard_pair(seed: u64) -> BrPair {
    let params = paper_params(1 << 14).unwrap().with_outdeg(8).unwrap();
    gen_br_pair(&params, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap()
}

fn surprise_rate() -> Outcome {
    let mut within = 0;
    let mut counts = Vec::new();
    let mut bound = 0.0;
    for seed in 0..50 {
        let pair = standard_pair(500 + seed);
        let (d, w) = (8.0, pair.params.width() as f64);
        let q = pair.params.width() / 4;
        bound = 2.0 * (2.0 * d * d * (q * q) as f64 / w);
        let mut oracle = Oracle::new(&pair, Model::ColorRevelation);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        while oracle.query_count() < q as u64 {
            let v = rng.gen_range(0..pair.graph.vertex_count());
            if !oracle.is_queried(v) {
                oracle.query_vertex(v).unwrap();
            }
        }
        let s = oracle.history().surprise_flags().iter().filter(|&&b| b).count();
        counts.push(s as f64);
        if s as f64 <= bound {
            within += 1;
        }
    }
    Outcome {
        pass: within * 100 >= 95 * 50,
        detail: format!(
            "{within}/50 runs within {bound:.0}, median count {:.0} (the bound is loose at these sizes)",
            median(&mut counts)
        ),
    }
}

/// Queries chosen three ways: uniform vertices, random walks that restart
/// at sinks, and breadth-first sweeps from random starts.
fn mixed_queries(oracle: &mut Oracle<'_>, strategy: usize, q: usize, rng: &mut ChaCha8Rng) {
    let n = oracle.vertex_count();
    let mut queue = std::collections::VecDeque::new();
    let mut head = rng.gen_range(0..n);
    while (oracle.query_count() as usize) < q {
        let v = match strategy {
            0 => rng.gen_range(0..n),
            1 => head,
            _ => queue.pop_front().unwrap_or_else(|| rng.gen_range(0..n)),
        };
        let out = if oracle.is_queried(v) { oracle.recall(v) } else { oracle.query_vertex(v) }.unwrap();
        if out.is_empty() {
            head = rng.gen_range(0..n);
        } else {
            head = out[rng.gen_range(0..out.len())];
        }
        queue.extend(out.iter().copied().filter(|&u| !oracle.is_queried(u)));
    }
}

fn blue_path_bound() -> Outcome {
    let limit = 4 * 14;
    let (mut epochs, mut long, mut longest) = (0, 0, 0);
    let mut seed = 0;
    while epochs < 1000 {
        let pair = standard_pair(600 + seed);
        let mut oracle = Oracle::new(&pair, Model::ColorRevelation).with_lenient(true);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        mixed_queries(&mut oracle, seed as usize % 3, 400, &mut rng);
        let records = oracle.history().records();
        for e in oracle.epochs().closed() {
            let p = max_blue_path(&knowledge_graph_of(&records[e.range.clone()]), &pair.coloring);
            epochs += 1;
            longest = longest.max(p);
            if p > limit {
                long += 1;
            }
        }
        seed += 1;
    }
    Outcome {
        pass: long * 100 <= epochs,
        detail: format!(
            "{epochs} closed epochs, {long} with a blue path over {limit}, longest {longest} (epochs hold at most {} queries)",
            standard_pair(0).params.epoch_cap()
        ),
    }
}

fn algorithm1(sound: &mut Soundness, csvs: &mut Vec<(ExperimentConfig, String)>) -> Outcome {
    let mut cfg = ExperimentConfig::new(Dist::Br, Algo::Alg1, vec![1 << 17], 20, 700);
    cfg.layers = Some(16);
    cfg.outdeg = Some(8);
    let recs = run_experiment(&cfg).unwrap();
    sound.records(&recs);
    let ok = recs.iter().filter(|r| r.success).count();
    let mut q: Vec<f64> = recs.iter().filter(|r| r.success).map(|r| r.queries as f64).collect();
    let med = if q.is_empty() { f64::NAN } else { median(&mut q) };
    let budget = 100.0 * 16.0 * ((1u64 << 17) as f64).sqrt();
    csvs.push((cfg, to_csv_string(&recs)));
    Outcome {
        pass: ok * 100 >= 80 * 20,
        detail: format!("{ok}/20 verified cycles, median {med:.0} queries, budget {budget:.0}"),
    }
}

fn algorithm2(sound: &mut Soundness) -> Outcome {
    let params = BrParams::new(1 << 14, 32, 1024, 8).unwrap();
    let mut cfg = Alg2Config::for_params(&params);
    cfg.num_walls = 4;
    let (mut right, mut total, mut unknown, mut found, mut trials) = (0, 0, 0, 0, 0);
    while total < 500 || trials < 5 {
        let mut rng = ChaCha8Rng::seed_from_u64(800 + trials);
        let pair = gen_br_pair(&params, &mut rng).unwrap();
        let mut oracle = Oracle::new(&pair, Model::Vertex).with_lenient(true);
        let report = run_algorithm2(&mut oracle, &params, &cfg, &mut rng);
        sound.check(&pair.graph, report.outcome.cycle.as_ref());
        found += report.outcome.found() as usize;
        for (v, est) in &report.verdicts {
            total += 1;
            right += est.verdict.matches(pair.coloring.color(*v)) as usize;
            unknown += (est.verdict == Verdict::Unknown) as usize;
        }
        trials += 1;
    }
    Outcome {
        pass: right * 100 >= 95 * total,
        detail: format!(
            "{right}/{total} verdicts agree ({:.1}%), {unknown} unknown, cycles in {found}/{trials} runs",
            100.0 * right as f64 / total as f64
        ),
    }
}

/// Worst ratio between the empirical naive law and the exact law, over the
/// union of both supports. Mass on a coloring the exact law forbids gives
/// an infinite ratio.
fn law_ratio(
    history: &QueryHistory,
    epochs: &EpochDecomposition,
    revealed: &PartialColoring,
    params: &BrParams,
    samples: usize,
    seed: u64,
) -> (f64, f64, usize) {
    let exact = enumerate_conditional_colorings(history, revealed, params).unwrap();
    let (prior, kg) = split_current_epoch(history, epochs);
    let trees = classify_trees(&kg, &prior, revealed).unwrap();
    let forced = forced_coloring(&trees, &prior, revealed, params.layers()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts: BTreeMap<Vec<Color>, usize> = BTreeMap::new();
    for _ in 0..samples {
        let s = sample_naive_coloring(&trees, &forced, params, &mut rng).unwrap();
        let key = exact.key_of(&s).expect("sample covers the knowledge graph");
        *counts.entry(key).or_default() += 1;
    }
    let keys: BTreeSet<_> = exact.probs.keys().chain(counts.keys()).cloned().collect();
    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    for k in &keys {
        let p = exact.probs.get(k).copied().unwrap_or(0.0);
        let e = counts.get(k).copied().unwrap_or(0) as f64 / samples as f64;
        let r = if p == 0.0 { f64::INFINITY } else { e / p };
        lo = lo.min(r);
        hi = hi.max(r);
    }
    (lo, hi, keys.len())
}

fn naive_fidelity() -> Outcome {
    let pair = common::small_pair();
    let sequences: [&[Vertex]; 8] = [&[0], &[10], &[0, 8, 1], &[0, 8, 4], &[9, 11], &[3, 7, 0], &[3, 7, 9], &[5]];
    let mut good = 0;
    let mut parts = Vec::new();
    for (i, seq) in sequences.iter().enumerate() {
        let mut oracle = Oracle::new(&pair, Model::ColorRevelation);
        for &v in *seq {
            oracle.query_vertex(v).unwrap();
        }
        let (lo, hi, support) =
            law_ratio(oracle.history(), oracle.epochs(), oracle.revealed(), &pair.params, 100_000, i as u64);
        if lo >= 0.75 && hi <= 1.33 {
            good += 1;
        }
        parts.push(format!("{seq:?}: {support} colorings, ratio [{lo:.2}, {hi:.2}]"));
    }
    // Same single query with many more colors per class.
    let big = BrParams::new(64, 4, 32, 2).unwrap();
    let h = QueryHistory::from_records(vec![QueryRecord::new(0, vec![1, 2])]).unwrap();
    let (lo, hi, _) = law_ratio(&h, &decompose_epochs(&h, big.epoch_cap()), &PartialColoring::new(), &big, 100_000, 99);
    Outcome {
        pass: good == sequences.len(),
        detail: format!(
            "{good}/{} pairs within [0.75, 1.33]; {}; for comparison one query at N=64 gives [{lo:.2}, {hi:.2}]",
            sequences.len(),
            parts.join("; ")
        ),
    }
}

fn main() -> ExitCode {
    let mut sound = Soundness::default();
    let mut csvs = Vec::new();
    let secs = |s| Some(Duration::from_secs(s));
    let mut results: Vec<(u32, &str, Outcome, Duration)> = Vec::new();
    let mut record = |id, name, (o, t): (Outcome, Duration)| {
        let line = format!(
            "criterion {id:>2} {:<4} {name}: {} [{:.1}s]",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail,
            t.as_secs_f64()
        );
        println!("{line}");
        results.push((id, name, o, t));
    };
    record(1, "generator validity", timed(secs(30), generator_validity));
    record(2, "FAS exact vs brute force", timed(secs(60), fas_equivalence));
    record(3, "farness of small BR graphs", timed(None, farness));
    record(4, "random-walk baseline", timed(secs(300), || birthday_baseline(&mut sound, &mut csvs)));
    record(5, "surprise rate", timed(None, surprise_rate));
    record(6, "blue paths within epochs", timed(None, blue_path_bound));
    record(7, "algorithm 1", timed(secs(600), || algorithm1(&mut sound, &mut csvs)));
    record(8, "algorithm 2 color verdicts", timed(None, || algorithm2(&mut sound)));
    record(9, "naive vs exact coloring law", timed(secs(120), naive_fidelity));
    let s = Outcome {
        pass: sound.rejected == 0,
        detail: format!("{} claimed cycles, {} rejected", sound.claimed, sound.rejected),
    };
    record(10, "soundness", (s, Duration::ZERO));
    let repro = timed(None, || {
        let same = csvs.iter().filter(|(cfg, csv)| &to_csv_string(&run_experiment(cfg).unwrap()) == csv).count();
        Outcome {
            pass: same == csvs.len(),
            detail: format!("{same}/{} reruns byte-identical", csvs.len()),
        }
    });
    record(11, "reproducibility", repro);

    let failed: Vec<u32> = results.iter().filter(|r| !r.2.pass).map(|r| r.0).collect();
    let unexpected: Vec<u32> = failed.iter().copied().filter(|id| !KNOWN_UNATTAINABLE.contains(id)).collect();
    println!(
        "{} of {} criteria pass; known unattainable: {KNOWN_UNATTAINABLE:?}",
        results.len() - failed.len(),
        results.len()
    );
    if unexpected.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("unexpected failures: {unexpected:?}");
        ExitCode::FAILURE
    }
}
