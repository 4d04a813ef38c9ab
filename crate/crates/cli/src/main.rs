use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use brcycle::graph::{gen_br_pair, gen_br_simple, validate_br};
use brcycle::harness::{fit_scaling, read_csv, run_experiment, write_csv, Algo, Dist, ExperimentConfig};
use brcycle::io::{load_graph, save_graph, write_graph, GraphFile};
use clap::{Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Parser)]
#[command(name = "brcycle", version, about = "Cycle-finding experiments on layered random digraphs")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a sweep and write one CSV row per trial.
    Run(RunArgs),
    /// Generate one instance and write it in the text graph format.
    Gen(GenArgs),
    /// Check a graph file against the layered-coloring edge rules.
    Validate { path: PathBuf },
    /// Fit median queries against size from a CSV written by `run`.
    Fit { path: PathBuf },
}

#[derive(clap::Args)]
struct RunArgs {
    #[arg(long, default_value = "br")]
    dist: Dist,
    #[arg(long, default_value = "alg1")]
    algo: Algo,
    /// Sizes, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    n: Vec<usize>,
    #[arg(long)]
    layers: Option<usize>,
    #[arg(long)]
    d: Option<usize>,
    #[arg(long, default_value_t = 10)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    budget: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    num_walks: Option<usize>,
    #[arg(long)]
    walls: Option<usize>,
    #[arg(long)]
    wall_p: Option<usize>,
    #[arg(long)]
    path_target_mult: Option<f64>,
    #[arg(long, default_value_t = 4)]
    bfs_reps: usize,
    /// Per-trial wall-clock limit in seconds.
    #[arg(long, default_value_t = 60)]
    deadline: u64,
    /// Fill the ms column (makes output vary between runs).
    #[arg(long)]
    timing: bool,
}

#[derive(clap::Args)]
struct GenArgs {
    #[arg(long, default_value = "br")]
    dist: Dist,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    layers: Option<usize>,
    #[arg(long)]
    d: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn sink(out: &Option<PathBuf>) -> io::Result<Box<dyn Write>> {
    Ok(match out {
        Some(p) => Box::new(File::create(p)?),
        None => Box::new(io::stdout().lock()),
    })
}

fn config_error(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(2)
}

fn run(a: RunArgs) -> ExitCode {
    let mut cfg = ExperimentConfig::new(a.dist, a.algo, a.n, a.trials, a.seed);
    cfg.layers = a.layers;
    cfg.outdeg = a.d;
    cfg.budget = a.budget;
    cfg.num_walks = a.num_walks;
    cfg.walls = a.walls;
    cfg.wall_p = a.wall_p;
    cfg.path_target_mult = a.path_target_mult;
    cfg.bfs_repetitions = a.bfs_reps;
    cfg.deadline = Duration::from_secs(a.deadline);
    cfg.timing = a.timing;
    let records = match run_experiment(&cfg) {
        Ok(r) => r,
        Err(e) => return config_error(e),
    };
    let rejected = records.iter().filter(|r| r.rejected_cycle).count();
    let result = sink(&a.out).map_err(|e| e.to_string()).and_then(|w| write_csv(&records, w).map_err(|e| e.to_string()));
    if let Err(e) = result {
        eprintln!("error: {e}");
        return ExitCode::FAILURE;
    }
    let ok = records.iter().filter(|r| r.success).count();
    eprintln!("{ok}/{} trials found a verified cycle", records.len());
    if rejected > 0 {
        eprintln!("error: {rejected} claimed cycles failed verification");
        return ExitCode::FAILURE;
    }
    ExitCode::SUCCESS
}

fn gen(a: GenArgs) -> ExitCode {
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let file = match a.dist {
        Dist::Br => {
            let mut cfg = ExperimentConfig::new(Dist::Br, Algo::Walk, vec![a.n], 1, a.seed);
            cfg.layers = a.layers;
            cfg.outdeg = a.d;
            let params = match cfg.br_params(a.n) {
                Ok(p) => p,
                Err(e) => return config_error(e),
            };
            GraphFile::Br(gen_br_pair(&params, &mut rng).expect("validated parameters"))
        }
        Dist::Brsimple => match gen_br_simple(a.n, a.d.unwrap_or(3), &mut rng) {
            Ok(g) => GraphFile::Simple(g),
            Err(e) => return config_error(e),
        },
    };
    let written = match &a.out {
        Some(p) => save_graph(p, &file),
        None => io::stdout().write_all(write_graph(&file).as_bytes()),
    };
    match written {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn validate(path: PathBuf) -> ExitCode {
    match load_graph(&path) {
        Err(e) => config_error(e),
        Ok(GraphFile::Simple(g)) => {
            println!("uncolored graph: {} vertices, outdegree {}", g.vertex_count(), g.outdeg());
            ExitCode::SUCCESS
        }
        Ok(GraphFile::Br(pair)) => {
            let v = validate_br(&pair);
            for x in &v {
                println!("{x}");
            }
            if v.is_empty() {
                println!("ok");
                ExitCode::SUCCESS
            } else {
                println!("{} violations", v.len());
                ExitCode::FAILURE
            }
        }
    }
}

fn fit(path: PathBuf) -> ExitCode {
    let records = match File::open(&path).map_err(|e| e.to_string()).and_then(|f| read_csv(f).map_err(|e| e.to_string())) {
        Ok(r) => r,
        Err(e) => return config_error(e),
    };
    match fit_scaling(&records) {
        Ok(f) => {
            println!("exponent {:.4}", f.exponent);
            println!("intercept {:.4}", f.intercept);
            println!("r_squared {:.4}", f.r_squared);
            for (x, y) in f.points {
                println!("size {:.0} median {:.1}", x.exp(), y.exp());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn main() -> ExitCode {
    match Cli::parse().cmd {
        Cmd::Run(a) => run(a),
        Cmd::Gen(a) => gen(a),
        Cmd::Validate { path } => validate(path),
        Cmd::Fit { path } => fit(path),
    }
}
