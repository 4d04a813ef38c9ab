#![allow(dead_code)]

use std::path::PathBuf;

use brcycle::graph::BrPair;
use brcycle::io::{load_graph, GraphFile};

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

/// The hand-built N=4, L=4, W=2, d=2 instance.
pub fn small_pair() -> BrPair {
    match load_graph(&fixture_path("br_n4.txt")).expect("fixture parses") {
        GraphFile::Br(p) => p,
        GraphFile::Simple(_) => panic!("fixture is colored"),
    }
}
