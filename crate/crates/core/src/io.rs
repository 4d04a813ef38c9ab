//! Plain-text graph files.
//!
//! ```text
//! BR v=12 d=2 L=4 W=2 N=4
//! colors: b r1 r2 ...
//! 0: 5 7
//! 1:
//! ```
//!
//! A `BRS v=<V> d=<d>` header starts an uncolored file (duplicate targets
//! allowed) with no `colors:` line. Blank lines and `#` comments are skipped.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use thiserror::Error;

use crate::graph::{BrPair, BrParams, Color, Coloring, Digraph, Vertex};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GraphFile {
    Br(BrPair),
    Simple(Digraph),
}

impl GraphFile {
    pub fn graph(&self) -> &Digraph {
        match self {
            GraphFile::Br(p) => &p.graph,
            GraphFile::Simple(g) => g,
        }
    }
}

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn perr(line: usize, msg: impl Into<String>) -> LoadError {
    LoadError::Parse { line, msg: msg.into() }
}

pub fn write_graph(file: &GraphFile) -> String {
    let mut s = String::new();
    match file {
        GraphFile::Br(p) => {
            let pr = &p.params;
            writeln!(
                s,
                "BR v={} d={} L={} W={} N={}",
                p.graph.vertex_count(),
                pr.outdeg(),
                pr.layers(),
                pr.width(),
                pr.n_blue()
            )
            .unwrap();
            let colors: Vec<String> = p.coloring.colors().iter().map(Color::to_string).collect();
            writeln!(s, "colors: {}", colors.join(" ")).unwrap();
        }
        GraphFile::Simple(g) => writeln!(s, "BRS v={} d={}", g.vertex_count(), g.outdeg()).unwrap(),
    }
    let g = file.graph();
    for u in 0..g.vertex_count() {
        s.push_str(&u.to_string());
        s.push(':');
        for v in g.out(u) {
            write!(s, " {v}").unwrap();
        }
        s.push('\n');
    }
    s
}

fn header_fields(line: usize, rest: &str) -> Result<BTreeMap<String, usize>, LoadError> {
    rest.split_whitespace()
        .map(|kv| {
            let (k, v) = kv.split_once('=').ok_or_else(|| perr(line, format!("expected key=value, got {kv:?}")))?;
            let v = v.parse().map_err(|_| perr(line, format!("bad number in {kv:?}")))?;
            Ok((k.to_string(), v))
        })
        .collect()
}

pub fn parse_graph(text: &str) -> Result<GraphFile, LoadError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (hl, header) = lines.next().ok_or_else(|| perr(1, "empty file"))?;
    let (kind, rest) = header.split_once(' ').unwrap_or((header, ""));
    let fields = header_fields(hl, rest)?;
    let get = |k: &str| fields.get(k).copied().ok_or_else(|| perr(hl, format!("header lacks {k}=")));
    let v_count = get("v")?;
    let d = get("d")?;
    let params = match kind {
        "BR" => Some(BrParams::new(get("N")?, get("L")?, get("W")?, d).map_err(|e| perr(hl, e.to_string()))?),
        "BRS" => None,
        other => return Err(perr(hl, format!("unknown header {other:?}"))),
    };
    if let Some(p) = &params {
        if p.vertex_count() != v_count {
            return Err(perr(hl, format!("v={v_count} but parameters give {}", p.vertex_count())));
        }
    }

    let coloring = match &params {
        Some(p) => {
            let (cl, line) = lines.next().ok_or_else(|| perr(hl + 1, "missing colors line"))?;
            let body = line
                .strip_prefix("colors:")
                .ok_or_else(|| perr(cl, "expected \"colors:\""))?;
            let colors: Vec<Color> = body
                .split_whitespace()
                .map(|t| t.parse().map_err(|_| perr(cl, format!("bad color {t:?}"))))
                .collect::<Result<_, _>>()?;
            if colors.len() != v_count {
                return Err(perr(cl, format!("{} colors for {v_count} vertices", colors.len())));
            }
            Some(Coloring::from_colors(colors, p.layers()).map_err(|m| perr(cl, m))?)
        }
        None => None,
    };

    let mut lists: Vec<Option<Vec<Vertex>>> = vec![None; v_count];
    let mut last_line = hl;
    for (ln, line) in lines {
        last_line = ln;
        let (u, targets) = line.split_once(':').ok_or_else(|| perr(ln, "expected \"u: targets\""))?;
        let u: Vertex = u.trim().parse().map_err(|_| perr(ln, format!("bad vertex {u:?}")))?;
        if u >= v_count {
            return Err(perr(ln, format!("vertex {u} out of range")));
        }
        if lists[u].is_some() {
            return Err(perr(ln, format!("vertex {u} listed twice")));
        }
        let t: Vec<Vertex> = targets
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| perr(ln, format!("bad target {t:?}"))))
            .collect::<Result<_, _>>()?;
        lists[u] = Some(t);
    }
    let lists: Vec<Vec<Vertex>> = lists
        .into_iter()
        .enumerate()
        .map(|(u, l)| l.ok_or_else(|| perr(last_line + 1, format!("vertex {u} has no line"))))
        .collect::<Result<_, _>>()?;
    let build = if params.is_some() { Digraph::from_lists } else { Digraph::from_multi_lists };
    let graph = build(d, lists).map_err(|e| perr(last_line, e.to_string()))?;
    Ok(match (params, coloring) {
        (Some(p), Some(c)) => GraphFile::Br(BrPair::from_parts(p, c, graph)),
        _ => GraphFile::Simple(graph),
    })
}

pub fn save_graph(path: &Path, file: &GraphFile) -> std::io::Result<()> {
    std::fs::write(path, write_graph(file))
}

pub fn load_graph(path: &Path) -> Result<GraphFile, LoadError> {
    parse_graph(&std::fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{gen_br_pair, gen_br_simple};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn round_trips() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let p = BrParams::new(8, 4, 4, 3).unwrap();
        let f = GraphFile::Br(gen_br_pair(&p, &mut rng).unwrap());
        assert_eq!(parse_graph(&write_graph(&f)).unwrap(), f);
        let f = GraphFile::Simple(gen_br_simple(10, 3, &mut rng).unwrap());
        assert_eq!(parse_graph(&write_graph(&f)).unwrap(), f);
    }

    fn line_of(text: &str) -> usize {
        match parse_graph(text) {
            Err(LoadError::Parse { line, .. }) => line,
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn error_lines() {
        assert_eq!(line_of("GRAPH v=2"), 1);
        assert_eq!(line_of("BRS v=2 d=x"), 1);
        assert_eq!(line_of("BRS v=2 d=1\n0: 1\n1: 9\n"), 3);
        assert_eq!(line_of("BRS v=2 d=1\n0: 1\n"), 3);
        assert_eq!(line_of("BR v=12 d=2 L=4 W=2 N=4\ncolors: b b\n"), 2);
    }
}
