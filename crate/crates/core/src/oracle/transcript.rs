//! Plain-text transcript dump used for debugging and replay.
//!
//! ```text
//! q 7 : 3 9
//! q 3 :
//! # epoch 1 closed: timeout
//! # reveal 7=b 3=r4 9=r4
//! ```

use std::fmt::Write as _;

use thiserror::Error;

use super::history::{EpochEnd, HistoryError, QueryHistory, QueryRecord};
use super::oracle::Oracle;
use crate::graph::{Color, Vertex};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TranscriptError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    History(#[from] HistoryError),
}

/// Parsed transcript: the history plus the recorded epoch closes (as the
/// number of records read when each close was logged) and revelations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transcript {
    pub history: QueryHistory,
    pub closes: Vec<(usize, EpochEnd)>,
    pub reveals: Vec<Vec<(Vertex, Color)>>,
}

pub fn write_transcript(oracle: &Oracle<'_>) -> String {
    let records = oracle.history().records();
    let closed = oracle.epochs().closed();
    let reveals = oracle.reveal_log();
    let mut out = String::new();
    let mut next_close = 0;
    for (i, r) in records.iter().enumerate() {
        write_record(&mut out, r);
        while next_close < closed.len() && closed[next_close].range.end == i + 1 {
            let _ = writeln!(out, "# epoch {} closed: {}", next_close + 1, closed[next_close].end);
            if let Some(batch) = reveals.get(next_close) {
                out.push_str("# reveal");
                for (v, c) in batch {
                    let _ = write!(out, " {v}={c}");
                }
                out.push('\n');
            }
            next_close += 1;
        }
    }
    out
}

fn write_record(out: &mut String, r: &QueryRecord) {
    let _ = write!(out, "q {} :", r.vertex);
    for v in &r.answer {
        let _ = write!(out, " {v}");
    }
    out.push('\n');
}

pub fn parse_transcript(text: &str) -> Result<Transcript, TranscriptError> {
    let mut records = Vec::new();
    let mut closes = Vec::new();
    let mut reveals = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        let err = |msg: String| TranscriptError::Parse { line: lineno, msg };
        let line = line.trim_end();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("q ") {
            let (head, tail) = rest
                .split_once(':')
                .ok_or_else(|| err("missing `:`".into()))?;
            let vertex = head
                .trim()
                .parse()
                .map_err(|_| err(format!("bad vertex `{}`", head.trim())))?;
            let answer = tail
                .split_whitespace()
                .map(|t| t.parse().map_err(|_| err(format!("bad vertex `{t}`"))))
                .collect::<Result<Vec<Vertex>, _>>()?;
            records.push(QueryRecord::new(vertex, answer));
        } else if let Some(rest) = line.strip_prefix("# epoch ") {
            let (_, reason) = rest
                .split_once("closed: ")
                .ok_or_else(|| err("malformed epoch line".into()))?;
            let end = match reason.trim() {
                "surprise" => EpochEnd::Surprise,
                "timeout" => EpochEnd::Timeout,
                other => return Err(err(format!("unknown epoch end `{other}`"))),
            };
            closes.push((records.len(), end));
        } else if let Some(rest) = line.strip_prefix("# reveal") {
            let batch = rest
                .split_whitespace()
                .map(|tok| {
                    let (v, c) = tok.split_once('=').ok_or_else(|| err(format!("bad reveal `{tok}`")))?;
                    let v = v.parse().map_err(|_| err(format!("bad vertex `{v}`")))?;
                    let c = c.parse::<Color>().map_err(err)?;
                    Ok((v, c))
                })
                .collect::<Result<Vec<_>, TranscriptError>>()?;
            reveals.push(batch);
        } else {
            return Err(err(format!("unrecognized line `{line}`")));
        }
    }
    Ok(Transcript {
        history: QueryHistory::from_records(records)?,
        closes,
        reveals,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{gen_br_pair, BrParams};
    use crate::oracle::{decompose_epochs, Model};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn dump_and_replay() {
        let params = BrParams::new(64, 8, 16, 4).unwrap();
        let pair = gen_br_pair(&params, &mut ChaCha8Rng::seed_from_u64(4)).unwrap();
        let mut o = Oracle::new(&pair, Model::ColorRevelation);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..60 {
            let _ = o.query_vertex(rng.gen_range(0..params.vertex_count()));
        }
        let text = write_transcript(&o);
        let t = parse_transcript(&text).unwrap();
        assert_eq!(&t.history, o.history());
        assert_eq!(t.reveals.as_slice(), o.reveal_log());
        let replayed = decompose_epochs(&t.history, params.epoch_cap());
        let ends: Vec<_> = replayed.closed().iter().map(|e| (e.range.end, e.end)).collect();
        assert_eq!(t.closes, ends);
        assert_eq!(write_transcript(&o), text);
    }

    #[test]
    fn bad_lines_report_position() {
        let e = parse_transcript("q 1 : 2 3\nq x : 4\n").unwrap_err();
        assert!(matches!(e, TranscriptError::Parse { line: 2, .. }));
        let e = parse_transcript("# epoch 1 closed: maybe\n").unwrap_err();
        assert!(matches!(e, TranscriptError::Parse { line: 1, .. }));
    }
}
