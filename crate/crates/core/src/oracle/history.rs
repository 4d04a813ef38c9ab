use std::collections::HashSet;
use std::fmt;
use std::ops::Range;

use thiserror::Error;

use crate::graph::Vertex;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HistoryError {
    #[error("vertex {0} already appears as a query in the history")]
    DuplicateQuery(Vertex),
    #[error("record index {index} outside 1..={len}")]
    IndexOutOfRange { index: usize, len: usize },
}

/// One vertex query and the out-list it returned.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QueryRecord {
    pub vertex: Vertex,
    pub answer: Vec<Vertex>,
}

impl QueryRecord {
    pub fn new(vertex: Vertex, answer: Vec<Vertex>) -> Self {
        Self { vertex, answer }
    }
}

/// Ordered transcript of vertex queries; queried vertices are distinct.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct QueryHistory {
    records: Vec<QueryRecord>,
    queried: HashSet<Vertex>,
}

impl QueryHistory {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_records(records: Vec<QueryRecord>) -> Result<Self, HistoryError> {
        let mut h = Self::new();
        for r in records {
            h.push(r)?;
        }
        Ok(h)
    }

    pub fn push(&mut self, record: QueryRecord) -> Result<(), HistoryError> {
        if !self.queried.insert(record.vertex) {
            return Err(HistoryError::DuplicateQuery(record.vertex));
        }
        self.records.push(record);
        Ok(())
    }

    pub fn records(&self) -> &[QueryRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn contains_query(&self, v: Vertex) -> bool {
        self.queried.contains(&v)
    }

    /// Surprise flag of every record, in order.
    pub fn surprise_flags(&self) -> Vec<bool> {
        let mut seen = HashSet::new();
        self.records
            .iter()
            .map(|r| {
                let surprise = r.answer.iter().any(|v| seen.contains(v));
                seen.insert(r.vertex);
                seen.extend(r.answer.iter().copied());
                surprise
            })
            .collect()
    }
}

/// Whether record `k` (1-based) returns a vertex already present in the
/// knowledge graph of the first `k - 1` records. The queried vertex itself
/// does not count, only answer entries do.
pub fn is_surprise(history: &QueryHistory, k: usize) -> Result<bool, HistoryError> {
    if k == 0 || k > history.len() {
        return Err(HistoryError::IndexOutOfRange {
            index: k,
            len: history.len(),
        });
    }
    let mut seen = HashSet::new();
    for r in &history.records()[..k - 1] {
        seen.insert(r.vertex);
        seen.extend(r.answer.iter().copied());
    }
    Ok(history.records()[k - 1].answer.iter().any(|v| seen.contains(v)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EpochEnd {
    Surprise,
    Timeout,
}

impl fmt::Display for EpochEnd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EpochEnd::Surprise => "surprise",
            EpochEnd::Timeout => "timeout",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosedEpoch {
    pub range: Range<usize>,
    pub end: EpochEnd,
}

/// Split of a history into epochs, stored as record index ranges. Closed
/// epochs end at a surprise or after exactly `cap` records; the current epoch
/// is the (possibly empty) tail.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EpochDecomposition {
    closed: Vec<ClosedEpoch>,
    current_start: usize,
    len: usize,
    cap: usize,
}

impl EpochDecomposition {
    /// `cap` of `usize::MAX` disables timeouts.
    pub fn new(cap: usize) -> Self {
        assert!(cap >= 1, "epoch cap must be positive");
        Self {
            closed: Vec::new(),
            current_start: 0,
            len: 0,
            cap,
        }
    }

    /// Appends one record with the given surprise flag; returns how the
    /// current epoch ended if this record closed it. A record that is both a
    /// surprise and the `cap`-th of its epoch closes it as a surprise.
    pub fn push(&mut self, surprise: bool) -> Option<EpochEnd> {
        self.len += 1;
        let end = if surprise {
            EpochEnd::Surprise
        } else if self.len - self.current_start == self.cap {
            EpochEnd::Timeout
        } else {
            return None;
        };
        self.closed.push(ClosedEpoch {
            range: self.current_start..self.len,
            end,
        });
        self.current_start = self.len;
        Some(end)
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn closed(&self) -> &[ClosedEpoch] {
        &self.closed
    }

    pub fn current(&self) -> Range<usize> {
        self.current_start..self.len
    }

    /// Number of records in closed epochs, i.e. the length of `H'`.
    pub fn closed_len(&self) -> usize {
        self.current_start
    }

    pub fn history_len(&self) -> usize {
        self.len
    }

    /// Closed epochs followed by the current one if it is nonempty.
    pub fn nonempty_ranges(&self) -> Vec<Range<usize>> {
        let mut out: Vec<_> = self.closed.iter().map(|e| e.range.clone()).collect();
        if self.current_start < self.len {
            out.push(self.current());
        }
        out
    }
}

/// Recomputes the epoch split of `history` by a serial scan.
pub fn decompose_epochs(history: &QueryHistory, cap: usize) -> EpochDecomposition {
    let mut epochs = EpochDecomposition::new(cap);
    for s in history.surprise_flags() {
        epochs.push(s);
    }
    epochs
}
