//! Query models, transcripts, knowledge graphs and the epoch protocol.

mod history;
mod knowledge;
#[allow(clippy::module_inception)]
mod oracle;
mod transcript;

pub use history::{
    decompose_epochs, is_surprise, ClosedEpoch, EpochDecomposition, EpochEnd, HistoryError, QueryHistory,
    QueryRecord,
};
pub use knowledge::{detect_cycle, knowledge_graph, knowledge_graph_of, verify_cycle, KnowledgeGraph};
pub use oracle::{check_knowledge_pair, query_vertex_via_adj, Model, Oracle, OracleError};
pub use transcript::{parse_transcript, write_transcript, Transcript, TranscriptError};
