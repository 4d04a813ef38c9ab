//! Structural and statistical checks on instances and transcripts.

mod conditional;
mod epochs;
mod fas;
mod naive;
mod partition;
mod trees;

pub use conditional::{enumerate_conditional_colorings, ConditionalDistribution, ConditionalError, CONDITIONAL_CAP};
pub use epochs::{ancestor_count, epoch_stats, max_ancestors_blue, max_blue_path, EpochStats};
pub use fas::{
    backedges, greedy_ordering, min_fas_bruteforce, min_fas_bruteforce_edges, min_fas_exact, min_fas_exact_edges,
    FasError, FasResult, BRUTE_CAP, EXACT_CAP,
};
pub use naive::{naive_probability, sample_naive_coloring, NaiveError};
pub use partition::{cross_count, induced_partition, partition_cross_min, PartitionError};
pub use trees::{classify_trees, forced_coloring, split_current_epoch, TreeError, TreeKind, TreeNode, TreeType};
