//! Term-graph rewriting with sharing.
//!
//! Terms become rooted DAGs; rules become labelled graphs whose variable
//! nodes are shared between the two sides, so firing a rule copies only the
//! right-hand side's new structure and never duplicates an argument.

mod dot;
mod labelled;
mod rewrite;
mod rule;

pub use dot::to_dot;
pub use labelled::{LabelledGraph, NodeId, TermGraph};
pub use rewrite::{
    build_phase, collect_garbage, fire_redex, find_redex, graph_reduce, graph_reduce_unchecked,
    redirect_phase, GraphOutcome, GraphRun, Redex, SharingViolation,
};
pub use rule::{rule_to_graph_rule, GraphRule, GraphSystem};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("node {0} is unlabelled, so the graph is not closed")]
    UnlabelledNode(NodeId),
    #[error("unfolding would produce {size} symbols, above the limit of {limit}")]
    TooLarge { size: u64, limit: u64 },
    #[error("invalid graph rule: {0}")]
    InvalidRule(String),
}
