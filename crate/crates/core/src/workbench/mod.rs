//! Cross-engine runs and their JSON reports.
//!
//! Every run produces a [`CostReport`]: one entry per engine with its
//! outcome, step count and (for graphs) size series, plus the step relations
//! and theorem checks that apply to the engines that terminated.

mod corpus;
mod report;
mod run;

pub use corpus::{expectation_path, lambda_expectation, system_expectation, Corpus, CorpusError};
pub use report::{digest, CostReport, EngineRun, OutcomeKind, StepRelation, TheoremCheck};
pub use run::{
    compare_engines, eval_crs, eval_graph_crs, eval_lambda, eval_phi_crs, eval_phi_graph, eval_psi_crs,
    eval_scott, roundtrip_check, RunConfig,
};

/// Default step budget of every engine.
pub const DEFAULT_BUDGET: u64 = 10_000;

/// Default bound on the size of a graph's unfolding.
pub const DEFAULT_UNFOLD_LIMIT: u64 = 10_000;

/// Multiplier applied to the rewriting budget to get the β-step budget of a
/// compiled rewrite system.
pub const LAMBDA_BUDGET_FACTOR: u64 = 128;
