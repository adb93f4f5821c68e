//! A normalization workbench for weak λ-calculus and orthogonal constructor
//! term rewriting.
//!
//! The crate contains five engines that all count reduction steps exactly:
//!
//! * [`lambda`]: weak call-by-value and call-by-name β-reduction.
//! * [`crs`]: orthogonal constructor rewrite systems under the
//!   call-by-value firing condition.
//! * [`encode`]: compilers from closed λ-terms into constructor rewrite
//!   systems (one per λ strategy), plus readback.
//! * [`scott`]: the converse compiler, turning a rewrite system into pure
//!   λ-terms via Scott encodings and a mutual fixed-point family.
//! * [`graph`]: term-graph rewriting with sharing.
//!
//! [`workbench`] ties them together: cross-engine comparison, JSON reports
//! and the on-disk corpus.

pub mod crs;
pub mod encode;
pub mod graph;
pub mod lambda;
pub mod name;
pub mod scott;
pub mod workbench;

pub use name::Name;
