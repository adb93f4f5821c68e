//! Compiling an orthogonal constructor rewrite system into pure λ-terms.
//!
//! Constructor terms are Scott-encoded, function symbols become mutually
//! recursive λ-terms built from a fixed-point family and a compiled pattern
//! matcher, and a distinguished value `⊥` represents stuck computations.
//! Every rewrite step is simulated by a bounded number of weak call-by-value
//! β-steps.

mod context;
mod fixpoint;
mod matcher;
mod simulate;

use thiserror::Error;

pub use context::ScottContext;
pub use fixpoint::{fixpoint_family, fixpoint_unfolding};
pub use simulate::{SimulationVerdict, TheoremClause};

use crate::name::Name;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScottError {
    #[error("`{0}` is not a constructor of the system")]
    UnknownConstructor(Name),
    #[error("`{0}` is not a symbol of the system")]
    UnknownSymbol(Name),
    #[error("term contains the variable `{0}`")]
    OpenTerm(Name),
    #[error("pattern sequences {0} and {1} overlap")]
    Overlap(usize, usize),
    #[error("pattern sequence {index} has length {found}, expected {expected}")]
    LengthMismatch {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("patterns may only contain constructors and variables")]
    NotAPattern,
}
