//! Orthogonal constructor rewrite systems with call-by-value rule firing.

mod rewrite;
mod system;
mod term;
mod text;

pub use rewrite::{
    find_redexes, match_pattern, reduce_crs, reduce_crs_with, rewrite_step, CrsOutcome,
    CrsReduction, Firing, NormalKind, Subst,
};
pub use system::{CrsRule, CrsSystem, Signature, ValidationError};
pub use term::{CrsTerm, CrsTermKind, Sym, SymKind};
pub use text::{parse_system, parse_term_in, print_system, Document, TextError};
