//! Pure λ-terms with weak call-by-value and call-by-name reduction.

mod parse;
pub mod random;
mod reduce;
mod term;

pub use parse::{parse_term, ParseError};
pub use reduce::{
    cbn_step, cbv_redex_count, cbv_step, cbv_step_leftmost, reduce, reduce_with, Leftmost,
    Outcome, Policy, RedexChooser, Reduction, Strategy,
};
pub use term::{Term, TermKind};
