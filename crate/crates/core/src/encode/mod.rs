//! Compilers from closed λ-terms to constructor rewrite systems.
//!
//! Every abstraction `λx.M` becomes a constructor `c_{x,M}` whose arguments
//! are the free variables of `λx.M`; application becomes the binary function
//! symbol `app`. [`encode_cbv`] builds the system simulating weak
//! call-by-value reduction step for step; [`encode_cbn`] adds the frozen
//! application constructor `capp` and simulates weak call-by-name reduction
//! with at most one extra administrative step per β-step.

mod cbn;
mod cbv;
mod table;

use thiserror::Error;

pub use cbn::{encode_cbn, psi_is_canonical, PsiImage};
pub use cbv::{encode_cbv, is_canonical, PhiImage};
pub use table::{AbstractionConstructor, AbstractionTable};

use crate::name::Name;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EncodeError {
    #[error("only closed terms can be encoded; `{0}` is free")]
    OpenTerm(Name),
    #[error("`{0}` is not an abstraction constructor of this encoding")]
    UnknownConstructor(Name),
    #[error("`{0}` cannot be read back as a λ-term")]
    NotReadable(Name),
}

/// Name of the binary application function symbol.
pub const APP: &str = "app";
/// Name of the frozen application constructor used for call-by-name.
pub const CAPP: &str = "capp";
