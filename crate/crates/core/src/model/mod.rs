//! Explicit-state semantics: states, vocabularies and their closure, the
//! three accessibility relations, and static/dynamic/revision satisfaction.
//! This is the brute-force oracle the symbolic backend is checked against.

mod semantics;
mod state;
mod vocabulary;

use thiserror::Error;

use crate::syntax::AgentId;

pub use semantics::{
    apply_revise, check_explicit, consistent_base, desire_bases, rel_attract, rel_epistemic,
    rel_repulse, sat_base, step_program, Checker, Strategy,
};
pub use state::{enumerate_states, State};
pub use vocabulary::{
    close_vocabulary, ClosedVocabulary, Context, VarTag, VocabularyProfile,
    DEFAULT_ENUM_CAP_EXPONENT,
};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("enumeration needs 2^{exponent} assignments, above the cap of 2^{cap}")]
    CapExceeded { exponent: usize, cap: u32 },
    #[error("unknown agent `{0}`")]
    UnknownAgent(AgentId),
    #[error("atom `{0}` is not tracked by the vocabulary")]
    UntrackedAtom(String),
    #[error("`{0}` is not a base-language formula")]
    NotL0(String),
    #[error("state outside S_Γ: `{member}` is not in the closed vocabulary of `{agent}`")]
    OutsideVocabulary { agent: AgentId, member: String },
}
