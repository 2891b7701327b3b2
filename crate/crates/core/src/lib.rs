//! Model checking for a multi-agent logic of cognitive attitudes whose
//! semantics is computed from agents' belief bases.
//!
//! Two independent routes decide `(S0, S_Γ) ⊨ φ`:
//!
//! * [`model`] evaluates the satisfaction relation explicitly over the state
//!   space `S_Γ` induced by the vocabulary profile;
//! * [`translate`] reduces the query to a closed quantified Boolean formula,
//!   which [`solve`] decides with a BDD engine or exports as QCIR/QDIMACS.

pub mod attitudes;
pub mod bench;
pub mod instance;
pub mod model;
pub mod qbf;
pub mod solve;
pub mod syntax;
pub mod translate;

pub use attitudes::expand_derived;
pub use model::{check_explicit, ClosedVocabulary, Context, State, VocabularyProfile};
pub use qbf::{Problem, Qbf};
pub use solve::{solve_bdd, SolveOptions};
pub use syntax::{parse_formula, print_formula, AgentId, Atom, Formula, Modality, Program};
pub use translate::{reduce, Reduction, TranslateOptions};
