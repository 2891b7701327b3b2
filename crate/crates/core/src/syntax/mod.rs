//! Formulas and programs of the dynamic language: AST, ASCII parser and
//! printer.

mod ast;
mod lexer;
mod parser;
mod printer;

use thiserror::Error;

pub use ast::{AgentId, Atom, DerivedOp, Formula, Modality, Position, Program};
pub use lexer::Pos;
pub use parser::{parse_formula, parse_program, RESERVED};
pub use printer::{print_formula, print_formula_full, print_program};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at {line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error(
        "arity error at {line}:{column}: `{operator}` takes {expected} arguments, found {found}"
    )]
    Arity {
        line: usize,
        column: usize,
        operator: String,
        expected: usize,
        found: usize,
    },
    #[error("{line}:{column}: the argument of this {context} must be a base-language formula")]
    NotL0 {
        line: usize,
        column: usize,
        context: String,
    },
}

impl ParseError {
    pub fn position(&self) -> (usize, usize) {
        match self {
            ParseError::Syntax { line, column, .. }
            | ParseError::Arity { line, column, .. }
            | ParseError::NotL0 { line, column, .. } => (*line, *column),
        }
    }
}

/// `is_l0` as a free function, for symmetry with the parser entry points.
pub fn is_l0(f: &Formula) -> bool {
    f.is_l0()
}
