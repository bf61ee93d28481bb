//! Formulas, programs, assertions and ABoxes: AST, concrete syntax, NNF and
//! nominal substitution.

mod ast;
mod nnf;
mod parse;
mod print;
mod subst;

pub use ast::{name, ABox, Assertion, Formula, Name, Program, Signature};
pub use nnf::{
    abox_to_nnf, assertion_to_nnf, negate_assertion, negate_nnf, program_to_nnf, to_nnf,
};
pub use parse::{parse_abox, parse_formula, parse_program, ParseError, ParseErrorKind};
pub use subst::{
    rename_assertion, rename_formula, rename_program, substitute_assertion, substitute_nominal,
};
