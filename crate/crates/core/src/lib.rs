//! HPDL ABox satisfiability: a tableau decision procedure with global
//! caching, plus the pieces needed to test it (model checker, bounded model
//! search, witness extraction).

pub mod automata;
pub mod corpus;
pub mod engine;
pub mod kripke;
pub mod rules;
pub mod status;
pub mod syntax;
pub mod tableau;
pub mod witness;

pub use automata::{compile_program, Nfa, StateId, Symbol};
pub use engine::{decide, Config, EngineError, Outcome, RunStats, TraceEvent, Verdict};
pub use kripke::{bounded_search, check_abox, eval_formula, KripkeModel, SearchOutcome};
pub use syntax::{
    abox_to_nnf, parse_abox, parse_formula, parse_program, to_nnf, ABox, Assertion, Formula, Name,
    ParseError, Program,
};
pub use tableau::{NodeId, Status, Tableau};
pub use witness::{extract_model, pick_anchor, witness, ModelGraph, Witness, WitnessError};
