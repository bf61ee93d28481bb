//! Printing in the concrete syntax accepted by the parser. Binary operators
//! are always parenthesised, so printing then parsing gives back the same AST
//! for surface formulas.

use std::fmt;

use super::ast::{Assertion, Formula, Program};

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Program::Atomic(n) => write!(f, "{n}"),
            Program::Seq(a, b) => write!(f, "({a};{b})"),
            Program::Choice(a, b) => write!(f, "({a}+{b})"),
            Program::Star(a) => write!(f, "{a}*"),
            Program::Test(t) => write!(f, "?({t})"),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Top => f.write_str("true"),
            Formula::Bot => f.write_str("false"),
            Formula::Prop(p) => write!(f, "{p}"),
            Formula::Nominal(a) => write!(f, "'{a}"),
            Formula::Not(g) => write!(f, "~{g}"),
            Formula::And(a, b) => write!(f, "({a} & {b})"),
            Formula::Or(a, b) => write!(f, "({a} | {b})"),
            Formula::Implies(a, b) => write!(f, "({a} -> {b})"),
            Formula::Diamond(p, g) => write!(f, "<{p}>{g}"),
            Formula::Box(p, g) => write!(f, "[{p}]{g}"),
            Formula::AutDiamond(a, q, g) => write!(f, "<{a}@{q}>{g}"),
            Formula::AutBox(a, q, g) => write!(f, "[{a}@{q}]{g}"),
        }
    }
}

impl fmt::Display for Assertion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Assertion::Holds { subject: Some(a), formula } => write!(f, "'{a}:{formula}"),
            Assertion::Holds { subject: None, formula } => write!(f, "{formula}"),
            Assertion::Edge { program, from, to } => write!(f, "{program}('{from},'{to})"),
        }
    }
}
