//! Oracles shared by the integration tests. Nothing here calls into the
//! automaton construction under test.

#![allow(dead_code)]

use std::collections::BTreeSet;

use hpdl_core::automata::Symbol;
use hpdl_core::{ABox, Program};

/// Regular expressions over symbols (atomic programs and tests as letters),
/// decided by Brzozowski derivatives.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Re {
    Empty,
    Eps,
    Sym(Symbol),
    Cat(Box<Re>, Box<Re>),
    Alt(Box<Re>, Box<Re>),
    Star(Box<Re>),
}

impl Re {
    pub fn from_program(p: &Program) -> Re {
        match p {
            Program::Atomic(s) => Re::Sym(Symbol::Atomic(s.clone())),
            Program::Test(f) => Re::Sym(Symbol::Test(f.clone())),
            Program::Seq(a, b) => Re::Cat(Box::new(Re::from_program(a)), Box::new(Re::from_program(b))),
            Program::Choice(a, b) => Re::Alt(Box::new(Re::from_program(a)), Box::new(Re::from_program(b))),
            Program::Star(a) => Re::Star(Box::new(Re::from_program(a))),
        }
    }

    pub fn nullable(&self) -> bool {
        match self {
            Re::Empty | Re::Sym(_) => false,
            Re::Eps | Re::Star(_) => true,
            Re::Cat(a, b) => a.nullable() && b.nullable(),
            Re::Alt(a, b) => a.nullable() || b.nullable(),
        }
    }

    pub fn derive(&self, c: &Symbol) -> Re {
        match self {
            Re::Empty | Re::Eps => Re::Empty,
            Re::Sym(s) => {
                if s == c {
                    Re::Eps
                } else {
                    Re::Empty
                }
            }
            Re::Cat(a, b) => {
                let left = Re::Cat(Box::new(a.derive(c)), b.clone());
                if a.nullable() {
                    Re::Alt(Box::new(left), Box::new(b.derive(c)))
                } else {
                    left
                }
            }
            Re::Alt(a, b) => Re::Alt(Box::new(a.derive(c)), Box::new(b.derive(c))),
            Re::Star(a) => Re::Cat(Box::new(a.derive(c)), Box::new(self.clone())),
        }
    }

    pub fn matches(&self, word: &[Symbol]) -> bool {
        let mut r = self.clone();
        for c in word {
            r = r.derive(c);
        }
        r.nullable()
    }
}

pub fn alphabet(p: &Program, out: &mut BTreeSet<Symbol>) {
    match p {
        Program::Atomic(s) => {
            out.insert(Symbol::Atomic(s.clone()));
        }
        Program::Test(f) => {
            out.insert(Symbol::Test(f.clone()));
        }
        Program::Seq(a, b) | Program::Choice(a, b) => {
            alphabet(a, out);
            alphabet(b, out);
        }
        Program::Star(a) => alphabet(a, out),
    }
}

/// Every word over `sigma` of length at most `n`.
pub fn words(sigma: &[Symbol], n: usize) -> Vec<Vec<Symbol>> {
    let mut out = vec![Vec::new()];
    let mut layer = vec![Vec::new()];
    for _ in 0..n {
        let mut next = Vec::new();
        for w in &layer {
            for c in sigma {
                let mut w2: Vec<Symbol> = w.clone();
                w2.push(c.clone());
                next.push(w2);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

pub fn show(g: &ABox) -> String {
    g.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
}

/// Satisfiable inputs written by hand, each with a small model in mind.
pub const HAND_SAT: [&str; 20] = [
    "'a:p",
    "s('a,'b); 'b:<s*>q",
    "'a:'b; 'a:p",
    "'a:<s>p; 'a:[s]q",
    "'a:<s*>(p & ~q); 'a:[s*]<s>r",
    "'a:[s*]<s>p",
    "'a:<(s;t)*>p; 'a:~p",
    "s('a,'a); 'a:[s]p; 'a:p",
    "'a:<s>'b; 'b:p; 'a:~p",
    "'a:<s*>'b; 'b:q",
    "'a:[s*](p | q); 'a:<s*>~p",
    "'a:<?(p);s>q; 'a:p",
    "'a:<(s+t)*>(p & q); 'a:[t]~p",
    "'a:<s><s><s>p; 'a:[s][s]~p",
    "s('a,'b); t('b,'a); 'a:[s][t]p; 'a:p",
    "'a:~'b; 'a:p; 'b:~p",
    "'a:[s]'b; 'a:<s>p; 'b:p",
    "'a:<s*>(q & [s]~q)",
    "'a:<(?(p);s)*>q; 'a:p",
    "'a:[s*]p; s('a,'b); 'b:<(?('a)+s)*>p",
];
