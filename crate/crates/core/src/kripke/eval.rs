use std::collections::{BTreeSet, VecDeque};

use super::{EvalError, KripkeModel, WorldId, WorldSet};
use crate::automata::{Nfa, StateId, Symbol};
use crate::syntax::{ABox, Assertion, Formula, Program};

pub type Relation = BTreeSet<(WorldId, WorldId)>;

type Bits = Vec<bool>;
type Matrix = Vec<Vec<bool>>;

/// `φ^M`.
pub fn eval_formula(m: &KripkeModel, f: &Formula) -> Result<WorldSet, EvalError> {
    Ok(to_set(&Evaluator { m }.formula(f)?))
}

/// `α^M`.
pub fn eval_program(m: &KripkeModel, p: &Program) -> Result<Relation, EvalError> {
    Ok(to_rel(&Evaluator { m }.program(p)?))
}

/// The relation of `(A,q)`: all `(x,y)` linked by some word accepted from `q`.
pub fn eval_aut_program(m: &KripkeModel, a: &Nfa, q: StateId) -> Result<Relation, EvalError> {
    let ev = Evaluator { m };
    let steps = ev.symbol_steps(a)?;
    let n = m.world_count();
    let mut out = Relation::new();
    for x in 0..n {
        let mut seen = vec![vec![false; a.state_count()]; n];
        let mut queue = VecDeque::from([(x, q)]);
        seen[x][q] = true;
        while let Some((w, s)) = queue.pop_front() {
            if a.is_accepting(s) {
                out.insert((x, w));
            }
            for (k, (_, s2)) in a.transitions(s).iter().enumerate() {
                for w2 in 0..n {
                    if steps[s][k][w][w2] && !seen[w2][*s2] {
                        seen[w2][*s2] = true;
                        queue.push_back((w2, *s2));
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Which assertions of `Γ` fail in a model.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CheckReport {
    pub failing: Vec<Assertion>,
}

impl CheckReport {
    pub fn holds(&self) -> bool {
        self.failing.is_empty()
    }
}

/// `M ⊨ Γ`. A bare formula (no subject) must hold at every world.
pub fn check_abox(m: &KripkeModel, g: &ABox) -> Result<CheckReport, EvalError> {
    let ev = Evaluator { m };
    let mut report = CheckReport::default();
    for x in g {
        let ok = match x {
            Assertion::Holds { subject: Some(a), formula } => {
                let w = ev.nominal(a)?;
                ev.formula(formula)?[w]
            }
            Assertion::Holds { subject: None, formula } => ev.formula(formula)?.iter().all(|b| *b),
            Assertion::Edge { program, from, to } => {
                let (x, y) = (ev.nominal(from)?, ev.nominal(to)?);
                let rel = m
                    .program(program)
                    .ok_or_else(|| EvalError::UninterpretedProgram(program.clone()))?;
                rel.contains(&(x, y))
            }
        };
        if !ok {
            report.failing.push(x.clone());
        }
    }
    Ok(report)
}

struct Evaluator<'a> {
    m: &'a KripkeModel,
}

impl Evaluator<'_> {
    fn n(&self) -> usize {
        self.m.world_count()
    }

    fn nominal(&self, a: &crate::syntax::Name) -> Result<WorldId, EvalError> {
        self.m.nominal(a).ok_or_else(|| EvalError::UninterpretedNominal(a.clone()))
    }

    fn formula(&self, f: &Formula) -> Result<Bits, EvalError> {
        let n = self.n();
        Ok(match f {
            Formula::Top => vec![true; n],
            Formula::Bot => vec![false; n],
            Formula::Prop(p) => {
                let ext = self.m.prop(p).ok_or_else(|| EvalError::UninterpretedProp(p.clone()))?;
                (0..n).map(|w| ext.contains(&w)).collect()
            }
            Formula::Nominal(a) => {
                let w = self.nominal(a)?;
                (0..n).map(|x| x == w).collect()
            }
            Formula::Not(g) => self.formula(g)?.into_iter().map(|b| !b).collect(),
            Formula::And(a, b) => zip(self.formula(a)?, self.formula(b)?, |x, y| x && y),
            Formula::Or(a, b) => zip(self.formula(a)?, self.formula(b)?, |x, y| x || y),
            Formula::Implies(a, b) => zip(self.formula(a)?, self.formula(b)?, |x, y| !x || y),
            Formula::Diamond(p, g) => {
                let (r, t) = (self.program(p)?, self.formula(g)?);
                (0..n).map(|x| (0..n).any(|y| r[x][y] && t[y])).collect()
            }
            Formula::Box(p, g) => {
                let (r, t) = (self.program(p)?, self.formula(g)?);
                (0..n).map(|x| (0..n).all(|y| !r[x][y] || t[y])).collect()
            }
            Formula::AutDiamond(a, q, g) => {
                let t = self.formula(g)?;
                self.aut_diamond(a, *q, &t)?
            }
            Formula::AutBox(a, q, g) => {
                let t: Bits = self.formula(g)?.into_iter().map(|b| !b).collect();
                self.aut_diamond(a, *q, &t)?.into_iter().map(|b| !b).collect()
            }
        })
    }

    fn program(&self, p: &Program) -> Result<Matrix, EvalError> {
        let n = self.n();
        Ok(match p {
            Program::Atomic(s) => {
                let rel =
                    self.m.program(s).ok_or_else(|| EvalError::UninterpretedProgram(s.clone()))?;
                let mut r = vec![vec![false; n]; n];
                for &(x, y) in rel {
                    r[x][y] = true;
                }
                r
            }
            Program::Test(f) => {
                let t = self.formula(f)?;
                (0..n).map(|x| (0..n).map(|y| x == y && t[x]).collect()).collect()
            }
            Program::Seq(a, b) => {
                let (ra, rb) = (self.program(a)?, self.program(b)?);
                (0..n)
                    .map(|x| (0..n).map(|z| (0..n).any(|y| ra[x][y] && rb[y][z])).collect())
                    .collect()
            }
            Program::Choice(a, b) => {
                let (ra, rb) = (self.program(a)?, self.program(b)?);
                (0..n).map(|x| (0..n).map(|y| ra[x][y] || rb[x][y]).collect()).collect()
            }
            Program::Star(a) => {
                let mut r = self.program(a)?;
                for (x, row) in r.iter_mut().enumerate() {
                    row[x] = true;
                }
                for k in 0..n {
                    for x in 0..n {
                        if r[x][k] {
                            for y in 0..n {
                                if r[k][y] {
                                    r[x][y] = true;
                                }
                            }
                        }
                    }
                }
                r
            }
        })
    }

    /// For every state and outgoing transition, the relation it induces.
    fn symbol_steps(&self, a: &Nfa) -> Result<Vec<Vec<Matrix>>, EvalError> {
        (0..a.state_count())
            .map(|s| {
                a.transitions(s)
                    .iter()
                    .map(|(sym, _)| self.program(&sym_program(sym)))
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect()
    }

    /// Least set of (world, state) pairs from which an accepting state is
    /// reached at a world in `target`.
    fn aut_diamond(&self, a: &Nfa, q: StateId, target: &Bits) -> Result<Bits, EvalError> {
        let n = self.n();
        let steps = self.symbol_steps(a)?;
        let mut good = vec![vec![false; a.state_count()]; n];
        for (w, row) in good.iter_mut().enumerate() {
            for (s, cell) in row.iter_mut().enumerate() {
                *cell = a.is_accepting(s) && target[w];
            }
        }
        let mut changed = true;
        while changed {
            changed = false;
            for w in 0..n {
                for s in 0..a.state_count() {
                    if good[w][s] {
                        continue;
                    }
                    let hit = a.transitions(s).iter().enumerate().any(|(k, (_, s2))| {
                        (0..n).any(|w2| steps[s][k][w][w2] && good[w2][*s2])
                    });
                    if hit {
                        good[w][s] = true;
                        changed = true;
                    }
                }
            }
        }
        Ok((0..n).map(|w| good[w][q]).collect())
    }
}

fn sym_program(sym: &Symbol) -> Program {
    sym.to_program()
}

fn zip(a: Bits, b: Bits, f: impl Fn(bool, bool) -> bool) -> Bits {
    a.into_iter().zip(b).map(|(x, y)| f(x, y)).collect()
}

fn to_set(b: &Bits) -> WorldSet {
    b.iter().enumerate().filter(|(_, v)| **v).map(|(i, _)| i).collect()
}

fn to_rel(r: &Matrix) -> Relation {
    let mut out = Relation::new();
    for (x, row) in r.iter().enumerate() {
        for (y, v) in row.iter().enumerate() {
            if *v {
                out.insert((x, y));
            }
        }
    }
    out
}
