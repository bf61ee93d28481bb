//! Finite automata over atomic programs and tests, compiled from programs.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt::{self, Write as _};
use std::sync::Arc;

use crate::syntax::{Formula, Name, Program};

pub type StateId = usize;

/// A letter of `Σ(α)`: an atomic program or a test `φ?`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Symbol {
    Atomic(Name),
    Test(Arc<Formula>),
}

impl Symbol {
    pub fn to_program(&self) -> Program {
        match self {
            Symbol::Atomic(n) => Program::Atomic(n.clone()),
            Symbol::Test(f) => Program::Test(f.clone()),
        }
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Symbol::Atomic(n) => write!(f, "{n}"),
            Symbol::Test(t) => write!(f, "?({t})"),
        }
    }
}

/// `⟨Σ, Q, I, δ, F⟩` with `Q = 0..n`. Equality includes the program the
/// automaton was compiled from, which is also what gets printed.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Nfa {
    source: Program,
    initial: Vec<StateId>,
    accepting: Vec<bool>,
    delta: Vec<Vec<(Symbol, StateId)>>,
}

pub type Word = Vec<Symbol>;

/// Thompson automaton with ε-moves; only used during compilation.
#[derive(Default)]
struct Thompson {
    eps: Vec<Vec<usize>>,
    sym: Vec<Vec<(Symbol, usize)>>,
}

impl Thompson {
    fn fresh(&mut self) -> usize {
        self.eps.push(Vec::new());
        self.sym.push(Vec::new());
        self.eps.len() - 1
    }

    fn build(&mut self, p: &Program) -> (usize, usize) {
        match p {
            Program::Atomic(n) => self.letter(Symbol::Atomic(n.clone())),
            Program::Test(f) => self.letter(Symbol::Test(f.clone())),
            Program::Seq(a, b) => {
                let (s1, e1) = self.build(a);
                let (s2, e2) = self.build(b);
                self.eps[e1].push(s2);
                (s1, e2)
            }
            Program::Choice(a, b) => {
                let s = self.fresh();
                let (s1, e1) = self.build(a);
                let (s2, e2) = self.build(b);
                let e = self.fresh();
                self.eps[s].extend([s1, s2]);
                self.eps[e1].push(e);
                self.eps[e2].push(e);
                (s, e)
            }
            Program::Star(a) => {
                let s = self.fresh();
                let (s1, e1) = self.build(a);
                let e = self.fresh();
                self.eps[s].extend([s1, e]);
                self.eps[e1].extend([s1, e]);
                (s, e)
            }
        }
    }

    fn letter(&mut self, sym: Symbol) -> (usize, usize) {
        let s = self.fresh();
        let e = self.fresh();
        self.sym[s].push((sym, e));
        (s, e)
    }

    /// ε-closure of `from`, keeping only states that matter after
    /// elimination: those with letter moves, and the final state.
    fn closure(&self, from: usize, fin: usize) -> BTreeSet<usize> {
        let mut seen = BTreeSet::new();
        let mut stack = vec![from];
        let mut out = BTreeSet::new();
        while let Some(x) = stack.pop() {
            if !seen.insert(x) {
                continue;
            }
            if x == fin || !self.sym[x].is_empty() {
                out.insert(x);
            }
            stack.extend(self.eps[x].iter().copied());
        }
        out
    }
}

/// Compiles `α` into an automaton recognising `L(α)`.
///
/// Thompson construction followed by ε-elimination; every resulting state is
/// the (pruned) ε-closure of the start state or of a letter target, so the
/// state count is at most one plus the number of letters in `α`.
pub fn compile_program(alpha: &Program) -> Nfa {
    let mut t = Thompson::default();
    let (start, fin) = t.build(alpha);

    let mut ids: BTreeMap<BTreeSet<usize>, StateId> = BTreeMap::new();
    let mut sets: Vec<BTreeSet<usize>> = Vec::new();
    let mut queue = VecDeque::new();
    let init = t.closure(start, fin);
    ids.insert(init.clone(), 0);
    sets.push(init);
    queue.push_back(0);

    let mut delta: Vec<Vec<(Symbol, StateId)>> = vec![Vec::new()];
    while let Some(q) = queue.pop_front() {
        let members: Vec<usize> = sets[q].iter().copied().collect();
        let mut out = Vec::new();
        for x in members {
            for (sym, y) in &t.sym[x] {
                let target = t.closure(*y, fin);
                let id = match ids.get(&target) {
                    Some(&id) => id,
                    None => {
                        let id = sets.len();
                        ids.insert(target.clone(), id);
                        sets.push(target);
                        delta.push(Vec::new());
                        queue.push_back(id);
                        id
                    }
                };
                out.push((sym.clone(), id));
            }
        }
        out.sort();
        out.dedup();
        delta[q] = out;
    }

    let accepting = sets.iter().map(|s| s.contains(&fin)).collect();
    Nfa { source: alpha.clone(), initial: vec![0], accepting, delta }
}

impl Nfa {
    /// Builds an automaton from explicit parts. Panics on dangling state ids.
    pub fn from_parts(
        source: Program,
        initial: Vec<StateId>,
        accepting: Vec<bool>,
        mut delta: Vec<Vec<(Symbol, StateId)>>,
    ) -> Nfa {
        let n = accepting.len();
        assert_eq!(delta.len(), n, "one transition list per state");
        assert!(initial.iter().all(|&q| q < n), "initial state out of range");
        for out in &mut delta {
            assert!(out.iter().all(|(_, q)| *q < n), "transition target out of range");
            out.sort();
            out.dedup();
        }
        Nfa { source, initial, accepting, delta }
    }

    pub fn source(&self) -> &Program {
        &self.source
    }

    pub fn state_count(&self) -> usize {
        self.accepting.len()
    }

    pub fn initial(&self) -> &[StateId] {
        &self.initial
    }

    pub fn is_accepting(&self, q: StateId) -> bool {
        self.accepting[q]
    }

    pub fn accepting_states(&self) -> impl Iterator<Item = StateId> + '_ {
        (0..self.state_count()).filter(|&q| self.accepting[q])
    }

    /// `δ_A(q)`, or `None` for an unknown state.
    pub fn delta(&self, q: StateId) -> Option<&[(Symbol, StateId)]> {
        self.delta.get(q).map(Vec::as_slice)
    }

    /// Like [`Nfa::delta`] but panics on an unknown state.
    pub fn transitions(&self, q: StateId) -> &[(Symbol, StateId)] {
        &self.delta[q]
    }

    pub fn transition_count(&self) -> usize {
        self.delta.iter().map(Vec::len).sum()
    }

    pub fn symbols(&self) -> BTreeSet<&Symbol> {
        self.delta.iter().flatten().map(|(s, _)| s).collect()
    }

    pub fn test_formulas(&self) -> impl Iterator<Item = &Formula> {
        self.delta.iter().flatten().filter_map(|(s, _)| match s {
            Symbol::Test(f) => Some(&**f),
            Symbol::Atomic(_) => None,
        })
    }

    pub fn has_tests(&self) -> bool {
        self.test_formulas().next().is_some()
    }

    /// Rewrites every test formula (and the source program) with `f`.
    pub fn map_tests(&self, f: &dyn Fn(&Formula) -> Formula) -> Nfa {
        let delta = self
            .delta
            .iter()
            .map(|out| {
                let mut out: Vec<_> = out
                    .iter()
                    .map(|(s, q)| match s {
                        Symbol::Test(t) => (Symbol::Test(Arc::new(f(t))), *q),
                        other => (other.clone(), *q),
                    })
                    .collect();
                out.sort();
                out.dedup();
                out
            })
            .collect();
        Nfa {
            source: map_program_tests(&self.source, f),
            initial: self.initial.clone(),
            accepting: self.accepting.clone(),
            delta,
        }
    }

    /// True iff some run from `start` over `word` ends in an accepting state.
    pub fn accepts(&self, start: StateId, word: &[Symbol]) -> bool {
        if start >= self.state_count() {
            return false;
        }
        let mut current = BTreeSet::from([start]);
        for letter in word {
            current = current
                .iter()
                .flat_map(|&q| self.delta[q].iter())
                .filter(|(s, _)| s == letter)
                .map(|(_, q)| *q)
                .collect();
            if current.is_empty() {
                return false;
            }
        }
        current.iter().any(|&q| self.accepting[q])
    }

    /// All accepted words of length at most `max_len` from `start`.
    pub fn enumerate_words(&self, start: StateId, max_len: usize) -> BTreeSet<Word> {
        let mut out = BTreeSet::new();
        let mut frontier: BTreeSet<(Word, StateId)> = BTreeSet::from([(Vec::new(), start)]);
        for len in 0..=max_len {
            for (w, q) in &frontier {
                if self.accepting[*q] {
                    out.insert(w.clone());
                }
            }
            if len == max_len {
                break;
            }
            let mut next = BTreeSet::new();
            for (w, q) in &frontier {
                for (s, q2) in &self.delta[*q] {
                    let mut w2 = w.clone();
                    w2.push(s.clone());
                    next.insert((w2, *q2));
                }
            }
            frontier = next;
        }
        out
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph nfa {\n  rankdir=LR;\n");
        for q in 0..self.state_count() {
            let shape = if self.accepting[q] { "doublecircle" } else { "circle" };
            let _ = writeln!(s, "  q{q} [shape={shape}, label=\"{q}\"];");
        }
        for &q in &self.initial {
            let _ = writeln!(s, "  start{q} [shape=point];\n  start{q} -> q{q};");
        }
        for (q, out) in self.delta.iter().enumerate() {
            for (sym, q2) in out {
                let label = sym.to_string().replace('"', "\\\"");
                let _ = writeln!(s, "  q{q} -> q{q2} [label=\"{label}\"];");
            }
        }
        s.push_str("}\n");
        s
    }
}

fn map_program_tests(p: &Program, f: &dyn Fn(&Formula) -> Formula) -> Program {
    match p {
        Program::Atomic(_) => p.clone(),
        Program::Seq(a, b) => {
            Program::Seq(Arc::new(map_program_tests(a, f)), Arc::new(map_program_tests(b, f)))
        }
        Program::Choice(a, b) => {
            Program::Choice(Arc::new(map_program_tests(a, f)), Arc::new(map_program_tests(b, f)))
        }
        Program::Star(a) => Program::Star(Arc::new(map_program_tests(a, f))),
        Program::Test(t) => Program::Test(Arc::new(f(t))),
    }
}

impl fmt::Display for Nfa {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Aut({})", self.source)
    }
}
