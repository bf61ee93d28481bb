use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::automata::{Nfa, StateId};

/// Identifier of a proposition, nominal or atomic program.
pub type Name = Arc<str>;

pub fn name(s: &str) -> Name {
    Arc::from(s)
}

/// Programs of the base language. A program is a regular expression over
/// atomic programs and tests.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Program {
    Atomic(Name),
    Seq(Arc<Program>, Arc<Program>),
    Choice(Arc<Program>, Arc<Program>),
    Star(Arc<Program>),
    Test(Arc<Formula>),
}

/// Formulas of the extended language, including the automaton-modal
/// operators `[A,q]` and `<A,q>` introduced by the tableau rules.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Formula {
    Top,
    Bot,
    Prop(Name),
    Nominal(Name),
    Not(Arc<Formula>),
    And(Arc<Formula>, Arc<Formula>),
    Or(Arc<Formula>, Arc<Formula>),
    Implies(Arc<Formula>, Arc<Formula>),
    Diamond(Arc<Program>, Arc<Formula>),
    Box(Arc<Program>, Arc<Formula>),
    AutDiamond(Arc<Nfa>, StateId, Arc<Formula>),
    AutBox(Arc<Nfa>, StateId, Arc<Formula>),
}

/// `o:φ` (with `o` absent meaning a bare formula) or `σ(a,b)`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Assertion {
    Holds { subject: Option<Name>, formula: Formula },
    Edge { program: Name, from: Name, to: Name },
}

/// A finite set of assertions.
#[derive(Clone, PartialEq, Eq, Default, Debug)]
pub struct ABox {
    assertions: BTreeSet<Assertion>,
}

impl Program {
    pub fn atomic(n: &str) -> Self {
        Program::Atomic(name(n))
    }

    pub fn seq(a: Program, b: Program) -> Self {
        Program::Seq(Arc::new(a), Arc::new(b))
    }

    pub fn choice(a: Program, b: Program) -> Self {
        Program::Choice(Arc::new(a), Arc::new(b))
    }

    pub fn star(a: Program) -> Self {
        Program::Star(Arc::new(a))
    }

    pub fn test(f: Formula) -> Self {
        Program::Test(Arc::new(f))
    }

    pub fn is_atomic(&self) -> bool {
        matches!(self, Program::Atomic(_))
    }

    pub fn is_test(&self) -> bool {
        matches!(self, Program::Test(_))
    }

    /// Number of symbol occurrences.
    pub fn len(&self) -> usize {
        match self {
            Program::Atomic(_) => 1,
            Program::Seq(a, b) | Program::Choice(a, b) => 1 + a.len() + b.len(),
            Program::Star(a) => 1 + a.len(),
            Program::Test(f) => 1 + f.len(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Program::Atomic(_) | Program::Test(_) => 0,
            Program::Seq(a, b) | Program::Choice(a, b) => 1 + a.depth().max(b.depth()),
            Program::Star(a) => 1 + a.depth(),
        }
    }
}

impl Formula {
    pub fn prop(n: &str) -> Self {
        Formula::Prop(name(n))
    }

    pub fn nominal(n: &str) -> Self {
        Formula::Nominal(name(n))
    }

    pub fn not(f: Formula) -> Self {
        Formula::Not(Arc::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Arc::new(a), Arc::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Arc::new(a), Arc::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Self {
        Formula::Implies(Arc::new(a), Arc::new(b))
    }

    pub fn diamond(p: Program, f: Formula) -> Self {
        Formula::Diamond(Arc::new(p), Arc::new(f))
    }

    pub fn boxed(p: Program, f: Formula) -> Self {
        Formula::Box(Arc::new(p), Arc::new(f))
    }

    pub fn aut_diamond(a: Arc<Nfa>, q: StateId, f: Formula) -> Self {
        Formula::AutDiamond(a, q, Arc::new(f))
    }

    pub fn aut_box(a: Arc<Nfa>, q: StateId, f: Formula) -> Self {
        Formula::AutBox(a, q, Arc::new(f))
    }

    /// Number of symbol occurrences; automata count as one symbol per
    /// transition plus one.
    pub fn len(&self) -> usize {
        match self {
            Formula::Top | Formula::Bot | Formula::Prop(_) | Formula::Nominal(_) => 1,
            Formula::Not(f) => 1 + f.len(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                1 + a.len() + b.len()
            }
            Formula::Diamond(p, f) | Formula::Box(p, f) => 1 + p.len() + f.len(),
            Formula::AutDiamond(a, _, f) | Formula::AutBox(a, _, f) => {
                1 + a.transition_count() + f.len()
            }
        }
    }

    /// True if the formula is in negation normal form.
    pub fn is_nnf(&self) -> bool {
        match self {
            Formula::Top | Formula::Bot | Formula::Prop(_) | Formula::Nominal(_) => true,
            Formula::Not(f) => matches!(**f, Formula::Prop(_) | Formula::Nominal(_)),
            Formula::Implies(..) => false,
            Formula::And(a, b) | Formula::Or(a, b) => a.is_nnf() && b.is_nnf(),
            Formula::Diamond(p, f) | Formula::Box(p, f) => program_is_nnf(p) && f.is_nnf(),
            Formula::AutDiamond(a, _, f) | Formula::AutBox(a, _, f) => {
                a.test_formulas().all(Formula::is_nnf) && f.is_nnf()
            }
        }
    }

    /// True if no automaton-modal operator occurs.
    pub fn is_surface(&self) -> bool {
        match self {
            Formula::Top | Formula::Bot | Formula::Prop(_) | Formula::Nominal(_) => true,
            Formula::Not(f) => f.is_surface(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.is_surface() && b.is_surface()
            }
            Formula::Diamond(p, f) | Formula::Box(p, f) => program_is_surface(p) && f.is_surface(),
            Formula::AutDiamond(..) | Formula::AutBox(..) => false,
        }
    }

    /// Whether `self` is `<A,q>φ`, the first kind of eventuality.
    pub fn is_aut_diamond(&self) -> bool {
        matches!(self, Formula::AutDiamond(..))
    }

    /// Whether `self` is `<ω><A,q>φ` with `ω` an atomic program or a test.
    pub fn is_step_eventuality(&self) -> bool {
        match self {
            Formula::Diamond(p, f) => (p.is_atomic() || p.is_test()) && f.is_aut_diamond(),
            _ => false,
        }
    }

    /// Eventualities are the formulas whose fulfillment needs a finite path.
    pub fn is_eventuality(&self) -> bool {
        self.is_aut_diamond() || self.is_step_eventuality()
    }
}

fn program_is_nnf(p: &Program) -> bool {
    match p {
        Program::Atomic(_) => true,
        Program::Seq(a, b) | Program::Choice(a, b) => program_is_nnf(a) && program_is_nnf(b),
        Program::Star(a) => program_is_nnf(a),
        Program::Test(f) => f.is_nnf(),
    }
}

fn program_is_surface(p: &Program) -> bool {
    match p {
        Program::Atomic(_) => true,
        Program::Seq(a, b) | Program::Choice(a, b) => {
            program_is_surface(a) && program_is_surface(b)
        }
        Program::Star(a) => program_is_surface(a),
        Program::Test(f) => f.is_surface(),
    }
}

impl Assertion {
    pub fn at(subject: &str, formula: Formula) -> Self {
        Assertion::Holds { subject: Some(name(subject)), formula }
    }

    pub fn bare(formula: Formula) -> Self {
        Assertion::Holds { subject: None, formula }
    }

    pub fn holds(subject: Option<Name>, formula: Formula) -> Self {
        Assertion::Holds { subject, formula }
    }

    pub fn edge(program: &str, from: &str, to: &str) -> Self {
        Assertion::Edge { program: name(program), from: name(from), to: name(to) }
    }

    pub fn formula(&self) -> Option<&Formula> {
        match self {
            Assertion::Holds { formula, .. } => Some(formula),
            Assertion::Edge { .. } => None,
        }
    }

    pub fn subject(&self) -> Option<&Name> {
        match self {
            Assertion::Holds { subject, .. } => subject.as_ref(),
            Assertion::Edge { .. } => None,
        }
    }

    pub fn is_eventuality(&self) -> bool {
        self.formula().is_some_and(Formula::is_eventuality)
    }

    pub fn len(&self) -> usize {
        match self {
            Assertion::Holds { subject, formula } => {
                usize::from(subject.is_some()) + formula.len()
            }
            Assertion::Edge { .. } => 3,
        }
    }

    /// Same subject, different formula.
    pub fn with_formula(&self, formula: Formula) -> Assertion {
        match self {
            Assertion::Holds { subject, .. } => Assertion::Holds { subject: subject.clone(), formula },
            Assertion::Edge { .. } => panic!("edge assertion has no formula"),
        }
    }
}

impl ABox {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, a: Assertion) -> bool {
        self.assertions.insert(a)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Assertion> {
        self.assertions.iter()
    }

    pub fn len(&self) -> usize {
        self.assertions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assertions.is_empty()
    }

    pub fn assertions(&self) -> &BTreeSet<Assertion> {
        &self.assertions
    }

    pub fn into_set(self) -> BTreeSet<Assertion> {
        self.assertions
    }

    /// Size in symbol occurrences.
    pub fn size(&self) -> usize {
        self.assertions.iter().map(Assertion::len).sum()
    }

    pub fn signature(&self) -> Signature {
        let mut sig = Signature::default();
        for a in &self.assertions {
            sig.add_assertion(a);
        }
        sig
    }
}

impl FromIterator<Assertion> for ABox {
    fn from_iter<T: IntoIterator<Item = Assertion>>(iter: T) -> Self {
        ABox { assertions: iter.into_iter().collect() }
    }
}

impl<'a> IntoIterator for &'a ABox {
    type Item = &'a Assertion;
    type IntoIter = std::collections::btree_set::Iter<'a, Assertion>;

    fn into_iter(self) -> Self::IntoIter {
        self.assertions.iter()
    }
}

/// Nominals, propositions and atomic programs occurring somewhere.
#[derive(Clone, Default, Debug, PartialEq, Eq)]
pub struct Signature {
    pub nominals: BTreeSet<Name>,
    pub props: BTreeSet<Name>,
    pub programs: BTreeSet<Name>,
}

impl Signature {
    pub fn add_assertion(&mut self, a: &Assertion) {
        match a {
            Assertion::Holds { subject, formula } => {
                if let Some(s) = subject {
                    self.nominals.insert(s.clone());
                }
                self.add_formula(formula);
            }
            Assertion::Edge { program, from, to } => {
                self.programs.insert(program.clone());
                self.nominals.insert(from.clone());
                self.nominals.insert(to.clone());
            }
        }
    }

    pub fn add_formula(&mut self, f: &Formula) {
        match f {
            Formula::Top | Formula::Bot => {}
            Formula::Prop(p) => {
                self.props.insert(p.clone());
            }
            Formula::Nominal(a) => {
                self.nominals.insert(a.clone());
            }
            Formula::Not(g) => self.add_formula(g),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                self.add_formula(a);
                self.add_formula(b);
            }
            Formula::Diamond(p, g) | Formula::Box(p, g) => {
                self.add_program(p);
                self.add_formula(g);
            }
            Formula::AutDiamond(a, _, g) | Formula::AutBox(a, _, g) => {
                for s in a.symbols() {
                    match s {
                        crate::automata::Symbol::Atomic(n) => {
                            self.programs.insert(n.clone());
                        }
                        crate::automata::Symbol::Test(t) => self.add_formula(t),
                    }
                }
                self.add_formula(g);
            }
        }
    }

    pub fn add_program(&mut self, p: &Program) {
        match p {
            Program::Atomic(n) => {
                self.programs.insert(n.clone());
            }
            Program::Seq(a, b) | Program::Choice(a, b) => {
                self.add_program(a);
                self.add_program(b);
            }
            Program::Star(a) => self.add_program(a),
            Program::Test(f) => self.add_formula(f),
        }
    }
}

impl fmt::Display for ABox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, a) in self.assertions.iter().enumerate() {
            if i > 0 {
                writeln!(f, ";")?;
            }
            write!(f, "{a}")?;
        }
        Ok(())
    }
}
