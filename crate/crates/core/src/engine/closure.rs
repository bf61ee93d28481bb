//! The finite set every label member must come from, used to check runs.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

use crate::automata::compile_program;
use crate::syntax::{negate_nnf, rename_assertion, ABox, Assertion, Formula, Name, Program};
use crate::tableau::{NodeId, Repl, Tableau};

#[derive(Clone, Debug)]
pub struct Closure {
    /// Subformulas of `Γ` and their NNF negations.
    pub bsf: BTreeSet<Formula>,
    /// `Γ ∪ bsf` extended with automaton unfoldings and nominal prefixes.
    pub cls_z: HashSet<Assertion>,
    pub nominals: BTreeSet<Name>,
    /// Size of `Γ`: the sum of the lengths of its assertions.
    pub size: usize,
}

impl Closure {
    /// `64·n⁴`, the bound checked against `|cls_z|`.
    pub fn bound(&self) -> u128 {
        64 * (self.size as u128).pow(4)
    }

    pub fn within_bound(&self) -> bool {
        (self.cls_z.len() as u128) <= self.bound()
    }
}

fn subformulas(f: &Formula, out: &mut BTreeSet<Formula>) {
    if !out.insert(f.clone()) {
        return;
    }
    match f {
        Formula::Not(g) => subformulas(g, out),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
            subformulas(a, out);
            subformulas(b, out);
        }
        Formula::Diamond(p, g) | Formula::Box(p, g) => {
            program_tests(p, out);
            subformulas(g, out);
        }
        Formula::AutDiamond(a, _, g) | Formula::AutBox(a, _, g) => {
            for t in a.test_formulas() {
                subformulas(t, out);
            }
            subformulas(g, out);
        }
        Formula::Top | Formula::Bot | Formula::Prop(_) | Formula::Nominal(_) => {}
    }
}

fn program_tests(p: &Program, out: &mut BTreeSet<Formula>) {
    match p {
        Program::Atomic(_) => {}
        Program::Seq(a, b) | Program::Choice(a, b) => {
            program_tests(a, out);
            program_tests(b, out);
        }
        Program::Star(a) => program_tests(a, out),
        Program::Test(f) => subformulas(f, out),
    }
}

pub fn build_closure(gamma: &ABox) -> Closure {
    let mut subs = BTreeSet::new();
    for x in gamma {
        if let Some(f) = x.formula() {
            subformulas(f, &mut subs);
        }
    }
    let mut bsf = subs.clone();
    bsf.extend(subs.iter().map(negate_nnf));

    let mut formulas: BTreeSet<Formula> = bsf.clone();
    for f in &bsf {
        let (alpha, phi, boxed) = match f {
            Formula::Box(p, g) => (p, g, true),
            Formula::Diamond(p, g) => (p, g, false),
            _ => continue,
        };
        let aut = Arc::new(compile_program(alpha));
        let letters: Vec<Program> = aut.symbols().into_iter().map(|s| s.to_program()).collect();
        for q in 0..aut.state_count() {
            let inner = if boxed {
                Formula::AutBox(aut.clone(), q, phi.clone())
            } else {
                Formula::AutDiamond(aut.clone(), q, phi.clone())
            };
            for w in &letters {
                let w = Arc::new(w.clone());
                let inner = Arc::new(inner.clone());
                formulas.insert(if boxed { Formula::Box(w, inner) } else { Formula::Diamond(w, inner) });
            }
            formulas.insert(inner);
        }
    }

    let nominals = gamma.signature().nominals;
    let mut cls_z: HashSet<Assertion> = gamma.iter().cloned().collect();
    for f in &formulas {
        cls_z.insert(Assertion::bare(f.clone()));
        for a in &nominals {
            cls_z.insert(Assertion::holds(Some(a.clone()), f.clone()));
        }
    }
    Closure { bsf, cls_z, nominals, size: gamma.size() }
}

/// A label member outside the closure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabelViolation {
    pub node: NodeId,
    pub assertion: Assertion,
}

impl fmt::Display for LabelViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}: {} is outside the closure", self.node, self.assertion)
    }
}

/// Checks every label and reduced set against the closure under the
/// replacement of the node (complex nodes) or of some complex-state
/// ancestor (simple nodes).
pub fn validate_labels(g: &Tableau, cl: &Closure) -> Result<(), LabelViolation> {
    let mut images: HashMap<Repl, HashSet<Assertion>> = HashMap::new();
    for n in g.nodes() {
        let repls: Vec<Repl> = match &n.repl {
            Some(r) => vec![r.clone()],
            None => {
                let mut rs: Vec<Repl> = g
                    .ancestor_complex_states(n.id)
                    .into_iter()
                    .filter_map(|u| g.node(u).repl.clone())
                    .collect();
                rs.push(Repl::new());
                rs.sort();
                rs.dedup();
                rs
            }
        };
        for r in &repls {
            images.entry(r.clone()).or_insert_with(|| {
                let map = |x: &Name| r.get(x).cloned();
                cl.cls_z.iter().map(|x| rename_assertion(x, &map)).collect()
            });
        }
        let mut first_bad = None;
        let ok = repls.iter().any(|r| {
            let img = &images[r];
            match n.label.iter().chain(n.reduced.iter()).find(|x| !img.contains(*x)) {
                None => true,
                Some(x) => {
                    first_bad.get_or_insert_with(|| x.clone());
                    false
                }
            }
        });
        if let (false, Some(assertion)) = (ok, first_bad) {
            return Err(LabelViolation { node: n.id, assertion });
        }
    }
    Ok(())
}
