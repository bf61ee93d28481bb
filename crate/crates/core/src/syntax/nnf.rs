use std::sync::Arc;

use super::ast::{ABox, Assertion, Formula, Program};

/// Negation normal form: no `->`, and `~` only in front of propositions and
/// nominals. Tests inside programs are normalised as well.
pub fn to_nnf(f: &Formula) -> Formula {
    pos(f)
}

fn pos(f: &Formula) -> Formula {
    match f {
        Formula::Top | Formula::Bot | Formula::Prop(_) | Formula::Nominal(_) => f.clone(),
        Formula::Not(g) => neg(g),
        Formula::And(a, b) => Formula::and(pos(a), pos(b)),
        Formula::Or(a, b) => Formula::or(pos(a), pos(b)),
        Formula::Implies(a, b) => Formula::or(neg(a), pos(b)),
        Formula::Diamond(p, g) => Formula::diamond(program_to_nnf(p), pos(g)),
        Formula::Box(p, g) => Formula::boxed(program_to_nnf(p), pos(g)),
        Formula::AutDiamond(a, q, g) => Formula::AutDiamond(a.clone(), *q, Arc::new(pos(g))),
        Formula::AutBox(a, q, g) => Formula::AutBox(a.clone(), *q, Arc::new(pos(g))),
    }
}

/// NNF of `~f`.
fn neg(f: &Formula) -> Formula {
    match f {
        Formula::Top => Formula::Bot,
        Formula::Bot => Formula::Top,
        Formula::Prop(_) | Formula::Nominal(_) => Formula::not(f.clone()),
        Formula::Not(g) => pos(g),
        Formula::And(a, b) => Formula::or(neg(a), neg(b)),
        Formula::Or(a, b) => Formula::and(neg(a), neg(b)),
        Formula::Implies(a, b) => Formula::and(pos(a), neg(b)),
        Formula::Diamond(p, g) => Formula::boxed(program_to_nnf(p), neg(g)),
        Formula::Box(p, g) => Formula::diamond(program_to_nnf(p), neg(g)),
        Formula::AutDiamond(a, q, g) => Formula::AutBox(a.clone(), *q, Arc::new(neg(g))),
        Formula::AutBox(a, q, g) => Formula::AutDiamond(a.clone(), *q, Arc::new(neg(g))),
    }
}

pub fn program_to_nnf(p: &Program) -> Program {
    match p {
        Program::Atomic(_) => p.clone(),
        Program::Seq(a, b) => Program::seq(program_to_nnf(a), program_to_nnf(b)),
        Program::Choice(a, b) => Program::choice(program_to_nnf(a), program_to_nnf(b)),
        Program::Star(a) => Program::star(program_to_nnf(a)),
        Program::Test(f) => Program::test(pos(f)),
    }
}

/// `φ̄`, the NNF of `~φ`, for `φ` already in NNF. On NNF input this is a
/// structural involution; other input is normalised first.
pub fn negate_nnf(f: &Formula) -> Formula {
    match f {
        Formula::Top => Formula::Bot,
        Formula::Bot => Formula::Top,
        Formula::Prop(_) | Formula::Nominal(_) => Formula::not(f.clone()),
        Formula::Not(g) if matches!(**g, Formula::Prop(_) | Formula::Nominal(_)) => (**g).clone(),
        Formula::And(a, b) => Formula::or(negate_nnf(a), negate_nnf(b)),
        Formula::Or(a, b) => Formula::and(negate_nnf(a), negate_nnf(b)),
        Formula::Diamond(p, g) => Formula::Box(p.clone(), Arc::new(negate_nnf(g))),
        Formula::Box(p, g) => Formula::Diamond(p.clone(), Arc::new(negate_nnf(g))),
        Formula::AutDiamond(a, q, g) => Formula::AutBox(a.clone(), *q, Arc::new(negate_nnf(g))),
        Formula::AutBox(a, q, g) => Formula::AutDiamond(a.clone(), *q, Arc::new(negate_nnf(g))),
        Formula::Not(_) | Formula::Implies(..) => neg(f),
    }
}

pub fn assertion_to_nnf(a: &Assertion) -> Assertion {
    match a {
        Assertion::Holds { subject, formula } => {
            Assertion::Holds { subject: subject.clone(), formula: to_nnf(formula) }
        }
        Assertion::Edge { .. } => a.clone(),
    }
}

/// `ξ̄`: for `o:φ` this is `o:φ̄`. Program edges have no complement.
pub fn negate_assertion(a: &Assertion) -> Option<Assertion> {
    match a {
        Assertion::Holds { subject, formula } => {
            Some(Assertion::Holds { subject: subject.clone(), formula: negate_nnf(formula) })
        }
        Assertion::Edge { .. } => None,
    }
}

pub fn abox_to_nnf(g: &ABox) -> ABox {
    g.iter().map(assertion_to_nnf).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_formula;

    fn nnf(s: &str) -> String {
        to_nnf(&parse_formula(s).unwrap()).to_string()
    }

    #[test]
    fn de_morgan() {
        assert_eq!(nnf("~(p & q)"), "(~p | ~q)");
    }

    #[test]
    fn modal_duality() {
        assert_eq!(nnf("~<s>p"), "[s]~p");
    }

    #[test]
    fn implication() {
        assert_eq!(nnf("~(p -> q)"), "(p & ~q)");
        assert_eq!(nnf("p -> q"), "(~p | q)");
    }

    #[test]
    fn tests_inside_programs() {
        assert_eq!(nnf("[?(~~p)]q"), "[?(p)]q");
    }

    #[test]
    fn negation_of_star_test_eventuality() {
        let f = parse_formula("<(?('a)+s)*>~p").unwrap();
        assert_eq!(negate_nnf(&f).to_string(), "[(?('a)+s)*]p");
        assert_eq!(negate_nnf(&negate_nnf(&f)), f);
    }

    #[test]
    fn output_is_nnf() {
        let f = parse_formula("~([s*](p -> ~<t>'a) | ~q)").unwrap();
        assert!(!f.is_nnf());
        assert!(to_nnf(&f).is_nnf());
    }
}
