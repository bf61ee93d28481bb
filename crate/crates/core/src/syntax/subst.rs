use std::sync::Arc;

use super::ast::{Assertion, Formula, Name, Program};

/// Renames nominals everywhere, including subjects, program edges and tests
/// inside automata. `map` returns `None` for nominals that stay unchanged.
pub fn rename_formula(f: &Formula, map: &dyn Fn(&Name) -> Option<Name>) -> Formula {
    match f {
        Formula::Top | Formula::Bot | Formula::Prop(_) => f.clone(),
        Formula::Nominal(a) => match map(a) {
            Some(b) => Formula::Nominal(b),
            None => f.clone(),
        },
        Formula::Not(g) => Formula::Not(Arc::new(rename_formula(g, map))),
        Formula::And(a, b) => Formula::and(rename_formula(a, map), rename_formula(b, map)),
        Formula::Or(a, b) => Formula::or(rename_formula(a, map), rename_formula(b, map)),
        Formula::Implies(a, b) => {
            Formula::implies(rename_formula(a, map), rename_formula(b, map))
        }
        Formula::Diamond(p, g) => Formula::diamond(rename_program(p, map), rename_formula(g, map)),
        Formula::Box(p, g) => Formula::boxed(rename_program(p, map), rename_formula(g, map)),
        Formula::AutDiamond(a, q, g) => {
            let a = if a.has_tests() { Arc::new(a.map_tests(&|t| rename_formula(t, map))) } else { a.clone() };
            Formula::AutDiamond(a, *q, Arc::new(rename_formula(g, map)))
        }
        Formula::AutBox(a, q, g) => {
            let a = if a.has_tests() { Arc::new(a.map_tests(&|t| rename_formula(t, map))) } else { a.clone() };
            Formula::AutBox(a, *q, Arc::new(rename_formula(g, map)))
        }
    }
}

pub fn rename_program(p: &Program, map: &dyn Fn(&Name) -> Option<Name>) -> Program {
    match p {
        Program::Atomic(_) => p.clone(),
        Program::Seq(a, b) => Program::seq(rename_program(a, map), rename_program(b, map)),
        Program::Choice(a, b) => Program::choice(rename_program(a, map), rename_program(b, map)),
        Program::Star(a) => Program::star(rename_program(a, map)),
        Program::Test(f) => Program::test(rename_formula(f, map)),
    }
}

pub fn rename_assertion(x: &Assertion, map: &dyn Fn(&Name) -> Option<Name>) -> Assertion {
    let rn = |n: &Name| map(n).unwrap_or_else(|| n.clone());
    match x {
        Assertion::Holds { subject, formula } => Assertion::Holds {
            subject: subject.as_ref().map(rn),
            formula: rename_formula(formula, map),
        },
        Assertion::Edge { program, from, to } => {
            Assertion::Edge { program: program.clone(), from: rn(from), to: rn(to) }
        }
    }
}

/// Replaces every occurrence of the nominal `from` with `to`.
pub fn substitute_nominal(f: &Formula, from: &Name, to: &Name) -> Formula {
    rename_formula(f, &|n| (n == from).then(|| to.clone()))
}

pub fn substitute_assertion(x: &Assertion, from: &Name, to: &Name) -> Assertion {
    rename_assertion(x, &|n| (n == from).then(|| to.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::compile_program;
    use crate::syntax::{name, parse_formula, parse_program};

    #[test]
    fn automaton_tests_are_renamed() {
        let a2 = Arc::new(compile_program(&parse_program("(?('a)+s)*").unwrap()));
        let a3 = Arc::new(compile_program(&parse_program("(?('b)+s)*").unwrap()));
        let not_p = parse_formula("~p").unwrap();
        let x = Assertion::at("b", Formula::aut_diamond(a2, 0, not_p.clone()));
        let y = substitute_assertion(&x, &name("a"), &name("b"));
        assert_eq!(y, Assertion::at("b", Formula::aut_diamond(a3, 0, not_p)));
    }

    #[test]
    fn absent_nominal_is_noop() {
        let p = Formula::prop("p");
        assert_eq!(substitute_nominal(&p, &name("a"), &name("b")), p);
    }

    #[test]
    fn edges_and_subjects() {
        let e = Assertion::edge("s", "a", "a");
        assert_eq!(substitute_assertion(&e, &name("a"), &name("b")), Assertion::edge("s", "b", "b"));
        let x = Assertion::at("a", Formula::nominal("a"));
        assert_eq!(
            substitute_assertion(&x, &name("a"), &name("c")),
            Assertion::at("c", Formula::nominal("c"))
        );
    }
}
