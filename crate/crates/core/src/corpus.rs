//! Seeded random generators for programs, formulas, ABoxes and finite models.
//! Used by the test suites and the benchmarks; the same seed always yields
//! the same sequence.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::kripke::KripkeModel;
use crate::syntax::{abox_to_nnf, name, ABox, Assertion, Formula, Name, Program};

/// Size limits of generated objects.
#[derive(Clone, Debug)]
pub struct Params {
    pub nominals: usize,
    pub programs: usize,
    pub props: usize,
    pub formula_depth: usize,
    pub program_depth: usize,
    pub max_assertions: usize,
}

impl Default for Params {
    fn default() -> Self {
        Params {
            nominals: 2,
            programs: 2,
            props: 2,
            formula_depth: 2,
            program_depth: 2,
            max_assertions: 4,
        }
    }
}

pub struct Corpus {
    rng: ChaCha8Rng,
    params: Params,
    nominals: Vec<Name>,
    programs: Vec<Name>,
    props: Vec<Name>,
}

const NOMINALS: [&str; 4] = ["a", "b", "c", "d"];
const PROGRAMS: [&str; 4] = ["s", "t", "u", "w"];
const PROPS: [&str; 4] = ["p", "q", "r", "z"];

impl Corpus {
    pub fn new(seed: u64) -> Self {
        Self::with_params(seed, Params::default())
    }

    pub fn with_params(seed: u64, params: Params) -> Self {
        let pick = |pool: &[&str], n: usize| pool.iter().take(n.clamp(1, pool.len())).map(|s| name(s)).collect();
        Corpus {
            rng: ChaCha8Rng::seed_from_u64(seed),
            nominals: pick(&NOMINALS, params.nominals),
            programs: pick(&PROGRAMS, params.programs),
            props: pick(&PROPS, params.props),
            params,
        }
    }

    pub fn params(&self) -> &Params {
        &self.params
    }

    fn choose(&mut self, pool: &[Name]) -> Name {
        pool[self.rng.random_range(0..pool.len())].clone()
    }

    fn literal(&mut self) -> Formula {
        let atom = if self.rng.random_bool(0.25) {
            Formula::Nominal(self.choose(&self.nominals.clone()))
        } else {
            Formula::Prop(self.choose(&self.props.clone()))
        };
        if self.rng.random_bool(0.3) {
            Formula::not(atom)
        } else {
            atom
        }
    }

    /// A program of at most the given nesting depth. Tests hold literals.
    pub fn program(&mut self, depth: usize) -> Program {
        if depth == 0 || self.rng.random_bool(0.3) {
            return if self.rng.random_bool(0.15) {
                Program::test(self.literal())
            } else {
                Program::Atomic(self.choose(&self.programs.clone()))
            };
        }
        match self.rng.random_range(0..3) {
            0 => Program::seq(self.program(depth - 1), self.program(depth - 1)),
            1 => Program::choice(self.program(depth - 1), self.program(depth - 1)),
            _ => Program::star(self.program(depth - 1)),
        }
    }

    /// A formula of the full syntax (negation anywhere, implication) with
    /// modal nesting bounded by `depth`.
    pub fn formula(&mut self, depth: usize) -> Formula {
        if depth == 0 || self.rng.random_bool(0.2) {
            return match self.rng.random_range(0..20) {
                0 => Formula::Top,
                1 => Formula::Bot,
                _ => self.literal(),
            };
        }
        let pd = self.params.program_depth;
        match self.rng.random_range(0..7) {
            0 => Formula::not(self.formula(depth - 1)),
            1 => Formula::and(self.formula(depth - 1), self.formula(depth - 1)),
            2 => Formula::or(self.formula(depth - 1), self.formula(depth - 1)),
            3 => Formula::implies(self.formula(depth - 1), self.formula(depth - 1)),
            4 | 5 => Formula::diamond(self.program(pd), self.formula(depth - 1)),
            _ => Formula::boxed(self.program(pd), self.formula(depth - 1)),
        }
    }

    /// A non-empty ABox in NNF.
    pub fn abox(&mut self) -> ABox {
        let n = self.rng.random_range(1..=self.params.max_assertions);
        let mut g = ABox::new();
        for _ in 0..n {
            let noms = self.nominals.clone();
            let x = if self.rng.random_bool(0.2) {
                let s = self.choose(&self.programs.clone());
                Assertion::Edge { program: s, from: self.choose(&noms), to: self.choose(&noms) }
            } else {
                let d = self.params.formula_depth;
                Assertion::Holds { subject: Some(self.choose(&noms)), formula: self.formula(d) }
            };
            g.insert(x);
        }
        abox_to_nnf(&g)
    }

    /// A model over `worlds` worlds interpreting every name the corpus uses.
    pub fn model(&mut self, worlds: usize) -> KripkeModel {
        let worlds = worlds.max(1);
        let mut m = KripkeModel::with_worlds((0..worlds).map(|i| format!("w{i}")));
        for p in self.props.clone() {
            m.declare_prop(&p);
            for w in 0..worlds {
                if self.rng.random_bool(0.5) {
                    m.set_prop(&p, w);
                }
            }
        }
        for s in self.programs.clone() {
            m.declare_program(&s);
            for x in 0..worlds {
                for y in 0..worlds {
                    if self.rng.random_bool(0.35) {
                        m.add_edge(&s, x, y);
                    }
                }
            }
        }
        for a in self.nominals.clone() {
            let w = self.rng.random_range(0..worlds);
            m.set_nominal(&a, w);
        }
        m
    }
}

/// `n` ABoxes from the default parameters.
pub fn aboxes(seed: u64, n: usize) -> Vec<ABox> {
    let mut c = Corpus::new(seed);
    (0..n).map(|_| c.abox()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_output() {
        assert_eq!(aboxes(7, 20), aboxes(7, 20));
        assert_ne!(aboxes(7, 20), aboxes(8, 20));
    }

    #[test]
    fn aboxes_respect_limits() {
        for g in aboxes(1, 200) {
            let sig = g.signature();
            assert!(sig.nominals.len() <= 2 && sig.programs.len() <= 2 && sig.props.len() <= 2);
            assert!((1..=4).contains(&g.iter().count()));
            assert!(g.iter().all(|x| x.formula().is_none_or(Formula::is_nnf)));
        }
    }

    #[test]
    fn programs_respect_depth() {
        let mut c = Corpus::new(3);
        for _ in 0..200 {
            assert!(c.program(2).depth() <= 2);
        }
    }
}
