//! Backtracking search for small models. Partial models leave propositions
//! and edges undecided; a three-valued evaluation (what holds in every
//! completion / in some completion) prunes branches early.

use super::{check_abox, KripkeModel};
use crate::automata::Nfa;
use crate::syntax::{ABox, Assertion, Formula, Name, Program};

/// Hard cap on visited search nodes across one call.
pub const SEARCH_BUDGET: u64 = 10_000_000;

#[derive(Clone, Debug)]
pub enum SearchOutcome {
    Found(KripkeModel),
    /// No model with at most the given number of worlds. Not a proof of
    /// unsatisfiability.
    NoModel,
    GaveUp,
}

impl SearchOutcome {
    pub fn model(&self) -> Option<&KripkeModel> {
        match self {
            SearchOutcome::Found(m) => Some(m),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Tri {
    Unknown,
    Yes,
    No,
}

type Bits = Vec<bool>;
type Matrix = Vec<Vec<bool>>;

/// Lower and upper bound of a truth set or relation over all completions.
struct Bounds<T> {
    must: T,
    may: T,
}

struct Partial<'a> {
    n: usize,
    props: &'a [Name],
    programs: &'a [Name],
    nominals: &'a [Name],
    nom_world: Vec<usize>,
    prop: Vec<Vec<Tri>>,
    edge: Vec<Vec<Vec<Tri>>>,
}

enum Verdict {
    True,
    False,
    Open,
}

impl Partial<'_> {
    fn nominal(&self, a: &Name) -> usize {
        let i = self.nominals.iter().position(|x| x == a).expect("nominal in signature");
        self.nom_world[i]
    }

    fn formula(&self, f: &Formula) -> Bounds<Bits> {
        let n = self.n;
        match f {
            Formula::Top => Bounds { must: vec![true; n], may: vec![true; n] },
            Formula::Bot => Bounds { must: vec![false; n], may: vec![false; n] },
            Formula::Prop(p) => {
                let i = self.props.iter().position(|x| x == p).expect("prop in signature");
                let row = &self.prop[i];
                Bounds {
                    must: row.iter().map(|t| *t == Tri::Yes).collect(),
                    may: row.iter().map(|t| *t != Tri::No).collect(),
                }
            }
            Formula::Nominal(a) => {
                let w = self.nominal(a);
                let exact: Bits = (0..n).map(|x| x == w).collect();
                Bounds { must: exact.clone(), may: exact }
            }
            Formula::Not(g) => {
                let b = self.formula(g);
                Bounds { must: not(&b.may), may: not(&b.must) }
            }
            Formula::And(a, b) => {
                let (x, y) = (self.formula(a), self.formula(b));
                Bounds { must: and(&x.must, &y.must), may: and(&x.may, &y.may) }
            }
            Formula::Or(a, b) => {
                let (x, y) = (self.formula(a), self.formula(b));
                Bounds { must: or(&x.must, &y.must), may: or(&x.may, &y.may) }
            }
            Formula::Implies(a, b) => {
                let (x, y) = (self.formula(a), self.formula(b));
                Bounds { must: or(&not(&x.may), &y.must), may: or(&not(&x.must), &y.may) }
            }
            Formula::Diamond(p, g) => {
                let (r, t) = (self.program(p), self.formula(g));
                Bounds { must: pre(&r.must, &t.must), may: pre(&r.may, &t.may) }
            }
            Formula::Box(p, g) => {
                let (r, t) = (self.program(p), self.formula(g));
                Bounds { must: all_succ(&r.may, &t.must), may: all_succ(&r.must, &t.may) }
            }
            Formula::AutDiamond(a, q, g) => {
                let t = self.formula(g);
                let steps = self.aut_steps(a);
                Bounds {
                    must: aut_reach(a, *q, &steps, |s| &s.must, &t.must, n),
                    may: aut_reach(a, *q, &steps, |s| &s.may, &t.may, n),
                }
            }
            Formula::AutBox(a, q, g) => {
                let t = self.formula(g);
                let steps = self.aut_steps(a);
                Bounds {
                    must: not(&aut_reach(a, *q, &steps, |s| &s.may, &not(&t.must), n)),
                    may: not(&aut_reach(a, *q, &steps, |s| &s.must, &not(&t.may), n)),
                }
            }
        }
    }

    fn aut_steps(&self, a: &Nfa) -> Vec<Vec<Bounds<Matrix>>> {
        (0..a.state_count())
            .map(|s| a.transitions(s).iter().map(|(sym, _)| self.program(&sym.to_program())).collect())
            .collect()
    }

    fn program(&self, p: &Program) -> Bounds<Matrix> {
        let n = self.n;
        match p {
            Program::Atomic(s) => {
                let i = self.programs.iter().position(|x| x == s).expect("program in signature");
                let e = &self.edge[i];
                Bounds {
                    must: e.iter().map(|row| row.iter().map(|t| *t == Tri::Yes).collect()).collect(),
                    may: e.iter().map(|row| row.iter().map(|t| *t != Tri::No).collect()).collect(),
                }
            }
            Program::Test(f) => {
                let b = self.formula(f);
                Bounds { must: diag(&b.must), may: diag(&b.may) }
            }
            Program::Seq(a, b) => {
                let (x, y) = (self.program(a), self.program(b));
                Bounds { must: compose(&x.must, &y.must, n), may: compose(&x.may, &y.may, n) }
            }
            Program::Choice(a, b) => {
                let (x, y) = (self.program(a), self.program(b));
                Bounds { must: union(&x.must, &y.must), may: union(&x.may, &y.may) }
            }
            Program::Star(a) => {
                let x = self.program(a);
                Bounds { must: star(x.must), may: star(x.may) }
            }
        }
    }

    fn assertion(&self, x: &Assertion) -> Verdict {
        match x {
            Assertion::Holds { subject: Some(a), formula } => {
                let w = self.nominal(a);
                let b = self.formula(formula);
                if b.must[w] {
                    Verdict::True
                } else if !b.may[w] {
                    Verdict::False
                } else {
                    Verdict::Open
                }
            }
            Assertion::Holds { subject: None, formula } => {
                let b = self.formula(formula);
                if b.must.iter().all(|v| *v) {
                    Verdict::True
                } else if !b.may.iter().all(|v| *v) {
                    Verdict::False
                } else {
                    Verdict::Open
                }
            }
            Assertion::Edge { program, from, to } => {
                let i = self.programs.iter().position(|x| x == program).expect("program in signature");
                match self.edge[i][self.nominal(from)][self.nominal(to)] {
                    Tri::Yes => Verdict::True,
                    Tri::No => Verdict::False,
                    Tri::Unknown => Verdict::Open,
                }
            }
        }
    }

    fn to_model(&self) -> KripkeModel {
        let mut m = KripkeModel::with_worlds((0..self.n).map(|i| format!("w{i}")));
        for (i, p) in self.props.iter().enumerate() {
            m.declare_prop(p);
            for w in 0..self.n {
                if self.prop[i][w] == Tri::Yes {
                    m.set_prop(p, w);
                }
            }
        }
        for (i, s) in self.programs.iter().enumerate() {
            m.declare_program(s);
            for x in 0..self.n {
                for y in 0..self.n {
                    if self.edge[i][x][y] == Tri::Yes {
                        m.add_edge(s, x, y);
                    }
                }
            }
        }
        for (i, a) in self.nominals.iter().enumerate() {
            m.set_nominal(a, self.nom_world[i]);
        }
        m
    }
}

#[derive(Clone, Copy)]
enum Var {
    Prop(usize, usize),
    Edge(usize, usize, usize),
}

struct Search<'a> {
    abox: &'a ABox,
    vars: Vec<Var>,
    visited: u64,
}

enum Step {
    Found(KripkeModel),
    Exhausted,
    Budget,
}

impl Search<'_> {
    fn run(&mut self, part: &mut Partial<'_>, depth: usize) -> Step {
        self.visited += 1;
        if self.visited > SEARCH_BUDGET {
            return Step::Budget;
        }
        let mut open = false;
        for x in self.abox {
            match part.assertion(x) {
                Verdict::False => return Step::Exhausted,
                Verdict::Open => open = true,
                Verdict::True => {}
            }
        }
        if !open || depth == self.vars.len() {
            let m = part.to_model();
            if check_abox(&m, self.abox).is_ok_and(|r| r.holds()) {
                return Step::Found(m);
            }
            if depth == self.vars.len() {
                return Step::Exhausted;
            }
        }
        let var = self.vars[depth];
        for val in [Tri::No, Tri::Yes] {
            let old = match var {
                Var::Prop(i, w) => std::mem::replace(&mut part.prop[i][w], val),
                Var::Edge(i, x, y) => std::mem::replace(&mut part.edge[i][x][y], val),
            };
            if old != Tri::Unknown {
                // Forced by an edge assertion; nothing to branch on.
                let r = self.run(part, depth + 1);
                return r;
            }
            let r = self.run(part, depth + 1);
            match var {
                Var::Prop(i, w) => part.prop[i][w] = Tri::Unknown,
                Var::Edge(i, x, y) => part.edge[i][x][y] = Tri::Unknown,
            }
            match r {
                Step::Exhausted => {}
                other => return other,
            }
        }
        Step::Exhausted
    }
}

/// Looks for a model of `Γ` with at most `max_worlds` worlds, trying smaller
/// domains first.
pub fn bounded_search(g: &ABox, max_worlds: usize) -> SearchOutcome {
    let sig = g.signature();
    let props: Vec<Name> = sig.props.into_iter().collect();
    let programs: Vec<Name> = sig.programs.into_iter().collect();
    let nominals: Vec<Name> = sig.nominals.into_iter().collect();
    let mut search = Search { abox: g, vars: Vec::new(), visited: 0 };

    for n in 1..=max_worlds {
        search.vars.clear();
        for w in 0..n {
            for i in 0..props.len() {
                search.vars.push(Var::Prop(i, w));
            }
            for i in 0..programs.len() {
                for y in 0..n {
                    search.vars.push(Var::Edge(i, w, y));
                }
            }
        }
        for nom_world in nominal_assignments(nominals.len(), n) {
            let mut part = Partial {
                n,
                props: &props,
                programs: &programs,
                nominals: &nominals,
                nom_world,
                prop: vec![vec![Tri::Unknown; n]; props.len()],
                edge: vec![vec![vec![Tri::Unknown; n]; n]; programs.len()],
            };
            for x in g {
                if let Assertion::Edge { program, from, to } = x {
                    let i = programs.iter().position(|p| p == program).expect("program in signature");
                    let (a, b) = (part.nominal(from), part.nominal(to));
                    part.edge[i][a][b] = Tri::Yes;
                }
            }
            match search.run(&mut part, 0) {
                Step::Found(m) => return SearchOutcome::Found(m),
                Step::Budget => return SearchOutcome::GaveUp,
                Step::Exhausted => {}
            }
        }
    }
    SearchOutcome::NoModel
}

/// Assignments of `k` nominals to `n` worlds up to renaming of worlds: each
/// nominal goes to an already used world or to the next fresh one.
fn nominal_assignments(k: usize, n: usize) -> Vec<Vec<usize>> {
    fn go(k: usize, n: usize, cur: &mut Vec<usize>, used: usize, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for w in 0..(used + 1).min(n) {
            cur.push(w);
            go(k, n, cur, used.max(w + 1), out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(k, n, &mut Vec::new(), 0, &mut out);
    out
}

fn not(a: &Bits) -> Bits {
    a.iter().map(|v| !v).collect()
}

fn and(a: &Bits, b: &Bits) -> Bits {
    a.iter().zip(b).map(|(x, y)| *x && *y).collect()
}

fn or(a: &Bits, b: &Bits) -> Bits {
    a.iter().zip(b).map(|(x, y)| *x || *y).collect()
}

fn pre(r: &Matrix, t: &Bits) -> Bits {
    r.iter().map(|row| row.iter().zip(t).any(|(e, v)| *e && *v)).collect()
}

fn all_succ(r: &Matrix, t: &Bits) -> Bits {
    r.iter().map(|row| row.iter().zip(t).all(|(e, v)| !*e || *v)).collect()
}

fn diag(t: &Bits) -> Matrix {
    let n = t.len();
    (0..n).map(|x| (0..n).map(|y| x == y && t[x]).collect()).collect()
}

fn compose(a: &Matrix, b: &Matrix, n: usize) -> Matrix {
    (0..n).map(|x| (0..n).map(|z| (0..n).any(|y| a[x][y] && b[y][z])).collect()).collect()
}

fn union(a: &Matrix, b: &Matrix) -> Matrix {
    a.iter().zip(b).map(|(r, s)| r.iter().zip(s).map(|(x, y)| *x || *y).collect()).collect()
}

fn star(mut r: Matrix) -> Matrix {
    let n = r.len();
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

fn aut_reach(
    a: &Nfa,
    q: usize,
    steps: &[Vec<Bounds<Matrix>>],
    pick: impl Fn(&Bounds<Matrix>) -> &Matrix,
    target: &Bits,
    n: usize,
) -> Bits {
    let mut good: Vec<Vec<bool>> =
        (0..n).map(|w| (0..a.state_count()).map(|s| a.is_accepting(s) && target[w]).collect()).collect();
    let mut changed = true;
    while changed {
        changed = false;
        for w in 0..n {
            for s in 0..a.state_count() {
                if good[w][s] {
                    continue;
                }
                let hit = a.transitions(s).iter().enumerate().any(|(k, (_, s2))| {
                    let r = pick(&steps[s][k]);
                    (0..n).any(|w2| r[w][w2] && good[w2][*s2])
                });
                if hit {
                    good[w][s] = true;
                    changed = true;
                }
            }
        }
    }
    (0..n).map(|w| good[w][q]).collect()
}
