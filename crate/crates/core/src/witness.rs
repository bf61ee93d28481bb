//! Model extraction for satisfiable inputs: the model graph built from an
//! anchor complex state, its Hintikka checks, and the Kripke model read off it.

use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};
use std::fmt;
use std::fmt::Write as _;

use thiserror::Error;

use crate::automata::{compile_program, Symbol};
use crate::engine::{Outcome, Verdict};
use crate::kripke::{check_abox, EvalError, KripkeModel};
use crate::status::{compute_realizability, Condition, Pair, Realizability};
use crate::syntax::{negate_nnf, ABox, Assertion, Formula, Name, Program};
use crate::tableau::{NodeId, Repl, Status, Tableau};

#[derive(Clone, Debug, Error)]
pub enum WitnessError {
    #[error("the input was found unsatisfiable; there is no model to extract")]
    NotSat,
    #[error("no complex state is usable as an anchor")]
    NoAnchor,
    #[error("v{node}: {assertion} is not marked realizable")]
    Unmarked { node: NodeId, assertion: String },
    #[error("v{node}: {assertion} is justified only by an unexpanded or incomplete node")]
    OpenJustification { node: NodeId, assertion: String },
    #[error("v{node}: no transitional successor for {assertion}")]
    NoTransSuccessor { node: NodeId, assertion: String },
    #[error("v{0}: no saturation path")]
    NoSaturationPath(NodeId),
    #[error("nominal '{0} occurs in the anchor but is replaced there")]
    StrayNominal(Name),
    #[error("model graph violates a Hintikka condition: {0}")]
    Hintikka(HintikkaViolation),
    #[error("extracted model falsifies: {}", .0.join("; "))]
    Recheck(Vec<String>),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// A vertex of the model graph: a nominal or a simple state of the tableau.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Vertex {
    Nominal(Name),
    Node(NodeId),
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Vertex::Nominal(a) => write!(f, "'{a}"),
            Vertex::Node(v) => write!(f, "v{v}"),
        }
    }
}

/// A ◊-realization: pairs `(v_i, ξ_i)` following the marks down to a base
/// condition. `rounds[i]` is the marking round of pair `i`; the last pair is
/// the fulfilling one and carries no round.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Realization {
    pub steps: Vec<Pair>,
    pub rounds: Vec<usize>,
    pub terminal: Condition,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HintikkaViolation {
    pub clause: u8,
    pub vertex: Vertex,
    pub formula: Formula,
}

impl fmt::Display for HintikkaViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "clause {} at {} for {}", self.clause, self.vertex, self.formula)
    }
}

/// `G′ = (V′, E′, Label′, ELabels′)`; `V′` is the key set of `labels`.
#[derive(Clone, Debug, Default)]
pub struct ModelGraph {
    pub anchor: NodeId,
    pub repl: Repl,
    pub labels: BTreeMap<Vertex, BTreeSet<Formula>>,
    pub edges: BTreeMap<(Vertex, Vertex), BTreeSet<Name>>,
}

impl ModelGraph {
    pub fn vertices(&self) -> impl Iterator<Item = &Vertex> {
        self.labels.keys()
    }

    pub fn label(&self, x: &Vertex) -> Option<&BTreeSet<Formula>> {
        self.labels.get(x)
    }

    pub fn successors<'a>(&'a self, x: &'a Vertex, s: &'a Name) -> impl Iterator<Item = &'a Vertex> {
        self.edges
            .iter()
            .filter(move |((from, _), l)| from == x && l.contains(s))
            .map(|((_, to), _)| to)
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph model {\n");
        for (x, l) in &self.labels {
            let body: Vec<String> = l.iter().map(|f| f.to_string()).collect();
            let text = format!("{x}\\n{}", body.join("\\n")).replace('"', "\\\"");
            let _ = writeln!(out, "  \"{x}\" [shape=box,label=\"{text}\"];");
        }
        for ((x, y), l) in &self.edges {
            let names: Vec<&str> = l.iter().map(|s| &**s).collect();
            let _ = writeln!(out, "  \"{x}\" -> \"{y}\" [label=\"{}\"];", names.join(","));
        }
        out.push_str("}\n");
        out
    }
}

/// A verified witness: the model graph and the Kripke model read off it.
#[derive(Clone, Debug)]
pub struct Witness {
    pub graph: ModelGraph,
    pub model: KripkeModel,
}

fn admissible(g: &Tableau, v: NodeId, u: NodeId) -> bool {
    !g.status(v).is_closed_for(u)
}

/// The least complex state that is neither `Unsat` nor `Incomplete` nor
/// closed for itself, reachable from the root through non-`Unsat` nodes.
pub fn pick_anchor(g: &Tableau) -> Result<NodeId, WitnessError> {
    if g.status(g.root()).is_unsat() {
        return Err(WitnessError::NotSat);
    }
    let reach = g.reach(g.root(), |n| !n.status.is_unsat());
    reach
        .into_iter()
        .find(|&u| {
            let n = g.node(u);
            n.is_complex_state() && n.status != Status::Incomplete && !n.status.is_closed_for(u)
        })
        .ok_or(WitnessError::NoAnchor)
}

/// Follows the realizability marks from `(v, ξ)` down to a base condition.
pub fn trace_realization(
    r: &Realizability,
    v: NodeId,
    xi: &Assertion,
) -> Result<Realization, WitnessError> {
    let mut steps = Vec::new();
    let mut rounds = Vec::new();
    let mut cur: Pair = (v, xi.clone());
    loop {
        let m = r.mark(cur.0, &cur.1).ok_or_else(|| WitnessError::Unmarked {
            node: cur.0,
            assertion: cur.1.to_string(),
        })?;
        rounds.push(m.round);
        match m.condition {
            Condition::Blanket => {
                return Err(WitnessError::OpenJustification {
                    node: cur.0,
                    assertion: cur.1.to_string(),
                })
            }
            Condition::A | Condition::E => {
                steps.push(cur);
                steps.push(m.next.clone().expect("base mark names its fulfilling pair"));
                return Ok(Realization { steps, rounds, terminal: m.condition });
            }
            _ => {
                let next = m.next.clone().expect("dependent mark names its source");
                steps.push(std::mem::replace(&mut cur, next));
            }
        }
    }
}

/// A path from the simple non-state `v` through admissible non-states to a
/// state. A non-state naming a nominal ends the path with a hop to `u`.
pub fn saturation_path(g: &Tableau, v: NodeId, u: NodeId) -> Result<Vec<NodeId>, WitnessError> {
    fn go(g: &Tableau, u: NodeId, v: NodeId, path: &mut Vec<NodeId>, seen: &mut HashSet<NodeId>) -> bool {
        path.push(v);
        let n = g.node(v);
        if n.is_state() {
            return true;
        }
        if n.label_nominals().next().is_some() {
            path.push(u);
            return true;
        }
        for &w in g.successors(v) {
            if admissible(g, w, u) && seen.insert(w) && go(g, u, w, path, seen) {
                return true;
            }
        }
        path.pop();
        false
    }
    let mut path = Vec::new();
    let mut seen = HashSet::from([v]);
    if g.node(v).is_state() || !admissible(g, v, u) || !go(g, u, v, &mut path, &mut seen) {
        return Err(WitnessError::NoSaturationPath(v));
    }
    Ok(path)
}

fn atomic_step(f: &Formula) -> Option<(&Name, &Formula)> {
    match f {
        Formula::Diamond(p, rest) => match &**p {
            Program::Atomic(s) => Some((s, rest)),
            _ => None,
        },
        _ => None,
    }
}

struct Builder<'a> {
    g: &'a Tableau,
    u: NodeId,
    r: Realizability,
    mg: ModelGraph,
    pending: VecDeque<(Vertex, Formula)>,
    queued: HashSet<(Vertex, Formula)>,
}

impl Builder<'_> {
    fn add_formulas(&mut self, x: &Vertex, fs: impl IntoIterator<Item = Formula>) {
        let label = self.mg.labels.entry(x.clone()).or_default();
        for f in fs {
            if atomic_step(&f).is_some() && self.queued.insert((x.clone(), f.clone())) {
                self.pending.push_back((x.clone(), f.clone()));
            }
            label.insert(f);
        }
    }

    fn add_edge(&mut self, x: Vertex, y: Vertex, s: Name) {
        self.mg.edges.entry((x, y)).or_default().insert(s);
    }

    fn bare_formulas(&self, v: NodeId) -> Vec<Formula> {
        self.g.full_label(v).iter().filter_map(|x| x.formula().cloned()).collect()
    }

    /// The node sequence realizing `φ = ⟨σ⟩ψ` at `x`, ending in a state.
    fn sequence(&self, x: &Vertex, phi: &Formula) -> Result<Vec<(NodeId, Option<Assertion>)>, WitnessError> {
        let (start, xi) = match x {
            Vertex::Node(v) => (*v, Assertion::bare(phi.clone())),
            Vertex::Nominal(a) => (self.u, Assertion::holds(Some(a.clone()), phi.clone())),
        };
        let mut seq: Vec<(NodeId, Option<Assertion>)> = if phi.is_eventuality() {
            trace_realization(&self.r, start, &xi)?
                .steps
                .into_iter()
                .map(|(v, a)| (v, Some(a)))
                .collect()
        } else {
            let (_, rest) = atomic_step(phi).expect("atomic diamond");
            let w = self
                .g
                .successors(start)
                .iter()
                .copied()
                .find(|&w| {
                    admissible(self.g, w, self.u)
                        && self.g.edge_labels(start, w).is_some_and(|l| l.contains(&xi))
                })
                .ok_or_else(|| WitnessError::NoTransSuccessor {
                    node: start,
                    assertion: xi.to_string(),
                })?;
            vec![(start, Some(xi)), (w, Some(Assertion::bare(rest.clone())))]
        };
        let last = seq.last().expect("non-empty").0;
        if !self.g.node(last).is_state() {
            let path = saturation_path(self.g, last, self.u)?;
            seq.extend(path.into_iter().skip(1).map(|v| (v, None)));
        }
        Ok(seq)
    }

    fn realize(&mut self, x: &Vertex, phi: &Formula) -> Result<(), WitnessError> {
        let (s0, _) = atomic_step(phi).expect("atomic diamond");
        let seq = self.sequence(x, phi)?;
        let last = seq.len() - 1;
        let mut prev = x.clone();
        let mut sigma = s0.clone();
        for i in 1..seq.len() {
            let (v, xi) = &seq[i];
            let step = xi.as_ref().and_then(|a| a.formula()).and_then(atomic_step);
            if !self.g.node(*v).is_state() || (i != last && step.is_none()) {
                continue;
            }
            // First index of the run of pairs sitting at this node.
            let mut entry = i;
            while entry > 0 && seq[entry - 1].0 == *v {
                entry -= 1;
            }
            let before = seq[entry - 1].0;
            let next = if *v != self.u {
                let next = Vertex::Node(*v);
                let fs = self.bare_formulas(before);
                self.add_formulas(&next, fs);
                next
            } else {
                let a = match xi.as_ref().and_then(|a| a.subject()) {
                    Some(a) => a.clone(),
                    None => self
                        .g
                        .node(before)
                        .label_nominals()
                        .next()
                        .cloned()
                        .ok_or(WitnessError::NoSaturationPath(before))?,
                };
                let next = Vertex::Nominal(a);
                if !self.mg.labels.contains_key(&next) {
                    return Err(WitnessError::StrayNominal(match next {
                        Vertex::Nominal(a) => a,
                        Vertex::Node(_) => unreachable!(),
                    }));
                }
                if before != self.u {
                    let fs = self.bare_formulas(before);
                    self.add_formulas(&next, fs);
                }
                next
            };
            self.add_edge(prev, next.clone(), sigma.clone());
            prev = next;
            if let Some((s, _)) = step {
                sigma = s.clone();
            }
        }
        Ok(())
    }
}

/// Builds the model graph of `g` w.r.t. the anchor `u`.
pub fn build_model_graph(g: &Tableau, u: NodeId) -> Result<ModelGraph, WitnessError> {
    let un = g.node(u);
    let repl = un.repl.clone().unwrap_or_default();
    let mut b = Builder {
        g,
        u,
        r: compute_realizability(g, u),
        mg: ModelGraph { anchor: u, repl: repl.clone(), ..ModelGraph::default() },
        pending: VecDeque::new(),
        queued: HashSet::new(),
    };
    for (a, img) in &repl {
        if a == img {
            b.add_formulas(&Vertex::Nominal(a.clone()), [Formula::Nominal(a.clone())]);
        }
    }
    for x in un.full_label() {
        match x {
            Assertion::Holds { subject: Some(a), formula } => {
                let v = Vertex::Nominal(a.clone());
                if !b.mg.labels.contains_key(&v) {
                    return Err(WitnessError::StrayNominal(a.clone()));
                }
                b.add_formulas(&v, [formula.clone()]);
            }
            Assertion::Edge { program, from, to } => {
                b.add_edge(Vertex::Nominal(from.clone()), Vertex::Nominal(to.clone()), program.clone());
            }
            Assertion::Holds { subject: None, .. } => {}
        }
    }
    while let Some((x, phi)) = b.pending.pop_front() {
        b.realize(&x, &phi)?;
    }
    Ok(b.mg)
}

/// Every violation of the Hintikka conditions in `mg`, clause-numbered 1–13.
/// A nominal `b` is read as its image under the anchor's replacement map.
pub fn check_hintikka(mg: &ModelGraph) -> Vec<HintikkaViolation> {
    let mut out = Vec::new();
    let empty = BTreeSet::new();
    let label = |x: &Vertex| mg.labels.get(x).unwrap_or(&empty);
    for (x, l) in &mg.labels {
        let mut fail = |clause: u8, f: &Formula| {
            out.push(HintikkaViolation { clause, vertex: x.clone(), formula: f.clone() });
        };
        if l.contains(&Formula::Bot) {
            fail(1, &Formula::Bot);
        }
        for f in l {
            if l.contains(&negate_nnf(f)) {
                fail(1, f);
            }
            match f {
                Formula::And(a, b) if !(l.contains(a) && l.contains(b)) => fail(2, f),
                Formula::Or(a, b) if !(l.contains(a) || l.contains(b)) => fail(3, f),
                Formula::Nominal(a) if *x != Vertex::Nominal(mg.repl.get(a).unwrap_or(a).clone()) => {
                    fail(4, f)
                }
                Formula::Box(p, psi) => match &**p {
                    Program::Atomic(s) => {
                        if mg.successors(x, s).any(|y| !label(y).contains(psi)) {
                            fail(9, f);
                        }
                    }
                    Program::Test(chi) => {
                        if !(l.contains(&negate_nnf(chi)) || l.contains(psi)) {
                            fail(8, f);
                        }
                    }
                    _ => {
                        let aut = std::sync::Arc::new(compile_program(p));
                        let ok = aut
                            .initial()
                            .iter()
                            .all(|q| l.contains(&Formula::AutBox(aut.clone(), *q, psi.clone())));
                        if !ok {
                            fail(5, f);
                        }
                    }
                },
                Formula::AutBox(aut, q, psi) => {
                    let ok = aut.transitions(*q).iter().all(|(w, q2)| {
                        l.contains(&Formula::Box(
                            w.to_program().into(),
                            Formula::AutBox(aut.clone(), *q2, psi.clone()).into(),
                        ))
                    });
                    if !ok {
                        fail(6, f);
                    }
                    if aut.is_accepting(*q) && !l.contains(psi) {
                        fail(7, f);
                    }
                }
                Formula::Diamond(p, psi) => match &**p {
                    Program::Atomic(s) => {
                        if !mg.successors(x, s).any(|y| label(y).contains(psi)) {
                            fail(12, f);
                        }
                    }
                    Program::Test(chi) => {
                        if !(l.contains(chi) && l.contains(psi)) {
                            fail(11, f);
                        }
                    }
                    _ => {
                        let aut = std::sync::Arc::new(compile_program(p));
                        let ok = aut
                            .initial()
                            .iter()
                            .any(|q| l.contains(&Formula::AutDiamond(aut.clone(), *q, psi.clone())));
                        if !ok {
                            fail(10, f);
                        }
                    }
                },
                Formula::AutDiamond(..) if !fulfilled(mg, x, f) => fail(13, f),
                _ => {}
            }
        }
    }
    out
}

/// Whether `⟨A,q⟩ψ` at `x` has an accepting run through `G′` that keeps the
/// matching `⟨A,q_i⟩ψ` in every visited label.
fn fulfilled(mg: &ModelGraph, x: &Vertex, f: &Formula) -> bool {
    let Formula::AutDiamond(aut, q0, psi) = f else { return true };
    let empty = BTreeSet::new();
    let label = |x: &Vertex| mg.labels.get(x).unwrap_or(&empty);
    let at = |q| Formula::AutDiamond(aut.clone(), q, psi.clone());
    let mut seen = HashSet::from([(x.clone(), *q0)]);
    let mut queue = VecDeque::from([(x.clone(), *q0)]);
    while let Some((y, q)) = queue.pop_front() {
        if aut.is_accepting(q) && label(&y).contains(psi) {
            return true;
        }
        for (w, q2) in aut.transitions(q) {
            let next: Vec<Vertex> = match w {
                Symbol::Test(chi) => {
                    if label(&y).contains(chi) {
                        vec![y.clone()]
                    } else {
                        Vec::new()
                    }
                }
                Symbol::Atomic(s) => mg.successors(&y, s).cloned().collect(),
            };
            for z in next {
                if label(&z).contains(&at(*q2)) && seen.insert((z.clone(), *q2)) {
                    queue.push_back((z, *q2));
                }
            }
        }
    }
    false
}

/// The Kripke model corresponding to `mg`. Propositions, programs and
/// nominals of `sig` are all interpreted; a nominal the anchor leaves
/// unmapped gets a fresh world of its own.
pub fn to_kripke(mg: &ModelGraph, gamma: &ABox) -> KripkeModel {
    let sig = gamma.signature();
    let mut m = KripkeModel::new();
    let mut world = BTreeMap::new();
    for x in mg.vertices() {
        world.insert(x.clone(), m.add_world(x.to_string()));
    }
    if world.is_empty() {
        m.add_world("w0");
    }
    for p in &sig.props {
        m.declare_prop(p);
    }
    for s in &sig.programs {
        m.declare_program(s);
    }
    for (x, l) in &mg.labels {
        for f in l {
            if let Formula::Prop(p) = f {
                m.set_prop(p, world[x]);
            }
        }
    }
    for ((x, y), l) in &mg.edges {
        for s in l {
            m.add_edge(s, world[x], world[y]);
        }
    }
    for a in &sig.nominals {
        let target = mg.repl.get(a).map(|b| Vertex::Nominal(b.clone()));
        let w = match target.and_then(|t| world.get(&t).copied()) {
            Some(w) => w,
            None => m.add_world(format!("'{a}")),
        };
        m.set_nominal(a, w);
    }
    m
}

/// Builds the model graph for anchor `u`, checks it against the Hintikka
/// conditions, and re-verifies the Kripke model against the root label.
pub fn extract_model(g: &Tableau, u: NodeId) -> Result<Witness, WitnessError> {
    let graph = build_model_graph(g, u)?;
    if let Some(v) = check_hintikka(&graph).into_iter().next() {
        return Err(WitnessError::Hintikka(v));
    }
    let mut gamma = ABox::new();
    for x in &g.node(g.root()).label {
        gamma.insert(x.clone());
    }
    let model = to_kripke(&graph, &gamma);
    let report = check_abox(&model, &gamma)?;
    if !report.holds() {
        return Err(WitnessError::Recheck(report.failing.iter().map(|x| x.to_string()).collect()));
    }
    Ok(Witness { graph, model })
}

/// Anchor selection plus extraction for a finished run.
pub fn witness(outcome: &Outcome) -> Result<Witness, WitnessError> {
    if outcome.verdict != Verdict::Sat {
        return Err(WitnessError::NotSat);
    }
    let u = pick_anchor(&outcome.tableau)?;
    extract_model(&outcome.tableau, u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{decide, Config};
    use crate::syntax::{name, parse_abox};

    fn run(src: &str) -> Outcome {
        decide(&parse_abox(src).unwrap(), &Config::default()).unwrap()
    }

    #[test]
    fn single_assertion_gives_one_world() {
        let out = run("'a:p");
        let w = witness(&out).unwrap();
        assert_eq!(w.model.world_count(), 1);
        let a = w.model.nominal(&name("a")).unwrap();
        assert!(w.model.prop(&name("p")).unwrap().contains(&a));
    }

    #[test]
    fn anchor_is_a_complex_state() {
        let out = run("'a:p");
        let u = pick_anchor(&out.tableau).unwrap();
        assert!(out.tableau.node(u).is_complex_state());
    }

    #[test]
    fn unsat_input_has_no_witness() {
        let out = run("'a:p; 'a:~p");
        assert!(matches!(witness(&out), Err(WitnessError::NotSat)));
    }

    #[test]
    fn eventuality_through_an_edge() {
        let out = run("s('a,'b); 'b:<s*>q");
        assert_eq!(out.verdict, Verdict::Sat);
        let w = witness(&out).unwrap();
        assert!(check_hintikka(&w.graph).is_empty());
    }

    #[test]
    fn immediate_fulfilment_is_a_two_step_realization() {
        let out = run("'a:<s*>q; 'a:q");
        let u = pick_anchor(&out.tableau).unwrap();
        let r = compute_realizability(&out.tableau, u);
        let (v, xi) = r
            .pairs()
            .iter()
            .find(|(v, x)| {
                *v == u
                    && r.mark(*v, x).is_some_and(|m| m.condition == Condition::A)
                    && x.formula().is_some_and(Formula::is_aut_diamond)
            })
            .cloned()
            .expect("a-marked eventuality at the anchor");
        let real = trace_realization(&r, v, &xi).unwrap();
        assert_eq!(real.steps.len(), 2);
        assert_eq!(real.steps[1], (u, Assertion::at("a", Formula::prop("q"))));
    }

    #[test]
    fn rounds_decrease_along_traces() {
        for src in ["s('a,'b); 'b:<s*>q", "'a:<(s;s)*>(p & <s>q)", "'a:<s*>'b; 'b:[s]p"] {
            let out = run(src);
            if out.verdict != Verdict::Sat {
                continue;
            }
            let u = pick_anchor(&out.tableau).unwrap();
            let r = compute_realizability(&out.tableau, u);
            for (v, xi) in r.pairs() {
                let real = trace_realization(&r, *v, xi).unwrap();
                assert!(real.rounds.windows(2).all(|w| w[0] > w[1]), "{src}: {:?}", real.rounds);
                assert!(matches!(real.terminal, Condition::A | Condition::E));
            }
        }
    }

    #[test]
    fn nominal_equality_shares_a_world() {
        let out = run("'a:'b; 'a:p");
        let w = witness(&out).unwrap();
        assert_eq!(w.model.nominal(&name("a")), w.model.nominal(&name("b")));
    }

    #[test]
    fn saturation_path_ends_in_a_state() {
        let out = run("'a:<s>(p | q)");
        let g = &out.tableau;
        let u = pick_anchor(g).unwrap();
        let v = *g.successors(u).iter().next().unwrap();
        let path = saturation_path(g, v, u).unwrap();
        assert_eq!(path[0], v);
        assert!(g.node(*path.last().unwrap()).is_state());
        assert!(path[..path.len() - 1].iter().all(|&w| !g.node(w).is_state()));
    }

    #[test]
    fn nominal_in_successor_ends_at_anchor() {
        let out = run("'a:<s>'b; 'b:p");
        let g = &out.tableau;
        let u = pick_anchor(g).unwrap();
        let v = *g.successors(u).iter().next().unwrap();
        let path = saturation_path(g, v, u).unwrap();
        assert_eq!(path, vec![v, u]);
        let w = witness(&out).unwrap();
        let (a, b) = (w.model.nominal(&name("a")).unwrap(), w.model.nominal(&name("b")).unwrap());
        assert!(w.model.program(&name("s")).unwrap().contains(&(a, b)));
    }

    #[test]
    fn hintikka_detects_a_clash() {
        let mut mg = ModelGraph::default();
        let x = Vertex::Node(0);
        mg.labels.insert(x.clone(), BTreeSet::from([Formula::prop("p"), Formula::not(Formula::prop("p"))]));
        let v = check_hintikka(&mg);
        assert!(v.iter().any(|v| v.clause == 1));
    }

    #[test]
    fn hintikka_detects_missing_successor() {
        let mut mg = ModelGraph::default();
        let f = crate::syntax::parse_formula("<s>p").unwrap();
        mg.labels.insert(Vertex::Node(0), BTreeSet::from([f]));
        assert_eq!(check_hintikka(&mg)[0].clause, 12);
    }

    #[test]
    fn dot_lists_vertices_and_edges() {
        let w = witness(&run("s('a,'b)")).unwrap();
        let dot = w.graph.to_dot();
        assert!(dot.contains("\"'a\" -> \"'b\""));
    }
}
