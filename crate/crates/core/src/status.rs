//! ◊-realizability of eventualities w.r.t. an anchor complex state, and the
//! rule that turns statuses into `Unsat` / `UnsatWrt`.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use serde_json::{json, Value};

use crate::syntax::{Assertion, Formula, Program};
use crate::tableau::{Node, NodeId, RuleKind, Status, Tableau};

/// A node with one of the eventualities in its full label.
pub type Pair = (NodeId, Assertion);

/// Which clause of the realizability definition marked a pair.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Condition {
    /// The node is `Unexpanded` or `Incomplete`.
    Blanket,
    /// `q ∈ F` and the target formula is already present.
    A,
    /// An automaton step inside the same node.
    B,
    /// A test step inside the same node.
    C,
    /// The `◊F` branch that drops the eventuality.
    E,
    /// A `◊`/`◊F` branch keeping an automaton step.
    F,
    /// The successor of a `◊?` expansion.
    G,
    /// A non-principal eventuality carried to a successor.
    H,
    /// A transitional edge.
    J,
    /// A hop from a simple node naming `a` to `a:ξ` at the anchor.
    K,
}

impl Condition {
    pub fn tag(self) -> &'static str {
        match self {
            Condition::Blanket => "blanket",
            Condition::A => "a",
            Condition::B => "b",
            Condition::C => "c",
            Condition::E => "e",
            Condition::F => "f",
            Condition::G => "g",
            Condition::H => "h",
            Condition::J => "j",
            Condition::K => "k",
        }
    }

    /// Marks that end a justification chain.
    pub fn is_base(self) -> bool {
        matches!(self, Condition::Blanket | Condition::A | Condition::E)
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// The first justification found for a marked pair. For a base mark `next`
/// is the fulfilling pair (`(v, o:φ)` or `(w, o:φ)`); otherwise it is the
/// marked pair the mark depends on.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mark {
    pub round: usize,
    pub condition: Condition,
    pub next: Option<Pair>,
}

/// Marking of every relevant pair w.r.t. one anchor.
#[derive(Clone, Debug)]
pub struct Realizability {
    anchor: NodeId,
    pairs: Vec<Pair>,
    marks: HashMap<Pair, Mark>,
}

impl Realizability {
    pub fn anchor(&self) -> NodeId {
        self.anchor
    }

    /// All pairs considered: `(v, ξ)` with `v` reachable from the anchor,
    /// `Status(v)` not closed for it and `ξ` an eventuality of `FullLabel(v)`.
    pub fn pairs(&self) -> &[Pair] {
        &self.pairs
    }

    pub fn mark(&self, v: NodeId, xi: &Assertion) -> Option<&Mark> {
        self.marks.get(&(v, xi.clone()))
    }

    pub fn is_marked(&self, v: NodeId, xi: &Assertion) -> bool {
        self.mark(v, xi).is_some()
    }

    pub fn unmarked(&self) -> impl Iterator<Item = &Pair> {
        self.pairs.iter().filter(|p| !self.marks.contains_key(*p))
    }

    pub fn to_json(&self) -> Value {
        let pairs: Vec<Value> = self
            .pairs
            .iter()
            .map(|p| {
                let m = self.marks.get(p);
                json!({
                    "node": p.0,
                    "eventuality": p.1.to_string(),
                    "marked": m.is_some(),
                    "condition": m.map(|m| m.condition.tag()),
                    "round": m.map(|m| m.round),
                    "next": m.and_then(|m| m.next.as_ref()).map(|(w, x)| json!({"node": w, "assertion": x.to_string()})),
                })
            })
            .collect();
        json!({ "anchor": self.anchor, "pairs": pairs })
    }
}

/// Computes the least fixpoint of the realizability conditions w.r.t. the
/// anchor `u`. Marks are assigned breadth-first from the base conditions, so
/// every dependent mark has a strictly larger round than the mark it uses.
pub fn compute_realizability(g: &Tableau, u: NodeId) -> Realizability {
    let mut pairs = Vec::new();
    let mut index: HashMap<Pair, usize> = HashMap::new();
    for v in g.descendants(u) {
        if g.status(v).is_closed_for(u) {
            continue;
        }
        for xi in g.full_label(v).iter().filter(|x| x.is_eventuality()) {
            index.insert((v, xi.clone()), pairs.len());
            pairs.push((v, xi.clone()));
        }
    }

    let mut marks: HashMap<Pair, Mark> = HashMap::new();
    let mut rdeps: Vec<Vec<(usize, Condition)>> = vec![Vec::new(); pairs.len()];
    let mut queue = VecDeque::new();
    for (i, (v, xi)) in pairs.iter().enumerate() {
        let cands = candidates(g, u, *v, xi);
        if let Some((cond, next)) = cands.base {
            marks.insert(pairs[i].clone(), Mark { round: 0, condition: cond, next });
            queue.push_back(i);
            continue;
        }
        for (cond, dep) in cands.deps {
            if let Some(&j) = index.get(&dep) {
                rdeps[j].push((i, cond));
            }
        }
    }
    while let Some(j) = queue.pop_front() {
        let round = marks[&pairs[j]].round + 1;
        for &(i, cond) in &rdeps[j] {
            if !marks.contains_key(&pairs[i]) {
                marks.insert(
                    pairs[i].clone(),
                    Mark { round, condition: cond, next: Some(pairs[j].clone()) },
                );
                queue.push_back(i);
            }
        }
    }
    Realizability { anchor: u, pairs, marks }
}

struct Candidates {
    base: Option<(Condition, Option<Pair>)>,
    deps: Vec<(Condition, Pair)>,
}

fn allowed(n: &Node, u: NodeId) -> bool {
    !n.status.is_closed_for(u)
}

fn candidates(g: &Tableau, u: NodeId, v: NodeId, xi: &Assertion) -> Candidates {
    let n = g.node(v);
    let mut c = Candidates { base: None, deps: Vec::new() };
    if matches!(n.status, Status::Unexpanded | Status::Incomplete) {
        c.base = Some((Condition::Blanket, None));
        return c;
    }
    let Assertion::Holds { subject: o, formula } = xi else { return c };
    let at = |f: Formula| Assertion::holds(o.clone(), f);
    let fl = n.full_label();

    match formula {
        Formula::AutDiamond(aut, q, phi) => {
            let target = at((**phi).clone());
            if aut.is_accepting(*q) && fl.contains(&target) {
                c.base = Some((Condition::A, Some((v, target))));
                return c;
            }
            for (w, q2) in aut.transitions(*q) {
                let step = at(Formula::Diamond(
                    w.to_program().into(),
                    Formula::AutDiamond(aut.clone(), *q2, phi.clone()).into(),
                ));
                c.deps.push((Condition::B, (v, step)));
            }
        }
        Formula::Diamond(p, rest) => {
            if let Program::Test(psi) = &**p {
                let inner = at((**rest).clone());
                if fl.contains(&at((**psi).clone())) {
                    c.deps.push((Condition::C, (v, inner)));
                }
            }
        }
        _ => {}
    }

    if let Some(exp) = &n.expansion {
        let principal = exp.principal.as_ref() == Some(xi);
        match exp.rule {
            RuleKind::Diamond | RuleKind::DiamondF if principal => {
                let Formula::AutDiamond(_, _, phi) = formula else { unreachable!() };
                let target = at((**phi).clone());
                for b in &exp.branches {
                    if !g.has_edge(v, b.target) {
                        continue;
                    }
                    if b.added.len() == 1 && b.added[0] == target {
                        if c.base.is_none() && allowed(g.node(b.target), u) {
                            c.base = Some((Condition::E, Some((b.target, target.clone()))));
                        }
                    } else if let Some(x) = b.added.first() {
                        c.deps.push((Condition::F, (b.target, x.clone())));
                    }
                }
            }
            RuleKind::DiamondTest if principal => {
                let Formula::Diamond(_, rest) = formula else { unreachable!() };
                for w in g.successors(v) {
                    c.deps.push((Condition::G, (*w, at((**rest).clone()))));
                }
            }
            RuleKind::Trans => {
                if let Formula::Diamond(p, rest) = formula {
                    if p.is_atomic() {
                        let bare = Assertion::bare((**rest).clone());
                        for w in g.successors(v) {
                            let on_edge = g.edge_labels(v, *w).is_some_and(|l| l.contains(xi));
                            if on_edge && g.node(*w).label.contains(&bare) {
                                c.deps.push((Condition::J, (*w, bare.clone())));
                            }
                        }
                    }
                }
            }
            RuleKind::ReplNom | RuleKind::Nom | RuleKind::Reexpand => {}
            _ if !principal => {
                for w in g.successors(v) {
                    c.deps.push((Condition::H, (*w, xi.clone())));
                }
            }
            _ => {}
        }
    }

    if o.is_none() {
        for a in n.label_nominals() {
            c.deps.push((Condition::K, (u, Assertion::holds(Some(a.clone()), formula.clone()))));
        }
    }
    c
}

/// Why a status changed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Reason {
    Clash,
    NotRealizable { anchor: NodeId, eventuality: Assertion },
    SelfReference,
    AllSuccessorsUnsat,
    SuccessorsUnsatWrt,
    SuccessorUnsat(NodeId),
    SuccessorUnsatWrt(NodeId),
}

impl fmt::Display for Reason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Reason::Clash => f.write_str("clash"),
            Reason::NotRealizable { anchor, eventuality } => {
                write!(f, "{eventuality} not realizable wrt v{anchor}")
            }
            Reason::SelfReference => f.write_str("unsat wrt itself"),
            Reason::AllSuccessorsUnsat => f.write_str("all successors unsat"),
            Reason::SuccessorsUnsatWrt => f.write_str("successors unsat wrt common anchors"),
            Reason::SuccessorUnsat(w) => write!(f, "successor v{w} unsat"),
            Reason::SuccessorUnsatWrt(w) => write!(f, "successor v{w} unsat wrt"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StatusChange {
    pub node: NodeId,
    pub from: Status,
    pub to: Status,
    pub reason: Reason,
}

impl fmt::Display for StatusChange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "status v{}: {} -> {} ({})", self.node, self.from, self.to, self.reason)
    }
}

/// Clash part of the unsat rule for a single node.
pub fn apply_clash(g: &mut Tableau, v: NodeId) -> Option<StatusChange> {
    let n = g.node(v);
    if n.status.is_unsat() || !n.has_clash() {
        return None;
    }
    let from = n.status.clone();
    g.set_status(v, Status::Unsat);
    Some(StatusChange { node: v, from, to: Status::Unsat, reason: Reason::Clash })
}

/// Complex states that may serve as anchors.
pub fn anchors(g: &Tableau) -> Vec<NodeId> {
    g.nodes()
        .filter(|n| n.is_complex_state() && !matches!(n.status, Status::Unsat | Status::Incomplete))
        .map(|n| n.id)
        .collect()
}

/// One round of realizability: every anchor is checked against the same
/// snapshot, then all resulting `UnsatWrt` extensions are applied.
pub fn apply_realizability(g: &mut Tableau) -> Vec<StatusChange> {
    let mut pending: Vec<(NodeId, NodeId, Assertion)> = Vec::new();
    for u in anchors(g) {
        let r = compute_realizability(g, u);
        let mut seen = BTreeSet::new();
        for (v, xi) in r.unmarked() {
            if seen.insert(*v) {
                pending.push((*v, u, xi.clone()));
            }
        }
    }
    let mut changes = Vec::new();
    for (v, u, xi) in pending {
        let from = g.status(v).clone();
        if from.is_closed_for(u) {
            continue;
        }
        g.node_mut(v).status.add_unsat_wrt(&BTreeSet::from([u]));
        changes.push(StatusChange {
            node: v,
            from,
            to: g.status(v).clone(),
            reason: Reason::NotRealizable { anchor: u, eventuality: xi },
        });
    }
    changes
}

/// Backward propagation: self-reference, non-state and state clauses, until
/// nothing changes.
///
/// The non-state clause also applies to an expanded non-state that already
/// has an `UnsatWrt` status; otherwise such a node could never become
/// `Unsat` once all its successors are.
pub fn propagate(g: &mut Tableau) -> Vec<StatusChange> {
    let mut changes = Vec::new();
    loop {
        let before = changes.len();
        for v in 0..g.len() {
            if let Some(c) = propagate_one(g, v) {
                changes.push(c);
            }
        }
        if changes.len() == before {
            return changes;
        }
    }
}

fn propagate_one(g: &mut Tableau, v: NodeId) -> Option<StatusChange> {
    let n = g.node(v);
    let from = n.status.clone();
    if from.is_unsat() {
        return None;
    }
    let change = |g: &mut Tableau, to: Status, reason: Reason| {
        g.set_status(v, to.clone());
        Some(StatusChange { node: v, from: from.clone(), to, reason })
    };
    if from.is_unsat_wrt(v) {
        return change(g, Status::Unsat, Reason::SelfReference);
    }
    if n.is_state() {
        if matches!(from, Status::Unexpanded | Status::Incomplete) {
            return None;
        }
        let mut merged = BTreeSet::new();
        let mut cause = None;
        for &w in g.successors(v) {
            match g.status(w) {
                Status::Unsat => return change(g, Status::Unsat, Reason::SuccessorUnsat(w)),
                Status::UnsatWrt(us) => {
                    if !us.iter().all(|x| from.is_unsat_wrt(*x)) {
                        merged.extend(us.iter().copied());
                        cause.get_or_insert(w);
                    }
                }
                _ => {}
            }
        }
        if let Some(w) = cause {
            let mut to = from.clone();
            to.add_unsat_wrt(&merged);
            return change(g, to, Reason::SuccessorUnsatWrt(w));
        }
        return None;
    }
    let eligible = match from {
        Status::Expanded => true,
        Status::UnsatWrt(_) => n.expansion.is_some(),
        _ => false,
    };
    if !eligible {
        return None;
    }
    let succ: Vec<NodeId> = g.successors(v).iter().copied().collect();
    if succ.iter().all(|w| g.status(*w).is_unsat()) {
        return change(g, Status::Unsat, Reason::AllSuccessorsUnsat);
    }
    let mut common: Option<BTreeSet<NodeId>> = None;
    for w in &succ {
        match g.status(*w) {
            Status::Unsat => {}
            Status::UnsatWrt(us) => {
                common = Some(match common {
                    None => us.clone(),
                    Some(c) => c.intersection(us).copied().collect(),
                });
            }
            _ => return None,
        }
    }
    let common = common.unwrap_or_default();
    if common.is_empty() || common.iter().all(|x| from.is_unsat_wrt(*x)) {
        return None;
    }
    let mut to = from.clone();
    to.add_unsat_wrt(&common);
    change(g, to, Reason::SuccessorsUnsatWrt)
}

/// Realizability and propagation, repeated until statuses are stable.
pub fn status_phase(g: &mut Tableau) -> Vec<StatusChange> {
    let mut changes = propagate(g);
    loop {
        let r = apply_realizability(g);
        let p = propagate(g);
        let done = r.is_empty() && p.is_empty();
        changes.extend(r);
        changes.extend(p);
        if done || g.status(g.root()).is_unsat() {
            return changes;
        }
    }
}
