//! The and-or graph built by the calculus, with global caching on node
//! attributes.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt::{self, Write as _};

use crate::syntax::{negate_assertion, ABox, Assertion, Formula, Name};

pub type NodeId = usize;
pub type Label = BTreeSet<Assertion>;
/// Nominal replacement of a complex node: `b ↦ a` means `b` was replaced by `a`.
pub type Repl = BTreeMap<Name, Name>;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum NodeType {
    State,
    NonState,
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum SubType {
    Complex,
    Simple,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Status {
    Unexpanded,
    Expanded,
    Incomplete,
    Blocked,
    Unsat,
    UnsatWrt(BTreeSet<NodeId>),
}

impl Status {
    pub fn is_unsat(&self) -> bool {
        matches!(self, Status::Unsat)
    }

    /// `UnsatWrt∋u`.
    pub fn is_unsat_wrt(&self, u: NodeId) -> bool {
        matches!(self, Status::UnsatWrt(us) if us.contains(&u))
    }

    /// `Unsat` or `UnsatWrt∋u`: closed as far as anchor `u` is concerned.
    pub fn is_closed_for(&self, u: NodeId) -> bool {
        self.is_unsat() || self.is_unsat_wrt(u)
    }

    /// Adds `u` to the `UnsatWrt` set, turning any other status into
    /// `UnsatWrt({u})`. Returns whether anything changed.
    pub fn add_unsat_wrt(&mut self, us: &BTreeSet<NodeId>) -> bool {
        match self {
            Status::Unsat => false,
            Status::UnsatWrt(cur) => {
                let before = cur.len();
                cur.extend(us.iter().copied());
                cur.len() != before
            }
            _ => {
                *self = Status::UnsatWrt(us.clone());
                true
            }
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Status::Unexpanded => f.write_str("Unexpanded"),
            Status::Expanded => f.write_str("Expanded"),
            Status::Incomplete => f.write_str("Incomplete"),
            Status::Blocked => f.write_str("Blocked"),
            Status::Unsat => f.write_str("Unsat"),
            Status::UnsatWrt(us) => {
                let ids: Vec<String> = us.iter().map(|u| format!("v{u}")).collect();
                write!(f, "UnsatWrt({{{}}})", ids.join(","))
            }
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum RuleKind {
    And,
    Or,
    AutBox,
    AutDiamond,
    Box,
    Diamond,
    BoxF,
    DiamondF,
    BoxTest,
    DiamondTest,
    BoxTrans,
    ReplNom,
    Nom,
    Reexpand,
    FormingState,
    Trans,
}

impl RuleKind {
    pub fn is_static(self) -> bool {
        !matches!(
            self,
            RuleKind::ReplNom
                | RuleKind::Nom
                | RuleKind::Reexpand
                | RuleKind::FormingState
                | RuleKind::Trans
        )
    }

    pub fn name(self) -> &'static str {
        match self {
            RuleKind::And => "and",
            RuleKind::Or => "or",
            RuleKind::AutBox => "aut-box",
            RuleKind::AutDiamond => "aut-dia",
            RuleKind::Box => "box",
            RuleKind::Diamond => "dia",
            RuleKind::BoxF => "box-f",
            RuleKind::DiamondF => "dia-f",
            RuleKind::BoxTest => "box-test",
            RuleKind::DiamondTest => "dia-test",
            RuleKind::BoxTrans => "box-trans",
            RuleKind::ReplNom => "repl-nom",
            RuleKind::Nom => "nom",
            RuleKind::Reexpand => "reexpand",
            RuleKind::FormingState => "forming-state",
            RuleKind::Trans => "trans",
        }
    }
}

impl fmt::Display for RuleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One successor connection made when a node was expanded, with the
/// assertions the rule put into that conclusion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Branch {
    pub target: NodeId,
    pub added: Vec<Assertion>,
}

/// How a node was expanded. Re-expansion keeps the original record and only
/// sets `reexpanded`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expansion {
    pub rule: RuleKind,
    pub principal: Option<Assertion>,
    pub branches: Vec<Branch>,
}

#[derive(Clone, Debug)]
pub struct Node {
    pub id: NodeId,
    pub kind: NodeType,
    pub stype: SubType,
    /// Simple nodes hold subject-less assertions, i.e. plain formulas.
    pub label: Label,
    pub reduced: Label,
    pub repl: Option<Repl>,
    pub status: Status,
    pub ass_sn: Option<Label>,
    pub expansion: Option<Expansion>,
    pub reexpanded: bool,
    full: Label,
}

impl Node {
    pub fn is_state(&self) -> bool {
        self.kind == NodeType::State
    }

    pub fn is_complex(&self) -> bool {
        self.stype == SubType::Complex
    }

    pub fn is_complex_state(&self) -> bool {
        self.is_state() && self.is_complex()
    }

    /// `FullLabel(v)`, computed once at creation since the attributes it
    /// depends on never change.
    pub fn full_label(&self) -> &Label {
        &self.full
    }

    pub fn full_label_contains(&self, x: &Assertion) -> bool {
        self.full.contains(x)
    }

    /// Nominals occurring as bare formulas in a simple label.
    pub fn label_nominals(&self) -> impl Iterator<Item = &Name> {
        self.label.iter().filter_map(|x| match x {
            Assertion::Holds { subject: None, formula: Formula::Nominal(a) } => Some(a),
            _ => None,
        })
    }

    /// Syntactic clash: `o:⊥`, `a:¬a`, or a complementary pair in the full label.
    pub fn has_clash(&self) -> bool {
        for x in &self.label {
            if let Assertion::Holds { subject, formula } = x {
                match formula {
                    Formula::Bot => return true,
                    Formula::Not(g) => {
                        if let (Some(a), Formula::Nominal(b)) = (subject, &**g) {
                            if a == b {
                                return true;
                            }
                        }
                    }
                    _ => {}
                }
            }
        }
        self.full.iter().any(|x| negate_assertion(x).is_some_and(|n| self.full.contains(&n)))
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
struct NodeKey {
    kind: NodeType,
    stype: SubType,
    label: Label,
    reduced: Label,
    repl: Option<Repl>,
}

/// `G = ⟨V, E, ν⟩` with edge labels and the node cache.
#[derive(Clone, Debug)]
pub struct Tableau {
    nodes: Vec<Node>,
    succ: Vec<BTreeSet<NodeId>>,
    pred: Vec<BTreeSet<NodeId>>,
    elabels: HashMap<(NodeId, NodeId), Label>,
    cache: HashMap<NodeKey, NodeId>,
    root: NodeId,
    edges_created: u64,
    edges_deleted: u64,
}

impl fmt::Debug for NodeKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}/{:?}/{} assertions", self.kind, self.stype, self.label.len())
    }
}

impl Tableau {
    /// Creates the root `ν := NewSucc(Null, NonState, Complex, Γ, ∅, ∅, Null)`.
    pub fn new(gamma: &ABox) -> Self {
        let mut g = Tableau {
            nodes: Vec::new(),
            succ: Vec::new(),
            pred: Vec::new(),
            elabels: HashMap::new(),
            cache: HashMap::new(),
            root: 0,
            edges_created: 0,
            edges_deleted: 0,
        };
        let label: Label = gamma.iter().cloned().collect();
        g.root = g.new_succ(None, NodeType::NonState, SubType::Complex, label, Label::new(), Some(Repl::new()), None);
        g
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn node(&self, v: NodeId) -> &Node {
        &self.nodes[v]
    }

    pub fn node_mut(&mut self, v: NodeId) -> &mut Node {
        &mut self.nodes[v]
    }

    pub fn nodes(&self) -> impl Iterator<Item = &Node> {
        self.nodes.iter()
    }

    pub fn status(&self, v: NodeId) -> &Status {
        &self.nodes[v].status
    }

    pub fn set_status(&mut self, v: NodeId, s: Status) {
        self.nodes[v].status = s;
    }

    pub fn successors(&self, v: NodeId) -> &BTreeSet<NodeId> {
        &self.succ[v]
    }

    pub fn predecessors(&self, v: NodeId) -> &BTreeSet<NodeId> {
        &self.pred[v]
    }

    pub fn has_edge(&self, v: NodeId, w: NodeId) -> bool {
        self.succ[v].contains(&w)
    }

    pub fn edge_labels(&self, v: NodeId, w: NodeId) -> Option<&Label> {
        self.elabels.get(&(v, w))
    }

    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.succ.iter().enumerate().flat_map(|(v, ws)| ws.iter().map(move |w| (v, *w)))
    }

    pub fn edge_count(&self) -> usize {
        self.succ.iter().map(BTreeSet::len).sum()
    }

    pub fn edges_created(&self) -> u64 {
        self.edges_created
    }

    pub fn edges_deleted(&self) -> u64 {
        self.edges_deleted
    }

    pub fn full_label(&self, v: NodeId) -> &Label {
        self.nodes[v].full_label()
    }

    /// Looks up a node by its five identifying attributes.
    pub fn find(
        &self,
        kind: NodeType,
        stype: SubType,
        label: &Label,
        reduced: &Label,
        repl: &Option<Repl>,
    ) -> Option<NodeId> {
        let key = NodeKey {
            kind,
            stype,
            label: label.clone(),
            reduced: reduced.clone(),
            repl: repl.clone(),
        };
        self.cache.get(&key).copied()
    }

    fn add_edge(&mut self, v: NodeId, w: NodeId, e_label: Option<Assertion>) {
        if self.succ[v].insert(w) {
            self.pred[w].insert(v);
            self.edges_created += 1;
        }
        if self.nodes[v].is_state() {
            let set = self.elabels.entry((v, w)).or_default();
            if let Some(e) = e_label {
                set.insert(e);
            }
        }
    }

    pub fn delete_edge(&mut self, v: NodeId, w: NodeId) -> bool {
        if self.succ[v].remove(&w) {
            self.pred[w].remove(&v);
            self.elabels.remove(&(v, w));
            self.edges_deleted += 1;
            true
        } else {
            false
        }
    }

    /// Function `NewSucc`. The caller must make sure no cached node matches.
    #[allow(clippy::too_many_arguments)]
    pub fn new_succ(
        &mut self,
        v: Option<NodeId>,
        kind: NodeType,
        stype: SubType,
        label: Label,
        reduced: Label,
        repl: Option<Repl>,
        e_label: Option<Assertion>,
    ) -> NodeId {
        let id = self.nodes.len();
        let mut repl = repl;
        if v.is_none() {
            let mut sig = crate::syntax::Signature::default();
            for x in &label {
                sig.add_assertion(x);
            }
            let r = repl.get_or_insert_with(Repl::new);
            for a in sig.nominals {
                r.insert(a.clone(), a);
            }
        }
        let key = NodeKey {
            kind,
            stype,
            label: label.clone(),
            reduced: reduced.clone(),
            repl: repl.clone(),
        };
        assert!(!self.cache.contains_key(&key), "cache already holds a node with these attributes");
        self.cache.insert(key, id);
        let ass_sn = (stype == SubType::Complex && kind == NodeType::State).then(Label::new);
        let full = compute_full_label(&label, &reduced, &repl);
        self.nodes.push(Node {
            id,
            kind,
            stype,
            label,
            reduced,
            repl,
            status: Status::Unexpanded,
            ass_sn,
            expansion: None,
            reexpanded: false,
            full,
        });
        self.succ.push(BTreeSet::new());
        self.pred.push(BTreeSet::new());
        if let Some(v) = v {
            self.add_edge(v, id, e_label);
        }
        id
    }

    /// Function `ConToSucc`: reuse a cached node when one matches, otherwise
    /// create it. Returns the successor and whether it is new.
    #[allow(clippy::too_many_arguments)]
    pub fn con_to_succ(
        &mut self,
        v: NodeId,
        kind: NodeType,
        stype: SubType,
        label: Label,
        reduced: Label,
        repl: Option<Repl>,
        e_label: Option<Assertion>,
    ) -> (NodeId, bool) {
        if let Some(w) = self.find(kind, stype, &label, &reduced, &repl) {
            self.add_edge(v, w, e_label);
            (w, false)
        } else {
            (self.new_succ(Some(v), kind, stype, label, reduced, repl, e_label), true)
        }
    }

    /// All nodes reachable from `u`, including `u`.
    pub fn descendants(&self, u: NodeId) -> BTreeSet<NodeId> {
        self.reach(u, |_| true)
    }

    /// Complex states `u` with a path `u →* v`.
    pub fn ancestor_complex_states(&self, v: NodeId) -> BTreeSet<NodeId> {
        let mut seen = BTreeSet::from([v]);
        let mut queue = VecDeque::from([v]);
        while let Some(x) = queue.pop_front() {
            for &p in &self.pred[x] {
                if seen.insert(p) {
                    queue.push_back(p);
                }
            }
        }
        seen.into_iter().filter(|x| self.nodes[*x].is_complex_state()).collect()
    }

    /// Nodes reachable from `from` through nodes accepted by `ok`. `from`
    /// itself must be accepted, otherwise the result is empty.
    pub fn reach(&self, from: NodeId, ok: impl Fn(&Node) -> bool) -> BTreeSet<NodeId> {
        let mut seen = BTreeSet::new();
        if !ok(&self.nodes[from]) {
            return seen;
        }
        seen.insert(from);
        let mut queue = VecDeque::from([from]);
        while let Some(x) = queue.pop_front() {
            for &w in &self.succ[x] {
                if !seen.contains(&w) && ok(&self.nodes[w]) {
                    seen.insert(w);
                    queue.push_back(w);
                }
            }
        }
        seen
    }

    /// Whether a path `from →* via →* to` exists on which no node is `bad`.
    pub fn path_avoiding(
        &self,
        from: NodeId,
        via: NodeId,
        to: NodeId,
        bad: impl Fn(&Node) -> bool,
    ) -> bool {
        let ok = |n: &Node| !bad(n);
        self.reaches(from, via, ok) && self.reaches(via, to, ok)
    }

    /// Whether `to` is reachable from `from` through nodes accepted by `ok`.
    pub fn reaches(&self, from: NodeId, to: NodeId, ok: impl Fn(&Node) -> bool) -> bool {
        if !ok(&self.nodes[from]) {
            return false;
        }
        let mut seen = vec![false; self.nodes.len()];
        seen[from] = true;
        let mut stack = vec![from];
        while let Some(x) = stack.pop() {
            if x == to {
                return true;
            }
            for &w in &self.succ[x] {
                if !seen[w] && ok(&self.nodes[w]) {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        false
    }

    /// Replays the cache invariant: no two nodes share all five attributes.
    pub fn cache_is_consistent(&self) -> bool {
        let mut seen = std::collections::HashSet::new();
        self.nodes.iter().all(|n| {
            seen.insert(NodeKey {
                kind: n.kind,
                stype: n.stype,
                label: n.label.clone(),
                reduced: n.reduced.clone(),
                repl: n.repl.clone(),
            })
        }) && self.cache.len() == self.nodes.len()
    }

    /// Edge labels exist exactly on edges leaving states.
    pub fn edge_labels_are_consistent(&self) -> bool {
        self.edges().all(|(v, w)| self.nodes[v].is_state() == self.elabels.contains_key(&(v, w)))
            && self.elabels.keys().all(|(v, w)| self.has_edge(*v, *w))
    }

    /// Graphviz rendering; states are drawn as boxes.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph tableau {\n  node [fontname=\"monospace\"];\n");
        for n in &self.nodes {
            let shape = if n.is_state() { "box" } else { "ellipse" };
            let kind = match (n.kind, n.stype) {
                (NodeType::State, SubType::Complex) => "complex state",
                (NodeType::State, SubType::Simple) => "simple state",
                (NodeType::NonState, SubType::Complex) => "complex non-state",
                (NodeType::NonState, SubType::Simple) => "simple non-state",
            };
            let mut text = format!("v{} ({kind})\\n{}", n.id, n.status);
            for x in &n.label {
                let _ = write!(text, "\\n{}", escape(&x.to_string()));
            }
            if !n.reduced.is_empty() {
                let r: Vec<String> = n.reduced.iter().map(|x| escape(&x.to_string())).collect();
                let _ = write!(text, "\\nreduced: {}", r.join(", "));
            }
            let _ = writeln!(out, "  v{} [shape={shape}, label=\"{text}\"];", n.id);
        }
        for (v, w) in self.edges() {
            match self.elabels.get(&(v, w)) {
                Some(ls) if !ls.is_empty() => {
                    let l: Vec<String> = ls.iter().map(|x| escape(&x.to_string())).collect();
                    let _ = writeln!(out, "  v{v} -> v{w} [label=\"{}\"];", l.join("\\n"));
                }
                _ => {
                    let _ = writeln!(out, "  v{v} -> v{w};");
                }
            }
        }
        out.push_str("}\n");
        out
    }
}

fn compute_full_label(label: &Label, reduced: &Label, repl: &Option<Repl>) -> Label {
    let mut out: Label = label.union(reduced).cloned().collect();
    if let Some(r) = repl {
        for (b, a) in r {
            out.insert(Assertion::holds(Some(a.clone()), Formula::Nominal(b.clone())));
        }
    }
    out
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{name, parse_abox, parse_formula};

    fn worked_example() -> ABox {
        parse_abox("'a:[s*]p; s('a,'b); 'b:<(?('a)+s)*> ~p").unwrap()
    }

    #[test]
    fn root_gets_identity_replacement() {
        let g = Tableau::new(&worked_example());
        let r = g.node(g.root()).repl.clone().unwrap();
        assert_eq!(r, Repl::from([(name("a"), name("a")), (name("b"), name("b"))]));
        assert_eq!(*g.status(g.root()), Status::Unexpanded);
        assert!(g.node(g.root()).ass_sn.is_none());
    }

    #[test]
    fn full_label_adds_replacements() {
        let mut g = Tableau::new(&parse_abox("'a:p").unwrap());
        let mut r = g.node(0).repl.clone().unwrap();
        r.insert(name("b"), name("a"));
        let (w, _) = g.con_to_succ(0, NodeType::NonState, SubType::Complex, Label::new(), Label::new(), Some(r), None);
        assert!(g.full_label(w).contains(&Assertion::at("a", Formula::nominal("b"))));
        assert!(g.node(w).full_label_contains(&Assertion::at("a", Formula::nominal("b"))));
    }

    #[test]
    fn con_to_succ_reuses_cached_nodes() {
        let mut g = Tableau::new(&parse_abox("'a:p").unwrap());
        let label: Label = [Assertion::bare(Formula::prop("p"))].into();
        let (w1, new1) = g.con_to_succ(0, NodeType::NonState, SubType::Simple, label.clone(), Label::new(), None, None);
        let (w2, new2) = g.con_to_succ(0, NodeType::NonState, SubType::Simple, label, Label::new(), None, None);
        assert!(new1 && !new2);
        assert_eq!(w1, w2);
        assert_eq!(g.edge_count(), 1);
        assert!(g.cache_is_consistent());
        // Non-state source: no edge label.
        assert!(g.edge_labels(0, w1).is_none());
    }

    #[test]
    fn edges_from_states_are_labelled() {
        let mut g = Tableau::new(&parse_abox("'a:<s>p").unwrap());
        let l = g.node(0).label.clone();
        let r = g.node(0).repl.clone();
        let (s, _) = g.con_to_succ(0, NodeType::State, SubType::Complex, l, Label::new(), r, None);
        assert_eq!(g.node(s).ass_sn, Some(Label::new()));
        let e = Assertion::at("a", parse_formula("<s>p").unwrap());
        let x: Label = [Assertion::bare(Formula::prop("p"))].into();
        let (w, _) = g.con_to_succ(s, NodeType::NonState, SubType::Simple, x, Label::new(), None, Some(e.clone()));
        assert_eq!(g.edge_labels(s, w).unwrap(), &Label::from([e]));
        assert!(g.edge_labels_are_consistent());
        assert_eq!(g.ancestor_complex_states(w), BTreeSet::from([s]));
        assert_eq!(g.ancestor_complex_states(s), BTreeSet::from([s]));
        assert!(g.ancestor_complex_states(0).is_empty());
    }

    #[test]
    fn clash_detection() {
        let g = Tableau::new(&parse_abox("'a:p; 'a:~p").unwrap());
        assert!(g.node(0).has_clash());
        let g = Tableau::new(&parse_abox("'a:~'a").unwrap());
        assert!(g.node(0).has_clash());
        let g = Tableau::new(&parse_abox("'a:false").unwrap());
        assert!(g.node(0).has_clash());
        let g = Tableau::new(&parse_abox("'a:p; 'b:~p").unwrap());
        assert!(!g.node(0).has_clash());
    }

    #[test]
    fn paths_avoid_bad_nodes() {
        let mut g = Tableau::new(&parse_abox("'a:p").unwrap());
        let mk = |i: usize| -> Label { [Assertion::bare(Formula::prop(&format!("q{i}")))].into() };
        let (x, _) = g.con_to_succ(0, NodeType::NonState, SubType::Simple, mk(1), Label::new(), None, None);
        let (y, _) = g.con_to_succ(x, NodeType::NonState, SubType::Simple, mk(2), Label::new(), None, None);
        assert!(g.path_avoiding(0, x, y, |n| n.status.is_unsat()));
        assert!(g.path_avoiding(y, y, y, |n| n.status.is_unsat()));
        g.set_status(x, Status::Unsat);
        assert!(!g.path_avoiding(0, 0, y, |n| n.status.is_unsat()));
        assert!(g.delete_edge(x, y));
        assert!(!g.descendants(0).contains(&y));
        assert_eq!(g.edges_deleted(), 1);
    }

    #[test]
    fn unsat_wrt_merging() {
        let mut s = Status::Expanded;
        assert!(s.add_unsat_wrt(&BTreeSet::from([3])));
        assert!(s.add_unsat_wrt(&BTreeSet::from([4])));
        assert!(!s.add_unsat_wrt(&BTreeSet::from([3])));
        assert_eq!(s, Status::UnsatWrt(BTreeSet::from([3, 4])));
        assert!(s.is_closed_for(4) && !s.is_closed_for(5));
        let mut u = Status::Unsat;
        assert!(!u.add_unsat_wrt(&BTreeSet::from([1])));
    }

    #[test]
    fn dot_mentions_every_node() {
        let g = Tableau::new(&worked_example());
        let dot = g.to_dot();
        assert!(dot.starts_with("digraph"));
        assert!(dot.contains("v0 (complex non-state)"));
    }
}
