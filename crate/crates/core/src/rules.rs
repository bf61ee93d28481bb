//! Applicability and application of the expansion rules: the static rules,
//! nominal replacement, nominal blocking, re-expansion, state forming and the
//! transitional rule.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use crate::automata::{compile_program, Nfa};
use crate::syntax::{
    negate_assertion, negate_nnf, rename_assertion, Assertion, Formula, Name, Program,
};
use crate::tableau::{
    Branch, Expansion, Label, Node, NodeId, NodeType, RuleKind, Status, SubType, Tableau,
};

/// Compiled automata, shared so that equal programs give equal automata
/// without recompiling.
#[derive(Default, Debug)]
pub struct Automata {
    cache: HashMap<Program, Arc<Nfa>>,
}

impl Automata {
    pub fn get(&mut self, alpha: &Program) -> Arc<Nfa> {
        self.cache.entry(alpha.clone()).or_insert_with(|| Arc::new(compile_program(alpha))).clone()
    }
}

/// A static rule instantiated on a node's label.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StaticInstance {
    pub rule: RuleKind,
    pub principal: Assertion,
    /// What each possible conclusion adds to `X`.
    pub conclusions: Vec<Vec<Assertion>>,
}

impl StaticInstance {
    pub fn is_unary(&self) -> bool {
        self.conclusions.len() == 1
    }
}

/// One rule application, as reported in traces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Applied {
    pub rule: RuleKind,
    pub node: NodeId,
    pub principal: Option<Assertion>,
    /// Successors connected, with whether each was newly created.
    pub targets: Vec<(NodeId, bool)>,
}

impl fmt::Display for Applied {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} v{}", self.rule, self.node)?;
        if let Some(p) = &self.principal {
            write!(f, " [{p}]")?;
        }
        let ts: Vec<String> = self
            .targets
            .iter()
            .map(|(w, new)| if *new { format!("v{w} (new)") } else { format!("v{w}") })
            .collect();
        if !ts.is_empty() {
            write!(f, " -> {}", ts.join(", "))?;
        }
        Ok(())
    }
}

/// What an application of the nominal rule changed.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct NomEffect {
    pub node: NodeId,
    pub nominal: Option<Name>,
    pub unsat_wrt: Vec<NodeId>,
    pub incomplete: Vec<(NodeId, Label)>,
    pub blocked: bool,
}

impl NomEffect {
    pub fn changed(&self) -> bool {
        !self.unsat_wrt.is_empty() || !self.incomplete.is_empty() || self.blocked
    }
}

impl fmt::Display for NomEffect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "nom v{}", self.node)?;
        if let Some(a) = &self.nominal {
            write!(f, " ['{a}]")?;
        }
        for u in &self.unsat_wrt {
            write!(f, "; unsat wrt v{u}")?;
        }
        for (u, x) in &self.incomplete {
            let xs: Vec<String> = x.iter().map(ToString::to_string).collect();
            write!(f, "; v{u} incomplete {{{}}}", xs.join(", "))?;
        }
        if self.blocked {
            f.write_str("; blocked")?;
        }
        Ok(())
    }
}

/// `(a, b)` for the least `a:b` in the label with `a ≠ b`.
pub fn repl_nom_pair(n: &Node) -> Option<(Name, Name)> {
    if n.stype != SubType::Complex || n.kind != NodeType::NonState {
        return None;
    }
    n.label.iter().find_map(|x| match x {
        Assertion::Holds { subject: Some(a), formula: Formula::Nominal(b) } if a != b => {
            Some((a.clone(), b.clone()))
        }
        _ => None,
    })
}

pub fn repl_nom_applicable(n: &Node) -> bool {
    n.status == Status::Unexpanded && repl_nom_pair(n).is_some()
}

/// The nominal the nominal rule works with: the least one in a simple label.
pub fn nom_nominal(n: &Node) -> Option<Name> {
    if n.stype != SubType::Simple {
        return None;
    }
    n.label_nominals().next().cloned()
}

/// Static instances applicable to `v`, in label order.
pub fn applicable_static(g: &Tableau, v: NodeId, auts: &mut Automata) -> Vec<StaticInstance> {
    let n = g.node(v);
    if n.status != Status::Unexpanded
        || n.kind != NodeType::NonState
        || repl_nom_pair(n).is_some()
        || nom_nominal(n).is_some()
    {
        return Vec::new();
    }
    let mut out = Vec::new();
    for x in &n.label {
        let Assertion::Holds { subject: o, formula } = x else { continue };
        let at = |f: Formula| Assertion::holds(o.clone(), f);
        let inst = match formula {
            Formula::And(a, b) => {
                Some((RuleKind::And, vec![vec![at((**a).clone()), at((**b).clone())]]))
            }
            Formula::Or(a, b) => {
                Some((RuleKind::Or, vec![vec![at((**a).clone())], vec![at((**b).clone())]]))
            }
            Formula::Box(p, f) if !p.is_atomic() && !p.is_test() => {
                let aut = auts.get(p);
                let adds = aut
                    .initial()
                    .iter()
                    .map(|q| at(Formula::AutBox(aut.clone(), *q, f.clone())))
                    .collect();
                Some((RuleKind::AutBox, vec![adds]))
            }
            Formula::Diamond(p, f) if !p.is_atomic() && !p.is_test() => {
                let aut = auts.get(p);
                let branches = aut
                    .initial()
                    .iter()
                    .map(|q| vec![at(Formula::AutDiamond(aut.clone(), *q, f.clone()))])
                    .collect();
                Some((RuleKind::AutDiamond, branches))
            }
            Formula::AutBox(aut, q, f) => {
                let mut adds: Vec<Assertion> = aut
                    .transitions(*q)
                    .iter()
                    .map(|(w, q2)| {
                        at(Formula::Box(
                            Arc::new(w.to_program()),
                            Arc::new(Formula::AutBox(aut.clone(), *q2, f.clone())),
                        ))
                    })
                    .collect();
                let rule = if aut.is_accepting(*q) {
                    adds.push(at((**f).clone()));
                    RuleKind::BoxF
                } else {
                    RuleKind::Box
                };
                Some((rule, vec![adds]))
            }
            Formula::AutDiamond(aut, q, f) => {
                let mut branches: Vec<Vec<Assertion>> = aut
                    .transitions(*q)
                    .iter()
                    .map(|(w, q2)| {
                        vec![at(Formula::Diamond(
                            Arc::new(w.to_program()),
                            Arc::new(Formula::AutDiamond(aut.clone(), *q2, f.clone())),
                        ))]
                    })
                    .collect();
                let rule = if aut.is_accepting(*q) {
                    branches.push(vec![at((**f).clone())]);
                    RuleKind::DiamondF
                } else {
                    RuleKind::Diamond
                };
                Some((rule, branches))
            }
            Formula::Box(p, f) if p.is_test() => {
                let Program::Test(psi) = &**p else { unreachable!() };
                Some((RuleKind::BoxTest, vec![vec![at(negate_nnf(psi))], vec![at((**f).clone())]]))
            }
            Formula::Diamond(p, f) if p.is_test() => {
                let Program::Test(psi) = &**p else { unreachable!() };
                Some((RuleKind::DiamondTest, vec![vec![at((**psi).clone()), at((**f).clone())]]))
            }
            _ => None,
        };
        if let Some((rule, conclusions)) = inst {
            if !n.reduced.contains(x) {
                out.push(StaticInstance { rule, principal: x.clone(), conclusions });
            }
            continue;
        }
        // □trans: a:[σ]φ with σ(a,b) for every b.
        if let (Some(a), Formula::Box(p, f)) = (o, formula) {
            if let Program::Atomic(s) = &**p {
                for y in &n.label {
                    if let Assertion::Edge { program, from, to } = y {
                        if program == s && from == a {
                            let add = Assertion::holds(Some(to.clone()), (**f).clone());
                            if !n.full_label_contains(&add) {
                                out.push(StaticInstance {
                                    rule: RuleKind::BoxTrans,
                                    principal: x.clone(),
                                    conclusions: vec![vec![add]],
                                });
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

pub fn apply_static(g: &mut Tableau, v: NodeId, inst: &StaticInstance) -> Applied {
    let n = g.node(v);
    let (stype, repl) = (n.stype, n.repl.clone());
    let mut base = n.label.clone();
    let mut reduced = n.reduced.clone();
    if inst.rule != RuleKind::BoxTrans {
        base.remove(&inst.principal);
        reduced.insert(inst.principal.clone());
    }
    let mut targets = Vec::new();
    let mut branches = Vec::new();
    for adds in &inst.conclusions {
        let mut label = base.clone();
        label.extend(adds.iter().cloned());
        let (w, new) =
            g.con_to_succ(v, NodeType::NonState, stype, label, reduced.clone(), repl.clone(), None);
        targets.push((w, new));
        branches.push(Branch { target: w, added: adds.clone() });
    }
    let node = g.node_mut(v);
    node.status = Status::Expanded;
    node.expansion =
        Some(Expansion { rule: inst.rule, principal: Some(inst.principal.clone()), branches });
    Applied { rule: inst.rule, node: v, principal: Some(inst.principal.clone()), targets }
}

/// Replaces the payload `b` of `a:b` by `a` everywhere. The successor's
/// replacement map is decided before the cache lookup so that cached nodes
/// are never modified afterwards.
pub fn apply_repl_nom(g: &mut Tableau, v: NodeId) -> Option<Applied> {
    let n = g.node(v);
    if n.status != Status::Unexpanded {
        return None;
    }
    let (a, b) = repl_nom_pair(n)?;
    let principal = Assertion::holds(Some(a.clone()), Formula::Nominal(b.clone()));
    let map = |x: &Name| (*x == b).then(|| a.clone());
    let label: Label =
        n.label.iter().filter(|x| **x != principal).map(|x| rename_assertion(x, &map)).collect();
    let reduced: Label = n.reduced.iter().map(|x| rename_assertion(x, &map)).collect();
    let mut repl = n.repl.clone().unwrap_or_default();
    for target in repl.values_mut() {
        if *target == b {
            *target = a.clone();
        }
    }
    repl.insert(b.clone(), a.clone());
    let (w, new) =
        g.con_to_succ(v, NodeType::NonState, SubType::Complex, label, reduced, Some(repl), None);
    let node = g.node_mut(v);
    node.status = Status::Expanded;
    node.expansion = Some(Expansion {
        rule: RuleKind::ReplNom,
        principal: Some(principal.clone()),
        branches: vec![Branch { target: w, added: Vec::new() }],
    });
    Some(Applied { rule: RuleKind::ReplNom, node: v, principal: Some(principal), targets: vec![(w, new)] })
}

/// The nominal rule on a simple node `v` carrying nominal `a`. Returns what
/// changed; an empty effect means the rule was not applicable.
pub fn apply_nom(g: &mut Tableau, v: NodeId) -> NomEffect {
    let root = g.root();
    apply_nom_where(g, v, |g, u| g.path_avoiding(root, u, v, |m| m.status.is_closed_for(u)))
}

/// The nominal rule with the path condition supplied by the caller:
/// `path_ok(g, u)` must say whether some path from the root through `u` to
/// `v` avoids `Unsat` and `UnsatWrt∋u`.
pub fn apply_nom_where(
    g: &mut Tableau,
    v: NodeId,
    path_ok: impl Fn(&Tableau, NodeId) -> bool,
) -> NomEffect {
    let mut eff = NomEffect { node: v, ..NomEffect::default() };
    let n = g.node(v);
    if n.status.is_unsat() {
        return eff;
    }
    let Some(a) = nom_nominal(n) else { return eff };
    eff.nominal = Some(a.clone());
    let x: Label = n
        .label
        .iter()
        .filter(|f| !matches!(f, Assertion::Holds { formula: Formula::Nominal(b), .. } if *b == a))
        .filter_map(|f| f.formula().map(|phi| Assertion::holds(Some(a.clone()), phi.clone())))
        .collect();
    let candidates: Vec<NodeId> =
        g.nodes().filter(|u| u.is_complex_state()).map(|u| u.id).collect();
    for u in candidates {
        if g.status(v).is_unsat_wrt(u) || *g.status(u) == Status::Incomplete {
            continue;
        }
        let un = g.node(u);
        let clash = x
            .iter()
            .any(|xi| negate_assertion(xi).is_some_and(|neg| un.full_label_contains(&neg)));
        let missing: Label = x.iter().filter(|xi| !un.full_label_contains(xi)).cloned().collect();
        // the path check is the expensive part; skip it when u would not change
        if !clash && missing.is_empty() {
            continue;
        }
        if !path_ok(g, u) {
            continue;
        }
        if clash {
            g.node_mut(v).status.add_unsat_wrt(&BTreeSet::from([u]));
            eff.unsat_wrt.push(u);
        } else {
            let node = g.node_mut(u);
            node.status = Status::Incomplete;
            node.ass_sn = Some(missing.clone());
            eff.incomplete.push((u, missing));
        }
    }
    if *g.status(v) == Status::Unexpanded {
        g.set_status(v, Status::Blocked);
        eff.blocked = true;
    }
    eff
}

/// Re-expands `v` along its edge to the incomplete state `w`.
pub fn apply_reexpand(g: &mut Tableau, v: NodeId, w: NodeId) -> Option<Applied> {
    if !g.has_edge(v, w) || *g.status(w) != Status::Incomplete {
        return None;
    }
    let ass = g.node(w).ass_sn.clone().unwrap_or_default();
    g.delete_edge(v, w);
    let n = g.node(v);
    let (stype, label, reduced, repl) = (n.stype, n.label.clone(), n.reduced.clone(), n.repl.clone());
    let mut targets = Vec::new();
    let mut branches = Vec::new();
    let mut all = label.clone();
    all.extend(ass.iter().cloned());
    let (t, new) = g.con_to_succ(v, NodeType::NonState, stype, all, reduced.clone(), repl.clone(), None);
    targets.push((t, new));
    branches.push(Branch { target: t, added: ass.iter().cloned().collect() });
    for xi in &ass {
        let Some(neg) = negate_assertion(xi) else { continue };
        let mut l = label.clone();
        l.insert(neg.clone());
        let (t, new) = g.con_to_succ(v, NodeType::NonState, stype, l, reduced.clone(), repl.clone(), None);
        targets.push((t, new));
        branches.push(Branch { target: t, added: vec![neg] });
    }
    let node = g.node_mut(v);
    node.reexpanded = true;
    if let Some(e) = &mut node.expansion {
        e.branches.extend(branches);
    }
    Some(Applied { rule: RuleKind::Reexpand, node: v, principal: None, targets })
}

pub fn apply_forming_state(g: &mut Tableau, v: NodeId) -> Applied {
    let n = g.node(v);
    let (w, new) = if n.is_complex() {
        let (l, r, repl) = (n.label.clone(), n.reduced.clone(), n.repl.clone());
        g.con_to_succ(v, NodeType::State, SubType::Complex, l, r, repl, None)
    } else {
        let l = n.label.clone();
        g.con_to_succ(v, NodeType::State, SubType::Simple, l, Label::new(), None, None)
    };
    let node = g.node_mut(v);
    node.status = Status::Expanded;
    node.expansion = Some(Expansion {
        rule: RuleKind::FormingState,
        principal: None,
        branches: vec![Branch { target: w, added: Vec::new() }],
    });
    Applied { rule: RuleKind::FormingState, node: v, principal: None, targets: vec![(w, new)] }
}

pub fn apply_trans(g: &mut Tableau, v: NodeId) -> Applied {
    let n = g.node(v);
    let mut jobs = Vec::new();
    for x in &n.label {
        let Assertion::Holds { subject: o, formula: Formula::Diamond(p, phi) } = x else { continue };
        let Program::Atomic(s) = &**p else { continue };
        let mut succ = Label::from([Assertion::bare((**phi).clone())]);
        for y in &n.label {
            if let Assertion::Holds { subject: o2, formula: Formula::Box(p2, psi) } = y {
                if o2 == o && matches!(&**p2, Program::Atomic(s2) if s2 == s) {
                    succ.insert(Assertion::bare((**psi).clone()));
                }
            }
        }
        jobs.push((x.clone(), succ));
    }
    let mut targets = Vec::new();
    let mut branches = Vec::new();
    for (e, label) in jobs {
        let (w, new) = g.con_to_succ(
            v,
            NodeType::NonState,
            SubType::Simple,
            label,
            Label::new(),
            None,
            Some(e.clone()),
        );
        if !targets.iter().any(|(t, _)| *t == w) {
            targets.push((w, new));
        }
        branches.push(Branch { target: w, added: vec![e] });
    }
    let node = g.node_mut(v);
    node.status = Status::Expanded;
    node.expansion = Some(Expansion { rule: RuleKind::Trans, principal: None, branches });
    Applied { rule: RuleKind::Trans, node: v, principal: None, targets }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{name, parse_abox, parse_formula, ABox};

    fn step_unary(g: &mut Tableau, v: NodeId, auts: &mut Automata) -> NodeId {
        let inst = applicable_static(g, v, auts);
        let i = inst.iter().find(|i| i.is_unary()).expect("unary instance").clone();
        apply_static(g, v, &i).targets[0].0
    }

    fn saturate_unary(g: &mut Tableau, mut v: NodeId, auts: &mut Automata) -> NodeId {
        while applicable_static(g, v, auts).iter().any(StaticInstance::is_unary) {
            v = step_unary(g, v, auts);
        }
        v
    }

    fn worked_example() -> ABox {
        parse_abox("'a:[s*]p; s('a,'b); 'b:<(?('a)+s)*> ~p").unwrap()
    }

    fn show(g: &Tableau, v: NodeId) -> BTreeSet<String> {
        g.node(v).label.iter().map(ToString::to_string).collect()
    }

    #[test]
    fn and_or_shapes() {
        let mut g = Tableau::new(&parse_abox("'a:(p & q); 'b:(p | q)").unwrap());
        let mut auts = Automata::default();
        let inst = applicable_static(&g, 0, &mut auts);
        assert_eq!(inst.len(), 2);
        let or = inst.iter().find(|i| i.rule == RuleKind::Or).unwrap().clone();
        let applied = apply_static(&mut g, 0, &or);
        assert_eq!(applied.targets.len(), 2);
        assert_eq!(*g.status(0), Status::Expanded);
        let w = applied.targets[0].0;
        assert!(g.node(w).reduced.contains(&or.principal));
        // The same principal is not applied twice.
        assert!(applicable_static(&g, w, &mut auts).iter().all(|i| i.rule != RuleKind::Or));
    }

    #[test]
    fn unary_saturation_reaches_the_first_branching_label() {
        let mut g = Tableau::new(&worked_example());
        let mut auts = Automata::default();
        let v = saturate_unary(&mut g, 0, &mut auts);
        let expected: BTreeSet<String> = [
            "'a:[s][Aut(s*)@0]p",
            "'a:p",
            "s('a,'b)",
            "'b:[s][Aut(s*)@0]p",
            "'b:p",
            "'b:<Aut((?('a)+s)*)@0>~p",
        ]
        .iter()
        .map(|s| s.to_string())
        .collect();
        let got = show(&g, v);
        assert_eq!(got, expected);
        let inst = applicable_static(&g, v, &mut auts);
        assert_eq!(inst.len(), 1);
        assert_eq!(inst[0].rule, RuleKind::DiamondF);
        assert_eq!(inst[0].conclusions.len(), 3);
    }

    #[test]
    fn box_trans_needs_new_assertion() {
        let g = Tableau::new(&parse_abox("'a:[s]p; s('a,'b); 'b:p").unwrap());
        let mut auts = Automata::default();
        assert!(applicable_static(&g, 0, &mut auts).is_empty());
        let mut g2 = Tableau::new(&parse_abox("'a:[s]p; s('a,'b)").unwrap());
        let inst = applicable_static(&g2, 0, &mut auts);
        assert_eq!(inst[0].rule, RuleKind::BoxTrans);
        let w = apply_static(&mut g2, 0, &inst[0]).targets[0].0;
        assert!(g2.node(w).label.contains(&Assertion::at("b", Formula::prop("p"))));
        assert!(g2.node(w).label.contains(&inst[0].principal));
        assert!(g2.node(w).reduced.is_empty());
    }

    #[test]
    fn repl_nom_substitutes_and_records() {
        let mut g = Tableau::new(&parse_abox("'b:'a; 'a:<s>'a; s('a,'b); 'c:p").unwrap());
        let mut auts = Automata::default();
        assert!(applicable_static(&g, 0, &mut auts).is_empty());
        let applied = apply_repl_nom(&mut g, 0).unwrap();
        let w = applied.targets[0].0;
        let got = show(&g, w);
        assert!(got.contains("'b:<s>'b") && got.contains("s('b,'b)"), "{got:?}");
        let repl = g.node(w).repl.clone().unwrap();
        assert_eq!(repl.get(&name("a")), Some(&name("b")));
        assert_eq!(repl.get(&name("c")), Some(&name("c")));
        assert!(apply_repl_nom(&mut g, 0).is_none());
    }

    #[test]
    fn repl_nom_chains() {
        let mut g = Tableau::new(&parse_abox("'b:'a; 'c:'b").unwrap());
        let w = apply_repl_nom(&mut g, 0).unwrap().targets[0].0;
        let w2 = apply_repl_nom(&mut g, w).unwrap().targets[0].0;
        let repl = g.node(w2).repl.clone().unwrap();
        assert_eq!(repl.get(&name("a")), Some(&name("c")));
        assert_eq!(repl.get(&name("b")), Some(&name("c")));
        assert!(g.node(w2).label.is_empty());
    }

    #[test]
    fn self_equality_does_not_replace() {
        let g = Tableau::new(&parse_abox("'a:'a").unwrap());
        assert!(repl_nom_pair(g.node(0)).is_none());
    }

    #[test]
    fn trans_groups_boxes_by_subject_and_program() {
        let mut g = Tableau::new(&parse_abox("'a:<s>p; 'a:[s]q; 'a:[t]r; 'b:[s]z").unwrap());
        let w = apply_forming_state(&mut g, 0).targets[0].0;
        assert!(g.node(w).is_complex_state());
        let applied = apply_trans(&mut g, w);
        let t = applied.targets[0].0;
        assert_eq!(show(&g, t), BTreeSet::from(["p".to_string(), "q".to_string()]));
        let e = Assertion::at("a", parse_formula("<s>p").unwrap());
        assert_eq!(g.edge_labels(w, t).unwrap(), &Label::from([e]));
    }

    #[test]
    fn trans_without_diamonds_has_no_successors() {
        let mut g = Tableau::new(&parse_abox("'a:[s]p").unwrap());
        let w = apply_forming_state(&mut g, 0).targets[0].0;
        assert!(apply_trans(&mut g, w).targets.is_empty());
        assert_eq!(*g.status(w), Status::Expanded);
    }

    #[test]
    fn nominal_rule_marks_incomplete_then_reexpands() {
        // A complex state with <s>'a at b, and a simple successor naming a.
        let mut g = Tableau::new(&parse_abox("'b:<s>('a & q)").unwrap());
        let mut auts = Automata::default();
        let s = apply_forming_state(&mut g, 0).targets[0].0;
        let t = apply_trans(&mut g, s).targets[0].0;
        let t2 = step_unary(&mut g, t, &mut auts);
        assert_eq!(nom_nominal(g.node(t2)), Some(name("a")));
        assert!(applicable_static(&g, t2, &mut auts).is_empty());
        let eff = apply_nom(&mut g, t2);
        assert_eq!(eff.incomplete.len(), 1);
        assert_eq!(eff.incomplete[0].1, Label::from([Assertion::at("a", Formula::prop("q"))]));
        assert_eq!(*g.status(s), Status::Incomplete);
        assert_eq!(*g.status(t2), Status::Blocked);
        let applied = apply_reexpand(&mut g, 0, s).unwrap();
        assert_eq!(applied.targets.len(), 2);
        assert!(!g.has_edge(0, s));
        let labels: Vec<BTreeSet<String>> = applied.targets.iter().map(|(w, _)| show(&g, *w)).collect();
        assert!(labels[0].contains("'a:q"));
        assert!(labels[1].contains("'a:~q"));
    }

    #[test]
    fn nominal_rule_detects_clash() {
        let mut g = Tableau::new(&parse_abox("'b:<s>('a & q); 'a:~q").unwrap());
        let mut auts = Automata::default();
        let s = apply_forming_state(&mut g, 0).targets[0].0;
        let t = apply_trans(&mut g, s).targets[0].0;
        let t2 = step_unary(&mut g, t, &mut auts);
        let eff = apply_nom(&mut g, t2);
        assert_eq!(eff.unsat_wrt, vec![s]);
        assert_eq!(*g.status(t2), Status::UnsatWrt(BTreeSet::from([s])));
        assert_eq!(*g.status(s), Status::Expanded);
    }

    #[test]
    fn compatible_nominal_only_blocks() {
        let mut g = Tableau::new(&parse_abox("'b:<s>('a & q); 'a:q").unwrap());
        let mut auts = Automata::default();
        let s = apply_forming_state(&mut g, 0).targets[0].0;
        let t = apply_trans(&mut g, s).targets[0].0;
        let t2 = step_unary(&mut g, t, &mut auts);
        let eff = apply_nom(&mut g, t2);
        assert!(eff.incomplete.is_empty() && eff.unsat_wrt.is_empty() && eff.blocked);
        // Second application changes nothing.
        assert!(!apply_nom(&mut g, t2).changed());
    }

    #[test]
    fn applied_display() {
        let a = Applied { rule: RuleKind::Or, node: 3, principal: None, targets: vec![(4, true), (5, false)] };
        assert_eq!(a.to_string(), "or v3 -> v4 (new), v5");
    }
}
