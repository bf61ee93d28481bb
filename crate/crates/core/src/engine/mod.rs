//! The decision procedure: expansion with a priority worklist, interleaved
//! with status phases, until the root is `Unsat` or nothing changes.

mod closure;

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap, HashMap, HashSet};
use std::fmt;
use std::time::Instant;

use serde::Serialize;
use thiserror::Error;

pub use closure::{build_closure, validate_labels, Closure, LabelViolation};

use crate::rules::{
    applicable_static, apply_forming_state, apply_nom, apply_nom_where, apply_reexpand,
    apply_repl_nom, apply_static, apply_trans, nom_nominal, repl_nom_pair, Applied, Automata,
    NomEffect,
};
use crate::status::{apply_clash, status_phase, StatusChange};
use crate::syntax::{ABox, Assertion};
use crate::tableau::{Node, NodeId, RuleKind, Status, Tableau};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Config {
    pub max_nodes: usize,
    /// 0 keeps the canonical order; other values permute tie-breaking.
    pub seed: u64,
    pub trace: bool,
    /// Expand only nodes reachable from the root without crossing `Unsat`.
    pub reachability_pruning: bool,
}

impl Default for Config {
    fn default() -> Self {
        Config { max_nodes: 500_000, seed: 0, trace: false, reachability_pruning: false }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Sat,
    Unsat,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Sat => "SAT",
            Verdict::Unsat => "UNSAT",
        })
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct RunStats {
    pub nodes: usize,
    pub edges_created: u64,
    pub edges_deleted: u64,
    pub rule_applications: BTreeMap<String, u64>,
    pub status_phases: u64,
    pub status_changes: u64,
    pub wall_time_ms: f64,
}

impl RunStats {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("stats serialize")
    }
}

#[derive(Clone, Debug)]
pub enum TraceEvent {
    Rule(Applied),
    Nom(NomEffect),
    Status(StatusChange),
}

impl fmt::Display for TraceEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TraceEvent::Rule(a) => a.fmt(f),
            TraceEvent::Nom(n) => n.fmt(f),
            TraceEvent::Status(s) => s.fmt(f),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EngineError {
    #[error("node budget of {0} exceeded")]
    NodeBudget(usize),
    #[error("assertion without a subject: {0}")]
    MissingSubject(String),
}

#[derive(Debug)]
pub struct Outcome {
    pub verdict: Verdict,
    pub tableau: Tableau,
    pub stats: RunStats,
    pub trace: Vec<TraceEvent>,
}

/// Decides satisfiability of an ABox in NNF.
pub fn decide(gamma: &ABox, cfg: &Config) -> Result<Outcome, EngineError> {
    if let Some(x) = gamma.iter().find(|x| matches!(x, Assertion::Holds { subject: None, .. })) {
        return Err(EngineError::MissingSubject(x.to_string()));
    }
    let start = Instant::now();
    let mut e = Engine::new(gamma, cfg);
    e.run()?;
    let verdict = if e.g.status(e.g.root()).is_unsat() { Verdict::Unsat } else { Verdict::Sat };
    e.stats.nodes = e.g.len();
    e.stats.edges_created = e.g.edges_created();
    e.stats.edges_deleted = e.g.edges_deleted();
    e.stats.wall_time_ms = start.elapsed().as_secs_f64() * 1000.0;
    Ok(Outcome { verdict, tableau: e.g, stats: e.stats, trace: e.trace })
}

/// Rule classes in priority order.
const CLASS_REPL_NOM: u8 = 0;
const CLASS_UNARY: u8 = 1;
const CLASS_BRANCHING: u8 = 2;
const CLASS_NOM: u8 = 3;
const CLASS_FORMING_STATE: u8 = 4;
const CLASS_TRANS: u8 = 5;

/// Applications between status phases when pruning by reachability.
const PRUNE_INTERVAL: usize = 64;

struct Engine<'a> {
    g: Tableau,
    auts: Automata,
    cfg: &'a Config,
    heap: BinaryHeap<Reverse<(u8, u64, u64, NodeId)>>,
    seq: u64,
    deferred: Vec<NodeId>,
    stats: RunStats,
    trace: Vec<TraceEvent>,
}

/// SplitMix64 finaliser, used to spread seeds over node ids.
fn mix(seed: u64, v: u64) -> u64 {
    let mut z = seed ^ v.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

impl<'a> Engine<'a> {
    fn new(gamma: &ABox, cfg: &'a Config) -> Self {
        let mut e = Engine {
            g: Tableau::new(gamma),
            auts: Automata::default(),
            cfg,
            heap: BinaryHeap::new(),
            seq: 0,
            deferred: Vec::new(),
            stats: RunStats::default(),
            trace: Vec::new(),
        };
        let root = e.g.root();
        e.created(root);
        e
    }

    fn record(&mut self, ev: TraceEvent) {
        if self.cfg.trace {
            self.trace.push(ev);
        }
    }

    fn count(&mut self, rule: RuleKind) {
        *self.stats.rule_applications.entry(rule.name().to_string()).or_default() += 1;
    }

    /// Clash check for a fresh node, then schedule it.
    fn created(&mut self, v: NodeId) {
        if let Some(c) = apply_clash(&mut self.g, v) {
            self.stats.status_changes += 1;
            self.record(TraceEvent::Status(c));
            return;
        }
        self.push(v);
    }

    fn class(&mut self, v: NodeId) -> u8 {
        let n = self.g.node(v);
        if n.is_state() {
            return CLASS_TRANS;
        }
        if repl_nom_pair(n).is_some() {
            return CLASS_REPL_NOM;
        }
        if nom_nominal(n).is_some() {
            return CLASS_NOM;
        }
        let inst = applicable_static(&self.g, v, &mut self.auts);
        if inst.iter().any(|i| i.is_unary()) {
            CLASS_UNARY
        } else if !inst.is_empty() {
            CLASS_BRANCHING
        } else {
            CLASS_FORMING_STATE
        }
    }

    fn push(&mut self, v: NodeId) {
        let class = self.class(v);
        let tie = if self.cfg.seed == 0 { 0 } else { mix(self.cfg.seed, v as u64) };
        self.seq += 1;
        self.heap.push(Reverse((class, tie, self.seq, v)));
    }

    fn check_budget(&self) -> Result<(), EngineError> {
        if self.g.len() > self.cfg.max_nodes {
            Err(EngineError::NodeBudget(self.cfg.max_nodes))
        } else {
            Ok(())
        }
    }

    fn applied(&mut self, a: Applied) -> Result<(), EngineError> {
        self.count(a.rule);
        for &(w, new) in &a.targets {
            if new {
                self.created(w);
            }
        }
        self.record(TraceEvent::Rule(a));
        self.check_budget()
    }

    fn reachable_from_root(&self) -> HashSet<NodeId> {
        self.g.reach(self.g.root(), |n| !n.status.is_unsat()).into_iter().collect()
    }

    /// Applies the rule of one scheduled node. Returns whether it did anything.
    fn step(&mut self, v: NodeId, reach: Option<&HashSet<NodeId>>) -> Result<bool, EngineError> {
        let n = self.g.node(v);
        if n.status != Status::Unexpanded {
            return Ok(false);
        }
        if reach.is_some_and(|r| !r.contains(&v)) {
            self.deferred.push(v);
            return Ok(false);
        }
        if n.is_state() {
            let a = apply_trans(&mut self.g, v);
            self.applied(a)?;
            return Ok(true);
        }
        if repl_nom_pair(n).is_some() {
            let a = apply_repl_nom(&mut self.g, v).expect("applicable");
            self.applied(a)?;
            return Ok(true);
        }
        if nom_nominal(n).is_some() {
            let eff = apply_nom(&mut self.g, v);
            self.nom_done(eff);
            return Ok(true);
        }
        let inst = applicable_static(&self.g, v, &mut self.auts);
        let pool: Vec<_> = if inst.iter().any(|i| i.is_unary()) {
            inst.into_iter().filter(|i| i.is_unary()).collect()
        } else {
            inst
        };
        let a = if pool.is_empty() {
            apply_forming_state(&mut self.g, v)
        } else {
            let k = if self.cfg.seed == 0 {
                0
            } else {
                (mix(self.cfg.seed ^ 0x5bd1_e995, v as u64) % pool.len() as u64) as usize
            };
            apply_static(&mut self.g, v, &pool[k])
        };
        self.applied(a)?;
        Ok(true)
    }

    fn nom_done(&mut self, eff: NomEffect) {
        if eff.changed() {
            self.count(RuleKind::Nom);
            self.record(TraceEvent::Nom(eff));
        }
    }

    /// Re-checks the nominal rule on every simple node naming a nominal.
    /// Paths through each anchor are computed once per sweep.
    fn nom_sweep(&mut self) -> bool {
        let root = self.g.root();
        let targets: Vec<NodeId> = self
            .g
            .nodes()
            .filter(|n| !n.status.is_unsat() && n.status != Status::Unexpanded)
            .filter(|n| nom_nominal(n).is_some())
            .map(|n| n.id)
            .collect();
        if targets.is_empty() {
            return false;
        }
        let mut through: HashMap<NodeId, Option<HashSet<NodeId>>> = HashMap::new();
        for n in self.g.nodes().filter(|n| n.is_complex_state()) {
            let u = n.id;
            let ok = move |m: &Node| !m.status.is_closed_for(u);
            let reach = if self.g.reach(root, ok).contains(&u) {
                Some(self.g.reach(u, ok).into_iter().collect())
            } else {
                None
            };
            through.insert(u, reach);
        }
        let mut changed = false;
        for v in targets {
            let eff = apply_nom_where(&mut self.g, v, |_, u| {
                through.get(&u).and_then(Option::as_ref).is_some_and(|r| r.contains(&v))
            });
            changed |= eff.changed();
            self.nom_done(eff);
        }
        changed
    }

    fn reexpand_sweep(&mut self) -> Result<bool, EngineError> {
        let edges: Vec<(NodeId, NodeId)> =
            self.g.edges().filter(|(_, w)| *self.g.status(*w) == Status::Incomplete).collect();
        let mut changed = false;
        for (v, w) in edges {
            if let Some(a) = apply_reexpand(&mut self.g, v, w) {
                changed = true;
                self.applied(a)?;
            }
        }
        Ok(changed)
    }

    /// Runs the worklist dry, then the sweeps, until no expansion rule
    /// applies. With pruning, stops early after a fixed number of steps so a
    /// status phase can cut off closed parts of the graph.
    fn expand(&mut self) -> Result<bool, EngineError> {
        let mut any = false;
        let mut steps = 0;
        let mut reach = self.cfg.reachability_pruning.then(|| self.reachable_from_root());
        loop {
            while let Some(Reverse((_, _, _, v))) = self.heap.pop() {
                if self.step(v, reach.as_ref())? {
                    any = true;
                    steps += 1;
                    if let Some(r) = &mut reach {
                        if steps % PRUNE_INTERVAL == 0 {
                            return Ok(true);
                        }
                        // New nodes hang off v, which was reachable.
                        r.extend(self.g.descendants(v));
                    }
                }
            }
            if self.cfg.reachability_pruning {
                let r = self.reachable_from_root();
                let back: Vec<NodeId> = self.deferred.iter().copied().filter(|v| r.contains(v)).collect();
                self.deferred.retain(|v| !r.contains(v));
                reach = Some(r);
                if !back.is_empty() {
                    for v in back {
                        self.push(v);
                    }
                    continue;
                }
            }
            let nom = self.nom_sweep();
            let re = self.reexpand_sweep()?;
            any |= nom || re;
            if self.heap.is_empty() && !re {
                return Ok(any);
            }
        }
    }

    fn run(&mut self) -> Result<(), EngineError> {
        loop {
            let expanded = self.expand()?;
            let changes = status_phase(&mut self.g);
            self.stats.status_phases += 1;
            self.stats.status_changes += changes.len() as u64;
            let changed = !changes.is_empty();
            for c in changes {
                self.record(TraceEvent::Status(c));
            }
            if self.g.status(self.g.root()).is_unsat() {
                return Ok(());
            }
            if !expanded && !changed && self.heap.is_empty() {
                return Ok(());
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{abox_to_nnf, parse_abox};

    fn run(src: &str) -> Outcome {
        decide(&abox_to_nnf(&parse_abox(src).unwrap()), &Config::default()).unwrap()
    }

    #[test]
    fn trivial_cases() {
        assert_eq!(run("'a:p").verdict, Verdict::Sat);
        assert_eq!(run("'a:p; 'a:~p").verdict, Verdict::Unsat);
        assert_eq!(run("").verdict, Verdict::Sat);
    }

    #[test]
    fn worked_example_is_unsat() {
        let o = run("'a:[s*]p; s('a,'b); 'b:<(?('a)+s)*> ~p");
        assert_eq!(o.verdict, Verdict::Unsat);
        assert!(o.stats.nodes < 200, "{}", o.stats.nodes);
    }

    #[test]
    fn nominal_equality() {
        assert_eq!(run("'a:'b; 'a:p; 'b:~p").verdict, Verdict::Unsat);
        assert_eq!(run("'a:'b; 'a:p; 'b:q").verdict, Verdict::Sat);
        assert_eq!(run("'a:<s>'b; 'b:p; 'a:[s]~p").verdict, Verdict::Unsat);
    }

    #[test]
    fn eventualities() {
        assert_eq!(run("'a:<s*>p; 'a:[s*](~p & r)").verdict, Verdict::Unsat);
        assert_eq!(run("'a:<s*>p; 'a:~p").verdict, Verdict::Sat);
        assert_eq!(run("s('a,'b); 'b:<s*>q").verdict, Verdict::Sat);
    }

    #[test]
    fn budget_is_reported() {
        let g = parse_abox("'a:<s*>p; 'a:[s*](q | r)").unwrap();
        let cfg = Config { max_nodes: 3, ..Config::default() };
        assert_eq!(decide(&g, &cfg).unwrap_err(), EngineError::NodeBudget(3));
    }

    #[test]
    fn bare_assertions_are_rejected() {
        let mut g = ABox::new();
        g.insert(Assertion::bare(crate::syntax::Formula::prop("p")));
        assert!(matches!(decide(&g, &Config::default()), Err(EngineError::MissingSubject(_))));
    }

    #[test]
    fn seeds_and_pruning_agree() {
        for src in [
            "'a:[s*]p; s('a,'b); 'b:<(?('a)+s)*> ~p",
            "'a:<s*>p; 'a:~p",
            "'a:(p | q); 'a:~p; 'a:<s>'a",
        ] {
            let g = parse_abox(src).unwrap();
            let base = decide(&g, &Config::default()).unwrap().verdict;
            for seed in 1..5 {
                let cfg = Config { seed, ..Config::default() };
                assert_eq!(decide(&g, &cfg).unwrap().verdict, base, "{src} seed {seed}");
            }
            let cfg = Config { reachability_pruning: true, ..Config::default() };
            assert_eq!(decide(&g, &cfg).unwrap().verdict, base, "{src} pruned");
        }
    }

    #[test]
    fn trace_and_stats() {
        let g = parse_abox("'a:(p | q)").unwrap();
        let o = decide(&g, &Config { trace: true, ..Config::default() }).unwrap();
        assert!(o.trace.iter().any(|e| e.to_string().starts_with("or v0")));
        assert_eq!(o.stats.rule_applications["or"], 1);
        assert!(o.stats.to_json().contains("\"nodes\""));
    }

    #[test]
    fn labels_stay_in_closure() {
        let g = parse_abox("'a:[s*]p; s('a,'b); 'b:<(?('a)+s)*> ~p").unwrap();
        let o = decide(&g, &Config::default()).unwrap();
        validate_labels(&o.tableau, &build_closure(&g)).unwrap();
    }
}
