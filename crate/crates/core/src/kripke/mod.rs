//! Finite Kripke models: evaluation, ABox checking, JSON exchange and a
//! bounded model search used as an independent oracle.

mod eval;
mod search;

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::syntax::{name, Name};

pub use eval::{check_abox, eval_aut_program, eval_formula, eval_program, CheckReport, Relation};
pub use search::{bounded_search, SearchOutcome, SEARCH_BUDGET};

pub type WorldId = usize;
pub type WorldSet = BTreeSet<WorldId>;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("proposition `{0}` is not interpreted")]
    UninterpretedProp(Name),
    #[error("atomic program `{0}` is not interpreted")]
    UninterpretedProgram(Name),
    #[error("nominal `'{0}` is not interpreted")]
    UninterpretedNominal(Name),
    #[error("model references unknown world `{0}`")]
    UnknownWorld(String),
}

/// `(Δ, ·^M)` with named worlds. Every proposition and program that should
/// count as interpreted must be declared, even with an empty extension.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct KripkeModel {
    worlds: Vec<String>,
    props: BTreeMap<Name, WorldSet>,
    programs: BTreeMap<Name, BTreeSet<(WorldId, WorldId)>>,
    nominals: BTreeMap<Name, WorldId>,
}

#[derive(Serialize, Deserialize)]
struct ModelJson {
    worlds: Vec<String>,
    props: BTreeMap<String, Vec<String>>,
    programs: BTreeMap<String, Vec<(String, String)>>,
    nominals: BTreeMap<String, String>,
}

impl KripkeModel {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_worlds<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Self {
        let mut m = Self::new();
        for n in names {
            m.add_world(n);
        }
        m
    }

    pub fn add_world(&mut self, n: impl Into<String>) -> WorldId {
        self.worlds.push(n.into());
        self.worlds.len() - 1
    }

    pub fn world_count(&self) -> usize {
        self.worlds.len()
    }

    pub fn world_name(&self, w: WorldId) -> &str {
        &self.worlds[w]
    }

    pub fn world_by_name(&self, n: &str) -> Option<WorldId> {
        self.worlds.iter().position(|w| w == n)
    }

    pub fn declare_prop(&mut self, p: &str) {
        self.props.entry(name(p)).or_default();
    }

    pub fn declare_program(&mut self, s: &str) {
        self.programs.entry(name(s)).or_default();
    }

    pub fn set_prop(&mut self, p: &str, w: WorldId) {
        self.props.entry(name(p)).or_default().insert(w);
    }

    pub fn add_edge(&mut self, s: &str, from: WorldId, to: WorldId) {
        self.programs.entry(name(s)).or_default().insert((from, to));
    }

    pub fn set_nominal(&mut self, a: &str, w: WorldId) {
        self.nominals.insert(name(a), w);
    }

    pub fn prop(&self, p: &Name) -> Option<&WorldSet> {
        self.props.get(p)
    }

    pub fn program(&self, s: &Name) -> Option<&BTreeSet<(WorldId, WorldId)>> {
        self.programs.get(s)
    }

    pub fn nominal(&self, a: &Name) -> Option<WorldId> {
        self.nominals.get(a).copied()
    }

    pub fn props(&self) -> impl Iterator<Item = (&Name, &WorldSet)> {
        self.props.iter()
    }

    pub fn programs(&self) -> impl Iterator<Item = (&Name, &BTreeSet<(WorldId, WorldId)>)> {
        self.programs.iter()
    }

    pub fn nominals(&self) -> impl Iterator<Item = (&Name, WorldId)> {
        self.nominals.iter().map(|(a, w)| (a, *w))
    }

    pub fn to_json(&self) -> String {
        let w = |i: &WorldId| self.worlds[*i].clone();
        let doc = ModelJson {
            worlds: self.worlds.clone(),
            props: self.props.iter().map(|(p, s)| (p.to_string(), s.iter().map(w).collect())).collect(),
            programs: self
                .programs
                .iter()
                .map(|(p, r)| (p.to_string(), r.iter().map(|(x, y)| (w(x), w(y))).collect()))
                .collect(),
            nominals: self.nominals.iter().map(|(a, i)| (a.to_string(), w(i))).collect(),
        };
        serde_json::to_string_pretty(&doc).expect("model serialisation cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self, ModelJsonError> {
        let doc: ModelJson = serde_json::from_str(text)?;
        let mut m = KripkeModel::with_worlds(doc.worlds);
        let find = |m: &KripkeModel, n: &str| {
            m.world_by_name(n).ok_or_else(|| EvalError::UnknownWorld(n.to_string()))
        };
        for (p, ws) in doc.props {
            m.declare_prop(&p);
            for x in ws {
                let i = find(&m, &x)?;
                m.set_prop(&p, i);
            }
        }
        for (s, es) in doc.programs {
            m.declare_program(&s);
            for (x, y) in es {
                let (i, j) = (find(&m, &x)?, find(&m, &y)?);
                m.add_edge(&s, i, j);
            }
        }
        for (a, x) in doc.nominals {
            let i = find(&m, &x)?;
            m.set_nominal(&a, i);
        }
        Ok(m)
    }
}

#[derive(Debug, Error)]
pub enum ModelJsonError {
    #[error("malformed model JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Eval(#[from] EvalError),
}
