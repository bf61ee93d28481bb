//! End-to-end acceptance checks. Runs as a plain binary so that each
//! criterion prints exactly one PASS/FAIL line; exits non-zero if any fails.

mod common;

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use hpdl_core::corpus::{aboxes, Corpus};
use hpdl_core::engine::{build_closure, validate_labels};
use hpdl_core::kripke::SearchOutcome;
use hpdl_core::syntax::{name, negate_nnf, substitute_nominal};
use hpdl_core::tableau::Label;
use hpdl_core::*;

use common::{alphabet, show, words, Re, HAND_SAT};

const WORKED_EXAMPLE: &str = "'a:[s*]p; s('a,'b); 'b:<(?('a)+s)*> ~p";
const CORPUS_SEED: u64 = 2024;
const CORPUS_SIZE: usize = 240;

type Check = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Check + 'a>);

fn corpus() -> Vec<ABox> {
    aboxes(CORPUS_SEED, CORPUS_SIZE)
}

fn run(g: &ABox, seed: u64) -> Result<Outcome, String> {
    decide(g, &Config { seed, ..Config::default() }).map_err(|e| format!("{e} on {}", show(g)))
}

fn worked_example() -> Check {
    let g = abox_to_nnf(&parse_abox(WORKED_EXAMPLE).map_err(|e| e.to_string())?);
    let t = Instant::now();
    let out = run(&g, 0)?;
    let dt = t.elapsed();
    let n = out.tableau.len();
    if out.verdict != Verdict::Unsat {
        return Err(format!("verdict {}", out.verdict));
    }
    if dt >= Duration::from_secs(1) || n >= 200 {
        return Err(format!("{dt:?}, {n} nodes"));
    }
    Ok(format!("UNSAT, {n} nodes, {dt:?}"))
}

fn aut(src: &str) -> Arc<Nfa> {
    Arc::new(compile_program(&parse_program(src).expect("program")))
}

fn trace_landmarks() -> Check {
    let g = abox_to_nnf(&parse_abox(WORKED_EXAMPLE).map_err(|e| e.to_string())?);
    let out = decide(&g, &Config { trace: true, ..Config::default() }).map_err(|e| e.to_string())?;

    let a1 = aut("s*");
    let a2 = aut("(?('a)+s)*");
    let (q1, q2) = (a1.initial()[0], a2.initial()[0]);
    let p = Formula::prop("p");
    let np = Formula::not(Formula::prop("p"));
    let box_a1 = Formula::aut_box(a1.clone(), q1, p.clone());
    let s_box_a1 = Formula::boxed(Program::atomic("s"), box_a1.clone());
    let dia_a2 = Formula::aut_diamond(a2.clone(), q2, np.clone());
    let s_dia_a2 = Formula::diamond(Program::atomic("s"), dia_a2.clone());
    let dia_a3 = substitute_nominal(&dia_a2, &name("a"), &name("b"));

    let set = |xs: Vec<Assertion>| -> Label { xs.into_iter().collect() };
    let common = |x: Formula| {
        set(vec![
            Assertion::at("a", s_box_a1.clone()),
            Assertion::at("a", p.clone()),
            Assertion::edge("s", "a", "b"),
            Assertion::at("b", s_box_a1.clone()),
            Assertion::at("b", p.clone()),
            Assertion::at("b", x),
        ])
    };
    let unfolded = common(dia_a2.clone());
    let before_trans = common(s_dia_a2.clone());
    let fresh_successor = set(vec![Assertion::bare(dia_a2.clone()), Assertion::bare(box_a1.clone())]);
    let meets_a = set(vec![
        Assertion::bare(Formula::nominal("a")),
        Assertion::bare(dia_a2.clone()),
        Assertion::bare(s_box_a1.clone()),
        Assertion::bare(p.clone()),
    ]);
    let merged = set(vec![
        Assertion::at("b", s_box_a1.clone()),
        Assertion::at("b", p.clone()),
        Assertion::edge("s", "b", "b"),
        Assertion::at("b", dia_a3),
    ]);

    let find = |l: &Label| out.tableau.nodes().filter(|n| n.label == *l).map(|n| n.id).collect::<Vec<_>>();
    let mut missing = Vec::new();
    for (tag, l) in [("unfolded", &unfolded), ("before_trans", &before_trans), ("fresh_successor", &fresh_successor), ("meets_a", &meets_a), ("merged", &merged)] {
        if find(l).is_empty() {
            missing.push(tag);
        }
    }
    if !missing.is_empty() {
        return Err(format!("no node with the label of {}", missing.join(", ")));
    }
    // the state reached before Trans must be made Incomplete by the nominal a
    let want: Label = set(vec![Assertion::at("a", dia_a2)]);
    let states: BTreeSet<NodeId> = find(&before_trans).into_iter().filter(|&v| out.tableau.node(v).is_state()).collect();
    let hit = out.trace.iter().any(|e| match e {
        TraceEvent::Nom(eff) => eff.incomplete.iter().any(|(u, ass)| states.contains(u) && *ass == want),
        _ => false,
    });
    if !hit {
        return Err("the pre-Trans state never became Incomplete with the expected AssSN".into());
    }
    Ok("all five labels present; the pre-Trans state turns Incomplete with AssSN {a:<A2>~p}".into())
}

fn sat_direction(cases: &[ABox]) -> Check {
    let t = Instant::now();
    let (mut found, mut violations) = (0, Vec::new());
    for g in cases {
        if let SearchOutcome::Found(_) = bounded_search(g, 3) {
            found += 1;
            if run(g, 0)?.verdict != Verdict::Sat {
                violations.push(show(g));
            }
        }
    }
    let dt = t.elapsed();
    if !violations.is_empty() {
        return Err(format!("{} violations, first: {}", violations.len(), violations[0]));
    }
    if dt >= Duration::from_secs(60) {
        return Err(format!("took {dt:?}"));
    }
    Ok(format!("{} ABoxes, {found} with a small model, 0 violations, {dt:?}", cases.len()))
}

fn witnesses(cases: &[ABox]) -> Check {
    let mut inputs: Vec<ABox> = Vec::new();
    for src in HAND_SAT {
        inputs.push(abox_to_nnf(&parse_abox(src).map_err(|e| format!("{src}: {e}"))?));
    }
    let hand = inputs.len();
    inputs.extend(cases.iter().cloned());
    let mut checked = 0;
    for (i, g) in inputs.iter().enumerate() {
        let out = run(g, 0)?;
        if out.verdict != Verdict::Sat {
            if i < hand {
                return Err(format!("hand-written case judged UNSAT: {}", show(g)));
            }
            continue;
        }
        let w = witness(&out).map_err(|e| format!("{e} on {}", show(g)))?;
        let report = check_abox(&w.model, g).map_err(|e| e.to_string())?;
        if !report.holds() {
            return Err(format!("model fails {} assertions of {}", report.failing.len(), show(g)));
        }
        checked += 1;
    }
    Ok(format!("{checked} witnesses ({hand} hand-written) pass Hintikka and model checks"))
}

fn strategy_invariance(cases: &[ABox]) -> Check {
    for g in cases {
        let base = run(g, 0)?.verdict;
        for seed in 1..5 {
            let v = run(g, seed)?.verdict;
            if v != base {
                return Err(format!("seed {seed} gives {v}, seed 0 gives {base}: {}", show(g)));
            }
        }
    }
    Ok(format!("{} ABoxes, seeds 0..5 agree", cases.len()))
}

fn automata() -> Check {
    let mut c = Corpus::new(CORPUS_SEED);
    let mut checked = 0usize;
    for _ in 0..500 {
        let prog = c.program(2);
        let nfa = compile_program(&prog);
        let re = Re::from_program(&prog);
        let mut sigma = BTreeSet::new();
        alphabet(&prog, &mut sigma);
        let sigma: Vec<Symbol> = sigma.into_iter().collect();
        for w in words(&sigma, 4) {
            let got = nfa.initial().iter().any(|&q| nfa.accepts(q, &w));
            if got != re.matches(&w) {
                return Err(format!("{prog} on {w:?}: automaton {got}"));
            }
            checked += 1;
        }
    }
    Ok(format!("500 programs, {checked} words, 0 mismatches"))
}

fn closure_invariants(cases: &[ABox]) -> Check {
    for g in cases {
        let cl = build_closure(g);
        if !cl.within_bound() {
            return Err(format!("closure of size {} exceeds {}: {}", cl.cls_z.len(), cl.bound(), show(g)));
        }
        let out = run(g, 0)?;
        validate_labels(&out.tableau, &cl).map_err(|e| format!("{e} on {}", show(g)))?;
    }
    Ok(format!("{} runs, labels within the closure, closure within 64n^4", cases.len()))
}

fn nnf_preservation() -> Check {
    let mut c = Corpus::new(CORPUS_SEED);
    for i in 0..200 {
        let f = c.formula(3);
        let m = c.model(3);
        let lhs = eval_formula(&m, &f).map_err(|e| e.to_string())?;
        let rhs = eval_formula(&m, &to_nnf(&f)).map_err(|e| e.to_string())?;
        if lhs != rhs {
            return Err(format!("pair {i}: {f} vs {}", to_nnf(&f)));
        }
    }
    for _ in 0..1000 {
        let f = to_nnf(&c.formula(3));
        if negate_nnf(&negate_nnf(&f)) != f {
            return Err(format!("double negation changes {f}"));
        }
    }
    Ok("200 formula/model pairs agree, 1000 double negations are identities".into())
}

fn main() -> ExitCode {
    let cases = corpus();
    let checks: Vec<Criterion> = vec![
        ("worked example is UNSAT", Box::new(worked_example)),
        ("trace landmarks", Box::new(trace_landmarks)),
        ("small models imply SAT", Box::new(|| sat_direction(&cases))),
        ("witness soundness", Box::new(|| witnesses(&cases))),
        ("strategy invariance", Box::new(|| strategy_invariance(&cases))),
        ("automata match derivatives", Box::new(automata)),
        ("closure invariants", Box::new(|| closure_invariants(&cases))),
        ("NNF preservation", Box::new(nnf_preservation)),
    ];
    let mut failed = 0;
    for (i, (title, check)) in checks.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS {}. {title}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {}. {title}: {why}", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
