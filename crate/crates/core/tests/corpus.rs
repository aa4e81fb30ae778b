//! Every recorded transcript in the corpus is reproduced by the semantics
//! it names, or by all four when it names none.

mod common;

use common::corpus;
use whileio_core::interact::{interact_program, Limits, Semantics};
use whileio_core::CheckBudget;

#[test]
fn corpus_is_well_formed() {
    let progs = corpus();
    assert!(progs.len() >= 20, "only {} programs", progs.len());
    for p in &progs {
        assert!(p.transcript.is_some(), "{} has no transcript", p.name);
        assert_eq!(p.has("io-free"), p.stmt.is_io_free(), "{}: io-free tag", p.name);
    }
}

#[test]
fn transcripts_replay() {
    let budget = CheckBudget::default();
    let mut checked = 0;
    for p in corpus() {
        let t = p.transcript.as_ref().unwrap();
        let sems: Vec<Semantics> = match &t.directives.semantics {
            Some(name) => vec![name.parse().unwrap()],
            None => Semantics::ALL.to_vec(),
        };
        let init = t.directives.init.clone().unwrap_or_else(|| p.init.clone());
        let limits = Limits {
            max_steps: t.directives.max_steps,
            fuel: budget.fuel(),
        };
        for sem in sems {
            let mut out = Vec::new();
            let session =
                interact_program(sem, &p.stmt, &init, &budget, t.stdin().as_bytes(), &mut out, limits).unwrap();
            assert!(t.matches(&session), "{} under {sem}: got {session:?}", p.name);
            assert_eq!(String::from_utf8(out).unwrap(), t.stdout(), "{} under {sem}", p.name);
            checked += 1;
        }
    }
    assert!(checked > 40);
}
