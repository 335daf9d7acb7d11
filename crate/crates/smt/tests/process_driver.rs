//! Drives the bundled `bageq-smt` binary over the SMT-LIB2 pipe protocol,
//! exercising the same path any external solver would take.

use std::time::Duration;

use bageq_smt::solver::{SolverBackend, SolverConfig, SolverSession, SolverVerdict};
use bageq_smt::term::{CmpOp, Sort, Term, VarId};
use bageq_smt::{Model, Value};

fn process_session() -> SolverSession {
    let bin = env!("CARGO_BIN_EXE_bageq-smt");
    SolverSession::new(
        SolverConfig {
            backend: SolverBackend::Process(vec![bin.to_string()]),
            default_budget: Duration::from_secs(20),
            dump_dir: None,
        },
        "proc",
    )
}

#[test]
fn subprocess_answers_sat_and_unsat() {
    let mut session = process_session();
    let x = Term::var(VarId(0), Sort::Int);

    let sat = Term::and([
        Term::cmp(CmpOp::Gt, Term::add([x.clone(), Term::int(5)]), Term::int(10)),
        Term::cmp(CmpOp::Gt, x.clone(), Term::int(3)),
    ]);
    match session.check(&sat, None).unwrap() {
        SolverVerdict::Sat(model) => match model.get(VarId(0)) {
            Some(Value::Int(v)) => assert!(*v >= 6),
            other => panic!("unexpected model entry {other:?}"),
        },
        other => panic!("expected sat, got {other:?}"),
    }

    // second check reuses the same child process after (reset)
    let unsat = Term::and([
        Term::cmp(CmpOp::Gt, Term::add([x.clone(), Term::int(5)]), Term::int(10)),
        Term::cmp(CmpOp::Lt, x, Term::int(4)),
    ]);
    assert!(matches!(
        session.check(&unsat, None).unwrap(),
        SolverVerdict::Unsat
    ));
}

#[test]
fn subprocess_handles_uf_and_reals() {
    let mut session = process_session();
    let x = Term::var(VarId(0), Sort::Real);
    let fx = Term::app("f", Sort::Int, vec![x.clone()]);
    let fy = Term::app("f", Sort::Int, vec![x.clone()]);
    let f = Term::and([
        Term::cmp(CmpOp::Gt, x, Term::real(bageq_smt::Rational::new(1, 2))),
        Term::not(Term::eq(fx, fy)),
    ]);
    assert!(matches!(
        session.check(&f, None).unwrap(),
        SolverVerdict::Unsat
    ));
}

#[test]
fn subprocess_and_builtin_agree() {
    let mut proc = process_session();
    let mut builtin = SolverSession::new(SolverConfig::default(), "b");
    let x = Term::var(VarId(0), Sort::Int);
    let y = Term::var(VarId(1), Sort::Int);
    let cases = [
        Term::eq(x.clone(), y.clone()),
        Term::and([
            Term::eq(x.clone(), y.clone()),
            Term::not(Term::eq(y.clone(), x.clone())),
        ]),
        Term::or([
            Term::cmp(CmpOp::Lt, x.clone(), y.clone()),
            Term::cmp(CmpOp::Ge, x.clone(), y.clone()),
        ]),
        Term::fls(),
    ];
    for f in cases {
        let a = kind(proc.check(&f, None).unwrap());
        let b = kind(builtin.check(&f, None).unwrap());
        assert_eq!(a, b, "backends disagree on {f}");
    }
}

fn kind(v: SolverVerdict) -> &'static str {
    match v {
        SolverVerdict::Sat(_) => "sat",
        SolverVerdict::Unsat => "unsat",
        SolverVerdict::Unknown(_) => "unknown",
    }
}

#[test]
fn crash_is_distinguished_from_unknown() {
    let mut session = SolverSession::new(
        SolverConfig {
            backend: SolverBackend::Process(vec!["/nonexistent/solver".to_string()]),
            ..SolverConfig::default()
        },
        "crash",
    );
    let err = session.check(&Term::fls(), None);
    assert!(err.is_err(), "spawning a missing binary must be a crash");
    let _ = Model::default();
}
