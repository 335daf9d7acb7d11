//! Cross-checks the built-in engine against exhaustive enumeration of small
//! assignments: the engine must never answer `unsat` for a formula that a
//! brute-force search over a tiny domain can satisfy, and every `sat` model
//! must actually satisfy the formula.

use std::time::{Duration, Instant};

use bageq_smt::engine::{check, CheckOutcome, EngineConfig, Model, Value};
use bageq_smt::term::{CmpOp, Sort, Term, VarId};
use proptest::prelude::*;

const NUM_INT_VARS: u32 = 3;
const NUM_BOOL_VARS: u32 = 2;
const DOMAIN: [i64; 3] = [0, 1, 2];

fn int_var(i: u32) -> Term {
    Term::var(VarId(i), Sort::Int)
}

fn bool_var(i: u32) -> Term {
    Term::var(VarId(NUM_INT_VARS + i), Sort::Bool)
}

fn arb_int_expr() -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![
        (0..NUM_INT_VARS).prop_map(int_var),
        (-3i64..=3).prop_map(Term::int),
    ];
    leaf.prop_recursive(2, 8, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Term::add([a, b])),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Term::sub(a, b)),
            inner.clone().prop_map(Term::neg),
            (inner.clone(), -2i64..=2).prop_map(|(a, k)| Term::mul(Term::int(k), a)),
        ]
    })
}

fn arb_formula() -> impl Strategy<Value = Term> {
    let atom = prop_oneof![
        (
            arb_int_expr(),
            arb_int_expr(),
            prop_oneof![
                Just(CmpOp::Lt),
                Just(CmpOp::Le),
                Just(CmpOp::Gt),
                Just(CmpOp::Ge)
            ]
        )
            .prop_map(|(a, b, op)| Term::cmp(op, a, b)),
        (arb_int_expr(), arb_int_expr()).prop_map(|(a, b)| Term::eq(a, b)),
        (0..NUM_BOOL_VARS).prop_map(bool_var),
    ];
    atom.prop_recursive(3, 24, 3, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Term::and([a, b])),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Term::or([a, b])),
            inner.clone().prop_map(Term::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Term::iff(a, b)),
            (inner.clone(), inner.clone(), inner.clone())
                .prop_map(|(c, a, b)| Term::ite(c, a, b)),
        ]
    })
}

fn brute_force_sat(f: &Term) -> Option<Model> {
    let n_assignments = DOMAIN.len().pow(NUM_INT_VARS) * (1 << NUM_BOOL_VARS);
    for idx in 0..n_assignments {
        let mut model = Model::default();
        let mut rest = idx;
        for v in 0..NUM_INT_VARS {
            model.insert(VarId(v), Value::Int(DOMAIN[rest % DOMAIN.len()]));
            rest /= DOMAIN.len();
        }
        for b in 0..NUM_BOOL_VARS {
            model.insert(VarId(NUM_INT_VARS + b), Value::Bool(rest % 2 == 1));
            rest /= 2;
        }
        if model.eval(f) == Some(Value::Bool(true)) {
            return Some(model);
        }
    }
    None
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn never_unsat_when_enumerably_satisfiable(f in arb_formula()) {
        let witness = brute_force_sat(&f);
        let outcome = check(
            &f,
            Instant::now() + Duration::from_secs(20),
            &EngineConfig::default(),
        );
        match outcome {
            CheckOutcome::Unsat => {
                prop_assert!(
                    witness.is_none(),
                    "engine claims unsat but {witness:?} satisfies the formula"
                );
            }
            CheckOutcome::Sat(model) => {
                prop_assert_eq!(
                    model.eval(&f),
                    Some(Value::Bool(true)),
                    "returned model does not satisfy the formula"
                );
            }
            CheckOutcome::Unknown(_) => {}
        }
    }
}
