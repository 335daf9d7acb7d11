//! First-order terms, SMT-LIB2 I/O, and satisfiability checking for the
//! bageq query-equivalence verifier.
//!
//! The crate provides two interchangeable backends behind [`SolverSession`]:
//! a built-in engine (CDCL SAT core with a simplex-based theory solver for
//! linear integer/real arithmetic plus Ackermannized uninterpreted
//! functions), and a driver for any external SMT-LIB2 solver process. The
//! same engine also ships as the `bageq-smt` binary, which speaks SMT-LIB2 on
//! stdin/stdout.

pub mod engine;
pub mod process;
pub mod script;
pub mod sexpr;
pub mod simplex;
pub mod smtlib;
pub mod solver;
pub mod term;

pub use engine::{Model, Value};
pub use solver::{SolverBackend, SolverConfig, SolverError, SolverSession, SolverVerdict};
pub use term::{CmpOp, Rational, Sort, Term, TermKind, VarGen, VarId};
