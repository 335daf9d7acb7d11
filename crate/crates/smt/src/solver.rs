//! Solver sessions: one per verification task. A session either runs the
//! built-in engine in-process or speaks SMT-LIB2 to an external process, and
//! can mirror every emitted script to a dump directory for audit.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use crate::engine::{self, CheckOutcome, EngineConfig, Model, Value};
use crate::process::{ProcessError, SolverProcess};
use crate::script;
use crate::sexpr;
use crate::term::{Sort, Term, VarId};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolverBackend {
    /// In-process engine.
    Builtin,
    /// External SMT-LIB2 process, e.g. `["z3", "-in"]`.
    Process(Vec<String>),
}

#[derive(Clone, Debug)]
pub struct SolverConfig {
    pub backend: SolverBackend,
    /// Per-call budget when the caller does not pass one.
    pub default_budget: Duration,
    /// Directory receiving every emitted script verbatim.
    pub dump_dir: Option<PathBuf>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            backend: SolverBackend::Builtin,
            default_budget: Duration::from_millis(10_000),
            dump_dir: None,
        }
    }
}

/// Answer of a satisfiability check. `Unsat` is the trusted outcome: callers
/// treat it as a proof of validity of the negated goal.
#[derive(Debug)]
pub enum SolverVerdict {
    Sat(Model),
    Unsat,
    Unknown(String),
}

#[derive(Debug, thiserror::Error)]
pub enum SolverError {
    #[error("solver crashed: {0}")]
    Crash(String),
}

#[derive(Debug, Default, Clone)]
pub struct SessionStats {
    pub checks: u64,
}

pub struct SolverSession {
    config: SolverConfig,
    label: String,
    process: Option<SolverProcess>,
    engine_config: EngineConfig,
    pub stats: SessionStats,
}

impl SolverSession {
    pub fn new(config: SolverConfig, label: impl Into<String>) -> Self {
        SolverSession {
            config,
            label: label.into(),
            process: None,
            engine_config: EngineConfig::default(),
            stats: SessionStats::default(),
        }
    }

    pub fn config(&self) -> &SolverConfig {
        &self.config
    }

    fn dump(&self, seq: u64, script_text: &str) {
        if let Some(dir) = &self.config.dump_dir {
            let _ = std::fs::create_dir_all(dir);
            let path = dir.join(format!("{}-{seq:04}.smt2", self.label));
            let _ = std::fs::write(path, script_text);
        }
    }

    /// Checks satisfiability of `formula` within `budget`.
    pub fn check(
        &mut self,
        formula: &Term,
        budget: Option<Duration>,
    ) -> Result<SolverVerdict, SolverError> {
        let budget = budget.unwrap_or(self.config.default_budget);
        let seq = self.stats.checks;
        self.stats.checks += 1;
        let script_text = script::check_script(formula, false);
        self.dump(seq, &script_text);

        match &self.config.backend {
            SolverBackend::Builtin => {
                let deadline = Instant::now() + budget;
                match engine::check(formula, deadline, &self.engine_config) {
                    CheckOutcome::Sat(m) => Ok(SolverVerdict::Sat(m)),
                    CheckOutcome::Unsat => Ok(SolverVerdict::Unsat),
                    CheckOutcome::Unknown(r) => Ok(SolverVerdict::Unknown(r)),
                }
            }
            SolverBackend::Process(argv) => {
                let argv = argv.clone();
                self.check_via_process(&argv, formula, &script_text, budget)
            }
        }
    }

    fn ensure_process(&mut self, argv: &[String]) -> Result<(), SolverError> {
        let needs_spawn = match &self.process {
            Some(p) => p.is_poisoned() || p.argv() != argv,
            None => true,
        };
        if needs_spawn {
            self.process = Some(
                SolverProcess::spawn(argv).map_err(|e| SolverError::Crash(e.to_string()))?,
            );
        }
        Ok(())
    }

    fn check_via_process(
        &mut self,
        argv: &[String],
        formula: &Term,
        script_text: &str,
        budget: Duration,
    ) -> Result<SolverVerdict, SolverError> {
        self.ensure_process(argv)?;
        let deadline = Instant::now() + budget;
        let proc = self.process.as_mut().expect("spawned above");

        // script_text already ends with (check-sat)
        let io = (|| -> Result<Option<String>, ProcessError> {
            proc.send("(reset)\n")?;
            proc.send(script_text)?;
            proc.read_status(deadline)
        })();
        let status = match io {
            Ok(Some(s)) => s,
            Ok(None) => {
                proc.kill();
                return Ok(SolverVerdict::Unknown("solver timeout".to_string()));
            }
            Err(e) => {
                proc.kill();
                return Err(SolverError::Crash(e.to_string()));
            }
        };

        match status.as_str() {
            "unsat" => Ok(SolverVerdict::Unsat),
            "unknown" => Ok(SolverVerdict::Unknown("solver returned unknown".to_string())),
            "sat" => {
                let model_text = (|| -> Result<Option<String>, ProcessError> {
                    proc.send("(get-model)\n")?;
                    proc.read_sexpr(deadline)
                })();
                match model_text {
                    Ok(Some(text)) => {
                        let model = parse_model(&text, formula)
                            .map_err(|e| SolverError::Crash(format!("bad model: {e}")))?;
                        Ok(SolverVerdict::Sat(model))
                    }
                    Ok(None) => {
                        proc.kill();
                        Ok(SolverVerdict::Unknown("model read timeout".to_string()))
                    }
                    Err(e) => {
                        proc.kill();
                        Err(SolverError::Crash(e.to_string()))
                    }
                }
            }
            other => Err(SolverError::Crash(format!(
                "unexpected solver answer: {other}"
            ))),
        }
    }
}

/// Parses a `(get-model)` response, resolving names of the form `x<id>` back
/// to the formula's variables.
fn parse_model(text: &str, formula: &Term) -> Result<Model, String> {
    let mut sorts = BTreeMap::new();
    formula.collect_vars(&mut sorts);

    let exprs = sexpr::parse_all(text).map_err(|e| e.to_string())?;
    let mut model = Model::default();
    let Some(top) = exprs.first().and_then(|e| e.list()) else {
        return Err("model is not a list".to_string());
    };
    // some solvers wrap entries in a leading `model` keyword
    let entries: &[sexpr::Sexpr] = match top.first().and_then(|e| e.atom()) {
        Some("model") => &top[1..],
        _ => top,
    };
    for entry in entries {
        let Some(items) = entry.list() else { continue };
        if items.len() < 5 || items[0].atom() != Some("define-fun") {
            continue;
        }
        let Some(name) = items[1].atom() else { continue };
        let Some(id) = name.strip_prefix('x').and_then(|n| n.parse::<u32>().ok()) else {
            continue;
        };
        let var = VarId(id);
        let Some(sort) = sorts.get(&var) else { continue };
        let Some(value) = crate::smtlib::parse_value(&items[4]) else {
            continue;
        };
        // reconcile numeral forms across sorts
        let value = match (sort, value) {
            (Sort::Real, Value::Int(v)) => {
                Value::Real(crate::term::Rational::from_integer(v))
            }
            (Sort::Int, Value::Real(r)) if r.is_integer() => Value::Int(r.to_integer()),
            (_, v) => v,
        };
        model.insert(var, value);
    }
    Ok(model)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::{CmpOp, Term, VarId};

    #[test]
    fn builtin_session_round_trip() {
        let mut session = SolverSession::new(SolverConfig::default(), "t");
        let x = Term::var(VarId(0), Sort::Int);
        let sat = Term::cmp(CmpOp::Gt, x.clone(), Term::int(3));
        let unsat = Term::and([sat.clone(), Term::cmp(CmpOp::Lt, x, Term::int(2))]);
        assert!(matches!(
            session.check(&sat, None).unwrap(),
            SolverVerdict::Sat(_)
        ));
        assert!(matches!(
            session.check(&unsat, None).unwrap(),
            SolverVerdict::Unsat
        ));
        assert_eq!(session.stats.checks, 2);
    }

    #[test]
    fn dump_writes_scripts() {
        let dir = std::env::temp_dir().join(format!("bageq-dump-{}", std::process::id()));
        let _ = std::fs::remove_dir_all(&dir);
        let mut session = SolverSession::new(
            SolverConfig {
                dump_dir: Some(dir.clone()),
                ..SolverConfig::default()
            },
            "task0",
        );
        let f = Term::fls();
        let _ = session.check(&f, None).unwrap();
        let entries: Vec<_> = std::fs::read_dir(&dir).unwrap().collect();
        assert_eq!(entries.len(), 1);
        let _ = std::fs::remove_dir_all(&dir);
    }

    #[test]
    fn model_parser_reads_define_fun() {
        let x = Term::var(VarId(3), Sort::Int);
        let f = Term::cmp(CmpOp::Gt, x, Term::int(5));
        let model = parse_model("((define-fun x3 () Int 6))", &f).unwrap();
        assert_eq!(model.get(VarId(3)), Some(&Value::Int(6)));
    }
}
