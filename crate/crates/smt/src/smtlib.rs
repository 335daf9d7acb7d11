//! Translation between s-expressions and [`Term`]s, plus the command
//! interpreter backing the `bageq-smt` binary.

use std::collections::HashMap;
use std::time::{Duration, Instant};

use num::{BigInt, BigRational, Signed, ToPrimitive};

use crate::engine::{check, CheckOutcome, EngineConfig, Model, Value};
use crate::sexpr::{parse_all, Sexpr};
use crate::term::{CmpOp, Rational, Sort, Term, VarGen, VarId};

#[derive(Debug, thiserror::Error)]
pub enum SmtlibError {
    #[error("malformed s-expression: {0}")]
    Sexpr(#[from] crate::sexpr::SexprError),
    #[error("unsupported construct: {0}")]
    Unsupported(String),
    #[error("unknown symbol: {0}")]
    UnknownSymbol(String),
    #[error("malformed command: {0}")]
    Malformed(String),
}

fn parse_sort(e: &Sexpr) -> Result<Sort, SmtlibError> {
    match e.atom() {
        Some("Int") => Ok(Sort::Int),
        Some("Real") => Ok(Sort::Real),
        Some("Bool") => Ok(Sort::Bool),
        _ => Err(SmtlibError::Unsupported(format!("sort {e}"))),
    }
}

/// Declared symbols of one solver scope.
#[derive(Default)]
pub struct SymbolTable {
    vars: HashMap<String, (VarId, Sort)>,
    funcs: HashMap<String, (Sort, Vec<Sort>)>,
    gen: VarGen,
}

impl SymbolTable {
    pub fn declare(&mut self, name: &str, args: Vec<Sort>, ret: Sort) {
        if args.is_empty() {
            let v = self.gen.fresh(ret);
            if let crate::term::TermKind::Var(id, _) = v.kind() {
                self.vars.insert(name.to_string(), (*id, ret));
            }
        } else {
            self.funcs.insert(name.to_string(), (ret, args));
        }
    }

    pub fn var_names(&self) -> impl Iterator<Item = (&String, &(VarId, Sort))> {
        self.vars.iter()
    }

    fn numeral(text: &str) -> Option<Term> {
        if let Ok(v) = text.parse::<i64>() {
            return Some(Term::int(v));
        }
        if let Some((int_part, frac)) = text.split_once('.') {
            let scale = 10i64.checked_pow(frac.len() as u32)?;
            let whole: i64 = int_part.parse().ok()?;
            let frac_v: i64 = if frac.is_empty() { 0 } else { frac.parse().ok()? };
            let sign = if text.starts_with('-') { -1 } else { 1 };
            return Some(Term::real(Rational::new(
                whole * scale + sign * frac_v,
                scale,
            )));
        }
        None
    }

    pub fn to_term(&self, e: &Sexpr) -> Result<Term, SmtlibError> {
        match e {
            Sexpr::Atom(a) => match a.as_str() {
                "true" => Ok(Term::tru()),
                "false" => Ok(Term::fls()),
                _ => {
                    if let Some(t) = Self::numeral(a) {
                        return Ok(t);
                    }
                    match self.vars.get(a) {
                        Some((id, sort)) => Ok(Term::var(*id, *sort)),
                        None => Err(SmtlibError::UnknownSymbol(a.clone())),
                    }
                }
            },
            Sexpr::List(items) => {
                let Some(head) = items.first().and_then(|h| h.atom()) else {
                    return Err(SmtlibError::Malformed(format!("{e}")));
                };
                let args: Vec<Term> = items[1..]
                    .iter()
                    .map(|x| self.to_term(x))
                    .collect::<Result<_, _>>()?;
                let bin = |args: &[Term]| -> Result<(Term, Term), SmtlibError> {
                    if args.len() == 2 {
                        Ok((args[0].clone(), args[1].clone()))
                    } else {
                        Err(SmtlibError::Malformed(format!("{e}")))
                    }
                };
                match head {
                    "and" => Ok(Term::and(args)),
                    "or" => Ok(Term::or(args)),
                    "not" if args.len() == 1 => Ok(Term::not(args[0].clone())),
                    "=>" if args.len() == 2 => {
                        Ok(Term::implies(args[0].clone(), args[1].clone()))
                    }
                    "ite" if args.len() == 3 => Ok(Term::ite(
                        args[0].clone(),
                        args[1].clone(),
                        args[2].clone(),
                    )),
                    "+" => Ok(Term::add(args)),
                    "-" if args.len() == 1 => Ok(Term::neg(args[0].clone())),
                    "-" if args.len() == 2 => Ok(Term::sub(args[0].clone(), args[1].clone())),
                    "*" => {
                        let (a, b) = bin(&args)?;
                        Ok(Term::mul(a, b))
                    }
                    "/" | "div" => {
                        let (a, b) = bin(&args)?;
                        Ok(Term::div(a, b))
                    }
                    "mod" => {
                        let (a, b) = bin(&args)?;
                        Ok(Term::modulo(a, b))
                    }
                    "<" => {
                        let (a, b) = bin(&args)?;
                        Ok(Term::cmp(CmpOp::Lt, a, b))
                    }
                    "<=" => {
                        let (a, b) = bin(&args)?;
                        Ok(Term::cmp(CmpOp::Le, a, b))
                    }
                    ">" => {
                        let (a, b) = bin(&args)?;
                        Ok(Term::cmp(CmpOp::Gt, a, b))
                    }
                    ">=" => {
                        let (a, b) = bin(&args)?;
                        Ok(Term::cmp(CmpOp::Ge, a, b))
                    }
                    "=" => {
                        let (a, b) = bin(&args)?;
                        Ok(Term::eq(a, b))
                    }
                    "distinct" => {
                        let (a, b) = bin(&args)?;
                        Ok(Term::not(Term::eq(a, b)))
                    }
                    name => match self.funcs.get(name) {
                        Some((ret, _)) => Ok(Term::app(name, *ret, args)),
                        None => Err(SmtlibError::UnknownSymbol(name.to_string())),
                    },
                }
            }
        }
    }
}

/// Parses a model value expression like `6`, `(- 6)`, `(/ 1.0 2.0)`, `true`.
pub fn parse_value(e: &Sexpr) -> Option<Value> {
    match e {
        Sexpr::Atom(a) => match a.as_str() {
            "true" => Some(Value::Bool(true)),
            "false" => Some(Value::Bool(false)),
            _ => {
                if let Ok(v) = a.parse::<i64>() {
                    return Some(Value::Int(v));
                }
                parse_decimal(a)
            }
        },
        Sexpr::List(items) => match items.first().and_then(|h| h.atom()) {
            Some("-") if items.len() == 2 => match parse_value(&items[1])? {
                Value::Int(v) => Some(Value::Int(-v)),
                Value::Real(r) => Some(Value::Real(-r)),
                Value::Bool(_) => None,
            },
            Some("/") if items.len() == 3 => {
                let a = parse_value(&items[1])?;
                let b = parse_value(&items[2])?;
                let to_rat = |v: Value| match v {
                    Value::Int(i) => Some(Rational::from_integer(i)),
                    Value::Real(r) => Some(r),
                    Value::Bool(_) => None,
                };
                Some(Value::Real(to_rat(a)? / to_rat(b)?))
            }
            _ => None,
        },
    }
}

fn parse_decimal(text: &str) -> Option<Value> {
    let (int_part, frac) = text.split_once('.')?;
    let whole: BigInt = int_part.parse().ok()?;
    let denom = BigInt::from(10u32).pow(frac.len() as u32);
    let frac_v: BigInt = if frac.is_empty() {
        BigInt::from(0)
    } else {
        frac.parse().ok()?
    };
    let numer = if whole.is_negative() || int_part.starts_with('-') {
        whole * &denom - frac_v
    } else {
        whole * &denom + frac_v
    };
    let r = BigRational::new(numer, denom);
    Some(Value::Real(Rational::new(
        r.numer().to_i64()?,
        r.denom().to_i64()?,
    )))
}

/// Stateful interpreter for SMT-LIB2 scripts, used by the solver binary.
pub struct Interpreter {
    symbols: SymbolTable,
    assertions: Vec<Term>,
    last_model: Option<Model>,
    timeout: Duration,
    config: EngineConfig,
}

impl Default for Interpreter {
    fn default() -> Self {
        Self::new()
    }
}

impl Interpreter {
    pub fn new() -> Self {
        Interpreter {
            symbols: SymbolTable::default(),
            assertions: Vec::new(),
            last_model: None,
            timeout: Duration::from_secs(600),
            config: EngineConfig::default(),
        }
    }

    /// Runs one command; returns the response text to print, if any.
    pub fn eval(&mut self, cmd: &Sexpr) -> Result<Option<String>, SmtlibError> {
        let items = cmd
            .list()
            .ok_or_else(|| SmtlibError::Malformed(format!("{cmd}")))?;
        let head = items
            .first()
            .and_then(|h| h.atom())
            .ok_or_else(|| SmtlibError::Malformed(format!("{cmd}")))?;
        match head {
            "set-logic" | "set-info" => Ok(None),
            "set-option" => {
                if items.len() == 3 && items[1].atom() == Some(":timeout") {
                    if let Some(ms) = items[2].atom().and_then(|s| s.parse::<u64>().ok()) {
                        self.timeout = Duration::from_millis(ms);
                    }
                }
                Ok(None)
            }
            "declare-fun" => {
                let (name, args, ret) = match items {
                    [_, Sexpr::Atom(name), Sexpr::List(args), ret] => (name, args, ret),
                    _ => return Err(SmtlibError::Malformed(format!("{cmd}"))),
                };
                let args: Vec<Sort> = args.iter().map(parse_sort).collect::<Result<_, _>>()?;
                let ret = parse_sort(ret)?;
                self.symbols.declare(name, args, ret);
                Ok(None)
            }
            "declare-const" => {
                let (name, ret) = match items {
                    [_, Sexpr::Atom(name), ret] => (name, ret),
                    _ => return Err(SmtlibError::Malformed(format!("{cmd}"))),
                };
                let ret = parse_sort(ret)?;
                self.symbols.declare(name, Vec::new(), ret);
                Ok(None)
            }
            "assert" => {
                let [_, body] = items else {
                    return Err(SmtlibError::Malformed(format!("{cmd}")));
                };
                let t = self.symbols.to_term(body)?;
                self.assertions.push(t);
                Ok(None)
            }
            "check-sat" => {
                let formula = Term::and(self.assertions.iter().cloned());
                let deadline = Instant::now() + self.timeout;
                match check(&formula, deadline, &self.config) {
                    CheckOutcome::Sat(m) => {
                        self.last_model = Some(m);
                        Ok(Some("sat".to_string()))
                    }
                    CheckOutcome::Unsat => {
                        self.last_model = None;
                        Ok(Some("unsat".to_string()))
                    }
                    CheckOutcome::Unknown(_) => {
                        self.last_model = None;
                        Ok(Some("unknown".to_string()))
                    }
                }
            }
            "get-model" => {
                let Some(model) = &self.last_model else {
                    return Ok(Some("(error \"no model available\")".to_string()));
                };
                let mut entries: Vec<(String, VarId, Sort)> = self
                    .symbols
                    .var_names()
                    .map(|(name, (id, sort))| (name.clone(), *id, *sort))
                    .collect();
                entries.sort();
                let mut out = String::from("(");
                for (name, id, sort) in entries {
                    let value = model.value_or_default(id, sort);
                    let rendered = match value {
                        Value::Int(v) if v < 0 => format!("(- {})", -v),
                        Value::Int(v) => format!("{v}"),
                        Value::Real(r) => crate::script::term_to_smtlib(&Term::real(r)),
                        Value::Bool(b) => format!("{b}"),
                    };
                    out.push_str(&format!("(define-fun {name} () {sort} {rendered})"));
                }
                out.push(')');
                Ok(Some(out))
            }
            "reset" => {
                *self = Interpreter::new();
                Ok(None)
            }
            "exit" => Ok(None),
            "echo" => Ok(items.get(1).and_then(|e| e.atom()).map(|s| s.to_string())),
            other => Err(SmtlibError::Unsupported(other.to_string())),
        }
    }

    pub fn run_script(&mut self, input: &str) -> Result<Vec<String>, SmtlibError> {
        let cmds = parse_all(input)?;
        let mut out = Vec::new();
        for cmd in &cmds {
            if let Some(resp) = self.eval(cmd)? {
                out.push(resp);
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips_a_check_script() {
        let mut interp = Interpreter::new();
        let out = interp
            .run_script(
                "(set-logic ALL)\n(declare-fun x () Int)\n(assert (and (> (+ x 5) 10) (> x 3)))\n(check-sat)",
            )
            .unwrap();
        assert_eq!(out, vec!["sat".to_string()]);

        let out = interp
            .run_script("(reset)(declare-fun x () Int)(assert (and (> (+ x 5) 10) (< x 4)))(check-sat)")
            .unwrap();
        assert_eq!(out, vec!["unsat".to_string()]);
    }

    #[test]
    fn emits_parseable_models() {
        let mut interp = Interpreter::new();
        let out = interp
            .run_script("(declare-fun x () Int)(assert (> x 41))(check-sat)(get-model)")
            .unwrap();
        assert_eq!(out[0], "sat");
        let model = parse_all(&out[1]).unwrap();
        let defs = model[0].list().unwrap();
        let entry = defs[0].list().unwrap();
        assert_eq!(entry[1].atom(), Some("x"));
        match parse_value(&entry[4]).unwrap() {
            Value::Int(v) => assert!(v >= 42),
            other => panic!("unexpected value {other:?}"),
        }
    }

    #[test]
    fn parses_emitted_scripts() {
        // the scripts produced by script::check_script must be accepted
        let x = Term::var(VarId(7), Sort::Int);
        let f = Term::and([
            Term::cmp(CmpOp::Gt, x.clone(), Term::int(1)),
            Term::cmp(CmpOp::Lt, x, Term::int(1)),
        ]);
        let script = crate::script::check_script(&f, false);
        let mut interp = Interpreter::new();
        let out = interp.run_script(&script).unwrap();
        assert_eq!(out, vec!["unsat".to_string()]);
    }
}
