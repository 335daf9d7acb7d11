//! Built-in satisfiability engine: formula lowering (ite/div/mod/nonlinear
//! elimination and Ackermann expansion of uninterpreted functions), Tseitin
//! CNF conversion into a CDCL SAT core, and a lazy theory loop against the
//! simplex module.
//!
//! Unsat answers are trusted by the verifier, so every transformation here is
//! satisfiability-preserving in the unsat direction: nonlinear operators are
//! weakened to uninterpreted functions, which can only make a formula easier
//! to satisfy.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::time::Instant;

use num::rational::BigRational;
use num::{BigInt, ToPrimitive, Zero};
use varisat::{ExtendFormula, Lit, Solver as SatSolver, Var as SatVar};

use crate::simplex::{ConOp, LinCon, SearchBudget, TheoryOutcome, TheoryProblem, solve_theory};
use crate::term::{CmpOp, Rational, Sort, Term, TermKind, VarGen, VarId};

/// A concrete value in a model.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Value {
    Int(i64),
    Real(Rational),
    Bool(bool),
}

/// Assignment of concrete values to symbolic variables.
#[derive(Clone, Debug, Default)]
pub struct Model {
    values: HashMap<VarId, Value>,
}

impl Model {
    pub fn get(&self, v: VarId) -> Option<&Value> {
        self.values.get(&v)
    }

    /// Value of `v`, defaulting unconstrained variables per sort.
    pub fn value_or_default(&self, v: VarId, sort: Sort) -> Value {
        self.values.get(&v).cloned().unwrap_or(match sort {
            Sort::Int => Value::Int(0),
            Sort::Real => Value::Real(Rational::new(0, 1)),
            Sort::Bool => Value::Bool(false),
        })
    }

    pub fn insert(&mut self, v: VarId, value: Value) {
        self.values.insert(v, value);
    }

    pub fn iter(&self) -> impl Iterator<Item = (&VarId, &Value)> {
        self.values.iter()
    }
}

#[derive(Debug)]
pub enum CheckOutcome {
    Sat(Model),
    Unsat,
    Unknown(String),
}

struct Lowering {
    fresh: VarGen,
    defs: Vec<Term>,
    memo: HashMap<Term, Term>,
    /// (function name, lowered args) -> replacement variable
    app_vars: HashMap<(String, Vec<Term>), Term>,
    app_groups: HashMap<String, Vec<(Vec<Term>, Term)>>,
}

impl Lowering {
    fn new(first_free_var: u32) -> Self {
        Lowering {
            fresh: VarGen::starting_at(first_free_var),
            defs: Vec::new(),
            memo: HashMap::new(),
            app_vars: HashMap::new(),
            app_groups: HashMap::new(),
        }
    }

    fn lower(&mut self, t: &Term) -> Term {
        if let Some(done) = self.memo.get(t) {
            return done.clone();
        }
        let out = self.lower_uncached(t);
        self.memo.insert(t.clone(), out.clone());
        out
    }

    fn lower_uncached(&mut self, t: &Term) -> Term {
        match t.kind() {
            TermKind::BoolLit(_)
            | TermKind::IntLit(_)
            | TermKind::RealLit(_)
            | TermKind::Var(_, _) => t.clone(),
            TermKind::Not(x) => Term::not(self.lower(x)),
            TermKind::And(parts) => Term::and(parts.iter().map(|p| self.lower(p))),
            TermKind::Or(parts) => Term::or(parts.iter().map(|p| self.lower(p))),
            TermKind::Add(parts) => Term::add(parts.iter().map(|p| self.lower(p))),
            TermKind::Neg(x) => Term::neg(self.lower(x)),
            TermKind::Cmp(op, a, b) => Term::cmp(*op, self.lower(a), self.lower(b)),
            TermKind::Eq(a, b) => Term::eq(self.lower(a), self.lower(b)),
            TermKind::Ite(c, a, b) => {
                let c = self.lower(c);
                let a = self.lower(a);
                let b = self.lower(b);
                if a.sort() == Sort::Bool {
                    Term::or([
                        Term::and([c.clone(), a]),
                        Term::and([Term::not(c), b]),
                    ])
                } else {
                    let sort = if a.sort() == Sort::Real || b.sort() == Sort::Real {
                        Sort::Real
                    } else {
                        a.sort()
                    };
                    let x = self.fresh.fresh(sort);
                    self.defs.push(Term::implies(c.clone(), Term::eq(x.clone(), a)));
                    self.defs.push(Term::implies(Term::not(c), Term::eq(x.clone(), b)));
                    x
                }
            }
            TermKind::Mul(a, b) => {
                let a = self.lower(a);
                let b = self.lower(b);
                let lin = matches!(a.kind(), TermKind::IntLit(_) | TermKind::RealLit(_))
                    || matches!(b.kind(), TermKind::IntLit(_) | TermKind::RealLit(_));
                if lin {
                    Term::mul(a, b)
                } else {
                    let sort = if a.sort() == Sort::Real || b.sort() == Sort::Real {
                        Sort::Real
                    } else {
                        Sort::Int
                    };
                    let name = if sort == Sort::Real { "mul.r" } else { "mul.i" };
                    // multiplication commutes; canonicalize the argument order
                    let (x, y) = if crate::script::term_to_smtlib(&a)
                        <= crate::script::term_to_smtlib(&b)
                    {
                        (a, b)
                    } else {
                        (b, a)
                    };
                    self.apply(name, sort, vec![x, y])
                }
            }
            TermKind::Div(a, b) => {
                let a = self.lower(a);
                let b = self.lower(b);
                let real = a.sort() == Sort::Real || b.sort() == Sort::Real;
                match b.kind() {
                    TermKind::IntLit(c) if *c != 0 && !real => self.int_div_pair(&a, *c).0,
                    TermKind::IntLit(c) if *c != 0 => {
                        Term::mul(Term::real(Rational::new(1, *c)), a)
                    }
                    TermKind::RealLit(r) if !r.is_zero() => {
                        Term::mul(Term::real(Rational::new(1, 1) / r), a)
                    }
                    _ => {
                        let name = if real { "div.r" } else { "div.i" };
                        let sort = if real { Sort::Real } else { Sort::Int };
                        self.apply(name, sort, vec![a, b])
                    }
                }
            }
            TermKind::Mod(a, b) => {
                let a = self.lower(a);
                let b = self.lower(b);
                match b.kind() {
                    TermKind::IntLit(c) if *c != 0 && a.sort() == Sort::Int => {
                        self.int_div_pair(&a, *c).1
                    }
                    _ => self.apply("mod.i", Sort::Int, vec![a, b]),
                }
            }
            TermKind::App(name, ret, args) => {
                let args: Vec<Term> = args.iter().map(|x| self.lower(x)).collect();
                self.apply(name, *ret, args)
            }
        }
    }

    /// Truncating division of `a` by a nonzero integer literal: returns the
    /// (quotient, remainder) variables with defining constraints.
    fn int_div_pair(&mut self, a: &Term, c: i64) -> (Term, Term) {
        let q = self.fresh.fresh(Sort::Int);
        let r = self.fresh.fresh(Sort::Int);
        let abs_c = c.abs();
        // a = c*q + r
        self.defs.push(Term::eq(
            a.clone(),
            Term::add([Term::mul(Term::int(c), q.clone()), r.clone()]),
        ));
        // remainder takes the dividend's sign: trunc-toward-zero division
        let zero = Term::int(0);
        let nonneg = Term::and([
            Term::cmp(CmpOp::Ge, a.clone(), zero.clone()),
            Term::cmp(CmpOp::Ge, r.clone(), zero.clone()),
            Term::cmp(CmpOp::Lt, r.clone(), Term::int(abs_c)),
        ]);
        let nonpos = Term::and([
            Term::cmp(CmpOp::Le, a.clone(), zero.clone()),
            Term::cmp(CmpOp::Le, r.clone(), zero),
            Term::cmp(CmpOp::Gt, r.clone(), Term::int(-abs_c)),
        ]);
        self.defs.push(Term::or([nonneg, nonpos]));
        (q, r)
    }

    /// Replaces a function application with its Ackermann variable.
    fn apply(&mut self, name: &str, ret: Sort, args: Vec<Term>) -> Term {
        if args.is_empty() {
            // nullary symbols behave as plain variables shared by name
            let key = (name.to_string(), Vec::new());
            if let Some(v) = self.app_vars.get(&key) {
                return v.clone();
            }
            let v = self.fresh.fresh(ret);
            self.app_vars.insert(key, v.clone());
            return v;
        }
        let key = (name.to_string(), args.clone());
        if let Some(v) = self.app_vars.get(&key) {
            return v.clone();
        }
        let v = self.fresh.fresh(ret);
        self.app_vars.insert(key, v.clone());
        self.app_groups
            .entry(name.to_string())
            .or_default()
            .push((args, v.clone()));
        v
    }

    /// Functional-consistency constraints between same-symbol applications.
    fn congruence_defs(&self) -> Vec<Term> {
        let mut out = Vec::new();
        let mut names: Vec<&String> = self.app_groups.keys().collect();
        names.sort();
        for name in names {
            let apps = &self.app_groups[name];
            for i in 0..apps.len() {
                for j in (i + 1)..apps.len() {
                    let (args_i, v_i) = &apps[i];
                    let (args_j, v_j) = &apps[j];
                    let same_args = Term::and(
                        args_i
                            .iter()
                            .zip(args_j.iter())
                            .map(|(a, b)| Term::eq(a.clone(), b.clone())),
                    );
                    out.push(Term::implies(same_args, Term::eq(v_i.clone(), v_j.clone())));
                }
            }
        }
        out
    }
}

/// Linear form over variables: coeffs plus constant.
struct LinForm {
    coeffs: BTreeMap<VarId, BigRational>,
    constant: BigRational,
}

fn big(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

fn rat_to_big(r: &Rational) -> BigRational {
    BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
}

fn linearize(t: &Term) -> Option<LinForm> {
    match t.kind() {
        TermKind::IntLit(v) => Some(LinForm {
            coeffs: BTreeMap::new(),
            constant: big(*v),
        }),
        TermKind::RealLit(r) => Some(LinForm {
            coeffs: BTreeMap::new(),
            constant: rat_to_big(r),
        }),
        TermKind::Var(id, sort) if *sort != Sort::Bool => Some(LinForm {
            coeffs: BTreeMap::from([(*id, big(1))]),
            constant: BigRational::zero(),
        }),
        TermKind::Add(parts) => {
            let mut acc = LinForm {
                coeffs: BTreeMap::new(),
                constant: BigRational::zero(),
            };
            for p in parts {
                let f = linearize(p)?;
                acc.constant += f.constant;
                for (v, c) in f.coeffs {
                    let e = acc.coeffs.entry(v).or_insert_with(BigRational::zero);
                    *e += c;
                }
            }
            acc.coeffs.retain(|_, c| !c.is_zero());
            Some(acc)
        }
        TermKind::Neg(x) => {
            let mut f = linearize(x)?;
            f.constant = -f.constant;
            for c in f.coeffs.values_mut() {
                *c = -c.clone();
            }
            Some(f)
        }
        TermKind::Mul(a, b) => {
            let (k, x) = match (a.kind(), b.kind()) {
                (TermKind::IntLit(v), _) => (big(*v), b),
                (TermKind::RealLit(r), _) => (rat_to_big(r), b),
                (_, TermKind::IntLit(v)) => (big(*v), a),
                (_, TermKind::RealLit(r)) => (rat_to_big(r), a),
                _ => return None,
            };
            let mut f = linearize(x)?;
            f.constant *= &k;
            for c in f.coeffs.values_mut() {
                *c *= &k;
            }
            f.coeffs.retain(|_, c| !c.is_zero());
            Some(f)
        }
        _ => None,
    }
}

enum Atom {
    /// lhs - rhs OP 0
    Linear(LinForm, CmpOp),
    /// lhs - rhs = 0
    LinearEq(LinForm),
    /// Arithmetic atom the theory cannot interpret; treated as free, which
    /// only widens the satisfiable set.
    Opaque,
}

struct Cnf {
    solver_clauses: Vec<Vec<Lit>>,
    next_sat_var: usize,
    name_memo: HashMap<Term, Lit>,
    atoms: Vec<(Atom, SatVar)>,
    bool_var_sat: HashMap<VarId, SatVar>,
}

impl Cnf {
    fn new() -> Self {
        Cnf {
            solver_clauses: Vec::new(),
            next_sat_var: 0,
            name_memo: HashMap::new(),
            atoms: Vec::new(),
            bool_var_sat: HashMap::new(),
        }
    }

    fn fresh_sat(&mut self) -> SatVar {
        let v = SatVar::from_index(self.next_sat_var);
        self.next_sat_var += 1;
        v
    }

    fn atom_lit(&mut self, t: &Term, atom: Atom) -> Lit {
        let v = self.fresh_sat();
        self.atoms.push((atom, v));
        let lit = Lit::from_var(v, true);
        self.name_memo.insert(t.clone(), lit);
        lit
    }

    fn name(&mut self, t: &Term) -> Lit {
        if let Some(l) = self.name_memo.get(t) {
            return *l;
        }
        let lit = match t.kind() {
            TermKind::BoolLit(b) => {
                let v = self.fresh_sat();
                let l = Lit::from_var(v, true);
                self.solver_clauses.push(vec![if *b { l } else { !l }]);
                l
            }
            TermKind::Var(id, Sort::Bool) => {
                let v = match self.bool_var_sat.get(id) {
                    Some(v) => *v,
                    None => {
                        let v = self.fresh_sat();
                        self.bool_var_sat.insert(*id, v);
                        v
                    }
                };
                Lit::from_var(v, true)
            }
            TermKind::Not(x) => !self.name(x),
            TermKind::And(parts) => {
                let lits: Vec<Lit> = parts.iter().map(|p| self.name(p)).collect();
                let p = Lit::from_var(self.fresh_sat(), true);
                let mut big = vec![p];
                for l in &lits {
                    self.solver_clauses.push(vec![!p, *l]);
                    big.push(!*l);
                }
                self.solver_clauses.push(big);
                p
            }
            TermKind::Or(parts) => {
                let lits: Vec<Lit> = parts.iter().map(|p| self.name(p)).collect();
                let p = Lit::from_var(self.fresh_sat(), true);
                let mut big = vec![!p];
                big.extend(lits.iter().copied());
                self.solver_clauses.push(big);
                for l in &lits {
                    self.solver_clauses.push(vec![p, !*l]);
                }
                p
            }
            TermKind::Eq(a, b) if a.sort() == Sort::Bool => {
                let la = self.name(a);
                let lb = self.name(b);
                let p = Lit::from_var(self.fresh_sat(), true);
                self.solver_clauses.push(vec![!p, !la, lb]);
                self.solver_clauses.push(vec![!p, la, !lb]);
                self.solver_clauses.push(vec![p, la, lb]);
                self.solver_clauses.push(vec![p, !la, !lb]);
                p
            }
            TermKind::Eq(a, b) => {
                let form = Term::sub(a.clone(), b.clone());
                let atom = match linearize(&form) {
                    Some(f) => Atom::LinearEq(f),
                    None => Atom::Opaque,
                };
                return self.atom_lit(t, atom);
            }
            TermKind::Cmp(op, a, b) => {
                let form = Term::sub(a.clone(), b.clone());
                let atom = match linearize(&form) {
                    Some(f) => Atom::Linear(f, *op),
                    None => Atom::Opaque,
                };
                return self.atom_lit(t, atom);
            }
            other => unreachable!("unlowered term reached CNF conversion: {other:?}"),
        };
        self.name_memo.insert(t.clone(), lit);
        lit
    }
}

pub struct EngineConfig {
    pub max_loop_iterations: u32,
    pub theory_nodes: u32,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            max_loop_iterations: 20_000,
            theory_nodes: 20_000,
        }
    }
}

/// Decides satisfiability of `formula` before the deadline.
pub fn check(formula: &Term, deadline: Instant, config: &EngineConfig) -> CheckOutcome {
    if formula.sort() != Sort::Bool {
        return CheckOutcome::Unknown("non-boolean goal".to_string());
    }

    // lowering needs fresh variables disjoint from the formula's
    let mut vars = BTreeMap::new();
    formula.collect_vars(&mut vars);
    let first_free = vars.keys().next_back().map(|v| v.0 + 1).unwrap_or(0);
    let mut lowering = Lowering::new(first_free);
    let lowered = lowering.lower(formula);
    let mut conj = vec![lowered];
    conj.extend(lowering.defs.iter().cloned());
    conj.extend(lowering.congruence_defs());
    let full = Term::and(conj);

    if full.is_true() {
        return CheckOutcome::Sat(Model::default());
    }
    if full.is_false() {
        return CheckOutcome::Unsat;
    }

    let mut cnf = Cnf::new();
    let root = cnf.name(&full);
    cnf.solver_clauses.push(vec![root]);

    let mut sat = SatSolver::new();
    for clause in &cnf.solver_clauses {
        sat.add_clause(clause);
    }

    // stable numbering of theory variables
    let mut theory_vars = BTreeMap::new();
    full.collect_vars(&mut theory_vars);
    let numeric: Vec<(VarId, Sort)> = theory_vars
        .iter()
        .filter(|(_, s)| **s != Sort::Bool)
        .map(|(v, s)| (*v, *s))
        .collect();
    let index_of: HashMap<VarId, u32> = numeric
        .iter()
        .enumerate()
        .map(|(i, (v, _))| (*v, i as u32))
        .collect();
    let is_int: Vec<bool> = numeric.iter().map(|(_, s)| *s == Sort::Int).collect();

    for round in 0..config.max_loop_iterations {
        if Instant::now() >= deadline {
            return CheckOutcome::Unknown("timeout".to_string());
        }
        match sat.solve() {
            Ok(true) => {}
            Ok(false) => return CheckOutcome::Unsat,
            Err(e) => return CheckOutcome::Unknown(format!("sat core failed: {e}")),
        }
        let sat_model: HashSet<Lit> = sat
            .model()
            .expect("sat solver reported true without a model")
            .into_iter()
            .collect();
        let truth = |v: SatVar| sat_model.contains(&Lit::from_var(v, true));

        // collect asserted theory literals
        let mut constraints = Vec::new();
        let mut constraint_lits = Vec::new();
        for (atom, v) in &cnf.atoms {
            let positive = truth(*v);
            let con = match atom {
                Atom::Opaque => continue,
                Atom::Linear(f, op) => {
                    let op = if positive { *op } else { op.negate() };
                    let op = match op {
                        CmpOp::Lt => ConOp::Lt,
                        CmpOp::Le => ConOp::Le,
                        CmpOp::Gt => ConOp::Gt,
                        CmpOp::Ge => ConOp::Ge,
                    };
                    LinCon {
                        coeffs: f
                            .coeffs
                            .iter()
                            .map(|(v, c)| (index_of[v], c.clone()))
                            .collect(),
                        constant: f.constant.clone(),
                        op,
                    }
                }
                Atom::LinearEq(f) => LinCon {
                    coeffs: f
                        .coeffs
                        .iter()
                        .map(|(v, c)| (index_of[v], c.clone()))
                        .collect(),
                    constant: f.constant.clone(),
                    op: if positive { ConOp::Eq } else { ConOp::Ne },
                },
            };
            constraints.push(con);
            constraint_lits.push(Lit::from_var(*v, positive));
        }

        let problem = TheoryProblem {
            num_vars: numeric.len() as u32,
            is_int: is_int.clone(),
            constraints,
        };
        let mut budget = SearchBudget {
            deadline,
            nodes_left: config.theory_nodes,
        };
        match solve_theory(&problem, &mut budget) {
            TheoryOutcome::Sat(values) => {
                let mut model = Model::default();
                for (vid, sort) in &theory_vars {
                    match sort {
                        Sort::Bool => {
                            if let Some(sv) = cnf.bool_var_sat.get(vid) {
                                model.insert(*vid, Value::Bool(truth(*sv)));
                            }
                        }
                        Sort::Int | Sort::Real => {
                            let val = &values[index_of[vid] as usize];
                            match big_to_value(val, *sort) {
                                Some(v) => model.insert(*vid, v),
                                None => {
                                    return CheckOutcome::Unknown(
                                        "model value out of range".to_string(),
                                    )
                                }
                            }
                        }
                    }
                }
                return CheckOutcome::Sat(model);
            }
            TheoryOutcome::Unsat(core) => {
                let clause: Vec<Lit> = core.iter().map(|i| !constraint_lits[*i]).collect();
                if clause.is_empty() {
                    return CheckOutcome::Unsat;
                }
                sat.add_clause(&clause);
            }
            TheoryOutcome::Unknown => {
                return CheckOutcome::Unknown(format!(
                    "theory search exhausted (round {round})"
                ))
            }
        }
    }
    CheckOutcome::Unknown("iteration limit".to_string())
}

fn big_to_value(v: &BigRational, sort: Sort) -> Option<Value> {
    match sort {
        Sort::Int => v.to_integer().to_i64().map(Value::Int),
        Sort::Real => {
            let n = v.numer().to_i64()?;
            let d = v.denom().to_i64()?;
            Some(Value::Real(Rational::new(n, d)))
        }
        Sort::Bool => None,
    }
}

impl Model {
    /// Evaluates a term under this model. Division and uninterpreted
    /// applications are not evaluated; callers needing those use a dedicated
    /// evaluator with an explicit function interpretation.
    pub fn eval(&self, t: &Term) -> Option<Value> {
        match t.kind() {
            TermKind::BoolLit(b) => Some(Value::Bool(*b)),
            TermKind::IntLit(v) => Some(Value::Int(*v)),
            TermKind::RealLit(r) => Some(Value::Real(*r)),
            TermKind::Var(id, sort) => Some(self.value_or_default(*id, *sort)),
            TermKind::Not(x) => match self.eval(x)? {
                Value::Bool(b) => Some(Value::Bool(!b)),
                _ => None,
            },
            TermKind::And(parts) => {
                let mut acc = true;
                for p in parts {
                    match self.eval(p)? {
                        Value::Bool(b) => acc &= b,
                        _ => return None,
                    }
                }
                Some(Value::Bool(acc))
            }
            TermKind::Or(parts) => {
                let mut acc = false;
                for p in parts {
                    match self.eval(p)? {
                        Value::Bool(b) => acc |= b,
                        _ => return None,
                    }
                }
                Some(Value::Bool(acc))
            }
            TermKind::Ite(c, a, b) => match self.eval(c)? {
                Value::Bool(true) => self.eval(a),
                Value::Bool(false) => self.eval(b),
                _ => None,
            },
            TermKind::Add(parts) => {
                let mut acc = Rational::new(0, 1);
                let mut real = false;
                for p in parts {
                    match self.eval(p)? {
                        Value::Int(v) => acc += Rational::from_integer(v),
                        Value::Real(r) => {
                            acc += r;
                            real = true;
                        }
                        Value::Bool(_) => return None,
                    }
                }
                Some(num_value(acc, real))
            }
            TermKind::Neg(x) => match self.eval(x)? {
                Value::Int(v) => Some(Value::Int(-v)),
                Value::Real(r) => Some(Value::Real(-r)),
                Value::Bool(_) => None,
            },
            TermKind::Mul(a, b) => {
                let (x, rx) = self.eval_num(a)?;
                let (y, ry) = self.eval_num(b)?;
                Some(num_value(x * y, rx || ry))
            }
            TermKind::Cmp(op, a, b) => {
                let (x, _) = self.eval_num(a)?;
                let (y, _) = self.eval_num(b)?;
                Some(Value::Bool(op.eval(x.cmp(&y))))
            }
            TermKind::Eq(a, b) => {
                if a.sort() == Sort::Bool {
                    match (self.eval(a)?, self.eval(b)?) {
                        (Value::Bool(x), Value::Bool(y)) => Some(Value::Bool(x == y)),
                        _ => None,
                    }
                } else {
                    let (x, _) = self.eval_num(a)?;
                    let (y, _) = self.eval_num(b)?;
                    Some(Value::Bool(x == y))
                }
            }
            TermKind::Div(_, _) | TermKind::Mod(_, _) | TermKind::App(_, _, _) => None,
        }
    }

    fn eval_num(&self, t: &Term) -> Option<(Rational, bool)> {
        match self.eval(t)? {
            Value::Int(v) => Some((Rational::from_integer(v), false)),
            Value::Real(r) => Some((r, true)),
            Value::Bool(_) => None,
        }
    }
}

fn num_value(r: Rational, real: bool) -> Value {
    if !real && r.is_integer() {
        Value::Int(r.to_integer())
    } else {
        Value::Real(r)
    }
}
