//! Symbolic layer: tuples of `(value, is-null)` term pairs, the three-valued
//! encoding of predicates and projections, and the full-equivalence check
//! discharged through the solver.

use std::collections::HashMap;

use bageq_smt::term::{CmpOp, Sort, Term, TermKind, VarGen, VarId};
use bageq_smt::{SolverError, SolverSession, SolverVerdict, Value as SmtValue};

use crate::catalog::TableSchema;
use crate::ir::{intern_code, BinOpKind, CmpKind, ColType, Expr, Literal, Pred};

/// One column of a symbolic tuple: a value term and a boolean null flag.
#[derive(Clone, Debug)]
pub struct SymCol {
    pub val: Term,
    pub isnull: Term,
}

#[derive(Clone, Debug, Default)]
pub struct SymTuple(pub Vec<SymCol>);

impl SymTuple {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(parts: impl IntoIterator<Item = SymTuple>) -> SymTuple {
        SymTuple(parts.into_iter().flat_map(|t| t.0).collect())
    }

    pub fn collect_vars(&self, out: &mut std::collections::BTreeMap<VarId, Sort>) {
        for col in &self.0 {
            col.val.collect_vars(out);
            col.isnull.collect_vars(out);
        }
    }

    pub fn rename(&self, map: &HashMap<VarId, Term>) -> SymTuple {
        SymTuple(
            self.0
                .iter()
                .map(|c| SymCol {
                    val: c.val.rename_vars(map),
                    isnull: c.isnull.rename_vars(map),
                })
                .collect(),
        )
    }
}

/// Query Pair Symbolic Representation: two symbolic tuples plus the
/// condition and assignment formulas that tie them together.
#[derive(Clone, Debug)]
pub struct Qpsr {
    pub cols1: SymTuple,
    pub cols2: SymTuple,
    pub cond: Term,
    pub assign: Term,
}

impl Qpsr {
    pub fn collect_vars(&self) -> std::collections::BTreeMap<VarId, Sort> {
        let mut out = std::collections::BTreeMap::new();
        self.cols1.collect_vars(&mut out);
        self.cols2.collect_vars(&mut out);
        self.cond.collect_vars(&mut out);
        self.assign.collect_vars(&mut out);
        out
    }

    /// Structure-preserving copy with every variable replaced by a fresh one.
    pub fn refreshed(&self, vars: &mut VarGen) -> Qpsr {
        let old = self.collect_vars();
        let map: HashMap<VarId, Term> = old
            .iter()
            .map(|(id, sort)| (*id, vars.fresh(*sort)))
            .collect();
        Qpsr {
            cols1: self.cols1.rename(&map),
            cols2: self.cols2.rename(&map),
            cond: self.cond.rename_vars(&map),
            assign: self.assign.rename_vars(&map),
        }
    }
}

/// Null-aware column equality: null flags agree, and values agree unless the
/// column is NULL on both sides. Two NULLs are equal; NULL never equals a
/// value.
pub fn pair_eq(a: &SymCol, b: &SymCol) -> Term {
    Term::and([
        Term::iff(a.isnull.clone(), b.isnull.clone()),
        Term::or([a.isnull.clone(), Term::eq(a.val.clone(), b.val.clone())]),
    ])
}

pub fn tuple_eq(a: &SymTuple, b: &SymTuple) -> Term {
    debug_assert_eq!(a.len(), b.len());
    Term::and(a.0.iter().zip(&b.0).map(|(x, y)| pair_eq(x, y)))
}

/// Encoded predicate: Kleene truth and null terms plus auxiliary variable
/// definitions. The filter condition used by callers is `truth && !null`.
#[derive(Clone, Debug)]
pub struct PredEnc {
    pub truth: Term,
    pub null: Term,
    pub assign: Term,
}

impl PredEnc {
    pub fn cond(&self) -> Term {
        Term::and([self.truth.clone(), Term::not(self.null.clone())])
    }
}

pub fn sort_of(t: ColType) -> Sort {
    match t {
        ColType::Dec => Sort::Real,
        _ => Sort::Int,
    }
}

/// Fresh-variable allocator plus the encoding routines. One encoder serves
/// one verification task; variable freshness is task-local.
pub struct Encoder {
    pub vars: VarGen,
}

impl Default for Encoder {
    fn default() -> Self {
        Self::new()
    }
}

impl Encoder {
    pub fn new() -> Self {
        Encoder {
            vars: VarGen::new(),
        }
    }

    /// Fresh symbolic tuple; non-nullable columns get a constant-false null
    /// flag.
    pub fn fresh_tuple(&mut self, types: &[ColType], nullable: &[bool]) -> SymTuple {
        debug_assert_eq!(types.len(), nullable.len());
        SymTuple(
            types
                .iter()
                .zip(nullable)
                .map(|(t, n)| SymCol {
                    val: self.vars.fresh(sort_of(*t)),
                    isnull: if *n { self.vars.fresh(Sort::Bool) } else { Term::fls() },
                })
                .collect(),
        )
    }

    pub fn table_tuple(&mut self, schema: &TableSchema) -> SymTuple {
        let types: Vec<ColType> = schema
            .columns
            .iter()
            .map(|c| ColType::from_sql(c.sqltype))
            .collect();
        let nullable: Vec<bool> = schema.columns.iter().map(|c| c.nullable).collect();
        self.fresh_tuple(&types, &nullable)
    }

    /// Encodes one projection expression over tuple `t`.
    pub fn expr_col(&mut self, e: &Expr, t: &SymTuple) -> (SymCol, Term) {
        match e {
            Expr::Column(i) => (t.0[*i].clone(), Term::tru()),
            Expr::Const(lit) => (
                SymCol {
                    val: literal_term(lit),
                    isnull: Term::fls(),
                },
                Term::tru(),
            ),
            Expr::Null => (
                SymCol {
                    val: self.vars.fresh(Sort::Int),
                    isnull: Term::tru(),
                },
                Term::tru(),
            ),
            Expr::Binop { op, lhs, rhs } => {
                let (l, la) = self.expr_col(lhs, t);
                let (r, ra) = self.expr_col(rhs, t);
                let isnull = Term::or([l.isnull.clone(), r.isnull.clone()]);
                match op {
                    BinOpKind::Add => (
                        SymCol {
                            val: Term::add([l.val, r.val]),
                            isnull,
                        },
                        Term::and([la, ra]),
                    ),
                    BinOpKind::Sub => (
                        SymCol {
                            val: Term::sub(l.val, r.val),
                            isnull,
                        },
                        Term::and([la, ra]),
                    ),
                    BinOpKind::Mul => (
                        SymCol {
                            val: Term::mul(l.val, r.val),
                            isnull,
                        },
                        Term::and([la, ra]),
                    ),
                    BinOpKind::Div | BinOpKind::Mod => {
                        // guarded: when the divisor is zero the result is a
                        // fresh unconstrained value, which is sound and only
                        // weakens provability
                        let sort = if *op == BinOpKind::Div
                            && (l.val.sort() == Sort::Real || r.val.sort() == Sort::Real)
                        {
                            Sort::Real
                        } else {
                            Sort::Int
                        };
                        let out = self.vars.fresh(sort);
                        let zero = Term::int(0);
                        let exact = if *op == BinOpKind::Div {
                            Term::div(l.val.clone(), r.val.clone())
                        } else {
                            Term::modulo(l.val.clone(), r.val.clone())
                        };
                        let guard = Term::implies(
                            Term::not(Term::eq(r.val.clone(), zero)),
                            Term::eq(out.clone(), exact),
                        );
                        (
                            SymCol { val: out, isnull },
                            Term::and([la, ra, guard]),
                        )
                    }
                }
            }
            Expr::Func { name, args } => {
                let mut assigns = Vec::new();
                let mut app_args = Vec::new();
                let mut nulls = Vec::new();
                for a in args {
                    let (col, asg) = self.expr_col(a, t);
                    assigns.push(asg);
                    nulls.push(col.isnull.clone());
                    app_args.push(col.val);
                    app_args.push(col.isnull);
                }
                let symbol = format!("uf_{}_{}", name.to_uppercase(), args.len());
                (
                    SymCol {
                        val: Term::app(&symbol, Sort::Int, app_args),
                        isnull: Term::or(nulls),
                    },
                    Term::and(assigns),
                )
            }
            Expr::Case { branches, else_ } => {
                let mut assigns = Vec::new();
                let mut encoded = Vec::new();
                for (p, e) in branches {
                    let pe = self.const_pred(p, t);
                    assigns.push(pe.assign.clone());
                    let (col, asg) = self.expr_col(e, t);
                    assigns.push(asg);
                    encoded.push((pe.cond(), col));
                }
                let (else_col, else_asg) = self.expr_col(else_, t);
                assigns.push(else_asg);

                let sort = branches_sort(&encoded, &else_col);
                let out_val = self.vars.fresh(sort);
                let out_null = self.vars.fresh(Sort::Bool);
                // nested if-then-else over the branch conditions
                let mut val_chain = else_col.val;
                let mut null_chain = else_col.isnull;
                for (cond, col) in encoded.into_iter().rev() {
                    val_chain = Term::ite(cond.clone(), col.val, val_chain);
                    null_chain = Term::ite(cond, col.isnull, null_chain);
                }
                assigns.push(Term::eq(out_val.clone(), val_chain));
                assigns.push(Term::iff(out_null.clone(), null_chain));
                (
                    SymCol {
                        val: out_val,
                        isnull: out_null,
                    },
                    Term::and(assigns),
                )
            }
        }
    }

    /// Encodes a projection vector: the new symbolic tuple plus collected
    /// auxiliary definitions.
    pub fn const_expr(&mut self, exprs: &[Expr], t: &SymTuple) -> (SymTuple, Term) {
        let mut cols = Vec::with_capacity(exprs.len());
        let mut assigns = Vec::new();
        for e in exprs {
            let (col, asg) = self.expr_col(e, t);
            cols.push(col);
            assigns.push(asg);
        }
        (SymTuple(cols), Term::and(assigns))
    }

    /// Kleene three-valued encoding of a predicate over tuple `t`.
    pub fn const_pred(&mut self, p: &Pred, t: &SymTuple) -> PredEnc {
        match p {
            Pred::True => PredEnc {
                truth: Term::tru(),
                null: Term::fls(),
                assign: Term::tru(),
            },
            Pred::False => PredEnc {
                truth: Term::fls(),
                null: Term::fls(),
                assign: Term::tru(),
            },
            Pred::Cmp { op, lhs, rhs } => {
                let (l, la) = self.expr_col(lhs, t);
                let (r, ra) = self.expr_col(rhs, t);
                let truth = match op {
                    CmpKind::Gt => Term::cmp(CmpOp::Gt, l.val, r.val),
                    CmpKind::Lt => Term::cmp(CmpOp::Lt, l.val, r.val),
                    CmpKind::Le => Term::cmp(CmpOp::Le, l.val, r.val),
                    CmpKind::Ge => Term::cmp(CmpOp::Ge, l.val, r.val),
                    CmpKind::Eq => Term::eq(l.val, r.val),
                };
                PredEnc {
                    truth,
                    null: Term::or([l.isnull, r.isnull]),
                    assign: Term::and([la, ra]),
                }
            }
            Pred::And(a, b) => {
                let x = self.const_pred(a, t);
                let y = self.const_pred(b, t);
                let def_false = |e: &PredEnc| {
                    Term::and([Term::not(e.null.clone()), Term::not(e.truth.clone())])
                };
                PredEnc {
                    truth: Term::and([x.truth.clone(), y.truth.clone()]),
                    null: Term::and([
                        Term::or([x.null.clone(), y.null.clone()]),
                        Term::not(def_false(&x)),
                        Term::not(def_false(&y)),
                    ]),
                    assign: Term::and([x.assign, y.assign]),
                }
            }
            Pred::Or(a, b) => {
                let x = self.const_pred(a, t);
                let y = self.const_pred(b, t);
                let def_true =
                    |e: &PredEnc| Term::and([Term::not(e.null.clone()), e.truth.clone()]);
                PredEnc {
                    truth: Term::or([x.truth.clone(), y.truth.clone()]),
                    null: Term::and([
                        Term::or([x.null.clone(), y.null.clone()]),
                        Term::not(def_true(&x)),
                        Term::not(def_true(&y)),
                    ]),
                    assign: Term::and([x.assign, y.assign]),
                }
            }
            Pred::Not(inner) => {
                let x = self.const_pred(inner, t);
                PredEnc {
                    truth: Term::not(x.truth),
                    null: x.null,
                    assign: x.assign,
                }
            }
            Pred::Isnull(e) => {
                let (col, asg) = self.expr_col(e, t);
                PredEnc {
                    truth: col.isnull,
                    null: Term::fls(),
                    assign: asg,
                }
            }
            Pred::Ufpred { name, args } => {
                let mut assigns = Vec::new();
                let mut app_args = Vec::new();
                for a in args {
                    let (col, asg) = self.expr_col(a, t);
                    assigns.push(asg);
                    app_args.push(col.val);
                    app_args.push(col.isnull);
                }
                let symbol = format!("ufp_{}_{}", name.to_uppercase(), args.len());
                PredEnc {
                    truth: Term::app(&symbol, Sort::Bool, app_args),
                    null: Term::fls(),
                    assign: Term::and(assigns),
                }
            }
            Pred::Notexists { key, left_args, .. } => {
                let mut assigns = Vec::new();
                let mut app_args = Vec::new();
                for a in left_args {
                    let (col, asg) = self.expr_col(a, t);
                    assigns.push(asg);
                    app_args.push(col.val);
                    app_args.push(col.isnull);
                }
                let symbol = format!("ne_{key}");
                PredEnc {
                    truth: Term::app(&symbol, Sort::Bool, app_args),
                    null: Term::fls(),
                    assign: Term::and(assigns),
                }
            }
        }
    }
}

fn branches_sort(encoded: &[(Term, SymCol)], else_col: &SymCol) -> Sort {
    if encoded.iter().any(|(_, c)| c.val.sort() == Sort::Real)
        || else_col.val.sort() == Sort::Real
    {
        Sort::Real
    } else {
        Sort::Int
    }
}

pub fn literal_term(lit: &Literal) -> Term {
    match lit {
        Literal::Int(v) => Term::int(*v),
        Literal::Dec(r) => Term::real(*r),
        Literal::Bool(b) => Term::int(*b as i64),
        Literal::Str(s) => Term::int(intern_code(s)),
    }
}

/// The identity-map obligation: `COND && ASSIGN && !(COLS1 = COLS2)`.
pub fn full_equivalence_formula(q: &Qpsr) -> Term {
    Term::and([
        q.cond.clone(),
        q.assign.clone(),
        Term::not(tuple_eq(&q.cols1, &q.cols2)),
    ])
}

#[derive(Debug)]
pub enum FullEq {
    Proved,
    Refuted,
    Unknown(String),
}

/// Submits the identity-map obligation; `Proved` iff the solver returns
/// unsat.
pub fn check_full_equivalence(
    q: &Qpsr,
    session: &mut SolverSession,
    budget: Option<std::time::Duration>,
) -> Result<FullEq, SolverError> {
    if q.cols1.len() != q.cols2.len() {
        return Ok(FullEq::Refuted);
    }
    match session.check(&full_equivalence_formula(q), budget)? {
        SolverVerdict::Unsat => Ok(FullEq::Proved),
        SolverVerdict::Sat(_) => Ok(FullEq::Refuted),
        SolverVerdict::Unknown(r) => Ok(FullEq::Unknown(r)),
    }
}

/// Test-support evaluation of encoded terms under an explicit variable
/// assignment, interpreting uninterpreted applications with the oracle's
/// hash semantics (arguments come in `(value, is-null)` pairs).
pub fn eval_encoded(t: &Term, env: &HashMap<VarId, SmtValue>) -> Option<SmtValue> {
    use crate::oracle::Value as OValue;
    match t.kind() {
        TermKind::App(name, ret, args) => {
            let mut ovals = Vec::new();
            for pair in args.chunks(2) {
                let v = eval_encoded(&pair[0], env)?;
                let is_null = match eval_encoded(&pair[1], env)? {
                    SmtValue::Bool(b) => b,
                    _ => return None,
                };
                ovals.push(if is_null {
                    OValue::Null
                } else {
                    smt_to_oracle(&v)
                });
            }
            match ret {
                Sort::Bool => Some(SmtValue::Bool(crate::oracle::uf_bool(name, &ovals))),
                _ => Some(SmtValue::Int(
                    (crate::oracle::uf_hash(name, &ovals) % 100) as i64,
                )),
            }
        }
        TermKind::Var(id, sort) => Some(env.get(id).cloned().unwrap_or(match sort {
            Sort::Int => SmtValue::Int(0),
            Sort::Real => SmtValue::Real(bageq_smt::Rational::new(0, 1)),
            Sort::Bool => SmtValue::Bool(false),
        })),
        TermKind::BoolLit(b) => Some(SmtValue::Bool(*b)),
        TermKind::IntLit(v) => Some(SmtValue::Int(*v)),
        TermKind::RealLit(r) => Some(SmtValue::Real(*r)),
        TermKind::Not(x) => match eval_encoded(x, env)? {
            SmtValue::Bool(b) => Some(SmtValue::Bool(!b)),
            _ => None,
        },
        TermKind::And(parts) => {
            // short-circuit, so guarded definitions never divide by zero
            for p in parts {
                match eval_encoded(p, env)? {
                    SmtValue::Bool(false) => return Some(SmtValue::Bool(false)),
                    SmtValue::Bool(true) => {}
                    _ => return None,
                }
            }
            Some(SmtValue::Bool(true))
        }
        TermKind::Or(parts) => {
            for p in parts {
                match eval_encoded(p, env)? {
                    SmtValue::Bool(true) => return Some(SmtValue::Bool(true)),
                    SmtValue::Bool(false) => {}
                    _ => return None,
                }
            }
            Some(SmtValue::Bool(false))
        }
        TermKind::Ite(c, a, b) => match eval_encoded(c, env)? {
            SmtValue::Bool(true) => eval_encoded(a, env),
            SmtValue::Bool(false) => eval_encoded(b, env),
            _ => None,
        },
        TermKind::Add(parts) => {
            let mut acc = bageq_smt::Rational::new(0, 1);
            let mut real = false;
            for p in parts {
                let (r, is_real) = num_of(eval_encoded(p, env)?)?;
                acc += r;
                real |= is_real;
            }
            Some(mk_num(acc, real))
        }
        TermKind::Neg(x) => {
            let (r, real) = num_of(eval_encoded(x, env)?)?;
            Some(mk_num(-r, real))
        }
        TermKind::Mul(a, b) => {
            let (x, rx) = num_of(eval_encoded(a, env)?)?;
            let (y, ry) = num_of(eval_encoded(b, env)?)?;
            Some(mk_num(x * y, rx || ry))
        }
        TermKind::Div(a, b) => {
            let av = eval_encoded(a, env)?;
            let bv = eval_encoded(b, env)?;
            match (&av, &bv) {
                (SmtValue::Int(x), SmtValue::Int(y)) => {
                    if *y == 0 {
                        None
                    } else {
                        Some(SmtValue::Int(x / y))
                    }
                }
                _ => {
                    let (x, _) = num_of(av)?;
                    let (y, _) = num_of(bv)?;
                    if y == bageq_smt::Rational::new(0, 1) {
                        None
                    } else {
                        Some(mk_num(x / y, true))
                    }
                }
            }
        }
        TermKind::Mod(a, b) => {
            let (SmtValue::Int(x), SmtValue::Int(y)) =
                (eval_encoded(a, env)?, eval_encoded(b, env)?)
            else {
                return None;
            };
            if y == 0 {
                None
            } else {
                Some(SmtValue::Int(x % y))
            }
        }
        TermKind::Cmp(op, a, b) => {
            let (x, _) = num_of(eval_encoded(a, env)?)?;
            let (y, _) = num_of(eval_encoded(b, env)?)?;
            Some(SmtValue::Bool(op.eval(x.cmp(&y))))
        }
        TermKind::Eq(a, b) => {
            if a.sort() == Sort::Bool {
                match (eval_encoded(a, env)?, eval_encoded(b, env)?) {
                    (SmtValue::Bool(x), SmtValue::Bool(y)) => Some(SmtValue::Bool(x == y)),
                    _ => None,
                }
            } else {
                let (x, _) = num_of(eval_encoded(a, env)?)?;
                let (y, _) = num_of(eval_encoded(b, env)?)?;
                Some(SmtValue::Bool(x == y))
            }
        }
    }
}

fn smt_to_oracle(v: &SmtValue) -> crate::oracle::Value {
    match v {
        SmtValue::Int(i) => crate::oracle::Value::Int(*i),
        SmtValue::Real(r) => crate::oracle::Value::dec(*r),
        SmtValue::Bool(b) => crate::oracle::Value::bool_val(*b),
    }
}

fn num_of(v: SmtValue) -> Option<(bageq_smt::Rational, bool)> {
    match v {
        SmtValue::Int(i) => Some((bageq_smt::Rational::from_integer(i), false)),
        SmtValue::Real(r) => Some((r, true)),
        SmtValue::Bool(_) => None,
    }
}

fn mk_num(r: bageq_smt::Rational, real: bool) -> SmtValue {
    if !real && r.is_integer() {
        SmtValue::Int(r.to_integer())
    } else {
        SmtValue::Real(r)
    }
}

/// Extends `env` with values for auxiliary variables defined in `assign`
/// (CASE outputs and guarded division results), in definition order.
pub fn bind_assign(assign: &Term, env: &mut HashMap<VarId, SmtValue>) {
    let conjuncts: Vec<&Term> = match assign.kind() {
        TermKind::And(parts) => parts.iter().collect(),
        _ => vec![assign],
    };
    for c in conjuncts {
        match c.kind() {
            TermKind::Eq(lhs, rhs) => {
                if let TermKind::Var(id, _) = lhs.kind() {
                    if !env.contains_key(id) {
                        if let Some(v) = eval_encoded(rhs, env) {
                            env.insert(*id, v);
                        }
                    }
                }
            }
            TermKind::Or(parts) if parts.len() == 2 => {
                // guarded definition: (not guard) or (var = rhs)
                if let (TermKind::Not(guard), TermKind::Eq(lhs, rhs)) =
                    (parts[0].kind(), parts[1].kind())
                {
                    if eval_encoded(guard, env) == Some(SmtValue::Bool(false)) {
                        if let TermKind::Var(id, _) = lhs.kind() {
                            if !env.contains_key(id) {
                                if let Some(v) = eval_encoded(rhs, env) {
                                    env.insert(*id, v);
                                }
                            }
                        }
                    }
                }
            }
            TermKind::And(_) => bind_assign(c, env),
            _ => {}
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use bageq_smt::SolverConfig;

    use crate::catalog::load_catalog;
    use crate::ir::CmpKind;

    fn emp_tuple(enc: &mut Encoder) -> SymTuple {
        let cat = load_catalog(crate::catalog::tests::EMP_DEPT).unwrap();
        enc.table_tuple(cat.resolve("EMP").unwrap())
    }

    #[test]
    fn fresh_tuple_pins_non_nullable_flags() {
        let mut enc = Encoder::new();
        let t = emp_tuple(&mut enc);
        assert_eq!(t.len(), 4);
        // EMP_ID is the primary key: non-nullable
        assert!(t.0[0].isnull.is_false());
        assert!(!t.0[1].isnull.is_false());
        // two calls yield disjoint variables
        let t2 = emp_tuple(&mut enc);
        let mut v1 = Default::default();
        let mut v2 = Default::default();
        t.collect_vars(&mut v1);
        t2.collect_vars(&mut v2);
        assert!(v1.keys().all(|k| !v2.contains_key(k)));
    }

    #[test]
    fn fresh_tuple_arity_zero() {
        let mut enc = Encoder::new();
        let t = enc.fresh_tuple(&[], &[]);
        assert!(t.is_empty());
    }

    #[test]
    fn cond_of_simple_comparison() {
        // DEPT_ID > 10 on the EMP tuple: truth is (v > 10), null is n3
        let mut enc = Encoder::new();
        let t = emp_tuple(&mut enc);
        let p = Pred::Cmp {
            op: CmpKind::Gt,
            lhs: Box::new(Expr::Column(2)),
            rhs: Box::new(Expr::Const(Literal::Int(10))),
        };
        let e = enc.const_pred(&p, &t);
        assert_eq!(e.null, t.0[2].isnull);
        let mut env = HashMap::new();
        let mut vars = Default::default();
        t.collect_vars(&mut vars);
        // bind DEPT_ID = 12, non-null: condition holds
        if let TermKind::Var(id, _) = t.0[2].val.kind() {
            env.insert(*id, SmtValue::Int(12));
        }
        if let TermKind::Var(id, _) = t.0[2].isnull.kind() {
            env.insert(*id, SmtValue::Bool(false));
        }
        assert_eq!(eval_encoded(&e.cond(), &env), Some(SmtValue::Bool(true)));
    }

    #[test]
    fn isnull_encoding_is_two_valued() {
        let mut enc = Encoder::new();
        let t = emp_tuple(&mut enc);
        let e = enc.const_pred(&Pred::Isnull(Box::new(Expr::Column(2))), &t);
        assert_eq!(e.truth, t.0[2].isnull);
        assert!(e.null.is_false());
    }

    #[test]
    fn projection_of_columns_is_identity() {
        let mut enc = Encoder::new();
        let t = emp_tuple(&mut enc);
        let (out, assign) = enc.const_expr(&[Expr::Column(2), Expr::Column(3)], &t);
        assert_eq!(out.len(), 2);
        assert_eq!(out.0[0].val, t.0[2].val);
        assert_eq!(out.0[1].val, t.0[3].val);
        assert!(assign.is_true());
    }

    #[test]
    fn const_seven_is_non_null() {
        let mut enc = Encoder::new();
        let t = SymTuple::default();
        let (out, _) = enc.const_expr(&[Expr::Const(Literal::Int(7))], &t);
        assert_eq!(out.0[0].val, Term::int(7));
        assert!(out.0[0].isnull.is_false());
    }

    #[test]
    fn case_assignment_evaluates_by_branch() {
        // CASE WHEN c > 0 THEN 1 ELSE 2, with c = 5: assigned value is 1
        let mut enc = Encoder::new();
        let t = enc.fresh_tuple(&[ColType::Int], &[false]);
        let case = Expr::Case {
            branches: vec![(
                Pred::Cmp {
                    op: CmpKind::Gt,
                    lhs: Box::new(Expr::Column(0)),
                    rhs: Box::new(Expr::Const(Literal::Int(0))),
                },
                Expr::Const(Literal::Int(1)),
            )],
            else_: Box::new(Expr::Const(Literal::Int(2))),
        };
        let (out, assign) = enc.const_expr(&[case], &t);
        let mut env = HashMap::new();
        if let TermKind::Var(id, _) = t.0[0].val.kind() {
            env.insert(*id, SmtValue::Int(5));
        }
        bind_assign(&assign, &mut env);
        assert_eq!(eval_encoded(&out.0[0].val, &env), Some(SmtValue::Int(1)));
        // and with c = -1 the else branch fires
        let mut env = HashMap::new();
        if let TermKind::Var(id, _) = t.0[0].val.kind() {
            env.insert(*id, SmtValue::Int(-1));
        }
        bind_assign(&assign, &mut env);
        assert_eq!(eval_encoded(&out.0[0].val, &env), Some(SmtValue::Int(2)));
    }

    #[test]
    fn tuple_equality_treats_two_nulls_as_equal() {
        let mut session = SolverSession::new(SolverConfig::default(), "t");
        let mut enc = Encoder::new();
        // two columns, both forced NULL with different value terms
        let a = SymCol {
            val: enc.vars.fresh(Sort::Int),
            isnull: Term::tru(),
        };
        let b = SymCol {
            val: enc.vars.fresh(Sort::Int),
            isnull: Term::tru(),
        };
        let f = Term::not(pair_eq(&a, &b));
        assert!(matches!(
            session.check(&f, None).unwrap(),
            SolverVerdict::Unsat
        ));
        // NULL != any non-null value
        let c = SymCol {
            val: Term::int(3),
            isnull: Term::fls(),
        };
        let g = pair_eq(&a, &c);
        assert!(matches!(
            session.check(&g, None).unwrap(),
            SolverVerdict::Unsat
        ));
    }

    #[test]
    fn full_equivalence_identity_and_shift() {
        let mut session = SolverSession::new(SolverConfig::default(), "t");
        let mut enc = Encoder::new();
        let t = enc.fresh_tuple(&[ColType::Int], &[true]);
        // identical tuples: proved
        let q = Qpsr {
            cols1: t.clone(),
            cols2: t.clone(),
            cond: Term::tru(),
            assign: Term::tru(),
        };
        assert!(matches!(
            check_full_equivalence(&q, &mut session, None).unwrap(),
            FullEq::Proved
        ));
        // v vs v+1 under cond true: refuted with a witness
        let shifted = SymTuple(vec![SymCol {
            val: Term::add([t.0[0].val.clone(), Term::int(1)]),
            isnull: t.0[0].isnull.clone(),
        }]);
        let q = Qpsr {
            cols1: t.clone(),
            cols2: shifted,
            cond: Term::tru(),
            assign: Term::tru(),
        };
        assert!(matches!(
            check_full_equivalence(&q, &mut session, None).unwrap(),
            FullEq::Refuted
        ));
    }

    #[test]
    fn refreshed_qpsr_uses_disjoint_variables() {
        let mut enc = Encoder::new();
        let t = emp_tuple(&mut enc);
        let q = Qpsr {
            cols1: t.clone(),
            cols2: t,
            cond: Term::tru(),
            assign: Term::tru(),
        };
        let r = q.refreshed(&mut enc.vars);
        let orig = q.collect_vars();
        let fresh = r.collect_vars();
        assert!(orig.keys().all(|k| !fresh.contains_key(k)));
        assert_eq!(orig.len(), fresh.len());
    }
}
