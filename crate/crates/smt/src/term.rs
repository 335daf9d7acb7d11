//! First-order terms over integers, reals, and booleans, with uninterpreted
//! functions. Terms are immutable reference-counted trees; equality and
//! hashing are structural.

use std::fmt;
use std::rc::Rc;

use num::rational::Ratio;

/// Exact rational literal carrier.
pub type Rational = Ratio<i64>;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum Sort {
    Int,
    Real,
    Bool,
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sort::Int => write!(f, "Int"),
            Sort::Real => write!(f, "Real"),
            Sort::Bool => write!(f, "Bool"),
        }
    }
}

/// Identifier of a symbolic variable. Allocation is task-local via [`VarGen`].
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct VarId(pub u32);

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}", self.0)
    }
}

/// Task-local fresh-variable counter.
#[derive(Debug, Default)]
pub struct VarGen {
    next: u32,
}

impl VarGen {
    pub fn new() -> Self {
        VarGen { next: 0 }
    }

    /// Generator whose ids start at `first`, for allocating disjointly from
    /// an existing variable population.
    pub fn starting_at(first: u32) -> Self {
        VarGen { next: first }
    }

    pub fn fresh(&mut self, sort: Sort) -> Term {
        let id = VarId(self.next);
        self.next += 1;
        Term::var(id, sort)
    }

    /// Number of variables allocated so far.
    pub fn allocated(&self) -> u32 {
        self.next
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum CmpOp {
    Lt,
    Le,
    Gt,
    Ge,
}

impl CmpOp {
    pub fn flip(self) -> CmpOp {
        match self {
            CmpOp::Lt => CmpOp::Gt,
            CmpOp::Le => CmpOp::Ge,
            CmpOp::Gt => CmpOp::Lt,
            CmpOp::Ge => CmpOp::Le,
        }
    }

    /// The comparison that holds exactly when `self` does not.
    pub fn negate(self) -> CmpOp {
        match self {
            CmpOp::Lt => CmpOp::Ge,
            CmpOp::Le => CmpOp::Gt,
            CmpOp::Gt => CmpOp::Le,
            CmpOp::Ge => CmpOp::Lt,
        }
    }

    pub fn eval(self, ord: std::cmp::Ordering) -> bool {
        use std::cmp::Ordering::*;
        match self {
            CmpOp::Lt => ord == Less,
            CmpOp::Le => ord != Greater,
            CmpOp::Gt => ord == Greater,
            CmpOp::Ge => ord != Less,
        }
    }
}

impl fmt::Display for CmpOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CmpOp::Lt => write!(f, "<"),
            CmpOp::Le => write!(f, "<="),
            CmpOp::Gt => write!(f, ">"),
            CmpOp::Ge => write!(f, ">="),
        }
    }
}

#[derive(PartialEq, Eq, Hash, Debug)]
pub enum TermKind {
    BoolLit(bool),
    IntLit(i64),
    RealLit(Rational),
    Var(VarId, Sort),
    Not(Term),
    And(Vec<Term>),
    Or(Vec<Term>),
    /// If-then-else; branches share a sort, which is the node's sort.
    Ite(Term, Term, Term),
    Add(Vec<Term>),
    Neg(Term),
    Mul(Term, Term),
    Div(Term, Term),
    Mod(Term, Term),
    Cmp(CmpOp, Term, Term),
    /// Equality over numerics, iff over booleans.
    Eq(Term, Term),
    /// Uninterpreted function application with explicit result sort.
    App(Rc<str>, Sort, Vec<Term>),
}

/// An immutable, structurally-compared term.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Term(Rc<TermKind>);

impl Term {
    pub fn kind(&self) -> &TermKind {
        &self.0
    }

    fn new(kind: TermKind) -> Term {
        Term(Rc::new(kind))
    }

    pub fn tru() -> Term {
        Term::new(TermKind::BoolLit(true))
    }

    pub fn fls() -> Term {
        Term::new(TermKind::BoolLit(false))
    }

    pub fn bool_lit(b: bool) -> Term {
        Term::new(TermKind::BoolLit(b))
    }

    pub fn int(v: i64) -> Term {
        Term::new(TermKind::IntLit(v))
    }

    pub fn real(v: Rational) -> Term {
        Term::new(TermKind::RealLit(v))
    }

    pub fn var(id: VarId, sort: Sort) -> Term {
        Term::new(TermKind::Var(id, sort))
    }

    pub fn app(name: &str, ret: Sort, args: Vec<Term>) -> Term {
        Term::new(TermKind::App(Rc::from(name), ret, args))
    }

    pub fn not(t: Term) -> Term {
        match t.kind() {
            TermKind::BoolLit(b) => Term::bool_lit(!b),
            TermKind::Not(inner) => inner.clone(),
            _ => Term::new(TermKind::Not(t)),
        }
    }

    pub fn and(parts: impl IntoIterator<Item = Term>) -> Term {
        let mut flat = Vec::new();
        for p in parts {
            match p.kind() {
                TermKind::BoolLit(true) => {}
                TermKind::BoolLit(false) => return Term::fls(),
                TermKind::And(inner) => flat.extend(inner.iter().cloned()),
                _ => flat.push(p),
            }
        }
        match flat.len() {
            0 => Term::tru(),
            1 => flat.pop().unwrap(),
            _ => Term::new(TermKind::And(flat)),
        }
    }

    pub fn or(parts: impl IntoIterator<Item = Term>) -> Term {
        let mut flat = Vec::new();
        for p in parts {
            match p.kind() {
                TermKind::BoolLit(false) => {}
                TermKind::BoolLit(true) => return Term::tru(),
                TermKind::Or(inner) => flat.extend(inner.iter().cloned()),
                _ => flat.push(p),
            }
        }
        match flat.len() {
            0 => Term::fls(),
            1 => flat.pop().unwrap(),
            _ => Term::new(TermKind::Or(flat)),
        }
    }

    pub fn implies(a: Term, b: Term) -> Term {
        Term::or([Term::not(a), b])
    }

    pub fn ite(c: Term, t: Term, e: Term) -> Term {
        match c.kind() {
            TermKind::BoolLit(true) => t,
            TermKind::BoolLit(false) => e,
            _ if t == e => t,
            _ => Term::new(TermKind::Ite(c, t, e)),
        }
    }

    pub fn add(parts: impl IntoIterator<Item = Term>) -> Term {
        let mut flat = Vec::new();
        for p in parts {
            match p.kind() {
                TermKind::Add(inner) => flat.extend(inner.iter().cloned()),
                TermKind::IntLit(0) => {}
                _ => flat.push(p),
            }
        }
        match flat.len() {
            0 => Term::int(0),
            1 => flat.pop().unwrap(),
            _ => Term::new(TermKind::Add(flat)),
        }
    }

    pub fn neg(t: Term) -> Term {
        match t.kind() {
            TermKind::IntLit(v) => Term::int(-v),
            TermKind::RealLit(v) => Term::real(-v),
            TermKind::Neg(inner) => inner.clone(),
            _ => Term::new(TermKind::Neg(t)),
        }
    }

    pub fn sub(a: Term, b: Term) -> Term {
        Term::add([a, Term::neg(b)])
    }

    pub fn mul(a: Term, b: Term) -> Term {
        if let (TermKind::IntLit(x), TermKind::IntLit(y)) = (a.kind(), b.kind()) {
            if let Some(v) = x.checked_mul(*y) {
                return Term::int(v);
            }
        }
        Term::new(TermKind::Mul(a, b))
    }

    pub fn div(a: Term, b: Term) -> Term {
        Term::new(TermKind::Div(a, b))
    }

    pub fn modulo(a: Term, b: Term) -> Term {
        Term::new(TermKind::Mod(a, b))
    }

    pub fn cmp(op: CmpOp, a: Term, b: Term) -> Term {
        if let (Some(x), Some(y)) = (a.as_rational(), b.as_rational()) {
            return Term::bool_lit(op.eval(x.cmp(&y)));
        }
        Term::new(TermKind::Cmp(op, a, b))
    }

    pub fn eq(a: Term, b: Term) -> Term {
        if a == b {
            return Term::tru();
        }
        if let (Some(x), Some(y)) = (a.as_rational(), b.as_rational()) {
            return Term::bool_lit(x == y);
        }
        if let (TermKind::BoolLit(x), TermKind::BoolLit(y)) = (a.kind(), b.kind()) {
            return Term::bool_lit(x == y);
        }
        Term::new(TermKind::Eq(a, b))
    }

    pub fn iff(a: Term, b: Term) -> Term {
        Term::eq(a, b)
    }

    fn as_rational(&self) -> Option<Rational> {
        match self.kind() {
            TermKind::IntLit(v) => Some(Rational::from_integer(*v)),
            TermKind::RealLit(v) => Some(*v),
            _ => None,
        }
    }

    pub fn sort(&self) -> Sort {
        match self.kind() {
            TermKind::BoolLit(_) => Sort::Bool,
            TermKind::IntLit(_) => Sort::Int,
            TermKind::RealLit(_) => Sort::Real,
            TermKind::Var(_, s) => *s,
            TermKind::Not(_) | TermKind::And(_) | TermKind::Or(_) => Sort::Bool,
            TermKind::Ite(_, t, _) => t.sort(),
            TermKind::Add(parts) => {
                if parts.iter().any(|p| p.sort() == Sort::Real) {
                    Sort::Real
                } else {
                    Sort::Int
                }
            }
            TermKind::Neg(t) => t.sort(),
            TermKind::Mul(a, b) | TermKind::Div(a, b) => {
                if a.sort() == Sort::Real || b.sort() == Sort::Real {
                    Sort::Real
                } else {
                    Sort::Int
                }
            }
            TermKind::Mod(_, _) => Sort::Int,
            TermKind::Cmp(_, _, _) | TermKind::Eq(_, _) => Sort::Bool,
            TermKind::App(_, s, _) => *s,
        }
    }

    /// Collects free variables (with sorts) into `out`, deduplicated by id.
    pub fn collect_vars(&self, out: &mut std::collections::BTreeMap<VarId, Sort>) {
        match self.kind() {
            TermKind::Var(id, sort) => {
                out.insert(*id, *sort);
            }
            TermKind::BoolLit(_) | TermKind::IntLit(_) | TermKind::RealLit(_) => {}
            TermKind::Not(t) | TermKind::Neg(t) => t.collect_vars(out),
            TermKind::And(parts) | TermKind::Or(parts) | TermKind::Add(parts) => {
                for p in parts {
                    p.collect_vars(out);
                }
            }
            TermKind::Ite(c, t, e) => {
                c.collect_vars(out);
                t.collect_vars(out);
                e.collect_vars(out);
            }
            TermKind::Mul(a, b)
            | TermKind::Div(a, b)
            | TermKind::Mod(a, b)
            | TermKind::Cmp(_, a, b)
            | TermKind::Eq(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            TermKind::App(_, _, args) => {
                for a in args {
                    a.collect_vars(out);
                }
            }
        }
    }

    /// Collects uninterpreted function signatures `(name, ret, arg sorts)`.
    pub fn collect_apps(&self, out: &mut std::collections::BTreeMap<String, (Sort, Vec<Sort>)>) {
        match self.kind() {
            TermKind::App(name, ret, args) => {
                out.entry(name.to_string())
                    .or_insert_with(|| (*ret, args.iter().map(|a| a.sort()).collect()));
                for a in args {
                    a.collect_apps(out);
                }
            }
            TermKind::Var(_, _)
            | TermKind::BoolLit(_)
            | TermKind::IntLit(_)
            | TermKind::RealLit(_) => {}
            TermKind::Not(t) | TermKind::Neg(t) => t.collect_apps(out),
            TermKind::And(parts) | TermKind::Or(parts) | TermKind::Add(parts) => {
                for p in parts {
                    p.collect_apps(out);
                }
            }
            TermKind::Ite(c, t, e) => {
                c.collect_apps(out);
                t.collect_apps(out);
                e.collect_apps(out);
            }
            TermKind::Mul(a, b)
            | TermKind::Div(a, b)
            | TermKind::Mod(a, b)
            | TermKind::Cmp(_, a, b)
            | TermKind::Eq(a, b) => {
                a.collect_apps(out);
                b.collect_apps(out);
            }
        }
    }

    /// Renames variables per `map`, leaving unmapped variables untouched.
    pub fn rename_vars(&self, map: &std::collections::HashMap<VarId, Term>) -> Term {
        match self.kind() {
            TermKind::Var(id, _) => map.get(id).cloned().unwrap_or_else(|| self.clone()),
            TermKind::BoolLit(_) | TermKind::IntLit(_) | TermKind::RealLit(_) => self.clone(),
            TermKind::Not(t) => Term::not(t.rename_vars(map)),
            TermKind::Neg(t) => Term::neg(t.rename_vars(map)),
            TermKind::And(parts) => Term::and(parts.iter().map(|p| p.rename_vars(map))),
            TermKind::Or(parts) => Term::or(parts.iter().map(|p| p.rename_vars(map))),
            TermKind::Add(parts) => Term::add(parts.iter().map(|p| p.rename_vars(map))),
            TermKind::Ite(c, t, e) => Term::ite(
                c.rename_vars(map),
                t.rename_vars(map),
                e.rename_vars(map),
            ),
            TermKind::Mul(a, b) => Term::mul(a.rename_vars(map), b.rename_vars(map)),
            TermKind::Div(a, b) => Term::div(a.rename_vars(map), b.rename_vars(map)),
            TermKind::Mod(a, b) => Term::modulo(a.rename_vars(map), b.rename_vars(map)),
            TermKind::Cmp(op, a, b) => Term::cmp(*op, a.rename_vars(map), b.rename_vars(map)),
            TermKind::Eq(a, b) => Term::eq(a.rename_vars(map), b.rename_vars(map)),
            TermKind::App(name, ret, args) => Term::app(
                name,
                *ret,
                args.iter().map(|a| a.rename_vars(map)).collect(),
            ),
        }
    }

    pub fn is_true(&self) -> bool {
        matches!(self.kind(), TermKind::BoolLit(true))
    }

    pub fn is_false(&self) -> bool {
        matches!(self.kind(), TermKind::BoolLit(false))
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::script::term_to_smtlib(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builders_fold_constants() {
        assert!(Term::and([Term::tru(), Term::tru()]).is_true());
        assert!(Term::and([Term::tru(), Term::fls()]).is_false());
        assert!(Term::or([Term::fls(), Term::tru()]).is_true());
        assert!(Term::not(Term::fls()).is_true());
        assert_eq!(Term::cmp(CmpOp::Gt, Term::int(7), Term::int(3)), Term::tru());
        assert_eq!(Term::eq(Term::int(4), Term::int(5)), Term::fls());
    }

    #[test]
    fn and_flattens_nested() {
        let a = Term::var(VarId(0), Sort::Bool);
        let b = Term::var(VarId(1), Sort::Bool);
        let c = Term::var(VarId(2), Sort::Bool);
        let t = Term::and([Term::and([a.clone(), b.clone()]), c.clone()]);
        match t.kind() {
            TermKind::And(parts) => assert_eq!(parts.len(), 3),
            other => panic!("expected And, got {other:?}"),
        }
    }

    #[test]
    fn eq_on_identical_terms_is_true() {
        let x = Term::var(VarId(3), Sort::Int);
        assert!(Term::eq(x.clone(), x).is_true());
    }

    #[test]
    fn sort_inference() {
        let x = Term::var(VarId(0), Sort::Int);
        let r = Term::var(VarId(1), Sort::Real);
        assert_eq!(Term::add([x.clone(), Term::int(1)]).sort(), Sort::Int);
        assert_eq!(Term::add([x.clone(), r]).sort(), Sort::Real);
        assert_eq!(Term::cmp(CmpOp::Lt, x.clone(), Term::int(2)).sort(), Sort::Bool);
    }
}
