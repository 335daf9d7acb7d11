//! Reference interpreter: bag-semantics evaluation of query trees with SQL
//! three-valued logic. This is the executable ground truth that every
//! soundness and preservation test compares against.

use std::collections::BTreeMap;

use num::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::catalog::{Catalog, SqlType, TableSchema};
use crate::ir::{intern_code, AggKind, BinOpKind, CmpKind, Expr, Literal, Pred, QueryNode, Rational};

/// A concrete cell value. Values are kept canonical: booleans are stored as
/// 0/1 integers and integral rationals collapse to `Int`, so bag equality is
/// plain structural equality and always agrees with the solver's view.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Value {
    Int(i64),
    Dec(#[serde(with = "dec_serde")] Rational),
    Bool(bool),
    Str(i64),
    Null,
}

mod dec_serde {
    use super::Rational;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        (*r.numer(), *r.denom()).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let (n, den): (i64, i64) = Deserialize::deserialize(d)?;
        if den == 0 {
            return Err(serde::de::Error::custom("zero denominator"));
        }
        Ok(Rational::new(n, den))
    }
}

impl Value {
    pub fn int(v: i64) -> Value {
        Value::Int(v)
    }

    pub fn dec(r: Rational) -> Value {
        if r.is_integer() {
            Value::Int(r.to_integer())
        } else {
            Value::Dec(r)
        }
    }

    pub fn bool_val(b: bool) -> Value {
        Value::Int(b as i64)
    }

    pub fn str_code(code: i64) -> Value {
        Value::Str(code)
    }

    pub fn is_null(&self) -> bool {
        matches!(self, Value::Null)
    }

    /// Canonical form: `Bool` becomes 0/1, integral `Dec` becomes `Int`.
    pub fn canonical(self) -> Value {
        match self {
            Value::Bool(b) => Value::Int(b as i64),
            Value::Dec(r) => Value::dec(r),
            other => other,
        }
    }

    fn as_rational(&self) -> Option<Rational> {
        match self {
            Value::Int(v) => Some(Rational::from_integer(*v)),
            Value::Dec(r) => Some(*r),
            Value::Str(c) => Some(Rational::from_integer(*c)),
            Value::Bool(b) => Some(Rational::from_integer(*b as i64)),
            Value::Null => None,
        }
    }

    /// Total order used by MIN/MAX and comparisons; `None` when either side
    /// is NULL.
    pub fn compare(&self, other: &Value) -> Option<std::cmp::Ordering> {
        let a = self.as_rational()?;
        let b = other.as_rational()?;
        Some(a.cmp(&b))
    }
}

pub type Row = Vec<Value>;

/// Multiset of rows.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Bag {
    counts: BTreeMap<Row, u64>,
}

impl Bag {
    pub fn from_rows(rows: impl IntoIterator<Item = Row>) -> Bag {
        let mut counts = BTreeMap::new();
        for row in rows {
            *counts.entry(row).or_insert(0) += 1;
        }
        Bag { counts }
    }

    pub fn len(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn distinct_rows(&self) -> impl Iterator<Item = (&Row, u64)> {
        self.counts.iter().map(|(r, c)| (r, *c))
    }
}

/// Multiset equality; rows compare valuewise with NULL = NULL.
pub fn bag_equal(a: &Bag, b: &Bag) -> bool {
    a == b
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct Database {
    pub tables: BTreeMap<String, Vec<Row>>,
}

#[derive(Debug, thiserror::Error)]
pub enum EvalError {
    #[error("unknown table {0}")]
    UnknownTable(String),
    #[error("row arity mismatch in table {0}")]
    RowArity(String),
    #[error("column index {0} out of range")]
    ColumnRange(usize),
    #[error("database parse error: {0}")]
    Parse(String),
}

impl Database {
    /// Parses the database document format: table name -> array of rows.
    pub fn load(source: &str, catalog: &Catalog) -> Result<Database, EvalError> {
        #[derive(Deserialize)]
        struct Raw {
            tables: BTreeMap<String, Vec<Vec<serde_json::Value>>>,
        }
        let raw: Raw = serde_json::from_str(source).map_err(|e| EvalError::Parse(e.to_string()))?;
        let mut db = Database::default();
        for (name, rows) in raw.tables {
            let name = name.to_uppercase();
            let schema = catalog
                .resolve(&name)
                .map_err(|_| EvalError::UnknownTable(name.clone()))?;
            let mut out = Vec::new();
            for row in rows {
                if row.len() != schema.arity() {
                    return Err(EvalError::RowArity(name.clone()));
                }
                let mut cells = Vec::with_capacity(row.len());
                for (cell, col) in row.into_iter().zip(&schema.columns) {
                    cells.push(json_to_value(cell, col.sqltype)?);
                }
                out.push(cells);
            }
            db.tables.insert(name, out);
        }
        Ok(db)
    }
}

fn json_to_value(v: serde_json::Value, ty: SqlType) -> Result<Value, EvalError> {
    use serde_json::Value as J;
    Ok(match (v, ty) {
        (J::Null, _) => Value::Null,
        (J::Bool(b), _) => Value::bool_val(b),
        (J::Number(n), SqlType::Decimal) => {
            if let Some(i) = n.as_i64() {
                Value::Int(i)
            } else {
                let f = n.as_f64().unwrap_or(0.0);
                Value::dec(Rational::approximate_float(f).unwrap_or_else(|| Rational::zero()))
            }
        }
        (J::Number(n), _) => Value::Int(
            n.as_i64()
                .ok_or_else(|| EvalError::Parse(format!("non-integer cell {n}")))?,
        ),
        (J::String(s), _) => Value::str_code(intern_code(&s)),
        (other, _) => return Err(EvalError::Parse(format!("unsupported cell {other}"))),
    })
}

/// Three-valued logic truth value.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Tvl {
    True,
    False,
    Unknown,
}

impl Tvl {
    fn from_bool(b: bool) -> Tvl {
        if b {
            Tvl::True
        } else {
            Tvl::False
        }
    }

    fn and(self, other: Tvl) -> Tvl {
        match (self, other) {
            (Tvl::False, _) | (_, Tvl::False) => Tvl::False,
            (Tvl::True, Tvl::True) => Tvl::True,
            _ => Tvl::Unknown,
        }
    }

    fn or(self, other: Tvl) -> Tvl {
        match (self, other) {
            (Tvl::True, _) | (_, Tvl::True) => Tvl::True,
            (Tvl::False, Tvl::False) => Tvl::False,
            _ => Tvl::Unknown,
        }
    }

    fn not(self) -> Tvl {
        match self {
            Tvl::True => Tvl::False,
            Tvl::False => Tvl::True,
            Tvl::Unknown => Tvl::Unknown,
        }
    }
}

/// Deterministic hash interpretation for uninterpreted symbols: a function of
/// the symbol name and canonical argument values only, so both queries (and
/// the solver's functional-consistency view) agree on repeated applications.
pub fn uf_hash(symbol: &str, args: &[Value]) -> u64 {
    let mut hasher = Sha256::new();
    hasher.update(symbol.as_bytes());
    for a in args {
        hasher.update(b"/");
        match a {
            Value::Null => hasher.update(b"n"),
            Value::Int(v) => {
                hasher.update(b"i");
                hasher.update(v.to_le_bytes());
            }
            Value::Dec(r) => {
                hasher.update(b"d");
                hasher.update(r.numer().to_le_bytes());
                hasher.update(r.denom().to_le_bytes());
            }
            Value::Str(c) => {
                hasher.update(b"s");
                hasher.update(c.to_le_bytes());
            }
            Value::Bool(b) => {
                hasher.update(b"i");
                hasher.update((*b as i64).to_le_bytes());
            }
        }
    }
    let digest = hasher.finalize();
    u64::from_le_bytes(digest[..8].try_into().expect("8 bytes"))
}

pub fn uf_value(symbol: &str, args: &[Value]) -> Value {
    if args.iter().any(Value::is_null) {
        return Value::Null;
    }
    Value::Int((uf_hash(symbol, args) % 100) as i64)
}

pub fn uf_bool(symbol: &str, args: &[Value]) -> bool {
    uf_hash(symbol, args) % 2 == 0
}

pub struct Interp<'a> {
    pub catalog: &'a Catalog,
    pub db: &'a Database,
}

impl<'a> Interp<'a> {
    pub fn new(catalog: &'a Catalog, db: &'a Database) -> Self {
        Interp { catalog, db }
    }

    pub fn eval_expr(&self, e: &Expr, row: &[Value]) -> Result<Value, EvalError> {
        Ok(match e {
            Expr::Column(i) => row
                .get(*i)
                .cloned()
                .ok_or(EvalError::ColumnRange(*i))?,
            Expr::Const(Literal::Int(v)) => Value::Int(*v),
            Expr::Const(Literal::Dec(r)) => Value::dec(*r),
            Expr::Const(Literal::Bool(b)) => Value::bool_val(*b),
            Expr::Const(Literal::Str(s)) => Value::str_code(intern_code(s)),
            Expr::Null => Value::Null,
            Expr::Binop { op, lhs, rhs } => {
                let a = self.eval_expr(lhs, row)?;
                let b = self.eval_expr(rhs, row)?;
                eval_binop(*op, &a, &b)
            }
            Expr::Func { name, args } => {
                let mut vals = Vec::with_capacity(args.len());
                for a in args {
                    vals.push(self.eval_expr(a, row)?);
                }
                uf_value(&format!("uf_{}_{}", name.to_uppercase(), args.len()), &vals)
            }
            Expr::Case { branches, else_ } => {
                for (p, e) in branches {
                    if self.eval_pred(p, row)? == Tvl::True {
                        return self.eval_expr(e, row);
                    }
                }
                self.eval_expr(else_, row)?
            }
        })
    }

    pub fn eval_pred(&self, p: &Pred, row: &[Value]) -> Result<Tvl, EvalError> {
        Ok(match p {
            Pred::True => Tvl::True,
            Pred::False => Tvl::False,
            Pred::Cmp { op, lhs, rhs } => {
                let a = self.eval_expr(lhs, row)?;
                let b = self.eval_expr(rhs, row)?;
                match a.compare(&b) {
                    None => Tvl::Unknown,
                    Some(ord) => Tvl::from_bool(match op {
                        CmpKind::Gt => ord.is_gt(),
                        CmpKind::Lt => ord.is_lt(),
                        CmpKind::Eq => ord.is_eq(),
                        CmpKind::Le => ord.is_le(),
                        CmpKind::Ge => ord.is_ge(),
                    }),
                }
            }
            Pred::And(a, b) => self.eval_pred(a, row)?.and(self.eval_pred(b, row)?),
            Pred::Or(a, b) => self.eval_pred(a, row)?.or(self.eval_pred(b, row)?),
            Pred::Not(p) => self.eval_pred(p, row)?.not(),
            Pred::Isnull(e) => Tvl::from_bool(self.eval_expr(e, row)?.is_null()),
            Pred::Ufpred { name, args } => {
                let mut vals = Vec::with_capacity(args.len());
                for a in args {
                    vals.push(self.eval_expr(a, row)?);
                }
                Tvl::from_bool(uf_bool(
                    &format!("ufp_{}_{}", name.to_uppercase(), args.len()),
                    &vals,
                ))
            }
            Pred::Notexists {
                right,
                on,
                left_args,
                ..
            } => {
                let mut outer = Vec::with_capacity(left_args.len());
                for a in left_args {
                    outer.push(self.eval_expr(a, row)?);
                }
                let right_rows = self.eval_query(right)?;
                let mut found = false;
                for r in &right_rows {
                    let mut combined = outer.clone();
                    combined.extend(r.iter().cloned());
                    if self.eval_pred(on, &combined)? == Tvl::True {
                        found = true;
                        break;
                    }
                }
                Tvl::from_bool(!found)
            }
        })
    }

    /// Evaluates a query to its output rows (explicit duplicates).
    pub fn eval_query(&self, n: &QueryNode) -> Result<Vec<Row>, EvalError> {
        match n {
            QueryNode::Table(name) => {
                let name = name.to_uppercase();
                match self.db.tables.get(&name) {
                    Some(rows) => Ok(rows.clone()),
                    // tables absent from the database are empty
                    None => {
                        self.catalog
                            .resolve(&name)
                            .map_err(|_| EvalError::UnknownTable(name.clone()))?;
                        Ok(Vec::new())
                    }
                }
            }
            QueryNode::Empty { .. } => Ok(Vec::new()),
            QueryNode::Spj {
                inputs,
                predicate,
                projections,
            } => {
                let mut tables = Vec::with_capacity(inputs.len());
                for i in inputs {
                    tables.push(self.eval_query(i)?);
                }
                let mut out = Vec::new();
                let mut idx = vec![0usize; tables.len()];
                'product: loop {
                    let mut row: Row = Vec::new();
                    for (t, &i) in tables.iter().zip(&idx) {
                        if t.is_empty() {
                            break 'product;
                        }
                        row.extend(t[i].iter().cloned());
                    }
                    if self.eval_pred(predicate, &row)? == Tvl::True {
                        let mut projected = Vec::with_capacity(projections.len());
                        for p in projections {
                            projected.push(self.eval_expr(p, &row)?);
                        }
                        out.push(projected);
                    }
                    // advance the mixed-radix counter
                    let mut k = tables.len();
                    loop {
                        if k == 0 {
                            break 'product;
                        }
                        k -= 1;
                        idx[k] += 1;
                        if idx[k] < tables[k].len() {
                            break;
                        }
                        idx[k] = 0;
                    }
                }
                Ok(out)
            }
            QueryNode::Agg {
                input,
                group_by,
                aggs,
            } => {
                let rows = self.eval_query(input)?;
                // NULLs group together; insertion order keeps evaluation
                // deterministic, though output is a bag anyway
                let mut groups: BTreeMap<Row, Vec<&Row>> = BTreeMap::new();
                for row in &rows {
                    let key: Row = group_by
                        .iter()
                        .map(|&g| row.get(g).cloned().ok_or(EvalError::ColumnRange(g)))
                        .collect::<Result<_, _>>()?;
                    groups.entry(key).or_default().push(row);
                }
                let mut out = Vec::new();
                for (key, members) in groups {
                    let mut row = key;
                    for agg in aggs {
                        row.push(eval_agg(agg.kind, agg.operand, &members)?);
                    }
                    out.push(row);
                }
                Ok(out)
            }
            QueryNode::Union { inputs } => {
                let mut out = Vec::new();
                for i in inputs {
                    out.extend(self.eval_query(i)?);
                }
                Ok(out)
            }
        }
    }

    pub fn eval_to_bag(&self, n: &QueryNode) -> Result<Bag, EvalError> {
        Ok(Bag::from_rows(self.eval_query(n)?))
    }
}

/// Top-level convenience wrapper.
pub fn eval_query(n: &QueryNode, db: &Database, catalog: &Catalog) -> Result<Bag, EvalError> {
    Interp::new(catalog, db).eval_to_bag(n)
}

fn eval_binop(op: BinOpKind, a: &Value, b: &Value) -> Value {
    if a.is_null() || b.is_null() {
        return Value::Null;
    }
    match op {
        BinOpKind::Div => {
            // integer division truncates toward zero; anything divided by
            // zero is NULL
            match (a, b) {
                (Value::Int(x), Value::Int(y)) => {
                    if *y == 0 {
                        Value::Null
                    } else {
                        Value::Int(x / y)
                    }
                }
                _ => {
                    let (x, y) = match (a.as_rational(), b.as_rational()) {
                        (Some(x), Some(y)) => (x, y),
                        _ => return Value::Null,
                    };
                    if y.is_zero() {
                        Value::Null
                    } else {
                        Value::dec(x / y)
                    }
                }
            }
        }
        BinOpKind::Mod => match (a, b) {
            (Value::Int(x), Value::Int(y)) => {
                if *y == 0 {
                    Value::Null
                } else {
                    Value::Int(x % y)
                }
            }
            _ => Value::Null,
        },
        _ => {
            let (x, y) = match (a.as_rational(), b.as_rational()) {
                (Some(x), Some(y)) => (x, y),
                _ => return Value::Null,
            };
            let r = match op {
                BinOpKind::Add => x + y,
                BinOpKind::Sub => x - y,
                BinOpKind::Mul => x * y,
                BinOpKind::Div | BinOpKind::Mod => unreachable!(),
            };
            Value::dec(r)
        }
    }
}

fn eval_agg(kind: AggKind, operand: Option<usize>, members: &[&Row]) -> Result<Value, EvalError> {
    let column = |row: &Row, c: usize| -> Result<Value, EvalError> {
        row.get(c).cloned().ok_or(EvalError::ColumnRange(c))
    };
    match kind {
        AggKind::Count => match operand {
            None => Ok(Value::Int(members.len() as i64)),
            Some(c) => {
                let mut n = 0i64;
                for row in members {
                    if !column(row, c)?.is_null() {
                        n += 1;
                    }
                }
                Ok(Value::Int(n))
            }
        },
        AggKind::Sum | AggKind::Avg => {
            let c = operand.ok_or(EvalError::ColumnRange(usize::MAX))?;
            let mut acc = Rational::from_integer(0);
            let mut n = 0i64;
            for row in members {
                let v = column(row, c)?;
                if let Some(r) = v.as_rational() {
                    acc += r;
                    n += 1;
                }
            }
            if n == 0 {
                Ok(Value::Null)
            } else if kind == AggKind::Sum {
                Ok(Value::dec(acc))
            } else {
                Ok(Value::dec(acc / Rational::from_integer(n)))
            }
        }
        AggKind::Min | AggKind::Max => {
            let c = operand.ok_or(EvalError::ColumnRange(usize::MAX))?;
            let mut best: Option<Value> = None;
            for row in members {
                let v = column(row, c)?;
                if v.is_null() {
                    continue;
                }
                best = Some(match best {
                    None => v,
                    Some(cur) => {
                        let take = match v.compare(&cur) {
                            Some(ord) => {
                                (kind == AggKind::Min && ord.is_lt())
                                    || (kind == AggKind::Max && ord.is_gt())
                            }
                            None => false,
                        };
                        if take {
                            v
                        } else {
                            cur
                        }
                    }
                });
            }
            Ok(best.unwrap_or(Value::Null))
        }
    }
}

/// Deterministic random database respecting non-null and primary-key
/// invariants. Values are drawn from 0..=9 (string columns use small codes).
pub fn random_database(
    catalog: &Catalog,
    seed: u64,
    max_rows: usize,
    null_rate: f64,
) -> Database {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut db = Database::default();
    for schema in catalog.tables() {
        let n_rows = rng.gen_range(0..=max_rows);
        let rows = random_table(schema, &mut rng, n_rows, null_rate);
        db.tables.insert(schema.name.clone(), rows);
    }
    db
}

fn random_table(
    schema: &TableSchema,
    rng: &mut ChaCha8Rng,
    n_rows: usize,
    null_rate: f64,
) -> Vec<Row> {
    let mut rows: Vec<Row> = Vec::new();
    let mut pk_seen = std::collections::HashSet::new();
    let mut attempts = 0;
    while rows.len() < n_rows && attempts < n_rows * 20 + 20 {
        attempts += 1;
        let row: Row = schema
            .columns
            .iter()
            .map(|col| {
                if col.nullable && rng.gen_bool(null_rate) {
                    Value::Null
                } else {
                    random_value(col.sqltype, rng)
                }
            })
            .collect();
        if let Some(pk) = &schema.primary_key {
            let key: Row = pk.iter().map(|&i| row[i].clone()).collect();
            if !pk_seen.insert(key) {
                continue;
            }
        }
        rows.push(row);
    }
    rows
}

fn random_value(ty: SqlType, rng: &mut ChaCha8Rng) -> Value {
    match ty {
        SqlType::Int => Value::Int(rng.gen_range(0..=9)),
        SqlType::Decimal => {
            let num = rng.gen_range(0..=18);
            Value::dec(Rational::new(num, 2))
        }
        SqlType::Bool => Value::bool_val(rng.gen_bool(0.5)),
        SqlType::Varchar => Value::str_code(rng.gen_range(0..=9)),
        SqlType::Date => Value::Int(rng.gen_range(0..=9)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::load_catalog;
    use crate::ir::{AggFunc, CmpKind};

    fn catalog() -> Catalog {
        load_catalog(crate::catalog::tests::EMP_DEPT).unwrap()
    }

    fn emp_rows(db: &mut Database, rows: Vec<Row>) {
        db.tables.insert("EMP".to_string(), rows);
    }

    fn int(v: i64) -> Value {
        Value::Int(v)
    }

    /// Example 1's two queries evaluated on three employees sharing a
    /// department and location: the plain projection keeps all three
    /// duplicates, the grouped variant collapses them.
    #[test]
    fn duplicate_sensitivity_of_example_one() {
        let cat = catalog();
        let mut db = Database::default();
        emp_rows(
            &mut db,
            vec![
                vec![int(1), int(5), int(20), Value::str_code(3)],
                vec![int(2), int(6), int(20), Value::str_code(3)],
                vec![int(3), int(7), int(20), Value::str_code(3)],
            ],
        );
        let q1 = QueryNode::Spj {
            inputs: vec![QueryNode::Table("EMP".to_string())],
            predicate: Pred::Cmp {
                op: CmpKind::Gt,
                lhs: Box::new(Expr::Column(2)),
                rhs: Box::new(Expr::Const(Literal::Int(10))),
            },
            projections: vec![Expr::Column(2), Expr::Column(3)],
        };
        let q2 = QueryNode::Agg {
            input: Box::new(q1.clone()),
            group_by: vec![0, 1],
            aggs: vec![],
        };
        let b1 = eval_query(&q1, &db, &cat).unwrap();
        let b2 = eval_query(&q2, &db, &cat).unwrap();
        assert_eq!(b1.len(), 3);
        assert_eq!(b2.len(), 1);
        assert!(!bag_equal(&b1, &b2));
    }

    #[test]
    fn empty_database_yields_empty_bags() {
        let cat = catalog();
        let db = Database::default();
        let q = QueryNode::Table("EMP".to_string());
        assert!(eval_query(&q, &db, &cat).unwrap().is_empty());
    }

    #[test]
    fn three_valued_logic_filters_unknown() {
        let cat = catalog();
        let mut db = Database::default();
        emp_rows(
            &mut db,
            vec![
                vec![int(1), int(5), Value::Null, Value::str_code(1)],
                vec![int(2), int(6), int(20), Value::str_code(1)],
            ],
        );
        // WHERE DEPT_ID > 10: the NULL row is filtered, not kept
        let q = QueryNode::Spj {
            inputs: vec![QueryNode::Table("EMP".to_string())],
            predicate: Pred::Cmp {
                op: CmpKind::Gt,
                lhs: Box::new(Expr::Column(2)),
                rhs: Box::new(Expr::Const(Literal::Int(10))),
            },
            projections: vec![Expr::Column(0)],
        };
        let b = eval_query(&q, &db, &cat).unwrap();
        assert_eq!(b.len(), 1);
        // NOT (DEPT_ID > 10) also filters it: unknown stays unknown
        let q_not = QueryNode::Spj {
            inputs: vec![QueryNode::Table("EMP".to_string())],
            predicate: Pred::Not(Box::new(Pred::Cmp {
                op: CmpKind::Gt,
                lhs: Box::new(Expr::Column(2)),
                rhs: Box::new(Expr::Const(Literal::Int(10))),
            })),
            projections: vec![Expr::Column(0)],
        };
        assert_eq!(eval_query(&q_not, &db, &cat).unwrap().len(), 0);
    }

    #[test]
    fn aggregate_null_defaults() {
        let cat = catalog();
        let mut db = Database::default();
        // one group where every SALARY is NULL, one normal group
        emp_rows(
            &mut db,
            vec![
                vec![int(1), Value::Null, int(1), Value::str_code(0)],
                vec![int(2), Value::Null, int(1), Value::str_code(0)],
                vec![int(3), int(4), int(2), Value::str_code(0)],
            ],
        );
        let agg = QueryNode::Agg {
            input: Box::new(QueryNode::Table("EMP".to_string())),
            group_by: vec![2],
            aggs: vec![
                AggFunc {
                    kind: AggKind::Sum,
                    operand: Some(1),
                },
                AggFunc {
                    kind: AggKind::Count,
                    operand: Some(1),
                },
                AggFunc {
                    kind: AggKind::Count,
                    operand: None,
                },
                AggFunc {
                    kind: AggKind::Max,
                    operand: Some(1),
                },
            ],
        };
        let bag = eval_query(&agg, &db, &cat).unwrap();
        let rows: Vec<&Row> = bag.distinct_rows().map(|(r, _)| r).collect();
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0], &vec![int(1), Value::Null, int(0), int(2), Value::Null]);
        assert_eq!(rows[1], &vec![int(2), int(4), int(1), int(1), int(4)]);
    }

    #[test]
    fn empty_grouping_input_yields_zero_rows() {
        let cat = catalog();
        let db = Database::default();
        // grand aggregate over an empty table has no groups, hence no rows
        let agg = QueryNode::Agg {
            input: Box::new(QueryNode::Table("EMP".to_string())),
            group_by: vec![],
            aggs: vec![AggFunc {
                kind: AggKind::Count,
                operand: None,
            }],
        };
        assert!(eval_query(&agg, &db, &cat).unwrap().is_empty());
    }

    #[test]
    fn nulls_group_together() {
        let cat = catalog();
        let mut db = Database::default();
        emp_rows(
            &mut db,
            vec![
                vec![int(1), int(5), Value::Null, Value::str_code(0)],
                vec![int(2), int(6), Value::Null, Value::str_code(0)],
            ],
        );
        let agg = QueryNode::Agg {
            input: Box::new(QueryNode::Table("EMP".to_string())),
            group_by: vec![2],
            aggs: vec![AggFunc {
                kind: AggKind::Count,
                operand: None,
            }],
        };
        let bag = eval_query(&agg, &db, &cat).unwrap();
        assert_eq!(bag.len(), 1);
        let (row, _) = bag.distinct_rows().next().unwrap();
        assert_eq!(row, &vec![Value::Null, int(2)]);
    }

    #[test]
    fn bag_equal_counts_duplicates() {
        let r = vec![int(1)];
        let a = Bag::from_rows(vec![r.clone(), r.clone(), r.clone()]);
        let b = Bag::from_rows(vec![r.clone()]);
        assert!(!bag_equal(&a, &b));
        assert!(bag_equal(&Bag::default(), &Bag::default()));
        // permuted insertion order is irrelevant
        let x = Bag::from_rows(vec![vec![int(1)], vec![int(2)]]);
        let y = Bag::from_rows(vec![vec![int(2)], vec![int(1)]]);
        assert!(bag_equal(&x, &y));
    }

    #[test]
    fn division_semantics() {
        assert_eq!(
            eval_binop(BinOpKind::Div, &int(7), &int(2)),
            int(3)
        );
        assert_eq!(
            eval_binop(BinOpKind::Div, &int(-7), &int(2)),
            int(-3)
        );
        assert_eq!(eval_binop(BinOpKind::Div, &int(7), &int(0)), Value::Null);
        assert_eq!(eval_binop(BinOpKind::Mod, &int(-7), &int(3)), int(-1));
        assert_eq!(
            eval_binop(BinOpKind::Div, &Value::dec(Rational::new(3, 2)), &int(2)),
            Value::Dec(Rational::new(3, 4))
        );
    }

    #[test]
    fn random_database_is_deterministic_and_respects_invariants() {
        let cat = catalog();
        let a = random_database(&cat, 42, 5, 0.2);
        let b = random_database(&cat, 42, 5, 0.2);
        assert_eq!(a.tables, b.tables);

        let no_nulls = random_database(&cat, 7, 5, 0.0);
        for rows in no_nulls.tables.values() {
            for row in rows {
                assert!(row.iter().all(|v| !v.is_null()));
            }
        }

        // primary keys unique and non-null
        for seed in 0..50 {
            let db = random_database(&cat, seed, 5, 0.5);
            let emp = &db.tables["EMP"];
            let mut seen = std::collections::HashSet::new();
            for row in emp {
                assert!(!row[0].is_null());
                assert!(seen.insert(row[0].clone()));
            }
        }
    }

    #[test]
    fn null_frequency_tracks_rate() {
        let cat = catalog();
        let mut nulls = 0u32;
        let mut total = 0u32;
        for seed in 0..200 {
            let db = random_database(&cat, seed, 5, 0.3);
            for row in &db.tables["EMP"] {
                // SALARY is nullable
                total += 1;
                if row[1].is_null() {
                    nulls += 1;
                }
            }
        }
        let rate = nulls as f64 / total as f64;
        assert!((rate - 0.3).abs() < 0.05, "observed null rate {rate}");
    }

    #[test]
    fn database_document_round_trip() {
        let cat = catalog();
        let doc = r#"{"tables": {"EMP": [[1, 5, 20, "west"], [2, null, 20, "west"]]}}"#;
        let db = Database::load(doc, &cat).unwrap();
        let rows = &db.tables["EMP"];
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0][0], int(1));
        assert!(rows[1][1].is_null());
        assert_eq!(rows[0][3], Value::str_code(intern_code("west")));
    }
}
