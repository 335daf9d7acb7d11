//! The four-category query tree shared by parser, normalizer, verifier, and
//! oracle, plus the predicate and projection expression grammar.
//!
//! Column references are positional indices into the node's input tuple; an
//! SPJ's indices address the concatenated (Cartesian-product) row of its
//! inputs, left to right.

use num::rational::Ratio;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::catalog::{Catalog, SqlType};

pub type Rational = Ratio<i64>;

mod rational_serde {
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

#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Literal {
    Int(i64),
    Dec(#[serde(with = "rational_serde")] Rational),
    Bool(bool),
    Str(String),
}

/// Deterministic integer code for a string literal. Codes live far above any
/// realistic integer literal so the two value spaces cannot collide.
pub fn intern_code(s: &str) -> i64 {
    let digest = Sha256::digest(s.as_bytes());
    let mut low = [0u8; 4];
    low.copy_from_slice(&digest[..4]);
    (1i64 << 40) + u32::from_le_bytes(low) as i64
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BinOpKind {
    Add,
    Sub,
    Mul,
    Div,
    Mod,
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CmpKind {
    Gt,
    Lt,
    Eq,
    Le,
    Ge,
}

#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Expr {
    Column(usize),
    Const(Literal),
    Null,
    Binop {
        op: BinOpKind,
        lhs: Box<Expr>,
        rhs: Box<Expr>,
    },
    Func {
        name: String,
        args: Vec<Expr>,
    },
    Case {
        branches: Vec<(Pred, Expr)>,
        #[serde(rename = "else")]
        else_: Box<Expr>,
    },
}

#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Pred {
    Cmp {
        op: CmpKind,
        lhs: Box<Expr>,
        rhs: Box<Expr>,
    },
    And(Box<Pred>, Box<Pred>),
    Or(Box<Pred>, Box<Pred>),
    Not(Box<Pred>),
    Isnull(Box<Expr>),
    /// Uninterpreted boolean predicate; constrained only by functional
    /// consistency.
    Ufpred { name: String, args: Vec<Expr> },
    /// Anti-join predicate: true iff no row of `right` satisfies `on`.
    /// `left_args` are expressions over the enclosing tuple; `on` addresses
    /// the combined tuple (left_args values first, then `right`'s columns),
    /// so re-indexing the enclosing tuple never touches `on`. The solver
    /// sees an uninterpreted application named by `key` over `left_args`.
    Notexists {
        key: String,
        right: Box<QueryNode>,
        on: Box<Pred>,
        left_args: Vec<Expr>,
    },
    True,
    False,
}

impl Pred {
    /// Conjunction with unit simplification, keeping rewrite output tidy.
    pub fn and(a: Pred, b: Pred) -> Pred {
        match (a, b) {
            (Pred::True, x) | (x, Pred::True) => x,
            (Pred::False, _) | (_, Pred::False) => Pred::False,
            (a, b) => Pred::And(Box::new(a), Box::new(b)),
        }
    }

    /// Flattens nested conjunctions into a list, in left-to-right order.
    pub fn conjuncts(&self) -> Vec<&Pred> {
        let mut out = Vec::new();
        fn walk<'a>(p: &'a Pred, out: &mut Vec<&'a Pred>) {
            match p {
                Pred::And(a, b) => {
                    walk(a, out);
                    walk(b, out);
                }
                other => out.push(other),
            }
        }
        walk(self, &mut out);
        out
    }

    pub fn conjoin(parts: impl IntoIterator<Item = Pred>) -> Pred {
        parts.into_iter().fold(Pred::True, Pred::and)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AggKind {
    Count,
    Sum,
    Min,
    Max,
    Avg,
}

#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct AggFunc {
    #[serde(rename = "fn")]
    pub kind: AggKind,
    /// Input column; `None` is the COUNT(*) sentinel.
    pub operand: Option<usize>,
}

#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum QueryNode {
    Table(String),
    Spj {
        inputs: Vec<QueryNode>,
        predicate: Pred,
        projections: Vec<Expr>,
    },
    Agg {
        input: Box<QueryNode>,
        group_by: Vec<usize>,
        aggs: Vec<AggFunc>,
    },
    Union {
        inputs: Vec<QueryNode>,
    },
    Empty {
        arity: usize,
    },
}

/// Column type as seen by the verifier: VARCHAR/DATE/BOOL collapse to
/// integer-coded values, DECIMAL to exact rationals.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ColType {
    Int,
    Dec,
    Bool,
    Str,
    Date,
}

impl ColType {
    pub fn from_sql(t: SqlType) -> ColType {
        match t {
            SqlType::Int => ColType::Int,
            SqlType::Decimal => ColType::Dec,
            SqlType::Bool => ColType::Bool,
            SqlType::Varchar => ColType::Str,
            SqlType::Date => ColType::Date,
        }
    }

    pub fn numeric(self) -> bool {
        matches!(self, ColType::Int | ColType::Dec | ColType::Bool)
    }

    /// Whether two column types may be compared or unified.
    pub fn comparable(self, other: ColType) -> bool {
        self == other || (self.numeric() && other.numeric())
    }

    fn join(self, other: ColType) -> ColType {
        if self == other {
            self
        } else if self == ColType::Dec || other == ColType::Dec {
            ColType::Dec
        } else {
            ColType::Int
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation(pub String);

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum PlanError {
    #[error("plan parse error: {0}")]
    Parse(String),
    #[error("invalid plan: {0}")]
    Invalid(String),
}

impl QueryNode {
    /// Number of output columns. Requires a valid node.
    pub fn arity(&self, catalog: &Catalog) -> Result<usize, PlanError> {
        match self {
            QueryNode::Table(name) => catalog
                .resolve(name)
                .map(|s| s.arity())
                .map_err(|e| PlanError::Invalid(e.to_string())),
            QueryNode::Spj { projections, .. } => Ok(projections.len()),
            QueryNode::Agg { group_by, aggs, .. } => Ok(group_by.len() + aggs.len()),
            QueryNode::Union { inputs } => inputs
                .first()
                .ok_or_else(|| PlanError::Invalid("union with no inputs".to_string()))?
                .arity(catalog),
            QueryNode::Empty { arity } => Ok(*arity),
        }
    }

    /// Set of table names referenced anywhere in the tree (including inside
    /// anti-join predicates), uppercased.
    pub fn table_footprint(&self) -> std::collections::BTreeSet<String> {
        let mut out = std::collections::BTreeSet::new();
        fn walk_expr(e: &Expr, out: &mut std::collections::BTreeSet<String>) {
            match e {
                Expr::Column(_) | Expr::Const(_) | Expr::Null => {}
                Expr::Binop { lhs, rhs, .. } => {
                    walk_expr(lhs, out);
                    walk_expr(rhs, out);
                }
                Expr::Func { args, .. } => {
                    for a in args {
                        walk_expr(a, out);
                    }
                }
                Expr::Case { branches, else_ } => {
                    for (p, e) in branches {
                        walk_pred(p, out);
                        walk_expr(e, out);
                    }
                    walk_expr(else_, out);
                }
            }
        }
        fn walk_pred(p: &Pred, out: &mut std::collections::BTreeSet<String>) {
            match p {
                Pred::And(a, b) | Pred::Or(a, b) => {
                    walk_pred(a, out);
                    walk_pred(b, out);
                }
                Pred::Not(p) => walk_pred(p, out),
                Pred::Cmp { lhs, rhs, .. } => {
                    walk_expr(lhs, out);
                    walk_expr(rhs, out);
                }
                Pred::Isnull(e) => walk_expr(e, out),
                Pred::Ufpred { args, .. } => {
                    for a in args {
                        walk_expr(a, out);
                    }
                }
                Pred::Notexists {
                    right,
                    on,
                    left_args,
                    ..
                } => {
                    walk(right, out);
                    walk_pred(on, out);
                    for a in left_args {
                        walk_expr(a, out);
                    }
                }
                Pred::True | Pred::False => {}
            }
        }
        fn walk(n: &QueryNode, out: &mut std::collections::BTreeSet<String>) {
            match n {
                QueryNode::Table(name) => {
                    out.insert(name.clone());
                }
                QueryNode::Spj {
                    inputs,
                    predicate,
                    projections,
                } => {
                    for i in inputs {
                        walk(i, out);
                    }
                    walk_pred(predicate, out);
                    for p in projections {
                        walk_expr(p, out);
                    }
                }
                QueryNode::Agg { input, .. } => walk(input, out),
                QueryNode::Union { inputs } => {
                    for i in inputs {
                        walk(i, out);
                    }
                }
                QueryNode::Empty { .. } => {}
            }
        }
        walk(self, &mut out);
        out
    }
}

impl Expr {
    /// Rewrites every column reference through `f`.
    pub fn substitute(&self, f: &impl Fn(usize) -> Expr) -> Expr {
        match self {
            Expr::Column(i) => f(*i),
            Expr::Const(_) | Expr::Null => self.clone(),
            Expr::Binop { op, lhs, rhs } => Expr::Binop {
                op: *op,
                lhs: Box::new(lhs.substitute(f)),
                rhs: Box::new(rhs.substitute(f)),
            },
            Expr::Func { name, args } => Expr::Func {
                name: name.clone(),
                args: args.iter().map(|a| a.substitute(f)).collect(),
            },
            Expr::Case { branches, else_ } => Expr::Case {
                branches: branches
                    .iter()
                    .map(|(p, e)| (p.substitute(f), e.substitute(f)))
                    .collect(),
                else_: Box::new(else_.substitute(f)),
            },
        }
    }

    pub fn shift(&self, delta: usize) -> Expr {
        self.substitute(&|i| Expr::Column(i + delta))
    }
}

impl Pred {
    pub fn substitute(&self, f: &impl Fn(usize) -> Expr) -> Pred {
        match self {
            Pred::Cmp { op, lhs, rhs } => Pred::Cmp {
                op: *op,
                lhs: Box::new(lhs.substitute(f)),
                rhs: Box::new(rhs.substitute(f)),
            },
            Pred::And(a, b) => Pred::And(Box::new(a.substitute(f)), Box::new(b.substitute(f))),
            Pred::Or(a, b) => Pred::Or(Box::new(a.substitute(f)), Box::new(b.substitute(f))),
            Pred::Not(p) => Pred::Not(Box::new(p.substitute(f))),
            Pred::Isnull(e) => Pred::Isnull(Box::new(e.substitute(f))),
            Pred::Ufpred { name, args } => Pred::Ufpred {
                name: name.clone(),
                args: args.iter().map(|a| a.substitute(f)).collect(),
            },
            Pred::Notexists {
                key,
                right,
                on,
                left_args,
            } => Pred::Notexists {
                key: key.clone(),
                right: right.clone(),
                on: on.clone(),
                left_args: left_args.iter().map(|a| a.substitute(f)).collect(),
            },
            Pred::True | Pred::False => self.clone(),
        }
    }

    pub fn shift(&self, delta: usize) -> Pred {
        self.substitute(&|i| Expr::Column(i + delta))
    }
}

struct Checker<'a> {
    catalog: &'a Catalog,
    violations: Vec<Violation>,
}

impl<'a> Checker<'a> {
    fn fail(&mut self, msg: String) {
        self.violations.push(Violation(msg));
    }

    fn expr_type(&mut self, e: &Expr, input: &[ColType]) -> Option<ColType> {
        match e {
            Expr::Column(i) => match input.get(*i) {
                Some(t) => Some(*t),
                None => {
                    self.fail(format!(
                        "column index {i} out of range (input arity {})",
                        input.len()
                    ));
                    None
                }
            },
            Expr::Const(Literal::Int(_)) => Some(ColType::Int),
            Expr::Const(Literal::Dec(_)) => Some(ColType::Dec),
            Expr::Const(Literal::Bool(_)) => Some(ColType::Bool),
            Expr::Const(Literal::Str(_)) => Some(ColType::Str),
            Expr::Null => None, // polymorphic; compatible with anything
            Expr::Binop { op, lhs, rhs } => {
                let lt = self.expr_type(lhs, input);
                let rt = self.expr_type(rhs, input);
                for t in [lt, rt].into_iter().flatten() {
                    if !t.numeric() {
                        self.fail(format!("arithmetic on non-numeric operand ({t:?})"));
                    }
                }
                if *op == BinOpKind::Mod {
                    for t in [lt, rt].into_iter().flatten() {
                        if t == ColType::Dec {
                            self.fail("mod requires integer operands".to_string());
                        }
                    }
                    return Some(ColType::Int);
                }
                match (lt, rt) {
                    (Some(a), Some(b)) => Some(a.join(b)),
                    (Some(a), None) | (None, Some(a)) => Some(a),
                    (None, None) => None,
                }
            }
            Expr::Func { args, .. } => {
                for a in args {
                    self.expr_type(a, input);
                }
                Some(ColType::Int)
            }
            Expr::Case { branches, else_ } => {
                if branches.is_empty() {
                    self.fail("case with no branches".to_string());
                }
                let mut ty = self.expr_type(else_, input);
                for (p, e) in branches {
                    self.pred(p, input);
                    let bt = self.expr_type(e, input);
                    ty = match (ty, bt) {
                        (Some(a), Some(b)) => {
                            if !a.comparable(b) {
                                self.fail(format!("case branches mix {a:?} and {b:?}"));
                            }
                            Some(a.join(b))
                        }
                        (x, None) | (None, x) => x,
                    };
                }
                ty
            }
        }
    }

    fn pred(&mut self, p: &Pred, input: &[ColType]) {
        match p {
            Pred::Cmp { lhs, rhs, .. } => {
                let lt = self.expr_type(lhs, input);
                let rt = self.expr_type(rhs, input);
                if let (Some(a), Some(b)) = (lt, rt) {
                    if !a.comparable(b) {
                        self.fail(format!("comparison between {a:?} and {b:?}"));
                    }
                }
            }
            Pred::And(a, b) | Pred::Or(a, b) => {
                self.pred(a, input);
                self.pred(b, input);
            }
            Pred::Not(p) => self.pred(p, input),
            Pred::Isnull(e) => {
                self.expr_type(e, input);
            }
            Pred::Ufpred { args, .. } => {
                for a in args {
                    self.expr_type(a, input);
                }
            }
            Pred::Notexists {
                right,
                on,
                left_args,
                ..
            } => {
                let arg_types: Vec<ColType> = left_args
                    .iter()
                    .map(|a| self.expr_type(a, input).unwrap_or(ColType::Int))
                    .collect();
                if let Some(right_types) = self.node(right) {
                    let mut combined = arg_types;
                    combined.extend(right_types);
                    self.pred(on, &combined);
                }
            }
            Pred::True | Pred::False => {}
        }
    }

    fn node(&mut self, n: &QueryNode) -> Option<Vec<ColType>> {
        match n {
            QueryNode::Table(name) => match self.catalog.resolve(name) {
                Ok(schema) => Some(
                    schema
                        .columns
                        .iter()
                        .map(|c| ColType::from_sql(c.sqltype))
                        .collect(),
                ),
                Err(e) => {
                    self.fail(e.to_string());
                    None
                }
            },
            QueryNode::Spj {
                inputs,
                predicate,
                projections,
            } => {
                let mut combined = Vec::new();
                let mut ok = true;
                for i in inputs {
                    match self.node(i) {
                        Some(ts) => combined.extend(ts),
                        None => ok = false,
                    }
                }
                if !ok {
                    return None;
                }
                self.pred(predicate, &combined);
                let out: Vec<Option<ColType>> = projections
                    .iter()
                    .map(|e| self.expr_type(e, &combined))
                    .collect();
                Some(
                    out.into_iter()
                        .map(|t| t.unwrap_or(ColType::Int))
                        .collect(),
                )
            }
            QueryNode::Agg {
                input,
                group_by,
                aggs,
            } => {
                let in_types = self.node(input)?;
                let mut out = Vec::new();
                for &g in group_by {
                    match in_types.get(g) {
                        Some(t) => out.push(*t),
                        None => {
                            self.fail(format!(
                                "group-by index {g} out of range (arity {})",
                                in_types.len()
                            ));
                            out.push(ColType::Int);
                        }
                    }
                }
                for agg in aggs {
                    match (agg.kind, agg.operand) {
                        (AggKind::Count, None) => out.push(ColType::Int),
                        (_, None) => {
                            self.fail(format!(
                                "aggregate {:?} requires an operand column",
                                agg.kind
                            ));
                            out.push(ColType::Int);
                        }
                        (kind, Some(c)) => {
                            let t = match in_types.get(c) {
                                Some(t) => *t,
                                None => {
                                    self.fail(format!(
                                        "aggregate operand {c} out of range (arity {})",
                                        in_types.len()
                                    ));
                                    ColType::Int
                                }
                            };
                            match kind {
                                AggKind::Count => out.push(ColType::Int),
                                AggKind::Avg => {
                                    if !t.numeric() {
                                        self.fail("avg on non-numeric column".to_string());
                                    }
                                    out.push(ColType::Dec);
                                }
                                AggKind::Sum => {
                                    if !t.numeric() {
                                        self.fail("sum on non-numeric column".to_string());
                                    }
                                    out.push(t);
                                }
                                AggKind::Min | AggKind::Max => out.push(t),
                            }
                        }
                    }
                }
                Some(out)
            }
            QueryNode::Union { inputs } => {
                if inputs.is_empty() {
                    self.fail("union with no inputs".to_string());
                    return None;
                }
                let mut types: Option<Vec<ColType>> = None;
                for i in inputs {
                    let ts = self.node(i)?;
                    match &mut types {
                        None => types = Some(ts),
                        Some(prev) => {
                            if prev.len() != ts.len() {
                                self.fail(format!(
                                    "union arity mismatch: {} vs {}",
                                    prev.len(),
                                    ts.len()
                                ));
                            } else {
                                for (p, t) in prev.iter_mut().zip(ts) {
                                    if !p.comparable(t) {
                                        self.fail(format!(
                                            "union column type mismatch: {p:?} vs {t:?}"
                                        ));
                                    }
                                    *p = p.join(t);
                                }
                            }
                        }
                    }
                }
                types
            }
            QueryNode::Empty { arity } => Some(vec![ColType::Int; *arity]),
        }
    }
}

/// Checks every structural invariant recursively; returns all violations.
pub fn validate(node: &QueryNode, catalog: &Catalog) -> Vec<Violation> {
    let mut checker = Checker {
        catalog,
        violations: Vec::new(),
    };
    checker.node(node);
    checker.violations
}

/// Output column types of a validated node.
pub fn output_types(node: &QueryNode, catalog: &Catalog) -> Result<Vec<ColType>, PlanError> {
    let mut checker = Checker {
        catalog,
        violations: Vec::new(),
    };
    match checker.node(node) {
        Some(ts) if checker.violations.is_empty() => Ok(ts),
        _ => Err(PlanError::Invalid(
            checker
                .violations
                .first()
                .map(|v| v.0.clone())
                .unwrap_or_else(|| "type inference failed".to_string()),
        )),
    }
}

/// Parses a plan document and validates it against the catalog.
pub fn load_plan(source: &str, catalog: &Catalog) -> Result<QueryNode, PlanError> {
    let node: QueryNode =
        serde_json::from_str(source).map_err(|e| PlanError::Parse(e.to_string()))?;
    let violations = validate(&node, catalog);
    if let Some(v) = violations.first() {
        return Err(PlanError::Invalid(v.0.clone()));
    }
    Ok(node)
}

/// Canonical plan document: compact JSON with a fixed field order.
pub fn dump_plan(node: &QueryNode) -> String {
    serde_json::to_string(node).expect("plan serialization is infallible")
}

/// Canonical hash of arbitrary serializable plan fragments, used for naming
/// uninterpreted anti-join predicates.
pub fn canonical_hash(parts: &[&str]) -> String {
    let mut hasher = Sha256::new();
    for p in parts {
        hasher.update((p.len() as u64).to_le_bytes());
        hasher.update(p.as_bytes());
    }
    let digest = hasher.finalize();
    let mut out = String::with_capacity(16);
    for b in &digest[..8] {
        out.push_str(&format!("{b:02x}"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::load_catalog;

    fn catalog() -> Catalog {
        load_catalog(crate::catalog::tests::EMP_DEPT).unwrap()
    }

    fn emp_scan() -> QueryNode {
        QueryNode::Table("EMP".to_string())
    }

    #[test]
    fn arity_of_each_node_kind() {
        let cat = catalog();
        assert_eq!(emp_scan().arity(&cat).unwrap(), 4);
        let agg = QueryNode::Agg {
            input: Box::new(emp_scan()),
            group_by: vec![2],
            aggs: vec![AggFunc {
                kind: AggKind::Sum,
                operand: Some(1),
            }],
        };
        assert_eq!(agg.arity(&cat).unwrap(), 2);
        assert_eq!(QueryNode::Empty { arity: 3 }.arity(&cat).unwrap(), 3);
    }

    #[test]
    fn validates_example_one_shape() {
        let cat = catalog();
        // SELECT DEPT_ID, LOCATION FROM EMP WHERE DEPT_ID > 10
        let q1 = QueryNode::Spj {
            inputs: vec![emp_scan()],
            predicate: Pred::Cmp {
                op: CmpKind::Gt,
                lhs: Box::new(Expr::Column(2)),
                rhs: Box::new(Expr::Const(Literal::Int(10))),
            },
            projections: vec![Expr::Column(2), Expr::Column(3)],
        };
        assert!(validate(&q1, &cat).is_empty());
        assert_eq!(
            output_types(&q1, &cat).unwrap(),
            vec![ColType::Int, ColType::Str]
        );
    }

    #[test]
    fn out_of_range_column_is_a_violation() {
        let cat = catalog();
        let q = QueryNode::Spj {
            inputs: vec![emp_scan()],
            predicate: Pred::True,
            projections: vec![Expr::Column(9)],
        };
        let violations = validate(&q, &cat);
        assert!(violations.iter().any(|v| v.0.contains("out of range")));
    }

    #[test]
    fn union_arity_mismatch_is_a_violation() {
        let cat = catalog();
        let two = QueryNode::Spj {
            inputs: vec![emp_scan()],
            predicate: Pred::True,
            projections: vec![Expr::Column(0), Expr::Column(1)],
        };
        let three = QueryNode::Spj {
            inputs: vec![emp_scan()],
            predicate: Pred::True,
            projections: vec![Expr::Column(0), Expr::Column(1), Expr::Column(2)],
        };
        let u = QueryNode::Union {
            inputs: vec![two, three],
        };
        let violations = validate(&u, &cat);
        assert!(violations.iter().any(|v| v.0.contains("arity mismatch")));
    }

    #[test]
    fn plan_round_trip_table_leaf() {
        let cat = catalog();
        let doc = r#"{"table":"EMP"}"#;
        let node = load_plan(doc, &cat).unwrap();
        assert_eq!(node, emp_scan());
        assert_eq!(dump_plan(&node), doc);
    }

    #[test]
    fn unknown_node_tag_is_a_parse_error() {
        let cat = catalog();
        assert!(matches!(
            load_plan(r#"{"scan":"EMP"}"#, &cat),
            Err(PlanError::Parse(_))
        ));
    }

    #[test]
    fn footprint_includes_anti_join_capture() {
        let ne = Pred::Notexists {
            key: "k".to_string(),
            right: Box::new(QueryNode::Table("DEPT".to_string())),
            on: Box::new(Pred::True),
            left_args: vec![Expr::Column(0)],
        };
        let q = QueryNode::Spj {
            inputs: vec![emp_scan()],
            predicate: ne,
            projections: vec![Expr::Column(0)],
        };
        let fp = q.table_footprint();
        assert!(fp.contains("EMP") && fp.contains("DEPT"));
    }
}
