//! Feasibility checking for conjunctions of linear constraints over rationals
//! and integers: a bounds-driven simplex with delta-rationals for strict
//! inequalities, branch-and-bound for integer variables, and case splits for
//! disequalities.

use std::collections::{BTreeMap, HashMap};
use std::time::Instant;

use num::rational::BigRational;
use num::{BigInt, Integer, One, Signed, Zero};

/// A rational extended with an infinitesimal component: `real + delta * d`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DeltaRat {
    pub real: BigRational,
    pub delta: BigRational,
}

impl DeltaRat {
    pub fn from_real(r: BigRational) -> Self {
        DeltaRat {
            real: r,
            delta: BigRational::zero(),
        }
    }

    pub fn zero() -> Self {
        DeltaRat::from_real(BigRational::zero())
    }

    fn add(&self, other: &DeltaRat) -> DeltaRat {
        DeltaRat {
            real: &self.real + &other.real,
            delta: &self.delta + &other.delta,
        }
    }

    fn sub(&self, other: &DeltaRat) -> DeltaRat {
        DeltaRat {
            real: &self.real - &other.real,
            delta: &self.delta - &other.delta,
        }
    }

    fn scale(&self, k: &BigRational) -> DeltaRat {
        DeltaRat {
            real: &self.real * k,
            delta: &self.delta * k,
        }
    }
}

impl PartialOrd for DeltaRat {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for DeltaRat {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.real
            .cmp(&other.real)
            .then_with(|| self.delta.cmp(&other.delta))
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ConOp {
    Le,
    Lt,
    Ge,
    Gt,
    Eq,
    Ne,
}

/// A linear constraint `sum(coeffs) + constant OP 0` over problem variables.
#[derive(Clone, Debug)]
pub struct LinCon {
    pub coeffs: BTreeMap<u32, BigRational>,
    pub constant: BigRational,
    pub op: ConOp,
}

impl LinCon {
    fn eval(&self, model: &[BigRational]) -> BigRational {
        let mut acc = self.constant.clone();
        for (v, c) in &self.coeffs {
            acc += c * &model[*v as usize];
        }
        acc
    }
}

#[derive(Clone, Debug)]
pub struct TheoryProblem {
    pub num_vars: u32,
    pub is_int: Vec<bool>,
    pub constraints: Vec<LinCon>,
}

#[derive(Debug)]
pub enum TheoryOutcome {
    Sat(Vec<BigRational>),
    /// Indices into `constraints` whose conjunction is infeasible.
    Unsat(Vec<usize>),
    Unknown,
}

pub struct SearchBudget {
    pub deadline: Instant,
    pub nodes_left: u32,
}

impl SearchBudget {
    fn spend(&mut self) -> bool {
        if self.nodes_left == 0 || Instant::now() >= self.deadline {
            return false;
        }
        self.nodes_left -= 1;
        true
    }
}

/// Sentinel reason for bounds added by branching; never part of a usable core.
const BRANCH_REASON: usize = usize::MAX;

struct Tableau {
    /// Definition rows: basic var -> (nonbasic var -> coefficient).
    rows: HashMap<usize, HashMap<usize, BigRational>>,
    values: Vec<DeltaRat>,
    lower: Vec<Option<(DeltaRat, usize)>>,
    upper: Vec<Option<(DeltaRat, usize)>>,
}

impl Tableau {
    fn new(total_vars: usize) -> Self {
        Tableau {
            rows: HashMap::new(),
            values: vec![DeltaRat::zero(); total_vars],
            lower: vec![None; total_vars],
            upper: vec![None; total_vars],
        }
    }

    fn is_basic(&self, v: usize) -> bool {
        self.rows.contains_key(&v)
    }

    fn update_nonbasic(&mut self, x: usize, v: DeltaRat) {
        let diff = v.sub(&self.values[x]);
        let affected: Vec<(usize, BigRational)> = self
            .rows
            .iter()
            .filter_map(|(b, row)| row.get(&x).map(|c| (*b, c.clone())))
            .collect();
        for (b, c) in affected {
            let nv = self.values[b].add(&diff.scale(&c));
            self.values[b] = nv;
        }
        self.values[x] = v;
    }

    fn assert_lower(&mut self, x: usize, c: DeltaRat, why: usize) -> Result<(), Vec<usize>> {
        if let Some((cur, _)) = &self.lower[x] {
            if c <= *cur {
                return Ok(());
            }
        }
        if let Some((u, uw)) = &self.upper[x] {
            if c > *u {
                return Err(vec![why, *uw]);
            }
        }
        self.lower[x] = Some((c.clone(), why));
        if !self.is_basic(x) && self.values[x] < c {
            self.update_nonbasic(x, c);
        }
        Ok(())
    }

    fn assert_upper(&mut self, x: usize, c: DeltaRat, why: usize) -> Result<(), Vec<usize>> {
        if let Some((cur, _)) = &self.upper[x] {
            if c >= *cur {
                return Ok(());
            }
        }
        if let Some((l, lw)) = &self.lower[x] {
            if c < *l {
                return Err(vec![why, *lw]);
            }
        }
        self.upper[x] = Some((c.clone(), why));
        if !self.is_basic(x) && self.values[x] > c {
            self.update_nonbasic(x, c);
        }
        Ok(())
    }

    fn pivot_and_update(&mut self, b: usize, y: usize, target: DeltaRat) {
        let a_by = self.rows[&b][&y].clone();
        let theta = target.sub(&self.values[b]).scale(&(BigRational::one() / &a_by));
        self.values[b] = target;
        let ny = self.values[y].add(&theta);
        self.values[y] = ny;
        let affected: Vec<(usize, BigRational)> = self
            .rows
            .iter()
            .filter(|(k, _)| **k != b)
            .filter_map(|(k, row)| row.get(&y).map(|c| (*k, c.clone())))
            .collect();
        for (k, c) in affected {
            let nv = self.values[k].add(&theta.scale(&c));
            self.values[k] = nv;
        }
        self.pivot(b, y);
    }

    fn pivot(&mut self, b: usize, y: usize) {
        let row_b = self.rows.remove(&b).expect("pivot source must be basic");
        let a_by = row_b[&y].clone();
        let inv = BigRational::one() / &a_by;

        // y = b/a_by - sum_{j != y} (a_bj/a_by) x_j
        let mut row_y: HashMap<usize, BigRational> = HashMap::new();
        row_y.insert(b, inv.clone());
        for (j, c) in &row_b {
            if *j != y {
                row_y.insert(*j, -(c * &inv));
            }
        }

        for row in self.rows.values_mut() {
            if let Some(d) = row.remove(&y) {
                for (j, c) in &row_y {
                    let entry = row.entry(*j).or_insert_with(BigRational::zero);
                    *entry += &d * c;
                }
                row.retain(|_, c| !c.is_zero());
            }
        }
        row_y.retain(|_, c| !c.is_zero());
        self.rows.insert(y, row_y);
    }

    /// Repairs bound violations; returns a conflict core on infeasibility.
    fn check(&mut self, deadline: Instant) -> Result<(), Option<Vec<usize>>> {
        loop {
            if Instant::now() >= deadline {
                return Err(None);
            }
            let mut violated: Option<(usize, bool)> = None;
            let mut basics: Vec<usize> = self.rows.keys().copied().collect();
            basics.sort_unstable();
            for b in basics {
                if let Some((l, _)) = &self.lower[b] {
                    if self.values[b] < *l {
                        violated = Some((b, true));
                        break;
                    }
                }
                if let Some((u, _)) = &self.upper[b] {
                    if self.values[b] > *u {
                        violated = Some((b, false));
                        break;
                    }
                }
            }
            let Some((b, below)) = violated else {
                return Ok(());
            };

            let row: Vec<(usize, BigRational)> = {
                let mut cols: Vec<_> = self.rows[&b]
                    .iter()
                    .map(|(j, c)| (*j, c.clone()))
                    .collect();
                cols.sort_unstable_by_key(|(j, _)| *j);
                cols
            };
            let mut pivot_col = None;
            for (j, c) in &row {
                let usable = if below == c.is_positive() {
                    // increasing x_j raises the row value in the needed direction
                    self.upper[*j]
                        .as_ref()
                        .map(|(u, _)| self.values[*j] < *u)
                        .unwrap_or(true)
                } else {
                    self.lower[*j]
                        .as_ref()
                        .map(|(l, _)| self.values[*j] > *l)
                        .unwrap_or(true)
                };
                if usable {
                    pivot_col = Some(*j);
                    break;
                }
            }
            match pivot_col {
                Some(y) => {
                    let target = if below {
                        self.lower[b].as_ref().unwrap().0.clone()
                    } else {
                        self.upper[b].as_ref().unwrap().0.clone()
                    };
                    self.pivot_and_update(b, y, target);
                }
                None => {
                    let mut core = Vec::new();
                    let own = if below {
                        self.lower[b].as_ref().unwrap().1
                    } else {
                        self.upper[b].as_ref().unwrap().1
                    };
                    core.push(own);
                    for (j, c) in &row {
                        let why = if below == c.is_positive() {
                            self.upper[*j].as_ref().map(|(_, w)| *w)
                        } else {
                            self.lower[*j].as_ref().map(|(_, w)| *w)
                        };
                        if let Some(w) = why {
                            core.push(w);
                        }
                    }
                    core.sort_unstable();
                    core.dedup();
                    return Err(Some(core));
                }
            }
        }
    }

    /// Picks a concrete value for delta that preserves every asserted bound,
    /// then returns the rational values of the first `n` variables.
    fn concretize(&self, n: usize) -> Vec<BigRational> {
        let mut delta = BigRational::one();
        let mut tighten = |value: &DeltaRat, bound: &DeltaRat, value_is_upper: bool| {
            // constraint: bound <= value (or value <= bound when value_is_upper)
            let (lo, hi) = if value_is_upper {
                (value, bound)
            } else {
                (bound, value)
            };
            let dr = &hi.real - &lo.real;
            let dd = &lo.delta - &hi.delta;
            if dd.is_positive() && dr.is_positive() {
                let cand = dr / dd;
                if cand < delta {
                    delta = cand;
                }
            }
        };
        for v in 0..self.values.len() {
            if let Some((l, _)) = &self.lower[v] {
                tighten(&self.values[v], l, false);
            }
            if let Some((u, _)) = &self.upper[v] {
                tighten(&self.values[v], u, true);
            }
        }
        (0..n)
            .map(|v| &self.values[v].real + &self.values[v].delta * &delta)
            .collect()
    }
}

/// Scales to integral coefficients; tightens strict and divisibility bounds
/// when every variable in the constraint is integer-sorted. `Err` means the
/// constraint alone is infeasible.
fn normalize(mut con: LinCon, is_int: &[bool]) -> Result<LinCon, ()> {
    let all_int = con.coeffs.keys().all(|v| is_int[*v as usize]);
    if !all_int || con.coeffs.is_empty() {
        return Ok(con);
    }
    let mut lcm = BigInt::one();
    for c in con.coeffs.values().chain(std::iter::once(&con.constant)) {
        lcm = lcm.lcm(c.denom());
    }
    let scale = BigRational::from_integer(lcm);
    for c in con.coeffs.values_mut() {
        *c *= &scale;
    }
    con.constant *= &scale;

    // strict-to-weak conversion over integers (everything is integral here)
    match con.op {
        ConOp::Lt => {
            con.constant += BigRational::one();
            con.op = ConOp::Le;
        }
        ConOp::Gt => {
            con.constant -= BigRational::one();
            con.op = ConOp::Ge;
        }
        _ => {}
    }

    let mut gcd: Option<BigInt> = None;
    for c in con.coeffs.values() {
        let n = c.numer().abs();
        gcd = Some(match gcd {
            None => n,
            Some(g) => g.gcd(&n),
        });
    }
    let g = gcd.unwrap_or_else(BigInt::one);
    if g > BigInt::one() {
        let gr = BigRational::from_integer(g);
        for c in con.coeffs.values_mut() {
            *c /= &gr;
        }
        // sum(coeffs) + constant OP 0, with sum(coeffs) integer-valued after
        // division; round the constant toward the feasible side.
        let k = &con.constant / &gr;
        con.constant = match con.op {
            ConOp::Le => BigRational::from_integer(k.ceil().to_integer()),
            ConOp::Ge => BigRational::from_integer(k.floor().to_integer()),
            ConOp::Eq => {
                if !k.is_integer() {
                    return Err(());
                }
                k
            }
            ConOp::Ne => k, // non-integral k makes Ne trivially true; keep exact
            ConOp::Lt | ConOp::Gt => unreachable!("converted above"),
        };
    }
    Ok(con)
}

pub fn solve_theory(problem: &TheoryProblem, budget: &mut SearchBudget) -> TheoryOutcome {
    let mut cons = Vec::with_capacity(problem.constraints.len());
    for (i, c) in problem.constraints.iter().enumerate() {
        match normalize(c.clone(), &problem.is_int) {
            Ok(c) => cons.push(c),
            Err(()) => return TheoryOutcome::Unsat(vec![i]),
        }
    }

    let mut extra: Vec<LinCon> = Vec::new();
    match search(problem, &cons, &mut extra, budget, 0) {
        SearchResult::Sat(m) => TheoryOutcome::Sat(m),
        SearchResult::Unsat(core) => TheoryOutcome::Unsat(core),
        SearchResult::Unknown => TheoryOutcome::Unknown,
    }
}

enum SearchResult {
    Sat(Vec<BigRational>),
    Unsat(Vec<usize>),
    Unknown,
}

fn full_core(n: usize) -> Vec<usize> {
    (0..n).collect()
}

fn search(
    problem: &TheoryProblem,
    cons: &[LinCon],
    extra: &mut Vec<LinCon>,
    budget: &mut SearchBudget,
    depth: u32,
) -> SearchResult {
    if !budget.spend() || depth > 64 {
        return SearchResult::Unknown;
    }

    let n = problem.num_vars as usize;
    let mut slack_of: HashMap<Vec<(u32, BigRational)>, usize> = HashMap::new();
    let mut tab = Tableau::new(n);

    let mut conflict: Option<Vec<usize>> = None;
    let mut disequalities: Vec<(usize, &LinCon)> = Vec::new();

    {
        let mut assert_con =
            |tab: &mut Tableau, idx: usize, con: &LinCon| -> Result<(), Vec<usize>> {
                if con.op == ConOp::Ne {
                    return Ok(());
                }
                if con.coeffs.is_empty() {
                    let v = &con.constant;
                    let holds = match con.op {
                        ConOp::Le => !v.is_positive(),
                        ConOp::Lt => v.is_negative(),
                        ConOp::Ge => !v.is_negative(),
                        ConOp::Gt => v.is_positive(),
                        ConOp::Eq => v.is_zero(),
                        ConOp::Ne => unreachable!(),
                    };
                    return if holds { Ok(()) } else { Err(vec![idx]) };
                }
                // owner variable: the single unit-coefficient problem var, or a
                // slack representing the linear form
                let single_unit = con.coeffs.len() == 1
                    && con.coeffs.values().next().unwrap().is_one();
                let owner = if single_unit {
                    *con.coeffs.keys().next().unwrap() as usize
                } else {
                    let key: Vec<(u32, BigRational)> =
                        con.coeffs.iter().map(|(v, c)| (*v, c.clone())).collect();
                    *slack_of.entry(key).or_insert_with(|| {
                        let s = tab.values.len();
                        let row: HashMap<usize, BigRational> = con
                            .coeffs
                            .iter()
                            .map(|(v, c)| (*v as usize, c.clone()))
                            .collect();
                        let mut val = DeltaRat::zero();
                        for (j, c) in &row {
                            val = val.add(&tab.values[*j].scale(c));
                        }
                        tab.values.push(val);
                        tab.lower.push(None);
                        tab.upper.push(None);
                        tab.rows.insert(s, row);
                        s
                    })
                };
                // constraint: owner_form + constant OP 0  =>  owner OP -constant
                let bound_real = -con.constant.clone();
                let mk = |d: i64| DeltaRat {
                    real: bound_real.clone(),
                    delta: BigRational::from_integer(BigInt::from(d)),
                };
                match con.op {
                    ConOp::Le => tab.assert_upper(owner, mk(0), idx),
                    ConOp::Lt => tab.assert_upper(owner, mk(-1), idx),
                    ConOp::Ge => tab.assert_lower(owner, mk(0), idx),
                    ConOp::Gt => tab.assert_lower(owner, mk(1), idx),
                    ConOp::Eq => tab
                        .assert_upper(owner, mk(0), idx)
                        .and_then(|_| tab.assert_lower(owner, mk(0), idx)),
                    ConOp::Ne => unreachable!(),
                }
            };

        for (i, con) in cons.iter().enumerate() {
            if con.op == ConOp::Ne {
                disequalities.push((i, con));
                continue;
            }
            if let Err(core) = assert_con(&mut tab, i, con) {
                conflict = Some(core);
                break;
            }
        }
        if conflict.is_none() {
            for con in extra.iter() {
                if let Err(_core) = assert_con(&mut tab, BRANCH_REASON, con) {
                    conflict = Some(full_core(cons.len()));
                    break;
                }
            }
        }
    }

    if let Some(core) = conflict {
        let core = sanitize_core(core, cons.len(), depth);
        return SearchResult::Unsat(core);
    }

    match tab.check(budget.deadline) {
        Ok(()) => {}
        Err(None) => return SearchResult::Unknown,
        Err(Some(core)) => {
            let core = sanitize_core(core, cons.len(), depth);
            return SearchResult::Unsat(core);
        }
    }

    let model = tab.concretize(n);

    // integer branching
    for v in 0..n {
        if problem.is_int[v] && !model[v].is_integer() {
            let fl = model[v].floor();
            let le = LinCon {
                coeffs: BTreeMap::from([(v as u32, BigRational::one())]),
                constant: -fl.clone(),
                op: ConOp::Le,
            };
            let ge = LinCon {
                coeffs: BTreeMap::from([(v as u32, BigRational::one())]),
                constant: -(fl + BigRational::one()),
                op: ConOp::Ge,
            };
            return branch(problem, cons, extra, le, ge, budget, depth);
        }
    }

    // disequality splits
    for (_, con) in &disequalities {
        if con.eval(&model).is_zero() {
            let mut lt = (*con).clone();
            lt.op = ConOp::Lt;
            let mut gt = (*con).clone();
            gt.op = ConOp::Gt;
            let lt = normalize(lt, &problem.is_int).expect("lt never divides unevenly");
            let gt = normalize(gt, &problem.is_int).expect("gt never divides unevenly");
            return branch(problem, cons, extra, lt, gt, budget, depth);
        }
    }

    SearchResult::Sat(model)
}

fn branch(
    problem: &TheoryProblem,
    cons: &[LinCon],
    extra: &mut Vec<LinCon>,
    first: LinCon,
    second: LinCon,
    budget: &mut SearchBudget,
    depth: u32,
) -> SearchResult {
    extra.push(first);
    let r1 = search(problem, cons, extra, budget, depth + 1);
    extra.pop();
    match r1 {
        SearchResult::Sat(m) => return SearchResult::Sat(m),
        SearchResult::Unknown => return SearchResult::Unknown,
        SearchResult::Unsat(_) => {}
    }
    extra.push(second);
    let r2 = search(problem, cons, extra, budget, depth + 1);
    extra.pop();
    match r2 {
        SearchResult::Sat(m) => SearchResult::Sat(m),
        SearchResult::Unknown => SearchResult::Unknown,
        // Branch-level conflicts depend on branch bounds, so the only core
        // valid at this level is the full assignment.
        SearchResult::Unsat(_) => SearchResult::Unsat(full_core(cons.len())),
    }
}

fn sanitize_core(mut core: Vec<usize>, n_cons: usize, depth: u32) -> Vec<usize> {
    if depth > 0 || core.iter().any(|i| *i == BRANCH_REASON) {
        full_core(n_cons)
    } else {
        core.sort_unstable();
        core.dedup();
        core
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    fn budget() -> SearchBudget {
        SearchBudget {
            deadline: Instant::now() + std::time::Duration::from_secs(5),
            nodes_left: 10_000,
        }
    }

    fn con(coeffs: &[(u32, i64)], constant: i64, op: ConOp) -> LinCon {
        LinCon {
            coeffs: coeffs.iter().map(|(v, c)| (*v, rat(*c))).collect(),
            constant: rat(constant),
            op,
        }
    }

    #[test]
    fn infeasible_pair_of_bounds() {
        // x + 5 > 10 and x < 4
        let p = TheoryProblem {
            num_vars: 1,
            is_int: vec![true],
            constraints: vec![
                con(&[(0, 1)], -5, ConOp::Gt), // x - 5 > 0
                con(&[(0, 1)], -4, ConOp::Lt), // x - 4 < 0
            ],
        };
        match solve_theory(&p, &mut budget()) {
            TheoryOutcome::Unsat(core) => assert_eq!(core, vec![0, 1]),
            other => panic!("expected unsat, got {other:?}"),
        }
    }

    #[test]
    fn feasible_with_integer_model() {
        // x + 5 > 10 and x > 3 -> x >= 6 over ints
        let p = TheoryProblem {
            num_vars: 1,
            is_int: vec![true],
            constraints: vec![con(&[(0, 1)], -5, ConOp::Gt), con(&[(0, 1)], -3, ConOp::Gt)],
        };
        match solve_theory(&p, &mut budget()) {
            TheoryOutcome::Sat(m) => {
                assert!(m[0].is_integer());
                assert!(m[0] >= rat(6));
            }
            other => panic!("expected sat, got {other:?}"),
        }
    }

    #[test]
    fn strict_rational_separation() {
        // x < y and y < x is infeasible over reals
        let p = TheoryProblem {
            num_vars: 2,
            is_int: vec![false, false],
            constraints: vec![
                con(&[(0, 1), (1, -1)], 0, ConOp::Lt),
                con(&[(0, -1), (1, 1)], 0, ConOp::Lt),
            ],
        };
        assert!(matches!(
            solve_theory(&p, &mut budget()),
            TheoryOutcome::Unsat(_)
        ));
    }

    #[test]
    fn strict_bounds_admit_rational_point() {
        // 0 < x < 1 over reals is satisfiable
        let p = TheoryProblem {
            num_vars: 1,
            is_int: vec![false],
            constraints: vec![con(&[(0, 1)], 0, ConOp::Gt), con(&[(0, 1)], -1, ConOp::Lt)],
        };
        match solve_theory(&p, &mut budget()) {
            TheoryOutcome::Sat(m) => {
                assert!(m[0] > rat(0) && m[0] < rat(1));
            }
            other => panic!("expected sat, got {other:?}"),
        }
    }

    #[test]
    fn integer_gap_is_infeasible() {
        // 0 < x < 1 over ints is infeasible
        let p = TheoryProblem {
            num_vars: 1,
            is_int: vec![true],
            constraints: vec![con(&[(0, 1)], 0, ConOp::Gt), con(&[(0, 1)], -1, ConOp::Lt)],
        };
        assert!(matches!(
            solve_theory(&p, &mut budget()),
            TheoryOutcome::Unsat(_)
        ));
    }

    #[test]
    fn parity_equation_detected_at_normalization() {
        // 2x = 2y + 1 has no integer solution
        let p = TheoryProblem {
            num_vars: 2,
            is_int: vec![true, true],
            constraints: vec![con(&[(0, 2), (1, -2)], -1, ConOp::Eq)],
        };
        assert!(matches!(
            solve_theory(&p, &mut budget()),
            TheoryOutcome::Unsat(_)
        ));
    }

    #[test]
    fn disequality_splits() {
        // x = 5 and x != 5 is infeasible
        let p = TheoryProblem {
            num_vars: 1,
            is_int: vec![true],
            constraints: vec![con(&[(0, 1)], -5, ConOp::Eq), con(&[(0, 1)], -5, ConOp::Ne)],
        };
        assert!(matches!(
            solve_theory(&p, &mut budget()),
            TheoryOutcome::Unsat(_)
        ));

        // 0 <= x <= 1 and x != 0 forces x = 1
        let p = TheoryProblem {
            num_vars: 1,
            is_int: vec![true],
            constraints: vec![
                con(&[(0, 1)], 0, ConOp::Ge),
                con(&[(0, 1)], -1, ConOp::Le),
                con(&[(0, 1)], 0, ConOp::Ne),
            ],
        };
        match solve_theory(&p, &mut budget()) {
            TheoryOutcome::Sat(m) => assert_eq!(m[0], rat(1)),
            other => panic!("expected sat, got {other:?}"),
        }
    }

    #[test]
    fn chained_equalities_propagate() {
        // x = y, y = z, x = 3, z != 3 is infeasible
        let p = TheoryProblem {
            num_vars: 3,
            is_int: vec![true, true, true],
            constraints: vec![
                con(&[(0, 1), (1, -1)], 0, ConOp::Eq),
                con(&[(1, 1), (2, -1)], 0, ConOp::Eq),
                con(&[(0, 1)], -3, ConOp::Eq),
                con(&[(2, 1)], -3, ConOp::Ne),
            ],
        };
        assert!(matches!(
            solve_theory(&p, &mut budget()),
            TheoryOutcome::Unsat(_)
        ));
    }

    #[test]
    fn mixed_int_real_constraints() {
        // x int, r real, x < r, r < x + 1 is satisfiable (r strictly between)
        let p = TheoryProblem {
            num_vars: 2,
            is_int: vec![true, false],
            constraints: vec![
                con(&[(0, 1), (1, -1)], 0, ConOp::Lt),
                con(&[(0, -1), (1, 1)], -1, ConOp::Lt),
            ],
        };
        match solve_theory(&p, &mut budget()) {
            TheoryOutcome::Sat(m) => {
                assert!(m[0].is_integer());
                assert!(m[1] > m[0] && m[1] < &m[0] + rat(1));
            }
            other => panic!("expected sat, got {other:?}"),
        }
    }
}
