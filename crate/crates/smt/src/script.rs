//! Rendering of terms and check scripts as SMT-LIB2 text.

use std::collections::BTreeMap;
use std::fmt::Write;

use crate::term::{CmpOp, Sort, Term, TermKind};

fn rational_to_smtlib(r: &crate::term::Rational) -> String {
    if r.is_integer() {
        let n = r.to_integer();
        if n < 0 {
            format!("(- {}.0)", -n)
        } else {
            format!("{n}.0")
        }
    } else if *r.numer() < 0 {
        format!("(- (/ {}.0 {}.0))", -r.numer(), r.denom())
    } else {
        format!("(/ {}.0 {}.0)", r.numer(), r.denom())
    }
}

pub fn term_to_smtlib(t: &Term) -> String {
    let mut s = String::new();
    write_term(&mut s, t);
    s
}

fn write_nary(out: &mut String, op: &str, parts: &[Term]) {
    out.push('(');
    out.push_str(op);
    for p in parts {
        out.push(' ');
        write_term(out, p);
    }
    out.push(')');
}

fn write_term(out: &mut String, t: &Term) {
    match t.kind() {
        TermKind::BoolLit(b) => out.push_str(if *b { "true" } else { "false" }),
        TermKind::IntLit(v) => {
            if *v < 0 {
                let _ = write!(out, "(- {})", -v);
            } else {
                let _ = write!(out, "{v}");
            }
        }
        TermKind::RealLit(r) => out.push_str(&rational_to_smtlib(r)),
        TermKind::Var(id, _) => {
            let _ = write!(out, "{id}");
        }
        TermKind::Not(inner) => write_nary(out, "not", std::slice::from_ref(inner)),
        TermKind::And(parts) => write_nary(out, "and", parts),
        TermKind::Or(parts) => write_nary(out, "or", parts),
        TermKind::Ite(c, a, b) => {
            write_nary(out, "ite", &[c.clone(), a.clone(), b.clone()]);
        }
        TermKind::Add(parts) => write_nary(out, "+", parts),
        TermKind::Neg(inner) => write_nary(out, "-", std::slice::from_ref(inner)),
        TermKind::Mul(a, b) => write_nary(out, "*", &[a.clone(), b.clone()]),
        TermKind::Div(a, b) => {
            let op = if a.sort() == Sort::Real || b.sort() == Sort::Real {
                "/"
            } else {
                "div"
            };
            write_nary(out, op, &[a.clone(), b.clone()]);
        }
        TermKind::Mod(a, b) => write_nary(out, "mod", &[a.clone(), b.clone()]),
        TermKind::Cmp(op, a, b) => {
            let sym = match op {
                CmpOp::Lt => "<",
                CmpOp::Le => "<=",
                CmpOp::Gt => ">",
                CmpOp::Ge => ">=",
            };
            write_nary(out, sym, &[a.clone(), b.clone()]);
        }
        TermKind::Eq(a, b) => write_nary(out, "=", &[a.clone(), b.clone()]),
        TermKind::App(name, _, args) => {
            if args.is_empty() {
                out.push_str(name);
            } else {
                out.push('(');
                out.push_str(name);
                for a in args {
                    out.push(' ');
                    write_term(out, a);
                }
                out.push(')');
            }
        }
    }
}

/// Renders a full check script for a single assertion: declarations,
/// `assert`, `check-sat`. `get_model` appends a model request.
pub fn check_script(formula: &Term, get_model: bool) -> String {
    let mut vars = BTreeMap::new();
    formula.collect_vars(&mut vars);
    let mut apps = BTreeMap::new();
    formula.collect_apps(&mut apps);

    let mut s = String::new();
    s.push_str("(set-logic ALL)\n");
    for (id, sort) in &vars {
        let _ = writeln!(s, "(declare-fun {id} () {sort})");
    }
    for (name, (ret, arg_sorts)) in &apps {
        let args = arg_sorts
            .iter()
            .map(|a| a.to_string())
            .collect::<Vec<_>>()
            .join(" ");
        let _ = writeln!(s, "(declare-fun {name} ({args}) {ret})");
    }
    let _ = writeln!(s, "(assert {})", term_to_smtlib(formula));
    s.push_str("(check-sat)\n");
    if get_model {
        s.push_str("(get-model)\n");
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::{Sort, Term, VarId};

    #[test]
    fn renders_negative_literals_prefix_style() {
        assert_eq!(term_to_smtlib(&Term::int(-4)), "(- 4)");
        assert_eq!(
            term_to_smtlib(&Term::real(crate::term::Rational::new(-1, 2))),
            "(- (/ 1.0 2.0))"
        );
    }

    #[test]
    fn script_declares_all_vars() {
        let x = Term::var(VarId(0), Sort::Int);
        let y = Term::var(VarId(1), Sort::Bool);
        let f = Term::and([Term::cmp(crate::term::CmpOp::Gt, x, Term::int(3)), y]);
        let script = check_script(&f, false);
        assert!(script.contains("(declare-fun x0 () Int)"));
        assert!(script.contains("(declare-fun x1 () Bool)"));
        assert!(script.contains("(check-sat)"));
    }
}
