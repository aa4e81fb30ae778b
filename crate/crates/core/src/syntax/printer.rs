//! Pretty-printer producing text that parses back to the same tree.
//!
//! Only right-nested sequences are representable in the concrete syntax, so
//! the round trip holds for every tree the parser can produce.

use super::{Expr, Stmt};

const NOT_LEVEL: u8 = 3;

pub(super) fn print_expr(e: &Expr) -> String {
    let mut out = String::new();
    expr_at(e, 0, &mut out);
    out
}

fn expr_at(e: &Expr, min: u8, out: &mut String) {
    match e {
        Expr::Int(n) => out.push_str(&n.to_string()),
        Expr::Var(x) => out.push_str(x),
        Expr::Not(inner) => {
            let paren = NOT_LEVEL < min;
            if paren {
                out.push('(');
            }
            out.push_str("not ");
            expr_at(inner, NOT_LEVEL, out);
            if paren {
                out.push(')');
            }
        }
        Expr::Bin(op, l, r) => {
            let p = op.precedence();
            let paren = p < min;
            if paren {
                out.push('(');
            }
            expr_at(l, p, out);
            out.push(' ');
            out.push_str(op.symbol());
            out.push(' ');
            expr_at(r, p + 1, out);
            if paren {
                out.push(')');
            }
        }
    }
}

pub(super) fn print_stmt(s: &Stmt) -> String {
    let mut out = String::new();
    stmt(s, &mut out);
    out
}

fn stmt(s: &Stmt, out: &mut String) {
    match s {
        Stmt::Skip => out.push_str("skip"),
        Stmt::Seq(a, b) => {
            stmt(a, out);
            out.push_str("; ");
            stmt(b, out);
        }
        Stmt::Assign(x, e) => {
            out.push_str(x);
            out.push_str(" := ");
            expr_at(e, 0, out);
        }
        Stmt::If(e, t, f) => {
            out.push_str("if ");
            expr_at(e, 0, out);
            out.push_str(" then ");
            stmt(t, out);
            out.push_str(" else ");
            stmt(f, out);
            out.push_str(" end");
        }
        Stmt::While(e, b) => {
            out.push_str("while ");
            expr_at(e, 0, out);
            out.push_str(" do ");
            stmt(b, out);
            out.push_str(" end");
        }
        Stmt::Input(x) => {
            out.push_str("input ");
            out.push_str(x);
        }
        Stmt::Output(e) => {
            out.push_str("output ");
            expr_at(e, 0, out);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::{parse_expr, parse_program, BinOp, Expr, Stmt};
    use proptest::prelude::*;

    #[test]
    fn minimal_parentheses() {
        let e = parse_expr("(1 + 2) * 3").unwrap();
        assert_eq!(e.to_string(), "(1 + 2) * 3");
        let e = parse_expr("1 - (2 - 3)").unwrap();
        assert_eq!(e.to_string(), "1 - (2 - 3)");
        let e = parse_expr("not (a and b)").unwrap();
        assert_eq!(e.to_string(), "not (a and b)");
        let e = parse_expr("(not a) = b").unwrap();
        assert_eq!(e.to_string(), "(not a) = b");
    }

    #[test]
    fn statement_layout() {
        let s = parse_program("if x > 0 then output x else skip end; x := x - 1").unwrap();
        assert_eq!(s.to_string(), "if x > 0 then output x else skip end; x := x - 1");
    }

    const VARS: &[&str] = &["x", "y", "z", "i"];

    fn arb_expr() -> impl Strategy<Value = Expr> {
        let leaf = prop_oneof![
            (-20i64..20).prop_map(Expr::int),
            proptest::sample::select(VARS).prop_map(Expr::var),
        ];
        leaf.prop_recursive(4, 24, 2, |inner| {
            let ops = proptest::sample::select(vec![
                BinOp::Add,
                BinOp::Sub,
                BinOp::Mul,
                BinOp::Eq,
                BinOp::Ne,
                BinOp::Lt,
                BinOp::Le,
                BinOp::Gt,
                BinOp::Ge,
                BinOp::And,
                BinOp::Or,
            ]);
            prop_oneof![
                (ops, inner.clone(), inner.clone()).prop_map(|(op, l, r)| Expr::bin(op, l, r)),
                inner.prop_map(Expr::not_),
            ]
        })
    }

    /// Statements whose sequences are right-nested, as the grammar produces.
    pub(crate) fn arb_stmt() -> impl Strategy<Value = Stmt> {
        let var = proptest::sample::select(VARS);
        let leaf = prop_oneof![
            Just(Stmt::Skip),
            (var.clone(), arb_expr()).prop_map(|(x, e)| Stmt::assign(x, e)),
            var.prop_map(Stmt::input),
            arb_expr().prop_map(Stmt::output),
        ];
        leaf.prop_recursive(4, 32, 3, |inner| {
            prop_oneof![
                (inner.clone(), inner.clone()).prop_map(|(a, b)| match a {
                    Stmt::Seq(..) => Stmt::seq(b, a),
                    _ => Stmt::seq(a, b),
                }),
                (arb_expr(), inner.clone(), inner.clone()).prop_map(|(e, t, f)| Stmt::if_(e, t, f)),
                (arb_expr(), inner).prop_map(|(e, b)| Stmt::while_(e, b)),
            ]
        })
    }

    fn right_nested(s: &Stmt) -> bool {
        match s {
            Stmt::Seq(a, b) => !matches!(**a, Stmt::Seq(..)) && right_nested(a) && right_nested(b),
            Stmt::If(_, t, f) => right_nested(t) && right_nested(f),
            Stmt::While(_, b) => right_nested(b),
            _ => true,
        }
    }

    proptest! {
        #[test]
        fn expr_round_trip(e in arb_expr()) {
            let text = e.to_string();
            prop_assert_eq!(parse_expr(&text).unwrap(), e);
        }

        #[test]
        fn stmt_round_trip(s in arb_stmt().prop_filter("right-nested", right_nested)) {
            let text = s.to_string();
            prop_assert_eq!(parse_program(&text).unwrap(), s);
        }
    }
}
