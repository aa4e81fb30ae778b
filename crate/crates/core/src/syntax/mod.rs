//! Abstract syntax of While with `input`/`output`, states and pure
//! expression evaluation.
//!
//! Integers are unbounded. Comparisons and boolean connectives yield 1 or 0,
//! and any non-zero integer counts as true.

mod parser;
mod printer;
mod state;

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};

pub use parser::{parse_expr, parse_program, ParseError, ParseErrorKind};
pub use state::{BindingError, State};

/// The value domain: unbounded integers.
pub type Value = BigInt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    And,
    Or,
}

impl BinOp {
    pub fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Eq => "=",
            BinOp::Ne => "<>",
            BinOp::Lt => "<",
            BinOp::Le => "<=",
            BinOp::Gt => ">",
            BinOp::Ge => ">=",
            BinOp::And => "and",
            BinOp::Or => "or",
        }
    }

    /// Binding strength; all binary operators associate to the left.
    pub(crate) fn precedence(self) -> u8 {
        match self {
            BinOp::Or => 1,
            BinOp::And => 2,
            // 3 is prefix `not`
            BinOp::Eq | BinOp::Ne | BinOp::Lt | BinOp::Le | BinOp::Gt | BinOp::Ge => 4,
            BinOp::Add | BinOp::Sub => 5,
            BinOp::Mul => 6,
        }
    }

    pub fn is_comparison(self) -> bool {
        self.precedence() == 4
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Expr {
    Int(Value),
    Var(String),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Not(Box<Expr>),
}

impl Expr {
    pub fn int(n: impl Into<Value>) -> Expr {
        Expr::Int(n.into())
    }

    pub fn var(x: &str) -> Expr {
        Expr::Var(x.to_owned())
    }

    pub fn bin(op: BinOp, l: Expr, r: Expr) -> Expr {
        Expr::Bin(op, Box::new(l), Box::new(r))
    }

    pub fn not_(e: Expr) -> Expr {
        Expr::Not(Box::new(e))
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Expr::Int(_) => {}
            Expr::Var(x) => {
                out.insert(x.clone());
            }
            Expr::Bin(_, l, r) => {
                l.collect_vars(out);
                r.collect_vars(out);
            }
            Expr::Not(e) => e.collect_vars(out),
        }
    }
}

fn truth(b: bool) -> Value {
    if b {
        BigInt::one()
    } else {
        BigInt::zero()
    }
}

/// `⟦e⟧σ`. Total and pure.
pub fn eval_expr(e: &Expr, sigma: &State) -> Value {
    match e {
        Expr::Int(n) => n.clone(),
        Expr::Var(x) => sigma.lookup(x),
        Expr::Not(e) => truth(eval_expr(e, sigma).is_zero()),
        Expr::Bin(BinOp::And, l, r) => {
            truth(!eval_expr(l, sigma).is_zero() && !eval_expr(r, sigma).is_zero())
        }
        Expr::Bin(BinOp::Or, l, r) => {
            truth(!eval_expr(l, sigma).is_zero() || !eval_expr(r, sigma).is_zero())
        }
        Expr::Bin(op, l, r) => {
            let a = eval_expr(l, sigma);
            let b = eval_expr(r, sigma);
            match op {
                BinOp::Add => a + b,
                BinOp::Sub => a - b,
                BinOp::Mul => a * b,
                BinOp::Eq => truth(a == b),
                BinOp::Ne => truth(a != b),
                BinOp::Lt => truth(a < b),
                BinOp::Le => truth(a <= b),
                BinOp::Gt => truth(a > b),
                BinOp::Ge => truth(a >= b),
                BinOp::And | BinOp::Or => unreachable!(),
            }
        }
    }
}

pub fn is_true(e: &Expr, sigma: &State) -> bool {
    !eval_expr(e, sigma).is_zero()
}

pub fn is_false(e: &Expr, sigma: &State) -> bool {
    eval_expr(e, sigma).is_zero()
}

/// Statements. Children are shared so that semantic functions can capture
/// sub-statements in deferred closures without copying trees.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Stmt {
    Skip,
    Seq(Arc<Stmt>, Arc<Stmt>),
    Assign(String, Expr),
    If(Expr, Arc<Stmt>, Arc<Stmt>),
    While(Expr, Arc<Stmt>),
    Input(String),
    Output(Expr),
}

impl Stmt {
    pub fn seq(a: Stmt, b: Stmt) -> Stmt {
        Stmt::Seq(Arc::new(a), Arc::new(b))
    }

    pub fn assign(x: &str, e: Expr) -> Stmt {
        Stmt::Assign(x.to_owned(), e)
    }

    pub fn if_(e: Expr, t: Stmt, f: Stmt) -> Stmt {
        Stmt::If(e, Arc::new(t), Arc::new(f))
    }

    pub fn while_(e: Expr, body: Stmt) -> Stmt {
        Stmt::While(e, Arc::new(body))
    }

    pub fn input(x: &str) -> Stmt {
        Stmt::Input(x.to_owned())
    }

    pub fn output(e: Expr) -> Stmt {
        Stmt::Output(e)
    }

    /// Every variable read or written by the statement.
    pub fn variables(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Stmt::Skip => {}
            Stmt::Seq(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            Stmt::Assign(x, e) => {
                out.insert(x.clone());
                e.collect_vars(out);
            }
            Stmt::If(e, t, f) => {
                e.collect_vars(out);
                t.collect_vars(out);
                f.collect_vars(out);
            }
            Stmt::While(e, b) => {
                e.collect_vars(out);
                b.collect_vars(out);
            }
            Stmt::Input(x) => {
                out.insert(x.clone());
            }
            Stmt::Output(e) => e.collect_vars(out),
        }
    }

    /// Whether the statement contains no `input` or `output`.
    pub fn is_io_free(&self) -> bool {
        match self {
            Stmt::Skip | Stmt::Assign(..) => true,
            Stmt::Input(_) | Stmt::Output(_) => false,
            Stmt::Seq(a, b) | Stmt::If(_, a, b) => a.is_io_free() && b.is_io_free(),
            Stmt::While(_, b) => b.is_io_free(),
        }
    }
}

impl fmt::Display for Stmt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&printer::print_stmt(self))
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&printer::print_expr(self))
    }
}
