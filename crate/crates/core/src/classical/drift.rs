//! Silent-divergence proofs for loops whose state drifts by a constant
//! vector.
//!
//! Suppose a configuration `(s, σ)` was preceded by `(s, σ − Δ)`. We run the
//! small-step rules symbolically from `(s, σ + kΔ)` with `k ≥ 0` unknown,
//! every variable being an affine term `c + d·k`. If every guard met on the
//! way has the same truth value for all `k`, no visible action occurs, and
//! the run comes back to `s` in state `σ + (k+1)Δ`, then by induction on `k`
//! the run from `(s, σ)` never leaves silence.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::syntax::{BinOp, Expr, State, Stmt};

#[derive(Clone, Debug, PartialEq, Eq)]
struct Affine {
    c: BigInt,
    d: BigInt,
}

impl Affine {
    fn constant(c: BigInt) -> Affine {
        Affine { c, d: BigInt::zero() }
    }

    fn truth(b: bool) -> Affine {
        Affine::constant(if b { BigInt::one() } else { BigInt::zero() })
    }

    /// `Some(true)` if `c + d·k = 0` for every `k ≥ 0`, `Some(false)` if for
    /// none, `None` if it depends on `k`.
    fn always_zero(&self) -> Option<bool> {
        if self.d.is_zero() {
            return Some(self.c.is_zero());
        }
        let (q, r) = self.c.div_rem(&self.d);
        let hits = r.is_zero() && !q.is_positive();
        if hits {
            None
        } else {
            Some(false)
        }
    }

    /// `Some(true)` if `c + d·k < 0` for every `k ≥ 0`, `Some(false)` if
    /// `≥ 0` for every `k ≥ 0`.
    fn always_negative(&self) -> Option<bool> {
        if self.c.is_negative() && !self.d.is_positive() {
            Some(true)
        } else if !self.c.is_negative() && !self.d.is_negative() {
            Some(false)
        } else {
            None
        }
    }

    fn add(&self, o: &Affine) -> Affine {
        Affine {
            c: &self.c + &o.c,
            d: &self.d + &o.d,
        }
    }

    fn neg(&self) -> Affine {
        Affine {
            c: -&self.c,
            d: -&self.d,
        }
    }

    fn mul(&self, o: &Affine) -> Option<Affine> {
        if self.d.is_zero() {
            Some(Affine {
                c: &self.c * &o.c,
                d: &self.c * &o.d,
            })
        } else if o.d.is_zero() {
            o.mul(self)
        } else {
            None
        }
    }
}

type SymState = BTreeMap<String, Affine>;

fn lookup(st: &SymState, x: &str) -> Affine {
    st.get(x).cloned().unwrap_or_else(|| Affine::constant(BigInt::zero()))
}

fn truthy(e: &Expr, st: &SymState) -> Option<bool> {
    eval(e, st)?.always_zero().map(|z| !z)
}

fn eval(e: &Expr, st: &SymState) -> Option<Affine> {
    Some(match e {
        Expr::Int(n) => Affine::constant(n.clone()),
        Expr::Var(x) => lookup(st, x),
        Expr::Not(e) => Affine::truth(!truthy(e, st)?),
        Expr::Bin(BinOp::And, l, r) => Affine::truth(truthy(l, st)? && truthy(r, st)?),
        Expr::Bin(BinOp::Or, l, r) => Affine::truth(truthy(l, st)? || truthy(r, st)?),
        Expr::Bin(op, l, r) => {
            let a = eval(l, st)?;
            let b = eval(r, st)?;
            let diff = a.add(&b.neg());
            match op {
                BinOp::Add => a.add(&b),
                BinOp::Sub => diff,
                BinOp::Mul => a.mul(&b)?,
                BinOp::Eq => Affine::truth(diff.always_zero()?),
                BinOp::Ne => Affine::truth(!diff.always_zero()?),
                BinOp::Lt => Affine::truth(diff.always_negative()?),
                BinOp::Ge => Affine::truth(!diff.always_negative()?),
                BinOp::Gt => Affine::truth(diff.neg().always_negative()?),
                BinOp::Le => Affine::truth(!diff.neg().always_negative()?),
                BinOp::And | BinOp::Or => unreachable!(),
            }
        }
    })
}

enum SymStep {
    Ret(SymState),
    Delay(Arc<Stmt>, SymState),
}

fn skip() -> Arc<Stmt> {
    Arc::new(Stmt::Skip)
}

/// The small-step rules on symbolic states; `None` on a visible action or
/// a guard that depends on `k`.
fn sym_step(s: &Arc<Stmt>, st: &SymState) -> Option<SymStep> {
    Some(match &**s {
        Stmt::Skip => SymStep::Ret(st.clone()),
        Stmt::Assign(x, e) => {
            let mut t = st.clone();
            t.insert(x.clone(), eval(e, st)?);
            SymStep::Delay(skip(), t)
        }
        Stmt::Seq(a, b) => match sym_step(a, st)? {
            SymStep::Ret(t) => sym_step(b, &t)?,
            SymStep::Delay(a2, t) => SymStep::Delay(Arc::new(Stmt::Seq(a2, b.clone())), t),
        },
        Stmt::If(e, t, f) => {
            let branch = if truthy(e, st)? { t } else { f };
            SymStep::Delay(branch.clone(), st.clone())
        }
        Stmt::While(e, body) => {
            if truthy(e, st)? {
                SymStep::Delay(Arc::new(Stmt::Seq(body.clone(), s.clone())), st.clone())
            } else {
                SymStep::Delay(skip(), st.clone())
            }
        }
        Stmt::Input(_) | Stmt::Output(_) => return None,
    })
}

/// Tries to prove that `(s, sigma)` diverges silently, using the drift
/// `delta` (per variable of `vars`). Returns the number of delay steps after
/// which the run is back at `s` with state `sigma + delta`.
pub(super) fn prove(
    s: &Arc<Stmt>,
    sigma: &State,
    delta: &BTreeMap<String, BigInt>,
    vars: &BTreeSet<String>,
    max_steps: u64,
) -> Option<u64> {
    let start: SymState = vars
        .iter()
        .map(|x| {
            let d = delta.get(x).cloned().unwrap_or_default();
            (x.clone(), Affine { c: sigma.lookup(x), d })
        })
        .collect();
    let target: SymState = start
        .iter()
        .map(|(x, a)| {
            (
                x.clone(),
                Affine {
                    c: &a.c + &a.d,
                    d: a.d.clone(),
                },
            )
        })
        .collect();
    let (mut cur, mut st) = (s.clone(), start);
    for n in 1..=max_steps {
        match sym_step(&cur, &st)? {
            SymStep::Ret(_) => return None,
            SymStep::Delay(next, t) => {
                if next == *s {
                    return vars.iter().all(|x| lookup(&t, x) == lookup(&target, x)).then_some(n);
                }
                (cur, st) = (next, t);
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::smallstep::{step_arc, LConf};
    use crate::syntax::{parse_expr, parse_program};

    fn sym(pairs: &[(&str, i64, i64)]) -> SymState {
        pairs
            .iter()
            .map(|&(x, c, d)| (x.to_owned(), Affine { c: c.into(), d: d.into() }))
            .collect()
    }

    #[test]
    fn uniform_guards() {
        let st = sym(&[("x", -1, -1), ("y", 3, 0)]);
        let t = |e: &str| truthy(&parse_expr(e).unwrap(), &st);
        assert_eq!(t("x <> 0"), Some(true));
        assert_eq!(t("x < 0"), Some(true));
        assert_eq!(t("x >= 0"), Some(false));
        assert_eq!(t("x + 5 > 0"), None);
        assert_eq!(t("x = -3"), None);
        assert_eq!(t("2 * x = -3"), Some(false));
        assert_eq!(t("y * x < 0"), Some(true));
        assert_eq!(t("x * x > 0"), None);
        assert_eq!(t("not (y = 3) or x <= -1"), Some(true));
    }

    fn drift_of(text: &str, pairs: &[(&str, i64)], warmup: usize) -> Option<u64> {
        let p = Arc::new(parse_program(text).unwrap());
        let vars = p.variables();
        let mut c = (p.clone(), pairs.iter().map(|&(k, v)| (k, v)).collect::<State>());
        let mut seen: Vec<(Arc<Stmt>, State)> = Vec::new();
        for _ in 0..warmup {
            seen.push(c.clone());
            let LConf::Delay(s, t) = step_arc(&c.0, &c.1) else { return None };
            c = (s, t);
        }
        let prev = seen.iter().rev().find(|(s, _)| *s == c.0)?;
        let delta = vars
            .iter()
            .map(|x| (x.clone(), c.1.lookup(x) - prev.1.lookup(x)))
            .collect();
        prove(&c.0, &c.1, &delta, &vars, 100)
    }

    #[test]
    fn countdown_past_zero_diverges() {
        let n = drift_of("while x <> 0 do z := z + y; x := x - 1 end", &[("x", -1), ("y", 5)], 7);
        assert_eq!(n, Some(3));
    }

    #[test]
    fn terminating_countdown_is_not_proved() {
        assert_eq!(drift_of("while x > 0 do x := x - 1 end", &[("x", 100)], 5), None);
        assert_eq!(drift_of("while x <> 0 do x := x - 1 end", &[("x", 100)], 5), None);
    }
}
