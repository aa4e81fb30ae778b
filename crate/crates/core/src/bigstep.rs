//! The delayful big-step semantics, read as a corecursive function.
//!
//! Assignments and guard tests each cost one delay; `skip`, `input` and
//! `output` cost none.

use std::sync::Arc;

use crate::resumption::{Head, Res};
use crate::syntax::{eval_expr, is_true, State, Stmt};

/// The resumption of `s` run from `sigma`.
pub fn eval_big(s: &Stmt, sigma: &State) -> Res {
    eval_arc(Arc::new(s.clone()), sigma.clone())
}

/// Extended evaluation: runs `s` from every final state of `r`.
pub fn exec_seq(s: &Stmt, r: Res) -> Res {
    exec_arc(Arc::new(s.clone()), r)
}

pub(crate) fn eval_arc(s: Arc<Stmt>, sigma: State) -> Res {
    Res::new(move || eval_head(&s, &sigma))
}

fn eval_head(s: &Arc<Stmt>, sigma: &State) -> Head {
    match &**s {
        Stmt::Skip => Head::Ret(sigma.clone()),
        Stmt::Assign(x, e) => Head::Delay(Res::ret(sigma.update(x, eval_expr(e, sigma)))),
        Stmt::Seq(a, b) => exec_arc(b.clone(), eval_arc(a.clone(), sigma.clone())).observe(),
        Stmt::If(e, t, f) => {
            let branch = if is_true(e, sigma) { t } else { f };
            exec_arc(branch.clone(), Res::delay(Res::ret(sigma.clone()))).observe()
        }
        Stmt::While(e, body) => {
            if is_true(e, sigma) {
                let once = exec_arc(body.clone(), Res::delay(Res::ret(sigma.clone())));
                exec_arc(s.clone(), once).observe()
            } else {
                Head::Delay(Res::ret(sigma.clone()))
            }
        }
        Stmt::Input(x) => {
            let (x, sigma) = (x.clone(), sigma.clone());
            Head::In(Arc::new(move |v| Res::ret(sigma.update(&x, v.clone()))))
        }
        Stmt::Output(e) => Head::Out(eval_expr(e, sigma), Res::ret(sigma.clone())),
    }
}

pub(crate) fn exec_arc(s: Arc<Stmt>, r: Res) -> Res {
    Res::new(move || match r.observe() {
        Head::Ret(sigma) => eval_head(&s, &sigma),
        Head::In(f) => {
            let s = s.clone();
            Head::In(Arc::new(move |v| exec_arc(s.clone(), f(v))))
        }
        Head::Out(v, t) => Head::Out(v, exec_arc(s.clone(), t)),
        Head::Delay(t) => Head::Delay(exec_arc(s.clone(), t)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::resumption::{
        bot, converges, render, rep, rep_fast, strong_bisim, sum_res, up, CheckBudget,
        ConvergeResult,
    };
    use crate::syntax::{parse_program, Value};
    use crate::weak_bisim::weak_bisim;

    fn prog(text: &str) -> Stmt {
        parse_program(text).unwrap()
    }

    fn sigma(pairs: &[(&str, i64)]) -> State {
        pairs.iter().map(|&(k, v)| (k, v)).collect()
    }

    fn delays_to_ret(s: &str) -> u64 {
        match converges(&eval_big(&prog(s), &State::new()), 100) {
            ConvergeResult::Converged { head: Head::Ret(_), delays } => delays,
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn delay_discipline() {
        assert_eq!(delays_to_ret("skip"), 0);
        assert_eq!(delays_to_ret("x := 1"), 1);
        assert_eq!(delays_to_ret("x := 1; y := 2; skip"), 2);
        assert_eq!(delays_to_ret("if 1 then skip else x := 1 end"), 1);
        assert_eq!(delays_to_ret("if 0 then skip else x := 1 end"), 2);
        assert_eq!(delays_to_ret("while false do skip end"), 1);
        // three guard tests, two assignments
        assert_eq!(delays_to_ret("x := 2; while x > 0 do x := x - 1 end"), 1 + 3 + 2);
    }

    #[test]
    fn silent_loop_is_bot() {
        let r = eval_big(&prog("while true do skip end"), &State::new());
        assert!(strong_bisim(&r, &bot(), &CheckBudget::new(10, 200, [0]).unwrap()).holds());
    }

    #[test]
    fn counter_counts_up() {
        let r = eval_big(&prog("input x; while true do output x; x := x + 1 end"), &State::new());
        let expected = Res::input(|n| up(n.clone()));
        let b = CheckBudget::new(10, 60, [0, 1, 5]).unwrap();
        assert!(strong_bisim(&r, &expected, &b).holds());
    }

    #[test]
    fn adder_is_sum() {
        let r = eval_big(&prog("while true do input x; input y; output x + y end"), &State::new());
        assert!(strong_bisim(&r, &sum_res(), &CheckBudget::new(10, 40, [-1, 0, 3]).unwrap()).holds());
    }

    #[test]
    fn licm_shapes() {
        let s = sigma(&[("x", 7)]);
        let before = eval_big(&prog("while true do z := x; output z end"), &s);
        let after = eval_big(&prog("z := x; while true do output z end"), &s);
        let b = CheckBudget::new(10, 50, [0]).unwrap();
        assert!(strong_bisim(&before, &rep(7), &b).holds());
        assert!(strong_bisim(&after, &Res::delay(rep_fast(7)), &b).holds());
        assert!(strong_bisim(&before, &after, &b).fails());
        assert!(weak_bisim(&before, &after, &b).holds());
    }

    #[test]
    fn exec_seq_rules() {
        let s = prog("output 1");
        let t = sigma(&[("x", 3)]);
        let r = exec_seq(&s, Res::delay(Res::ret(t.clone())));
        let expect = Res::delay(Res::output(1, Res::ret(t.clone())));
        assert!(strong_bisim(&r, &expect, &CheckBudget::default()).holds());
        let d = exec_seq(&s, bot());
        assert!(strong_bisim(&d, &bot(), &CheckBudget::new(5, 100, [0]).unwrap()).holds());
        let direct = exec_seq(&s, Res::ret(t.clone()));
        assert!(strong_bisim(&direct, &eval_big(&s, &t), &CheckBudget::default()).holds());
    }

    #[test]
    fn traces() {
        let one: Vec<Value> = vec![0.into()];
        let t = |text: &str, d| render(&eval_big(&prog(text), &State::new()), d, &one).unwrap();
        assert_eq!(t("x := 1", 3), "δ.ret {x=1}");
        assert_eq!(t("while false do skip end", 3), "δ.ret {}");
        assert_eq!(t("skip", 3), "ret {}");
        assert_eq!(t("output 1; while true do skip end", 4), "out 1.δ.δ.δ.…");
    }

    #[test]
    fn deterministic() {
        let p = prog("input x; while x <> 0 do output x; input x end");
        let a = eval_big(&p, &State::new());
        let c = eval_big(&p, &State::new());
        assert!(strong_bisim(&a, &c, &CheckBudget::default()).holds());
    }
}
