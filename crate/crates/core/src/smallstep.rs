//! Small-step semantics over labelled configurations.
//!
//! A configuration steps to exactly one labelled configuration: terminated,
//! waiting for input, emitting an output, or taking a delay step. Terminal
//! many-step reduction unfolds this into a delayful resumption.

use std::fmt;
use std::sync::Arc;

use crate::resumption::{CheckBudget, Head, Res, Verdict};
use crate::syntax::{eval_expr, is_true, State, Stmt, Value};
use crate::weak_bisim::{weak_lockstep, Silent, Visible};

/// The state-producing function of an input configuration, `λv. σ[x↦v]`,
/// kept as data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InputBinding {
    pub state: State,
    pub var: String,
}

impl InputBinding {
    pub fn apply(&self, v: &Value) -> State {
        self.state.update(&self.var, v.clone())
    }
}

/// A labelled configuration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LConf {
    Ret(State),
    In(Arc<Stmt>, InputBinding),
    Out(Value, Arc<Stmt>, State),
    Delay(Arc<Stmt>, State),
}

impl LConf {
    pub fn is_delay(&self) -> bool {
        matches!(self, LConf::Delay(..))
    }
}

/// A statement-state pair.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Conf {
    pub stmt: Arc<Stmt>,
    pub state: State,
}

impl Conf {
    pub fn new(s: &Stmt, sigma: &State) -> Conf {
        Conf {
            stmt: Arc::new(s.clone()),
            state: sigma.clone(),
        }
    }

    pub fn step(&self) -> LConf {
        step_arc(&self.stmt, &self.state)
    }
}

impl fmt::Display for Conf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "⟨{}, {}⟩", self.stmt, self.state)
    }
}

/// One step of `s` from `sigma`.
pub fn step(s: &Stmt, sigma: &State) -> LConf {
    step_arc(&Arc::new(s.clone()), sigma)
}

fn skip() -> Arc<Stmt> {
    Arc::new(Stmt::Skip)
}

pub(crate) fn step_arc(s: &Arc<Stmt>, sigma: &State) -> LConf {
    match &**s {
        Stmt::Skip => LConf::Ret(sigma.clone()),
        Stmt::Assign(x, e) => LConf::Delay(skip(), sigma.update(x, eval_expr(e, sigma))),
        Stmt::Seq(a, b) => {
            let then = |a2: Arc<Stmt>| Arc::new(Stmt::Seq(a2, b.clone()));
            match step_arc(a, sigma) {
                LConf::Ret(t) => step_arc(b, &t),
                LConf::In(a2, g) => LConf::In(then(a2), g),
                LConf::Out(v, a2, t) => LConf::Out(v, then(a2), t),
                LConf::Delay(a2, t) => LConf::Delay(then(a2), t),
            }
        }
        Stmt::If(e, t, f) => {
            let branch = if is_true(e, sigma) { t } else { f };
            LConf::Delay(branch.clone(), sigma.clone())
        }
        Stmt::While(e, body) => {
            if is_true(e, sigma) {
                LConf::Delay(Arc::new(Stmt::Seq(body.clone(), s.clone())), sigma.clone())
            } else {
                LConf::Delay(skip(), sigma.clone())
            }
        }
        Stmt::Input(x) => LConf::In(
            skip(),
            InputBinding {
                state: sigma.clone(),
                var: x.clone(),
            },
        ),
        Stmt::Output(e) => LConf::Out(eval_expr(e, sigma), skip(), sigma.clone()),
    }
}

/// Terminal many-step reduction of `s` from `sigma`.
pub fn run_small(s: &Stmt, sigma: &State) -> Res {
    run_conf(Conf::new(s, sigma))
}

pub(crate) fn run_conf(c: Conf) -> Res {
    Res::new(move || match c.step() {
        LConf::Ret(t) => Head::Ret(t),
        LConf::Delay(s, t) => Head::Delay(run_conf(Conf { stmt: s, state: t })),
        LConf::Out(v, s, t) => Head::Out(v, run_conf(Conf { stmt: s, state: t })),
        LConf::In(s, g) => Head::In(Arc::new(move |v| {
            run_conf(Conf {
                stmt: s.clone(),
                state: g.apply(v),
            })
        })),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConfConverge {
    /// `conf` is never a `Delay`; `steps` is the number of delay steps taken.
    Converged { conf: LConf, steps: u64 },
    FuelExhausted,
}

/// Steps through at most `fuel` delays looking for a visible configuration.
pub fn conf_converges(s: &Stmt, sigma: &State, fuel: u64) -> ConfConverge {
    converge_conf(&Conf::new(s, sigma), fuel)
}

fn converge_conf(c: &Conf, fuel: u64) -> ConfConverge {
    let mut lc = c.step();
    let mut steps = 0;
    while let LConf::Delay(s, t) = lc {
        if steps == fuel {
            return ConfConverge::FuelExhausted;
        }
        steps += 1;
        lc = step_arc(&s, &t);
    }
    ConfConverge::Converged { conf: lc, steps }
}

impl Silent for Conf {
    fn converge(&self, fuel: u64) -> Option<(Visible<Conf>, u64)> {
        let ConfConverge::Converged { conf, steps } = converge_conf(self, fuel) else {
            return None;
        };
        let v = match conf {
            LConf::Ret(t) => Visible::Ret(t),
            LConf::Out(v, s, t) => Visible::Out(v, Conf { stmt: s, state: t }),
            LConf::In(s, g) => Visible::In(Arc::new(move |v| Conf {
                stmt: s.clone(),
                state: g.apply(v),
            })),
            LConf::Delay(..) => unreachable!("converged configurations are visible"),
        };
        Some((v, steps))
    }

    fn skip_silent(&self, n: u64) -> Option<Conf> {
        let mut c = self.clone();
        for _ in 0..n {
            match c.step() {
                LConf::Delay(s, t) => c = Conf { stmt: s, state: t },
                _ => return None,
            }
        }
        Some(c)
    }
}

/// Weak bisimilarity of configurations within budget.
pub fn conf_weak_bisim(c: &Conf, c_star: &Conf, b: &CheckBudget) -> Verdict {
    weak_lockstep(c, c_star, b, true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bigstep::eval_big;
    use crate::resumption::{bot, strong_bisim};
    use crate::syntax::parse_program;

    fn prog(text: &str) -> Stmt {
        parse_program(text).unwrap()
    }

    fn sigma(pairs: &[(&str, i64)]) -> State {
        pairs.iter().map(|&(k, v)| (k, v)).collect()
    }

    #[test]
    fn one_step_rules() {
        let s = sigma(&[("x", 4)]);
        assert_eq!(step(&Stmt::Skip, &s), LConf::Ret(s.clone()));
        assert_eq!(
            step(&prog("x := x + 1"), &s),
            LConf::Delay(Arc::new(Stmt::Skip), sigma(&[("x", 5)]))
        );
        let LConf::In(rest, g) = step(&prog("input x; output x"), &s) else {
            panic!()
        };
        assert_eq!(*rest, prog("skip; output x"));
        assert_eq!(g.apply(&9.into()), sigma(&[("x", 9)]));
        assert_eq!(
            step(&prog("skip; output x"), &s),
            LConf::Out(4.into(), Arc::new(Stmt::Skip), s.clone())
        );
        let w = prog("while x > 0 do x := x - 1 end");
        let Stmt::While(_, body) = &w else { panic!() };
        assert_eq!(
            step(&w, &s),
            LConf::Delay(Arc::new(Stmt::Seq(body.clone(), Arc::new(w.clone()))), s.clone())
        );
        assert_eq!(step(&w, &State::new()), LConf::Delay(Arc::new(Stmt::Skip), State::new()));
    }

    #[test]
    fn convergence() {
        let s = State::new();
        assert_eq!(
            conf_converges(&Stmt::Skip, &s, 1),
            ConfConverge::Converged {
                conf: LConf::Ret(s.clone()),
                steps: 0
            }
        );
        assert_eq!(
            conf_converges(&prog("x := 1"), &s, 5),
            ConfConverge::Converged {
                conf: LConf::Ret(sigma(&[("x", 1)])),
                steps: 1
            }
        );
        assert_eq!(conf_converges(&prog("while true do skip end"), &s, 1000), ConfConverge::FuelExhausted);
    }

    #[test]
    fn silent_loop_runs_as_bot() {
        let r = run_small(&prog("while true do skip end"), &State::new());
        assert!(strong_bisim(&r, &bot(), &CheckBudget::new(5, 100, [0]).unwrap()).holds());
    }

    #[test]
    fn agrees_with_big_step() {
        for text in [
            "skip",
            "x := 1; y := x + 1",
            "input x; while x <> 0 do output x; input x end",
            "while true do input x; input y; output x + y end",
            "if x then output 1 else x := 2; output x end",
        ] {
            let p = prog(text);
            let b = CheckBudget::new(10, 100, [-1, 0, 2]).unwrap();
            let v = strong_bisim(&eval_big(&p, &State::new()), &run_small(&p, &State::new()), &b);
            assert!(v.holds(), "{text}: {v}");
        }
    }

    #[test]
    fn configuration_weak_bisim() {
        let s = sigma(&[("x", 0)]);
        let b = CheckBudget::default();
        assert!(conf_weak_bisim(&Conf::new(&Stmt::Skip, &s), &Conf::new(&prog("x := 0"), &s), &b).holds());
        let licm_a = Conf::new(&prog("while true do z := x; output z end"), &sigma(&[("x", 7)]));
        let licm_b = Conf::new(&prog("z := x; while true do output z end"), &sigma(&[("x", 7)]));
        assert!(conf_weak_bisim(&licm_a, &licm_b, &b).holds());
        assert!(conf_weak_bisim(&licm_a, &licm_a, &b).holds());
    }
}
