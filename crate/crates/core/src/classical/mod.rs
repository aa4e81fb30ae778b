//! Classical-style resumptions, with a black hole • for silent divergence,
//! and the classical-style big-step semantics.
//!
//! Deciding between "converges" and "diverges" is not constructive, so the
//! semantics here only emits • when it has a proof of divergence: an exact
//! repeat of a silent configuration, or a constant state drift that a
//! symbolic run shows to repeat forever (see [`drift`]). Otherwise running
//! out of fuel is reported as [`SemanticsError::UndecidedWithinBudget`].

mod drift;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use num_traits::Signed;

use crate::resumption::{
    bot, converges, lockstep, Behaviour, CheckBudget, Cont, ConvergeResult, Exhausted, Head, Node,
    Path, Res, SemanticsError, Shape, Step, Verdict,
};
use crate::smallstep::{Conf, LConf};
use crate::syntax::{State, Stmt, Value};

/// A classical-style resumption. Observation may fail with
/// [`SemanticsError::UndecidedWithinBudget`].
#[derive(Clone)]
pub struct ResC(Arc<dyn Fn() -> Result<HeadC, SemanticsError> + Send + Sync>);

#[derive(Clone)]
pub enum HeadC {
    RetC(State),
    InC(Cont<ResC>),
    OutC(Value, ResC),
    BlackHole,
}

impl HeadC {
    pub fn shape(&self) -> Shape {
        match self {
            HeadC::RetC(s) => Shape::Ret(s.clone()),
            HeadC::InC(_) => Shape::In,
            HeadC::OutC(v, _) => Shape::Out(v.clone()),
            HeadC::BlackHole => Shape::BlackHole,
        }
    }
}

impl fmt::Debug for HeadC {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.shape())
    }
}

impl ResC {
    pub fn new(head: impl Fn() -> Result<HeadC, SemanticsError> + Send + Sync + 'static) -> ResC {
        ResC(Arc::new(head))
    }

    pub fn ret(sigma: State) -> ResC {
        ResC::new(move || Ok(HeadC::RetC(sigma.clone())))
    }

    pub fn input(f: impl Fn(&Value) -> ResC + Send + Sync + 'static) -> ResC {
        let f: Cont<ResC> = Arc::new(f);
        ResC::new(move || Ok(HeadC::InC(f.clone())))
    }

    pub fn output(v: impl Into<Value>, tail: ResC) -> ResC {
        let v = v.into();
        ResC::new(move || Ok(HeadC::OutC(v.clone(), tail.clone())))
    }

    pub fn black_hole() -> ResC {
        ResC::new(|| Ok(HeadC::BlackHole))
    }

    pub fn observe(&self) -> Result<HeadC, SemanticsError> {
        (self.0)()
    }
}

impl Behaviour for ResC {
    fn node(&self) -> Result<Node<ResC>, SemanticsError> {
        Ok(match self.observe()? {
            HeadC::RetC(s) => Node::Ret(s),
            HeadC::InC(f) => Node::In(f),
            HeadC::OutC(v, t) => Node::Out(v, t),
            HeadC::BlackHole => Node::BlackHole,
        })
    }
}

/// `emb • = δ (emb •)`; a node whose observation fails is embedded as ⊥
/// too.
pub fn emb_c(rc: &ResC) -> Res {
    let rc = rc.clone();
    Res::new(move || match rc.observe() {
        Ok(HeadC::RetC(s)) => Head::Ret(s),
        Ok(HeadC::InC(f)) => Head::In(Arc::new(move |v| emb_c(&f(v)))),
        Ok(HeadC::OutC(v, t)) => Head::Out(v, emb_c(&t)),
        Ok(HeadC::BlackHole) | Err(_) => Head::Delay(bot()),
    })
}

/// Normalization along convergent paths. A resumption gives no evidence of
/// its own divergence, so a run of more than `b.fuel()` delays is
/// undecided, never •.
pub fn norm_c(r: &Res, b: &CheckBudget) -> ResC {
    norm_at(r.clone(), b.fuel(), Path::new())
}

fn norm_at(r: Res, fuel: u64, path: Path) -> ResC {
    ResC::new(move || match converges(&r, fuel) {
        ConvergeResult::Converged { head, .. } => Ok(match head {
            Head::Ret(s) => HeadC::RetC(s),
            Head::In(f) => {
                let path = path.clone();
                HeadC::InC(Arc::new(move |v| norm_at(f(v), fuel, path.then(Step::In(v.clone())))))
            }
            Head::Out(v, t) => {
                let p = path.then(Step::Out(v.clone()));
                HeadC::OutC(v, norm_at(t, fuel, p))
            }
            Head::Delay(_) => unreachable!("converges never returns a delay"),
        }),
        ConvergeResult::FuelExhausted => Err(SemanticsError::UndecidedWithinBudget(Exhausted {
            path: path.clone(),
            fuel,
        })),
    })
}

/// Strong bisimilarity of classical-style resumptions; • matches only •.
pub fn strong_bisim_c(a: &ResC, b: &ResC, budget: &CheckBudget) -> Verdict {
    lockstep(a, b, budget)
}

/// `mult = in(λm. in(λn. if m ≥ 0 then out(m·n) mult else •))`.
pub fn mult_c() -> ResC {
    ResC::input(|m| {
        let m = m.clone();
        ResC::input(move |n| {
            if m.is_negative() {
                ResC::black_hole()
            } else {
                ResC::output(m.clone() * n, mult_c())
            }
        })
    })
}

/// Proof that a configuration diverges silently.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Divergence {
    /// `conf` comes back to itself after `period` delay steps; `visited` is
    /// the number of distinct configurations seen in the silent run.
    Cycle { conf: Conf, period: u64, visited: usize },
    /// `conf` comes back to its own statement after `period` delay steps
    /// with every variable shifted by `delta`, and the shift provably
    /// repeats forever.
    Drift {
        conf: Conf,
        delta: BTreeMap<String, Value>,
        period: u64,
    },
}

impl Divergence {
    pub fn conf(&self) -> &Conf {
        match self {
            Divergence::Cycle { conf, .. } | Divergence::Drift { conf, .. } => conf,
        }
    }

    /// Steps the small-step machine through one period from the recorded
    /// configuration and checks that it lands where the evidence says.
    pub fn replay(&self) -> bool {
        let (conf, period) = match self {
            Divergence::Cycle { conf, period, .. } | Divergence::Drift { conf, period, .. } => {
                (conf, *period)
            }
        };
        let mut c = conf.clone();
        for _ in 0..period {
            match c.step() {
                LConf::Delay(s, t) => c = Conf { stmt: s, state: t },
                _ => return false,
            }
        }
        match self {
            Divergence::Cycle { .. } => c == *conf,
            Divergence::Drift { delta, .. } => {
                c.stmt == conf.stmt
                    && delta
                        .iter()
                        .all(|(x, d)| c.state.lookup(x) == conf.state.lookup(x) + d)
            }
        }
    }
}

/// Result of looking for the next visible action.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SilentOutcome {
    Visible { conf: LConf, steps: u64 },
    Diverges(Divergence),
    /// More than `fuel` delay steps without a visible action or a proof.
    Exhausted,
}

/// Drives the small-step machine through delay steps, watching for
/// divergence evidence.
pub fn silent_run(c: &Conf, fuel: u64) -> SilentOutcome {
    let vars = c.stmt.variables();
    let key = |c: &Conf| Conf {
        stmt: c.stmt.clone(),
        state: c.state.restrict(&vars),
    };
    let mut seen: HashMap<Conf, u64> = HashMap::new();
    let mut last_at: HashMap<Arc<Stmt>, (u64, State)> = HashMap::new();
    let mut cur = c.clone();
    let mut steps = 0;
    loop {
        let k = key(&cur);
        if let Some(&i) = seen.get(&k) {
            return SilentOutcome::Diverges(Divergence::Cycle {
                conf: cur,
                period: steps - i,
                visited: seen.len(),
            });
        }
        if let Some((i, prev)) = last_at.get(&cur.stmt) {
            let delta: BTreeMap<String, Value> = vars
                .iter()
                .map(|x| (x.clone(), cur.state.lookup(x) - prev.lookup(x)))
                .collect();
            let bound = 2 * (steps - i) + 2;
            if let Some(period) = drift::prove(&cur.stmt, &cur.state, &delta, &vars, bound) {
                return SilentOutcome::Diverges(Divergence::Drift {
                    conf: cur,
                    delta,
                    period,
                });
            }
        }
        last_at.insert(cur.stmt.clone(), (steps, cur.state.clone()));
        seen.insert(k, steps);
        match cur.step() {
            LConf::Delay(s, t) => {
                if steps == fuel {
                    return SilentOutcome::Exhausted;
                }
                steps += 1;
                cur = Conf { stmt: s, state: t };
            }
            lc => return SilentOutcome::Visible { conf: lc, steps },
        }
    }
}

/// The classical-style evaluation of `s` from `sigma`.
pub fn eval_classical(s: &Stmt, sigma: &State, b: &CheckBudget) -> ResC {
    eval_conf(Conf::new(s, sigma), b.fuel(), Path::new())
}

fn eval_conf(c: Conf, fuel: u64, path: Path) -> ResC {
    ResC::new(move || match silent_run(&c, fuel) {
        SilentOutcome::Visible { conf, .. } => Ok(match conf {
            LConf::Ret(t) => HeadC::RetC(t),
            LConf::Out(v, s, t) => {
                let p = path.then(Step::Out(v.clone()));
                HeadC::OutC(v, eval_conf(Conf { stmt: s, state: t }, fuel, p))
            }
            LConf::In(s, g) => {
                let path = path.clone();
                HeadC::InC(Arc::new(move |v| {
                    let next = Conf {
                        stmt: s.clone(),
                        state: g.apply(v),
                    };
                    eval_conf(next, fuel, path.then(Step::In(v.clone())))
                }))
            }
            LConf::Delay(..) => unreachable!("silent runs end on a visible configuration"),
        }),
        SilentOutcome::Diverges(_) => Ok(HeadC::BlackHole),
        SilentOutcome::Exhausted => Err(SemanticsError::UndecidedWithinBudget(Exhausted {
            path: path.clone(),
            fuel,
        })),
    })
}
