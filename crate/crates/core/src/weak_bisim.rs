//! Termination-sensitive weak bisimilarity, three ways.
//!
//! * [`weak_bisim`]: converge both sides, compare the visible heads, or step
//!   matched delays when neither side converges within fuel.
//! * [`weak_bisim_nested`]: an inductive layer [`wb_down`] parameterized by a
//!   [`RelationOracle`] for the children, closed off by the checker itself.
//! * [`weak_bisim_classical`]: like the first, but silence on both sides is
//!   only accepted with divergence evidence, which fuel never provides.
//!
//! Fuel exhaustion on one side only is never a counterexample: it yields
//! `Unknown`.

use std::collections::VecDeque;

use crate::resumption::{
    converges, CheckBudget, Cont, ConvergeResult, Exhausted, Head, Mismatch, Path, Res, Shape,
    Step, Verdict, Witness,
};
use crate::syntax::{State, Value};

/// A head that is not a silent step.
pub enum Visible<T> {
    Ret(State),
    In(Cont<T>),
    Out(Value, T),
}

impl<T> Visible<T> {
    pub fn shape(&self) -> Shape {
        match self {
            Visible::Ret(s) => Shape::Ret(s.clone()),
            Visible::In(_) => Shape::In,
            Visible::Out(v, _) => Shape::Out(v.clone()),
        }
    }
}

/// Something with silent steps that can be stripped: a delayful resumption
/// or a small-step configuration.
pub trait Silent: Clone {
    /// Strips at most `fuel` silent steps, returning the visible head and the
    /// exact number stripped.
    fn converge(&self, fuel: u64) -> Option<(Visible<Self>, u64)>;
    /// Strips exactly `n` silent steps, or `None` if a visible head comes
    /// first.
    fn skip_silent(&self, n: u64) -> Option<Self>;
}

impl Silent for Res {
    fn converge(&self, fuel: u64) -> Option<(Visible<Res>, u64)> {
        match converges(self, fuel) {
            ConvergeResult::Converged { head, delays } => {
                let v = match head {
                    Head::Ret(s) => Visible::Ret(s),
                    Head::In(f) => Visible::In(f),
                    Head::Out(v, t) => Visible::Out(v, t),
                    Head::Delay(_) => unreachable!("converges never returns a delay"),
                };
                Some((v, delays))
            }
            ConvergeResult::FuelExhausted => None,
        }
    }

    fn skip_silent(&self, n: u64) -> Option<Res> {
        self.skip_delays(n)
    }
}

type Pending<A, B> = Vec<(A, B, Step, CheckBudget)>;

/// Matches two visible heads; on success returns the child pairs to relate.
fn match_visible<A, B>(
    va: Visible<A>,
    vb: Visible<B>,
    budget: &CheckBudget,
) -> Result<Pending<A, B>, Mismatch> {
    match (va, vb) {
        (Visible::Ret(s), Visible::Ret(t)) if s == t => Ok(Vec::new()),
        (Visible::Out(v, ta), Visible::Out(w, tb)) if v == w => {
            Ok(vec![(ta, tb, Step::Out(v), budget.descend())])
        }
        (Visible::In(f), Visible::In(g)) => {
            let (vs, child) = budget.branch();
            Ok(vs
                .into_iter()
                .map(|v| (f(&v), g(&v), Step::In(v), child.clone()))
                .collect())
        }
        (va, vb) => Err(Mismatch::Heads {
            left: va.shape(),
            right: vb.shape(),
        }),
    }
}

/// The breadth-first weak checker over any two [`Silent`] subjects.
///
/// With `batch` set, two sides that both stay silent for `fuel` steps have
/// `fuel` delays stripped at once and the walk continues one layer deeper;
/// otherwise that case is `Unknown`.
pub fn weak_lockstep<A: Silent, B: Silent>(
    a: &A,
    b: &B,
    budget: &CheckBudget,
    batch: bool,
) -> Verdict {
    let fuel = budget.fuel();
    let mut queue = VecDeque::from([(a.clone(), b.clone(), Path::new(), budget.clone())]);
    let mut unknown: Option<Exhausted> = None;
    while let Some((a, b, path, budget)) = queue.pop_front() {
        if budget.exhausted_depth() {
            continue;
        }
        match (a.converge(fuel), b.converge(fuel)) {
            (Some((va, _)), Some((vb, _))) => match match_visible(va, vb, &budget) {
                Ok(children) => {
                    for (ca, cb, step, cbud) in children {
                        queue.push_back((ca, cb, path.then(step), cbud));
                    }
                }
                Err(mismatch) => return Verdict::Fails(Witness { path, mismatch }),
            },
            (None, None) if batch => {
                let ta = a.skip_silent(fuel).expect("silent for more than fuel steps");
                let tb = b.skip_silent(fuel).expect("silent for more than fuel steps");
                queue.push_back((ta, tb, path.then(Step::Silent(fuel)), budget.descend()));
            }
            _ => {
                unknown.get_or_insert(Exhausted { path, fuel });
            }
        }
    }
    match unknown {
        Some(e) => Verdict::Unknown(e),
        None => Verdict::Holds,
    }
}

/// `r ≈ r*` within budget.
pub fn weak_bisim(r: &Res, r_star: &Res, b: &CheckBudget) -> Verdict {
    weak_lockstep(r, r_star, b, true)
}

/// `r ≅c r*` within budget. Both-silent branches are `Unknown`.
pub fn weak_bisim_classical(r: &Res, r_star: &Res, b: &CheckBudget) -> Verdict {
    weak_lockstep(r, r_star, b, false)
}

/// The relation parameter of the nested formulation.
pub type RelationOracle<'a> = &'a dyn Fn(&Res, &Res, &CheckBudget) -> Verdict;

fn under(step: Step, v: Verdict) -> Verdict {
    match v {
        Verdict::Holds => Verdict::Holds,
        Verdict::Fails(w) => Verdict::Fails(Witness {
            path: w.path.prepend(step),
            mismatch: w.mismatch,
        }),
        Verdict::Unknown(e) => Verdict::Unknown(Exhausted {
            path: e.path.prepend(step),
            fuel: e.fuel,
        }),
    }
}

/// The inductive layer `r ≈↓(X) r*`.
///
/// Strips delays from `r`, then from `r*`, drawing on one shared `fuel`
/// counter, requires matching visible heads, and relates the children with
/// `x` at the budget one layer below `budget`. Running out of the shared fuel
/// is `Unknown`.
pub fn wb_down(x: RelationOracle, r: &Res, r_star: &Res, fuel: u64, budget: &CheckBudget) -> Verdict {
    let stuck = || {
        Verdict::Unknown(Exhausted {
            path: Path::new(),
            fuel,
        })
    };
    let Some((va, used)) = r.converge(fuel) else {
        return stuck();
    };
    let Some((vb, _)) = r_star.converge(fuel - used) else {
        return stuck();
    };
    let children = match match_visible(va, vb, budget) {
        Ok(c) => c,
        Err(mismatch) => {
            return Verdict::Fails(Witness {
                path: Path::new(),
                mismatch,
            })
        }
    };
    let mut verdict = Verdict::Holds;
    for (ca, cb, step, cbud) in children {
        verdict = verdict.and(under(step, x(&ca, &cb, &cbud)));
        if verdict.fails() {
            break;
        }
    }
    verdict
}

/// `r ≅∘ r*` within budget: [`wb_down`] with this checker as its oracle, or
/// matched delays when neither side converges within fuel.
///
/// The inductive layer gets a shared fuel of twice `b.fuel()`, so it can
/// always reproduce a comparison that [`weak_bisim`] makes with `b.fuel()`
/// per side.
pub fn weak_bisim_nested(r: &Res, r_star: &Res, b: &CheckBudget) -> Verdict {
    if b.exhausted_depth() {
        return Verdict::Holds;
    }
    let fuel = b.fuel();
    if !converges(r, fuel).is_converged() && !converges(r_star, fuel).is_converged() {
        let ta = r.skip_delays(fuel).expect("silent for more than fuel steps");
        let tb = r_star.skip_delays(fuel).expect("silent for more than fuel steps");
        return under(Step::Silent(fuel), weak_bisim_nested(&ta, &tb, &b.descend()));
    }
    wb_down(&weak_bisim_nested, r, r_star, fuel.saturating_mul(2), b)
}

impl Witness {
    /// Re-walks a weak witness. Visible steps converge each side with
    /// `fuel`; `Silent(n)` strips exactly `n` delays on both sides.
    pub fn replay_weak<A: Silent, B: Silent>(&self, a: &A, b: &B, fuel: u64) -> bool {
        let Mismatch::Heads { left, right } = &self.mismatch else {
            return false;
        };
        let (mut a, mut b) = (a.clone(), b.clone());
        for step in self.path.steps() {
            let next = match step {
                Step::Silent(n) => a.skip_silent(*n).zip(b.skip_silent(*n)),
                Step::Delay => a.skip_silent(1).zip(b.skip_silent(1)),
                Step::Out(v) => match (a.converge(fuel), b.converge(fuel)) {
                    (Some((Visible::Out(w, ta), _)), Some((Visible::Out(u, tb), _)))
                        if w == *v && u == *v =>
                    {
                        Some((ta, tb))
                    }
                    _ => None,
                },
                Step::In(v) => match (a.converge(fuel), b.converge(fuel)) {
                    (Some((Visible::In(f), _)), Some((Visible::In(g), _))) => Some((f(v), g(v))),
                    _ => None,
                },
            };
            match next {
                Some((ta, tb)) => (a, b) = (ta, tb),
                None => return false,
            }
        }
        match (a.converge(fuel), b.converge(fuel)) {
            (Some((va, _)), Some((vb, _))) => va.shape() == *left && vb.shape() == *right && left != right,
            _ => false,
        }
    }
}
