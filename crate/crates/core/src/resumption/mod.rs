//! Delayful resumptions: possibly infinite computation trees that branch on
//! input, emit outputs, take internal delay steps, or terminate with a state.
//!
//! A [`Res`] is a deferred computation of its head; children are built only
//! when observed. The bounded checks here replace coinductive truth with a
//! [`Verdict`] relative to a [`CheckBudget`].

mod lockstep;
mod render;
mod verdict;

use std::collections::VecDeque;
use std::fmt;
use std::sync::Arc;

use num_traits::{Signed, Zero};

use crate::syntax::{State, Value};

pub use lockstep::{lockstep, strong_bisim};
pub use render::render;
pub use verdict::{
    BudgetError, CheckBudget, Exhausted, Mismatch, Path, SemanticsError, Shape, Step, Verdict,
    Witness,
};

/// An input continuation: total, pure, shareable.
pub type Cont<T> = Arc<dyn Fn(&Value) -> T + Send + Sync>;

pub fn cont<T>(f: impl Fn(&Value) -> T + Send + Sync + 'static) -> Cont<T> {
    Arc::new(f)
}

/// A delayful resumption.
#[derive(Clone)]
pub struct Res(Arc<dyn Fn() -> Head + Send + Sync>);

/// The four head forms of a delayful resumption.
#[derive(Clone)]
pub enum Head {
    Ret(State),
    In(Cont<Res>),
    Out(Value, Res),
    Delay(Res),
}

impl Head {
    pub fn shape(&self) -> Shape {
        match self {
            Head::Ret(s) => Shape::Ret(s.clone()),
            Head::In(_) => Shape::In,
            Head::Out(v, _) => Shape::Out(v.clone()),
            Head::Delay(_) => Shape::Delay,
        }
    }
}

impl fmt::Debug for Head {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.shape())
    }
}

impl Res {
    /// A resumption whose head is computed on each observation.
    pub fn new(head: impl Fn() -> Head + Send + Sync + 'static) -> Res {
        Res(Arc::new(head))
    }

    pub fn ret(sigma: State) -> Res {
        Res::new(move || Head::Ret(sigma.clone()))
    }

    pub fn input(f: impl Fn(&Value) -> Res + Send + Sync + 'static) -> Res {
        let f: Cont<Res> = Arc::new(f);
        Res::new(move || Head::In(f.clone()))
    }

    pub fn output(v: impl Into<Value>, tail: Res) -> Res {
        let v = v.into();
        Res::new(move || Head::Out(v.clone(), tail.clone()))
    }

    pub fn delay(tail: Res) -> Res {
        Res::new(move || Head::Delay(tail.clone()))
    }

    /// `δⁿ r`.
    pub fn delays(n: usize, tail: Res) -> Res {
        (0..n).fold(tail, |r, _| Res::delay(r))
    }

    pub fn observe(&self) -> Head {
        (self.0)()
    }

    /// Strips exactly `n` delays, or returns `None` if a non-delay head
    /// shows up first.
    pub fn skip_delays(&self, n: u64) -> Option<Res> {
        let mut r = self.clone();
        for _ in 0..n {
            match r.observe() {
                Head::Delay(t) => r = t,
                _ => return None,
            }
        }
        Some(r)
    }
}

impl fmt::Debug for Res {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Res({:?}..)", self.observe())
    }
}

/// A uniform view of the three resumption types, used by the shared
/// lock-step checker, the renderer and the interactive driver.
pub enum Node<T> {
    Ret(State),
    In(Cont<T>),
    Out(Value, T),
    Delay(T),
    BlackHole,
}

impl<T> Node<T> {
    pub fn shape(&self) -> Shape {
        match self {
            Node::Ret(s) => Shape::Ret(s.clone()),
            Node::In(_) => Shape::In,
            Node::Out(v, _) => Shape::Out(v.clone()),
            Node::Delay(_) => Shape::Delay,
            Node::BlackHole => Shape::BlackHole,
        }
    }
}

/// Anything that can be observed one head at a time.
pub trait Behaviour: Clone {
    fn node(&self) -> Result<Node<Self>, SemanticsError>;
}

impl Behaviour for Res {
    fn node(&self) -> Result<Node<Res>, SemanticsError> {
        Ok(match self.observe() {
            Head::Ret(s) => Node::Ret(s),
            Head::In(f) => Node::In(f),
            Head::Out(v, t) => Node::Out(v, t),
            Head::Delay(t) => Node::Delay(t),
        })
    }
}

/// `r ⇓ r′` searched with bounded fuel.
#[derive(Clone, Debug)]
pub enum ConvergeResult {
    /// `head` is never `Delay`; `delays` is the exact number stripped.
    Converged { head: Head, delays: u64 },
    FuelExhausted,
}

impl ConvergeResult {
    pub fn is_converged(&self) -> bool {
        matches!(self, ConvergeResult::Converged { .. })
    }
}

/// Strips at most `fuel` delays looking for a non-delay head.
pub fn converges(r: &Res, fuel: u64) -> ConvergeResult {
    let mut cur = r.clone();
    let mut delays = 0;
    loop {
        match cur.observe() {
            Head::Delay(t) => {
                if delays == fuel {
                    return ConvergeResult::FuelExhausted;
                }
                delays += 1;
                cur = t;
            }
            head => return ConvergeResult::Converged { head, delays },
        }
    }
}

/// Bounded evidence for silent divergence: `Fails` with the head that
/// breaks silence, otherwise `Unknown` (divergence is never certified).
pub fn diverges_within(r: &Res, fuel: u64) -> Verdict {
    let mut cur = r.clone();
    let mut path = Path::new();
    for _ in 0..fuel {
        match cur.observe() {
            Head::Delay(t) => {
                path = path.then(Step::Delay);
                cur = t;
            }
            head => {
                return Verdict::Fails(Witness {
                    path,
                    mismatch: Mismatch::Converges { head: head.shape() },
                })
            }
        }
    }
    Verdict::Unknown(Exhausted { path, fuel })
}

/// Walks every sampled path, requiring convergence at each point.
fn keeps_converging(r: &Res, b: &CheckBudget) -> Verdict {
    let mut queue = VecDeque::from([(r.clone(), Path::new(), b.clone())]);
    let mut unknown = None;
    while let Some((r, path, b)) = queue.pop_front() {
        if b.exhausted_depth() {
            continue;
        }
        match converges(&r, b.fuel()) {
            ConvergeResult::FuelExhausted => {
                unknown.get_or_insert(Exhausted {
                    path,
                    fuel: b.fuel(),
                });
            }
            ConvergeResult::Converged { head, .. } => match head {
                Head::Ret(_) => {}
                Head::Out(v, t) => queue.push_back((t, path.then(Step::Out(v)), b.descend())),
                Head::In(f) => {
                    let (vs, child) = b.branch();
                    for v in vs {
                        queue.push_back((f(&v), path.then(Step::In(v)), child.clone()));
                    }
                }
                Head::Delay(_) => unreachable!("converges never returns a delay"),
            },
        }
    }
    match unknown {
        Some(e) => Verdict::Unknown(e),
        None => Verdict::Holds,
    }
}

/// Responsiveness: the resumption keeps converging along every sampled
/// path. Fuel exhaustion is reported as `Unknown`, never as a failure.
pub fn responsive(r: &Res, b: &CheckBudget) -> Verdict {
    keeps_converging(r, b)
}

/// Committedness: every point converges or silently diverges. Silence can
/// only be witnessed up to fuel, so this is `Holds` when every sampled
/// point converges and `Unknown` otherwise.
pub fn committed(r: &Res, b: &CheckBudget) -> Verdict {
    keeps_converging(r, b)
}

/// `⊥ = δ ⊥`.
pub fn bot() -> Res {
    Res::new(|| Head::Delay(bot()))
}

/// `rep n = δ(δ(out n (rep n)))`.
pub fn rep(n: impl Into<Value>) -> Res {
    let n = n.into();
    Res::new(move || {
        let n = n.clone();
        Head::Delay(Res::delay(Res::new(move || Head::Out(n.clone(), rep(n.clone())))))
    })
}

/// `rep′ n = δ(out n (rep′ n))`.
pub fn rep_fast(n: impl Into<Value>) -> Res {
    let n = n.into();
    Res::new(move || {
        let n = n.clone();
        Head::Delay(Res::new(move || Head::Out(n.clone(), rep_fast(n.clone()))))
    })
}

/// Echoes inputs until 0 arrives, then terminates in `sigma`.
pub fn echo(sigma: State) -> Res {
    Res::input(move |n| {
        let n = n.clone();
        let sigma = sigma.clone();
        Res::delay(Res::new(move || {
            if n.is_zero() {
                Head::Ret(sigma.clone())
            } else {
                Head::Out(n.clone(), echo(sigma.clone()))
            }
        }))
    })
}

/// Like [`echo`], but silently diverges on 0.
pub fn echo_div() -> Res {
    Res::input(|n| {
        let n = n.clone();
        Res::delay(Res::new(move || {
            if n.is_zero() {
                Head::Delay(bot())
            } else {
                Head::Out(n.clone(), echo_div())
            }
        }))
    })
}

/// `up n = δ(out n (δ(up (n+1))))`.
pub fn up(n: impl Into<Value>) -> Res {
    let n = n.into();
    Res::new(move || {
        let n = n.clone();
        Head::Delay(Res::new(move || {
            let next: Value = n.clone() + 1;
            Head::Out(n.clone(), Res::delay(up(next.clone())))
        }))
    })
}

/// `sum = δ(in(λm. in(λn. out(m+n) sum)))`.
pub fn sum_res() -> Res {
    Res::new(|| {
        Head::Delay(Res::input(|m| {
            let m = m.clone();
            Res::input(move |n| Res::output(m.clone() + n, sum_res()))
        }))
    })
}

/// The multiplier behaviour without delays:
/// `in(λm. in(λn. if m ≥ 0 then out(m·n) … else ⊥))`.
pub fn mult_res() -> Res {
    Res::input(|m| {
        let m = m.clone();
        Res::input(move |n| {
            if m.is_negative() {
                bot()
            } else {
                Res::output(m.clone() * n, mult_res())
            }
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sigma() -> State {
        [("x", 1)].into_iter().collect()
    }

    #[test]
    fn observe_heads() {
        assert!(matches!(Res::ret(sigma()).observe(), Head::Ret(s) if s == sigma()));
        assert!(matches!(bot().observe(), Head::Delay(_)));
        let Head::Delay(t) = rep(3).observe() else { panic!() };
        let Head::Delay(t) = t.observe() else { panic!() };
        assert!(matches!(t.observe(), Head::Out(v, _) if v == 3.into()));
    }

    #[test]
    fn converges_counts_delays() {
        let r = Res::delays(2, Res::ret(sigma()));
        match converges(&r, 10) {
            ConvergeResult::Converged { head: Head::Ret(s), delays } => {
                assert_eq!(s, sigma());
                assert_eq!(delays, 2);
            }
            other => panic!("{other:?}"),
        }
        match converges(&Res::ret(sigma()), 10) {
            ConvergeResult::Converged { delays, .. } => assert_eq!(delays, 0),
            other => panic!("{other:?}"),
        }
        assert!(!converges(&bot(), 1000).is_converged());
    }

    #[test]
    fn converges_respects_exact_fuel() {
        let r = Res::delays(3, Res::ret(sigma()));
        assert!(!converges(&r, 2).is_converged());
        assert!(converges(&r, 3).is_converged());
    }

    #[test]
    fn divergence_evidence() {
        let v = diverges_within(&Res::ret(sigma()), 5);
        let w = v.witness().expect("fails");
        assert!(w.path.steps().is_empty());
        assert_eq!(w.mismatch, Mismatch::Converges { head: Shape::Ret(sigma()) });
        assert!(diverges_within(&bot(), 5).unknown());
    }

    #[test]
    fn mult_negative_branch_diverges() {
        let Head::In(f) = mult_res().observe() else { panic!() };
        let Head::In(g) = f(&(-1).into()).observe() else { panic!() };
        assert!(diverges_within(&g(&0.into()), 50).unknown());
        let Head::In(f) = mult_res().observe() else { panic!() };
        let Head::In(g) = f(&2.into()).observe() else { panic!() };
        assert!(diverges_within(&g(&3.into()), 50).fails());
    }

    #[test]
    fn responsiveness() {
        let b = CheckBudget::new(10, 5, [0, 1, 2]).unwrap();
        assert!(responsive(&echo(sigma()), &b).holds());
        let b = CheckBudget::new(100, 1, [0]).unwrap();
        assert!(responsive(&bot(), &b).unknown());
        assert!(responsive(&Res::ret(sigma()), &CheckBudget::default()).holds());
        assert!(responsive(&rep(1), &CheckBudget::default()).holds());
        assert!(responsive(&rep_fast(1), &CheckBudget::default()).holds());
        assert!(responsive(&echo_div(), &CheckBudget::default()).unknown());
    }

    #[test]
    fn committedness() {
        assert!(committed(&Res::ret(sigma()), &CheckBudget::default()).holds());
        let b = CheckBudget::new(10, 5, [0, 3]).unwrap();
        assert!(committed(&echo(sigma()), &b).holds());
        let b = CheckBudget::new(100, 1, [0]).unwrap();
        assert!(committed(&bot(), &b).unknown());
    }

    #[test]
    fn up_counts() {
        // δ.out 0.δ.δ.out 1.δ.δ.out 2 …
        let mut r = up(0);
        for n in 0..4 {
            let Head::Delay(t) = r.observe() else { panic!() };
            let Head::Out(v, t) = t.observe() else { panic!() };
            assert_eq!(v, n.into());
            let Head::Delay(t) = t.observe() else { panic!() };
            r = t;
        }
    }

    #[test]
    fn echo_terminates_on_zero() {
        let Head::In(f) = echo(sigma()).observe() else { panic!() };
        let Head::Delay(t) = f(&0.into()).observe() else { panic!() };
        assert!(matches!(t.observe(), Head::Ret(s) if s == sigma()));
        let Head::In(f) = echo_div().observe() else { panic!() };
        let Head::Delay(t) = f(&0.into()).observe() else { panic!() };
        assert!(strong_bisim(&t, &bot(), &CheckBudget::default()).holds());
    }
}
