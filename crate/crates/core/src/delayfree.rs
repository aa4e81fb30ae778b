//! Delay-free resumptions and the delay-free big-step semantics.
//!
//! Finite runs of silent steps are collapsed on the fly. A responsiveness
//! proof is not data we can ask for, so each gap between visible actions is
//! bounded by fuel instead, and running out surfaces as an error when the
//! offending node is observed.

use std::fmt;
use std::sync::Arc;

use crate::resumption::{
    bot, converges, lockstep, Behaviour, CheckBudget, Cont, ConvergeResult, Exhausted, Head, Node,
    Path, Res, SemanticsError, Shape, Step, Verdict,
};
use crate::syntax::{eval_expr, is_true, State, Stmt, Value};

/// A delay-free resumption. Observation may fail with
/// [`SemanticsError::NotResponsiveWithinBudget`].
#[derive(Clone)]
pub struct ResR(Arc<dyn Fn() -> Result<HeadR, SemanticsError> + Send + Sync>);

#[derive(Clone)]
pub enum HeadR {
    RetR(State),
    InR(Cont<ResR>),
    OutR(Value, ResR),
}

impl HeadR {
    pub fn shape(&self) -> Shape {
        match self {
            HeadR::RetR(s) => Shape::Ret(s.clone()),
            HeadR::InR(_) => Shape::In,
            HeadR::OutR(v, _) => Shape::Out(v.clone()),
        }
    }
}

impl fmt::Debug for HeadR {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.shape())
    }
}

impl ResR {
    pub fn new(head: impl Fn() -> Result<HeadR, SemanticsError> + Send + Sync + 'static) -> ResR {
        ResR(Arc::new(head))
    }

    pub fn ret(sigma: State) -> ResR {
        ResR::new(move || Ok(HeadR::RetR(sigma.clone())))
    }

    pub fn input(f: impl Fn(&Value) -> ResR + Send + Sync + 'static) -> ResR {
        let f: Cont<ResR> = Arc::new(f);
        ResR::new(move || Ok(HeadR::InR(f.clone())))
    }

    pub fn output(v: impl Into<Value>, tail: ResR) -> ResR {
        let v = v.into();
        ResR::new(move || Ok(HeadR::OutR(v.clone(), tail.clone())))
    }

    pub fn observe(&self) -> Result<HeadR, SemanticsError> {
        (self.0)()
    }
}

impl Behaviour for ResR {
    fn node(&self) -> Result<Node<ResR>, SemanticsError> {
        Ok(match self.observe()? {
            HeadR::RetR(s) => Node::Ret(s),
            HeadR::InR(f) => Node::In(f),
            HeadR::OutR(v, t) => Node::Out(v, t),
        })
    }
}

/// Collapses the delay runs of `r`, each bounded by `b.fuel()`.
pub fn norm(r: &Res, b: &CheckBudget) -> ResR {
    norm_at(r.clone(), b.fuel(), Path::new())
}

fn norm_at(r: Res, fuel: u64, path: Path) -> ResR {
    ResR::new(move || match converges(&r, fuel) {
        ConvergeResult::Converged { head, .. } => Ok(match head {
            Head::Ret(s) => HeadR::RetR(s),
            Head::In(f) => {
                let path = path.clone();
                HeadR::InR(Arc::new(move |v| norm_at(f(v), fuel, path.then(Step::In(v.clone())))))
            }
            Head::Out(v, t) => {
                let p = path.then(Step::Out(v.clone()));
                HeadR::OutR(v, norm_at(t, fuel, p))
            }
            Head::Delay(_) => unreachable!("converges never returns a delay"),
        }),
        ConvergeResult::FuelExhausted => Err(SemanticsError::NotResponsiveWithinBudget(Exhausted {
            path: path.clone(),
            fuel,
        })),
    })
}

/// Constructor-wise injection into delayful resumptions. A node whose
/// observation fails is embedded as ⊥.
pub fn emb(rr: &ResR) -> Res {
    let rr = rr.clone();
    Res::new(move || match rr.observe() {
        Ok(HeadR::RetR(s)) => Head::Ret(s),
        Ok(HeadR::InR(f)) => Head::In(Arc::new(move |v| emb(&f(v)))),
        Ok(HeadR::OutR(v, t)) => Head::Out(v, emb(&t)),
        Err(_) => Head::Delay(bot()),
    })
}

/// Strong bisimilarity of delay-free resumptions within budget.
pub fn strong_bisim_r(a: &ResR, b: &ResR, budget: &CheckBudget) -> Verdict {
    lockstep(a, b, budget)
}

/// `rep_r n = out n (rep_r n)`.
pub fn rep_r(n: impl Into<Value>) -> ResR {
    let n = n.into();
    ResR::new(move || Ok(HeadR::OutR(n.clone(), rep_r(n.clone()))))
}

/// `up_r n = out n (up_r (n+1))`.
pub fn up_r(n: impl Into<Value>) -> ResR {
    let n = n.into();
    ResR::new(move || {
        let next: Value = n.clone() + 1;
        Ok(HeadR::OutR(n.clone(), up_r(next)))
    })
}

#[derive(Clone)]
enum Frame {
    Exec(Arc<Stmt>),
    /// Run the loop again after its body finished. Only these re-entries
    /// are charged against fuel.
    Reenter(Arc<Stmt>),
}

/// Pending work, shared between the branches of an input.
#[derive(Clone, Default)]
struct Stack(Option<Arc<(Frame, Stack)>>);

impl Stack {
    fn push(self, f: Frame) -> Stack {
        Stack(Some(Arc::new((f, self))))
    }

    fn pop(&self) -> Option<(Frame, Stack)> {
        self.0.as_ref().map(|cell| (cell.0.clone(), cell.1.clone()))
    }
}

/// The delay-free evaluation of `s` from `sigma`: an inner search for the
/// next visible action, restarted lazily under each action.
pub fn eval_delayfree(s: &Stmt, sigma: &State, b: &CheckBudget) -> ResR {
    let stack = Stack::default().push(Frame::Exec(Arc::new(s.clone())));
    resume(sigma.clone(), stack, b.fuel(), Path::new())
}

fn resume(sigma: State, stack: Stack, fuel: u64, path: Path) -> ResR {
    ResR::new(move || search(sigma.clone(), stack.clone(), fuel, &path))
}

fn search(mut sigma: State, mut stack: Stack, fuel: u64, path: &Path) -> Result<HeadR, SemanticsError> {
    let mut reentries = 0;
    loop {
        let Some((frame, rest)) = stack.pop() else {
            return Ok(HeadR::RetR(sigma));
        };
        stack = rest;
        let s = match frame {
            Frame::Reenter(w) => {
                if reentries == fuel {
                    return Err(SemanticsError::NotResponsiveWithinBudget(Exhausted {
                        path: path.clone(),
                        fuel,
                    }));
                }
                reentries += 1;
                w
            }
            Frame::Exec(s) => s,
        };
        match &*s {
            Stmt::Skip => {}
            Stmt::Assign(x, e) => sigma = sigma.update(x, eval_expr(e, &sigma)),
            Stmt::Seq(a, b) => stack = stack.push(Frame::Exec(b.clone())).push(Frame::Exec(a.clone())),
            Stmt::If(e, t, f) => {
                let branch = if is_true(e, &sigma) { t } else { f };
                stack = stack.push(Frame::Exec(branch.clone()));
            }
            Stmt::While(e, body) => {
                if is_true(e, &sigma) {
                    stack = stack.push(Frame::Reenter(s.clone())).push(Frame::Exec(body.clone()));
                }
            }
            Stmt::Input(x) => {
                let (x, path) = (x.clone(), path.clone());
                return Ok(HeadR::InR(Arc::new(move |v| {
                    resume(sigma.update(&x, v.clone()), stack.clone(), fuel, path.then(Step::In(v.clone())))
                })));
            }
            Stmt::Output(e) => {
                let v = eval_expr(e, &sigma);
                let p = path.then(Step::Out(v.clone()));
                return Ok(HeadR::OutR(v, resume(sigma, stack, fuel, p)));
            }
        }
    }
}
