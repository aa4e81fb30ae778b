//! Strong bisimilarity as a breadth-first lock-step walk.
//!
//! The same walk serves delayful, delay-free and classical-style
//! resumptions through [`Behaviour`]. Breadth-first order makes the reported
//! witness the shallowest mismatch, so it is stable under larger depths.

use std::collections::VecDeque;

use super::{Behaviour, CheckBudget, Exhausted, Mismatch, Node, Path, Res, Step, Verdict, Witness};

pub fn lockstep<A: Behaviour, B: Behaviour>(a: &A, b: &B, budget: &CheckBudget) -> Verdict {
    let mut queue = VecDeque::from([(a.clone(), b.clone(), Path::new(), budget.clone())]);
    let mut unknown: Option<Exhausted> = None;
    while let Some((a, b, path, budget)) = queue.pop_front() {
        if budget.exhausted_depth() {
            continue;
        }
        let (na, nb) = match (a.node(), b.node()) {
            (Ok(na), Ok(nb)) => (na, nb),
            (Err(e), _) | (_, Err(e)) => {
                unknown.get_or_insert(Exhausted {
                    path,
                    fuel: e.exhausted().fuel,
                });
                continue;
            }
        };
        match (na, nb) {
            (Node::Ret(s), Node::Ret(t)) if s == t => {}
            (Node::BlackHole, Node::BlackHole) => {}
            (Node::Out(v, ta), Node::Out(w, tb)) if v == w => {
                queue.push_back((ta, tb, path.then(Step::Out(v)), budget.descend()));
            }
            (Node::Delay(ta), Node::Delay(tb)) => {
                queue.push_back((ta, tb, path.then(Step::Delay), budget.descend()));
            }
            (Node::In(f), Node::In(g)) => {
                let (vs, child) = budget.branch();
                for v in vs {
                    queue.push_back((f(&v), g(&v), path.then(Step::In(v)), child.clone()));
                }
            }
            (na, nb) => {
                return Verdict::Fails(Witness {
                    path,
                    mismatch: Mismatch::Heads {
                        left: na.shape(),
                        right: nb.shape(),
                    },
                })
            }
        }
    }
    match unknown {
        Some(e) => Verdict::Unknown(e),
        None => Verdict::Holds,
    }
}

/// `r ∼ r*`, explored to `budget.depth()` layers.
pub fn strong_bisim(r: &Res, r_star: &Res, budget: &CheckBudget) -> Verdict {
    lockstep(r, r_star, budget)
}

/// Follows `path` one layer per step. `Silent(n)` counts as `n` layers.
pub(crate) fn follow<T: Behaviour>(start: &T, path: &Path) -> Option<T> {
    let mut cur = start.clone();
    for step in path.steps() {
        cur = match (step, cur.node().ok()?) {
            (Step::Delay, Node::Delay(t)) => t,
            (Step::Silent(n), Node::Delay(t)) => {
                let mut t = t;
                for _ in 1..*n {
                    match t.node().ok()? {
                        Node::Delay(u) => t = u,
                        _ => return None,
                    }
                }
                t
            }
            (Step::Out(v), Node::Out(w, t)) if *v == w => t,
            (Step::In(v), Node::In(f)) => f(v),
            _ => return None,
        };
    }
    Some(cur)
}

impl Witness {
    /// Re-walks a lock-step witness and checks that the recorded heads are
    /// reached and differ.
    pub fn replay_lockstep<A: Behaviour, B: Behaviour>(&self, a: &A, b: &B) -> bool {
        let Mismatch::Heads { left, right } = &self.mismatch else {
            return false;
        };
        let (Some(ea), Some(eb)) = (follow(a, &self.path), follow(b, &self.path)) else {
            return false;
        };
        match (ea.node(), eb.node()) {
            (Ok(na), Ok(nb)) => na.shape() == *left && nb.shape() == *right && left != right,
            _ => false,
        }
    }

    /// Re-walks a divergence counterexample on a single subject.
    pub fn replay_converges<T: Behaviour>(&self, subject: &T) -> bool {
        let Mismatch::Converges { head } = &self.mismatch else {
            return false;
        };
        follow(subject, &self.path)
            .and_then(|t| t.node().ok())
            .is_some_and(|n| n.shape() == *head)
    }
}
