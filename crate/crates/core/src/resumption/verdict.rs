use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::syntax::{State, Value};

/// One move along an observation path.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Step {
    /// One delay layer, taken in lock-step on both sides.
    Delay,
    /// `n` matched delays on both sides at once (weak bisimilarity's
    /// delay rule applied `n` times).
    Silent(u64),
    /// An input branch taken with the given value.
    In(Value),
    /// An output of the given value, after which the tail is followed.
    Out(Value),
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Step::Delay => f.write_str("δ"),
            Step::Silent(n) => write!(f, "δ^{n}"),
            Step::In(v) => write!(f, "in {v}"),
            Step::Out(v) => write!(f, "out {v}"),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Path(pub Vec<Step>);

impl Path {
    pub fn new() -> Self {
        Path(Vec::new())
    }

    pub fn then(&self, step: Step) -> Path {
        let mut v = self.0.clone();
        v.push(step);
        Path(v)
    }

    pub fn steps(&self) -> &[Step] {
        &self.0
    }

    pub fn prepend(mut self, step: Step) -> Path {
        self.0.insert(0, step);
        self
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("ε");
        }
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(".")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

/// The head constructor of an observed node, without its children.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Shape {
    Ret(State),
    In,
    Out(Value),
    Delay,
    BlackHole,
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Shape::Ret(s) => write!(f, "ret {s}"),
            Shape::In => f.write_str("in"),
            Shape::Out(v) => write!(f, "out {v}"),
            Shape::Delay => f.write_str("δ"),
            Shape::BlackHole => f.write_str("•"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Mismatch {
    /// The two subjects show different heads at the end of the path.
    Heads { left: Shape, right: Shape },
    /// The subject shows a non-delay head where silence was claimed.
    Converges { head: Shape },
}

/// A finite, replayable counterexample.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub path: Path,
    pub mismatch: Mismatch,
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.mismatch {
            Mismatch::Heads { left, right } => {
                write!(f, "after {}: {left} vs {right}", self.path)
            }
            Mismatch::Converges { head } => write!(f, "after {}: {head}", self.path),
        }
    }
}

/// Where a bounded search ran out of fuel.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Exhausted {
    pub path: Path,
    pub fuel: u64,
}

impl fmt::Display for Exhausted {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "fuel {} exhausted after {}", self.fuel, self.path)
    }
}

/// Errors raised lazily while observing a normalized resumption.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SemanticsError {
    #[error("not responsive within budget: {0}")]
    NotResponsiveWithinBudget(Exhausted),
    #[error("undecided within budget: {0}")]
    UndecidedWithinBudget(Exhausted),
}

impl SemanticsError {
    pub fn exhausted(&self) -> &Exhausted {
        match self {
            SemanticsError::NotResponsiveWithinBudget(e)
            | SemanticsError::UndecidedWithinBudget(e) => e,
        }
    }
}

/// Outcome of a bounded coinductive check.
///
/// `Fails` is definitive. `Holds` means no counterexample within the budget.
/// `Unknown` is returned only when fuel ran out before a decision.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    Fails(Witness),
    Unknown(Exhausted),
}

impl Verdict {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds)
    }

    pub fn fails(&self) -> bool {
        matches!(self, Verdict::Fails(_))
    }

    pub fn unknown(&self) -> bool {
        matches!(self, Verdict::Unknown(_))
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            Verdict::Fails(w) => Some(w),
            _ => None,
        }
    }

    /// Conjunction over branches: any failure wins, then any unknown.
    pub fn and(self, other: Verdict) -> Verdict {
        match (self, other) {
            (f @ Verdict::Fails(_), _) => f,
            (_, f @ Verdict::Fails(_)) => f,
            (u @ Verdict::Unknown(_), _) => u,
            (_, u @ Verdict::Unknown(_)) => u,
            _ => Verdict::Holds,
        }
    }

    /// Short name: `Holds`, `Fails` or `Unknown`.
    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Holds => "Holds",
            Verdict::Fails(_) => "Fails",
            Verdict::Unknown(_) => "Unknown",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Holds => f.write_str("Holds"),
            Verdict::Fails(w) => write!(f, "Fails({w})"),
            Verdict::Unknown(e) => write!(f, "Unknown({e})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum BudgetError {
    #[error("fuel must be at least 1")]
    ZeroFuel,
    #[error("the input sample must not be empty")]
    NoInputs,
}

/// Resource bounds shared by every bounded check.
///
/// * `fuel`: delays stripped per convergence search;
/// * `depth`: layers explored along any path;
/// * `inputs`: values fed to input branches;
/// * `fanout`: how many input nodes along one path branch over the whole
///   sample. Deeper input nodes follow a single sample value chosen by the
///   number of layers above them, which keeps exploration linear in
///   `depth`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckBudget {
    fuel: u64,
    depth: usize,
    inputs: Arc<[Value]>,
    fanout: usize,
    // layers already descended; picks the sample value past the fanout
    level: usize,
}

impl CheckBudget {
    pub const DEFAULT_FUEL: u64 = 1000;
    pub const DEFAULT_DEPTH: usize = 50;
    pub const DEFAULT_FANOUT: usize = 3;

    pub fn new<V: Into<Value>>(
        fuel: u64,
        depth: usize,
        inputs: impl IntoIterator<Item = V>,
    ) -> Result<Self, BudgetError> {
        if fuel == 0 {
            return Err(BudgetError::ZeroFuel);
        }
        let inputs: Arc<[Value]> = inputs.into_iter().map(Into::into).collect();
        if inputs.is_empty() {
            return Err(BudgetError::NoInputs);
        }
        Ok(CheckBudget {
            fuel,
            depth,
            inputs,
            fanout: Self::DEFAULT_FANOUT,
            level: 0,
        })
    }

    pub fn with_fanout(mut self, fanout: usize) -> Self {
        self.fanout = fanout;
        self
    }

    pub fn with_depth(mut self, depth: usize) -> Self {
        self.depth = depth;
        self
    }

    pub fn with_fuel(mut self, fuel: u64) -> Result<Self, BudgetError> {
        if fuel == 0 {
            return Err(BudgetError::ZeroFuel);
        }
        self.fuel = fuel;
        Ok(self)
    }

    pub fn fuel(&self) -> u64 {
        self.fuel
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn inputs(&self) -> &[Value] {
        &self.inputs
    }

    pub fn fanout(&self) -> usize {
        self.fanout
    }

    pub fn exhausted_depth(&self) -> bool {
        self.depth == 0
    }

    /// The budget for the layer below a non-branching step.
    pub fn descend(&self) -> CheckBudget {
        CheckBudget {
            depth: self.depth.saturating_sub(1),
            level: self.level + 1,
            ..self.clone()
        }
    }

    /// Inputs to explore at an input node, and the budget for its children.
    pub fn branch(&self) -> (Vec<Value>, CheckBudget) {
        let child = self.descend();
        if self.fanout > 0 {
            let child = CheckBudget {
                fanout: self.fanout - 1,
                ..child
            };
            (self.inputs.to_vec(), child)
        } else {
            let pick = self.inputs[self.level % self.inputs.len()].clone();
            (vec![pick], child)
        }
    }
}

impl Default for CheckBudget {
    fn default() -> Self {
        CheckBudget::new(Self::DEFAULT_FUEL, Self::DEFAULT_DEPTH, -2..=2).expect("valid default")
    }
}
