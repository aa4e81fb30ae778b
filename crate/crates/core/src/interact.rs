//! Running a behaviour against line-delimited integer input, and the
//! transcript format used for recorded sessions.
//!
//! A transcript lists the session's events in order, `< n` for an input and
//! `> n` for an output, and ends with `! ret {…}`, `! •` or `! timeout`.
//! Lines starting with `#` are comments, except the directives
//! `# semantics: NAME`, `# init: x=1,y=2` and `# max-steps: N`.

use std::fmt;
use std::io::{self, BufRead, Write};
use std::str::FromStr;

use thiserror::Error;

use crate::bigstep::eval_big;
use crate::classical::eval_classical;
use crate::delayfree::eval_delayfree;
use crate::resumption::{Behaviour, CheckBudget, Node, SemanticsError};
use crate::smallstep::run_small;
use crate::syntax::{State, Stmt, Value};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Event {
    In(Value),
    Out(Value),
}

impl fmt::Display for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Event::In(v) => write!(f, "< {v}"),
            Event::Out(v) => write!(f, "> {v}"),
        }
    }
}

/// How a session stopped.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Ret(State),
    BlackHole,
    /// The action limit was reached, or more than `fuel` consecutive delays
    /// were observed.
    Timeout,
    Stuck(SemanticsError),
    Malformed(String),
    Eof,
}

impl Outcome {
    /// The process exit status for this outcome.
    pub fn exit_code(&self) -> i32 {
        match self {
            Outcome::Ret(_) | Outcome::BlackHole => 0,
            Outcome::Timeout => 2,
            Outcome::Stuck(_) => 3,
            Outcome::Malformed(_) | Outcome::Eof => 4,
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Outcome::Ret(s) => write!(f, "ret {s}"),
            Outcome::BlackHole => f.write_str("•"),
            Outcome::Timeout => f.write_str("timeout"),
            Outcome::Stuck(e) => write!(f, "{e}"),
            Outcome::Malformed(line) => write!(f, "malformed input line {line:?}"),
            Outcome::Eof => f.write_str("end of input while waiting for a value"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Maximum number of input and output actions.
    pub max_steps: Option<u64>,
    /// Maximum number of consecutive delays.
    pub fuel: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Session {
    pub events: Vec<Event>,
    pub outcome: Outcome,
}

/// Runs `b`, reading one integer per line from `input` at each input
/// node and writing each output value on its own line to `output`.
pub fn interact<B: Behaviour>(
    b: &B,
    mut input: impl BufRead,
    mut output: impl Write,
    limits: Limits,
) -> io::Result<Session> {
    let mut events = Vec::new();
    let mut cur = b.clone();
    let mut actions = 0u64;
    let mut silent = 0u64;
    let outcome = loop {
        let node = match cur.node() {
            Ok(n) => n,
            Err(e) => break Outcome::Stuck(e),
        };
        let visible = matches!(node, Node::In(_) | Node::Out(..));
        if visible && limits.max_steps.is_some_and(|m| actions >= m) {
            break Outcome::Timeout;
        }
        match node {
            Node::Ret(s) => break Outcome::Ret(s),
            Node::BlackHole => break Outcome::BlackHole,
            Node::Delay(t) => {
                silent += 1;
                if silent > limits.fuel {
                    break Outcome::Timeout;
                }
                cur = t;
            }
            Node::Out(v, t) => {
                writeln!(output, "{v}")?;
                output.flush()?;
                events.push(Event::Out(v));
                (actions, silent, cur) = (actions + 1, 0, t);
            }
            Node::In(f) => {
                let mut line = String::new();
                if input.read_line(&mut line)? == 0 {
                    break Outcome::Eof;
                }
                let Ok(v) = line.trim().parse::<Value>() else {
                    break Outcome::Malformed(line.trim_end_matches(['\r', '\n']).to_owned());
                };
                cur = f(&v);
                events.push(Event::In(v));
                (actions, silent) = (actions + 1, 0);
            }
        }
    };
    Ok(Session { events, outcome })
}

/// The four semantics a program can be run under.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Semantics {
    Big,
    Small,
    DelayFree,
    Classical,
}

impl Semantics {
    pub const ALL: [Semantics; 4] = [Semantics::Big, Semantics::Small, Semantics::DelayFree, Semantics::Classical];

    pub fn name(self) -> &'static str {
        match self {
            Semantics::Big => "big",
            Semantics::Small => "small",
            Semantics::DelayFree => "delayfree",
            Semantics::Classical => "classical",
        }
    }
}

impl fmt::Display for Semantics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown semantics {0:?} (expected big, small, delayfree or classical)")]
pub struct UnknownSemantics(pub String);

impl FromStr for Semantics {
    type Err = UnknownSemantics;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Semantics::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| UnknownSemantics(s.to_owned()))
    }
}

/// Runs `s` from `sigma` under `sem` against `input`. The delay-free and
/// classical semantics take their per-gap fuel from `budget`.
pub fn interact_program(
    sem: Semantics,
    s: &Stmt,
    sigma: &State,
    budget: &CheckBudget,
    input: impl BufRead,
    output: impl Write,
    limits: Limits,
) -> io::Result<Session> {
    match sem {
        Semantics::Big => interact(&eval_big(s, sigma), input, output, limits),
        Semantics::Small => interact(&run_small(s, sigma), input, output, limits),
        Semantics::DelayFree => interact(&eval_delayfree(s, sigma, budget), input, output, limits),
        Semantics::Classical => interact(&eval_classical(s, sigma, budget), input, output, limits),
    }
}

/// The terminator line of a transcript.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum End {
    Ret(State),
    BlackHole,
    Timeout,
}

impl End {
    /// The terminator a finished session would be recorded with, if any.
    pub fn of(outcome: &Outcome) -> Option<End> {
        match outcome {
            Outcome::Ret(s) => Some(End::Ret(s.clone())),
            Outcome::BlackHole => Some(End::BlackHole),
            Outcome::Timeout => Some(End::Timeout),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Directives {
    pub semantics: Option<String>,
    pub init: Option<State>,
    pub max_steps: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transcript {
    pub directives: Directives,
    pub events: Vec<Event>,
    pub end: End,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("transcript line {line}: {message}")]
pub struct TranscriptError {
    pub line: usize,
    pub message: String,
}

impl Transcript {
    /// The values fed at input events, one per line.
    pub fn stdin(&self) -> String {
        self.events
            .iter()
            .filter_map(|e| match e {
                Event::In(v) => Some(format!("{v}\n")),
                Event::Out(_) => None,
            })
            .collect()
    }

    /// The expected standard output.
    pub fn stdout(&self) -> String {
        self.events
            .iter()
            .filter_map(|e| match e {
                Event::Out(v) => Some(format!("{v}\n")),
                Event::In(_) => None,
            })
            .collect()
    }

    /// Whether a session reproduces this transcript exactly.
    pub fn matches(&self, s: &Session) -> bool {
        self.events == s.events && End::of(&s.outcome).as_ref() == Some(&self.end)
    }

    pub fn parse(text: &str) -> Result<Transcript, TranscriptError> {
        let mut directives = Directives::default();
        let mut events = Vec::new();
        let mut end = None;
        for (i, raw) in text.lines().enumerate() {
            let err = |message: String| TranscriptError { line: i + 1, message };
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            if end.is_some() {
                return Err(err("content after the terminator".into()));
            }
            if let Some(comment) = line.strip_prefix('#') {
                if let Some((key, val)) = comment.split_once(':') {
                    let val = val.trim();
                    match key.trim() {
                        "semantics" => directives.semantics = Some(val.to_owned()),
                        "init" => {
                            directives.init = Some(val.parse().map_err(|e| err(format!("{e}")))?)
                        }
                        "max-steps" => {
                            let n = val.parse().map_err(|_| err(format!("bad step count {val:?}")))?;
                            directives.max_steps = Some(n);
                        }
                        _ => {}
                    }
                }
                continue;
            }
            let (tag, rest) = line.split_at(1);
            let rest = rest.trim();
            let value = || rest.parse::<Value>().map_err(|_| err(format!("bad value {rest:?}")));
            match tag {
                "<" => events.push(Event::In(value()?)),
                ">" => events.push(Event::Out(value()?)),
                "!" => {
                    end = Some(match rest {
                        "•" => End::BlackHole,
                        "timeout" => End::Timeout,
                        _ => match rest.strip_prefix("ret") {
                            Some(st) => End::Ret(st.parse().map_err(|e| err(format!("{e}")))?),
                            None => return Err(err(format!("unknown terminator {rest:?}"))),
                        },
                    })
                }
                _ => return Err(err(format!("unrecognised line {line:?}"))),
            }
        }
        let end = end.ok_or(TranscriptError {
            line: text.lines().count(),
            message: "missing terminator".into(),
        })?;
        Ok(Transcript {
            directives,
            events,
            end,
        })
    }
}

impl fmt::Display for Transcript {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = &self.directives;
        if let Some(s) = &d.semantics {
            writeln!(f, "# semantics: {s}")?;
        }
        if let Some(s) = &d.init {
            let shown = s.to_string();
            writeln!(f, "# init: {}", &shown[1..shown.len() - 1])?;
        }
        if let Some(n) = d.max_steps {
            writeln!(f, "# max-steps: {n}")?;
        }
        for e in &self.events {
            writeln!(f, "{e}")?;
        }
        match &self.end {
            End::Ret(s) => writeln!(f, "! ret {s}"),
            End::BlackHole => writeln!(f, "! •"),
            End::Timeout => writeln!(f, "! timeout"),
        }
    }
}
