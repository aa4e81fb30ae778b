//! The `whileio` command-line front end. Each command writes to the given
//! streams and returns the process exit status.
//!
//! Exit statuses: 0 success (or `Holds`), 1 parse or usage error, 2 step
//! limit or delay timeout, 3 not responsive / undecided within budget,
//! 4 malformed or missing input, 5 `Fails`, 6 `Unknown`.

use std::fs;
use std::io::{self, BufRead, Write};
use std::path::Path;

use whileio_core::bigstep::eval_big;
use whileio_core::classical::{emb_c, eval_classical, norm_c, strong_bisim_c};
use whileio_core::delayfree::{emb, eval_delayfree, norm, strong_bisim_r};
use whileio_core::interact::{interact_program, Limits, Semantics};
use whileio_core::resumption::{render, strong_bisim, Shape};
use whileio_core::smallstep::run_small;
use whileio_core::weak_bisim::{weak_bisim, weak_bisim_classical, weak_bisim_nested};
use whileio_core::{parse_program, CheckBudget, SemanticsError, State, Stmt, Verdict};

pub const EXIT_PARSE: i32 = 1;
pub const EXIT_STUCK: i32 = 3;
pub const EXIT_FAILS: i32 = 5;
pub const EXIT_UNKNOWN: i32 = 6;

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub semantics: Semantics,
    pub init: State,
    pub budget: CheckBudget,
    pub max_steps: Option<u64>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            semantics: Semantics::Big,
            init: State::new(),
            budget: CheckBudget::default(),
            max_steps: None,
        }
    }
}

/// The relations `bisim` can check.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Strong,
    Weak,
    WeakNested,
    WeakClassical,
}

impl Relation {
    pub fn check(self, a: &whileio_core::Res, b: &whileio_core::Res, budget: &CheckBudget) -> Verdict {
        match self {
            Relation::Strong => strong_bisim(a, b, budget),
            Relation::Weak => weak_bisim(a, b, budget),
            Relation::WeakNested => weak_bisim_nested(a, b, budget),
            Relation::WeakClassical => weak_bisim_classical(a, b, budget),
        }
    }
}

pub fn verdict_code(v: &Verdict) -> i32 {
    match v {
        Verdict::Holds => 0,
        Verdict::Fails(_) => EXIT_FAILS,
        Verdict::Unknown(_) => EXIT_UNKNOWN,
    }
}

/// Reads and parses a program file, reporting problems on `err`.
pub fn load(path: &Path, err: &mut dyn Write) -> Result<Stmt, i32> {
    let text = match fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => {
            let _ = writeln!(err, "{}: {e}", path.display());
            return Err(EXIT_PARSE);
        }
    };
    parse_program(&text).map_err(|e| {
        let _ = writeln!(err, "{}: {e}", path.display());
        EXIT_PARSE
    })
}

/// Runs the program interactively. Output values go to `out`, one per
/// line; the final state, `•`, `timeout` or the failure reason goes to `err`.
pub fn cmd_run(s: &Stmt, cfg: &RunConfig, input: impl BufRead, out: &mut dyn Write, err: &mut dyn Write) -> io::Result<i32> {
    let limits = Limits {
        max_steps: cfg.max_steps,
        fuel: cfg.budget.fuel(),
    };
    let session = interact_program(cfg.semantics, s, &cfg.init, &cfg.budget, input, &mut *out, limits)?;
    writeln!(err, "{}", session.outcome)?;
    Ok(session.outcome.exit_code())
}

/// Prints the first `budget.depth()` layers of the program's behaviour.
pub fn cmd_trace(s: &Stmt, cfg: &RunConfig, out: &mut dyn Write, err: &mut dyn Write) -> io::Result<i32> {
    let (depth, inputs) = (cfg.budget.depth(), cfg.budget.inputs());
    let (sigma, b) = (&cfg.init, &cfg.budget);
    let shown = match cfg.semantics {
        Semantics::Big => render(&eval_big(s, sigma), depth, inputs),
        Semantics::Small => render(&run_small(s, sigma), depth, inputs),
        Semantics::DelayFree => render(&eval_delayfree(s, sigma, b), depth, inputs),
        Semantics::Classical => render(&eval_classical(s, sigma, b), depth, inputs),
    };
    match shown {
        Ok(text) => {
            writeln!(out, "{text}")?;
            Ok(0)
        }
        Err(e) => {
            writeln!(err, "{e}")?;
            Ok(EXIT_STUCK)
        }
    }
}

/// Compares the big-step evaluations of two programs.
pub fn cmd_bisim(a: &Stmt, b: &Stmt, cfg: &RunConfig, rel: Relation, out: &mut dyn Write) -> io::Result<i32> {
    let ra = eval_big(a, &cfg.init);
    let rb = eval_big(b, &cfg.init);
    let v = rel.check(&ra, &rb, &cfg.budget);
    writeln!(out, "{v}")?;
    Ok(verdict_code(&v))
}

/// Cross-checks the four semantics of one program and prints a table of
/// verdicts. Exits 5 if any check fails.
pub fn cmd_compare(s: &Stmt, cfg: &RunConfig, out: &mut dyn Write) -> io::Result<i32> {
    let (sigma, b) = (&cfg.init, &cfg.budget);
    let big = eval_big(s, sigma);
    let d = eval_delayfree(s, sigma, b);
    let c = eval_classical(s, sigma, b);
    let rows = [
        ("big ∼ small", strong_bisim(&big, &run_small(s, sigma), b)),
        ("delayfree ∼r norm(big)", strong_bisim_r(&d, &norm(&big, b), b)),
        ("big ≈ emb(delayfree)", weak_bisim(&big, &emb(&d), b)),
        ("classical ∼c norm_c(big)", strong_bisim_c(&c, &norm_c(&big, b), b)),
        ("big ≈ emb_c(classical)", weak_bisim(&big, &emb_c(&c), b)),
    ];
    let mut code = 0;
    for (name, v) in &rows {
        writeln!(out, "{name:<26} {v}")?;
        if v.fails() {
            code = EXIT_FAILS;
        }
    }
    let first = |r: Result<Shape, SemanticsError>| match r {
        Ok(h) => h.to_string(),
        Err(e) => e.to_string(),
    };
    writeln!(out, "{:<26} {}", "delayfree head", first(d.observe().map(|h| h.shape())))?;
    writeln!(out, "{:<26} {}", "classical head", first(c.observe().map(|h| h.shape())))?;
    Ok(code)
}
