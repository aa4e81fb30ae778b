use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use whileio_cli::{cmd_bisim, cmd_compare, cmd_run, cmd_trace, load, Relation, RunConfig, EXIT_PARSE};
use whileio_core::interact::Semantics;
use whileio_core::{CheckBudget, State, Value};

#[derive(Parser)]
#[command(name = "whileio", version, about = "Run, trace and compare While programs with interactive I/O")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a program, reading inputs from stdin and writing outputs to stdout.
    Run {
        file: PathBuf,
        #[command(flatten)]
        opts: Opts,
    },
    /// Print a bounded prefix of a program's behaviour.
    Trace {
        file: PathBuf,
        #[command(flatten)]
        opts: Opts,
    },
    /// Check two programs' big-step behaviours for bisimilarity.
    Bisim {
        left: PathBuf,
        right: PathBuf,
        #[arg(long, value_enum, default_value = "weak")]
        relation: RelationArg,
        #[command(flatten)]
        opts: Opts,
    },
    /// Cross-check the four semantics of a program.
    Compare {
        file: PathBuf,
        #[command(flatten)]
        opts: Opts,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum RelationArg {
    Strong,
    Weak,
    WeakNested,
    WeakClassical,
}

#[derive(Args)]
struct Opts {
    /// big, small, delayfree or classical.
    #[arg(long, default_value = "big")]
    semantics: Semantics,
    /// Initial state, e.g. `x=3,y=4`.
    #[arg(long, default_value = "")]
    init: State,
    /// Delays allowed per convergence search.
    #[arg(long, default_value_t = CheckBudget::DEFAULT_FUEL)]
    fuel: u64,
    /// Layers explored by trace and the checkers.
    #[arg(long, default_value_t = CheckBudget::DEFAULT_DEPTH)]
    depth: usize,
    /// Input sample for trace and the checkers.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_value = "-2,-1,0,1,2")]
    inputs: Vec<Value>,
    /// Stop `run` after this many input and output actions.
    #[arg(long)]
    max_steps: Option<u64>,
}

impl Opts {
    fn config(&self) -> Result<RunConfig, String> {
        let budget = CheckBudget::new(self.fuel, self.depth, self.inputs.iter().cloned()).map_err(|e| e.to_string())?;
        Ok(RunConfig {
            semantics: self.semantics,
            init: self.init.clone(),
            budget,
            max_steps: self.max_steps,
        })
    }
}

fn run(cli: Cli) -> io::Result<i32> {
    let (stdout, stderr) = (io::stdout(), io::stderr());
    let (mut out, mut err) = (stdout.lock(), stderr.lock());
    let opts = match &cli.command {
        Command::Run { opts, .. } | Command::Trace { opts, .. } | Command::Bisim { opts, .. } | Command::Compare { opts, .. } => opts,
    };
    let cfg = match opts.config() {
        Ok(c) => c,
        Err(e) => {
            writeln!(err, "error: {e}")?;
            return Ok(EXIT_PARSE);
        }
    };
    macro_rules! load {
        ($p:expr) => {
            match load($p, &mut err) {
                Ok(s) => s,
                Err(code) => return Ok(code),
            }
        };
    }
    match &cli.command {
        Command::Run { file, .. } => {
            let s = load!(file);
            cmd_run(&s, &cfg, io::stdin().lock(), &mut out, &mut err)
        }
        Command::Trace { file, .. } => {
            let s = load!(file);
            cmd_trace(&s, &cfg, &mut out, &mut err)
        }
        Command::Bisim { left, right, relation, .. } => {
            let (a, b) = (load!(left), load!(right));
            let rel = match relation {
                RelationArg::Strong => Relation::Strong,
                RelationArg::Weak => Relation::Weak,
                RelationArg::WeakNested => Relation::WeakNested,
                RelationArg::WeakClassical => Relation::WeakClassical,
            };
            cmd_bisim(&a, &b, &cfg, rel, &mut out)
        }
        Command::Compare { file, .. } => {
            let s = load!(file);
            cmd_compare(&s, &cfg, &mut out)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            // usage errors share the parse-error status
            return ExitCode::from(if e.use_stderr() { EXIT_PARSE as u8 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_PARSE as u8)
        }
    }
}
