//! Fixtures shared by the integration tests: the program corpus and a
//! seeded generator of random resumptions.
#![allow(dead_code)]

use std::collections::BTreeSet;
use std::fs;
use std::path::PathBuf;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use whileio_core::interact::Transcript;
use whileio_core::resumption::{bot, rep, rep_fast, up, Head, Res};
use whileio_core::syntax::{parse_program, State, Stmt};

pub struct Program {
    pub name: String,
    pub stmt: Stmt,
    pub init: State,
    pub tags: BTreeSet<String>,
    pub transcript: Option<Transcript>,
}

impl Program {
    pub fn has(&self, tag: &str) -> bool {
        self.tags.contains(tag)
    }
}

pub fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

/// Every `.whl` file in the corpus, sorted by name, with its `# init:` and
/// `# tags:` headers and its `.io` transcript if present.
pub fn corpus() -> Vec<Program> {
    let mut paths: Vec<PathBuf> = fs::read_dir(corpus_dir())
        .expect("corpus directory")
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "whl"))
        .collect();
    paths.sort();
    paths
        .into_iter()
        .map(|path| {
            let text = fs::read_to_string(&path).unwrap();
            let name = path.file_stem().unwrap().to_string_lossy().into_owned();
            let mut init = State::new();
            let mut tags = BTreeSet::new();
            for line in text.lines() {
                let Some(h) = line.trim().strip_prefix('#') else { continue };
                if let Some(v) = h.trim().strip_prefix("init:") {
                    init = v.parse().unwrap();
                } else if let Some(v) = h.trim().strip_prefix("tags:") {
                    tags.extend(v.split(',').map(|t| t.trim().to_owned()));
                }
            }
            let stmt = parse_program(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
            let io = path.with_extension("io");
            let transcript = io
                .exists()
                .then(|| Transcript::parse(&fs::read_to_string(io).unwrap()).unwrap());
            Program {
                name,
                stmt,
                init,
                tags,
                transcript,
            }
        })
        .collect()
}

/// A finite resumption prefix, closed off by a standard infinite tail.
#[derive(Clone, Debug)]
pub enum Tree {
    Ret(i64),
    /// Child chosen by the input value modulo the number of children.
    In(Vec<Tree>),
    Out(i64, Box<Tree>),
    Delays(usize, Box<Tree>),
    Tail(Tail),
}

#[derive(Clone, Copy, Debug)]
pub enum Tail {
    Bot,
    Rep(i64),
    RepFast(i64),
    Up(i64),
}

impl Tree {
    pub fn res(&self) -> Res {
        to_res(Arc::new(self.clone()))
    }
}

fn to_res(t: Arc<Tree>) -> Res {
    match &*t {
        Tree::Ret(x) => Res::ret([("x", *x)].into_iter().collect()),
        Tree::Out(v, c) => Res::output(*v, to_res(Arc::new((**c).clone()))),
        Tree::Delays(n, c) => Res::delays(*n, to_res(Arc::new((**c).clone()))),
        Tree::Tail(Tail::Bot) => bot(),
        Tree::Tail(Tail::Rep(n)) => rep(*n),
        Tree::Tail(Tail::RepFast(n)) => rep_fast(*n),
        Tree::Tail(Tail::Up(n)) => up(*n),
        Tree::In(cs) => {
            let cs: Arc<Vec<Arc<Tree>>> = Arc::new(cs.iter().cloned().map(Arc::new).collect());
            Res::new(move || {
                let cs = cs.clone();
                Head::In(Arc::new(move |v| {
                    let n = cs.len() as i64;
                    let i: i64 = (v % n).try_into().unwrap();
                    to_res(cs[i.rem_euclid(n) as usize].clone())
                }))
            })
        }
    }
}

pub struct Gen(ChaCha8Rng);

impl Gen {
    pub fn new(seed: u64) -> Gen {
        Gen(ChaCha8Rng::seed_from_u64(seed))
    }

    fn delays(&mut self) -> usize {
        // mostly short runs, sometimes past a fuel of 20
        match self.0.gen_range(0..10) {
            0..=5 => self.0.gen_range(0..4),
            6..=8 => self.0.gen_range(4..20),
            _ => self.0.gen_range(20..45),
        }
    }

    fn tail(&mut self) -> Tail {
        let n = self.0.gen_range(0..3);
        match self.0.gen_range(0..4) {
            0 => Tail::Bot,
            1 => Tail::Rep(n),
            2 => Tail::RepFast(n),
            _ => Tail::Up(n),
        }
    }

    pub fn tree(&mut self, size: usize) -> Tree {
        let node = if size == 0 {
            match self.0.gen_range(0..3) {
                0 => Tree::Ret(self.0.gen_range(0..2)),
                _ => Tree::Tail(self.tail()),
            }
        } else {
            match self.0.gen_range(0..10) {
                0 => Tree::Ret(self.0.gen_range(0..2)),
                1 => Tree::Tail(self.tail()),
                2..=3 => {
                    let k = self.0.gen_range(1..3);
                    Tree::In((0..k).map(|_| self.tree(size - 1)).collect())
                }
                _ => Tree::Out(self.0.gen_range(0..3), Box::new(self.tree(size - 1))),
            }
        };
        match self.delays() {
            0 => node,
            n => Tree::Delays(n, Box::new(node)),
        }
    }

    /// A variant of `t` that usually differs only in timing, and sometimes
    /// in an observable value or in a tail.
    pub fn perturb(&mut self, t: &Tree) -> Tree {
        let node = match t {
            Tree::Delays(_, c) => return self.retime(c),
            Tree::Ret(x) if self.0.gen_ratio(1, 8) => Tree::Ret(1 - x),
            Tree::Ret(x) => Tree::Ret(*x),
            Tree::Out(v, c) => {
                let v = if self.0.gen_ratio(1, 10) { v + 1 } else { *v };
                Tree::Out(v, Box::new(self.perturb(c)))
            }
            Tree::In(cs) => Tree::In(cs.iter().map(|c| self.perturb(c)).collect()),
            Tree::Tail(tail) => Tree::Tail(match (*tail, self.0.gen_range(0..6)) {
                (Tail::Rep(n), 0..=2) => Tail::RepFast(n),
                (Tail::RepFast(n), 0..=2) => Tail::Rep(n),
                (_, 5) => self.tail(),
                (t, _) => t,
            }),
        };
        self.retime(&node)
    }

    fn retime(&mut self, t: &Tree) -> Tree {
        let inner = match t {
            Tree::Delays(_, c) => self.perturb(c),
            other => self.perturb_head(other),
        };
        match self.delays() {
            0 => inner,
            n => Tree::Delays(n, Box::new(inner)),
        }
    }

    fn perturb_head(&mut self, t: &Tree) -> Tree {
        match t {
            Tree::Delays(..) => self.perturb(t),
            Tree::Ret(x) => Tree::Ret(*x),
            Tree::Out(v, c) => Tree::Out(*v, Box::new(self.perturb(c))),
            Tree::In(cs) => Tree::In(cs.iter().map(|c| self.perturb(c)).collect()),
            Tree::Tail(x) => Tree::Tail(*x),
        }
    }

    pub fn pair(&mut self) -> (Tree, Tree) {
        let size = self.0.gen_range(1..6);
        let a = self.tree(size);
        let b = if self.0.gen_ratio(1, 5) {
            self.tree(size)
        } else {
            self.perturb(&a)
        };
        (a, b)
    }
}
