//! Recursive-descent parser for `.whl` programs.
//!
//! ```text
//! s ::= "skip" | x ":=" e | s ";" s | "if" e "then" s "else" s "end"
//!     | "while" e "do" s "end" | "input" x | "output" e
//! e ::= int | ident | e op e | "not" e | "(" e ")"
//! ```
//!
//! `;` associates to the right. Operator precedence, loosest first:
//! `or`, `and`, `not`, comparisons, `+ -`, `*`. `true`/`false` are sugar for
//! 1/0, and a leading `-` before a literal makes it negative.

use std::fmt;

use num_bigint::BigInt;
use thiserror::Error;

use super::{BinOp, Expr, Stmt};

const KEYWORDS: &[&str] = &[
    "skip", "if", "then", "else", "end", "while", "do", "input", "output", "not", "and", "or",
    "true", "false",
];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{col}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    UnexpectedChar(char),
    Unexpected { found: String, expected: &'static str },
    ReservedWord(String),
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::UnexpectedChar(c) => write!(f, "unexpected character {c:?}"),
            ParseErrorKind::Unexpected { found, expected } => {
                write!(f, "expected {expected}, found {found}")
            }
            ParseErrorKind::ReservedWord(w) => {
                write!(f, "reserved word `{w}` cannot be used as a variable")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Kw(&'static str),
    Sym(&'static str),
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Int(n) => write!(f, "integer {n}"),
            Tok::Ident(x) => write!(f, "identifier `{x}`"),
            Tok::Kw(k) => write!(f, "`{k}`"),
            Tok::Sym(s) => write!(f, "`{s}`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let (tl, tc) = (line, col);
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let start = i;
        let tok = if c.is_ascii_digit() {
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let digits: String = chars[start..i].iter().collect();
            Tok::Int(digits.parse().expect("ascii digits"))
        } else if c.is_alphabetic() || c == '_' {
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let word: String = chars[start..i].iter().collect();
            match KEYWORDS.iter().find(|k| **k == word) {
                Some(k) => Tok::Kw(k),
                None => Tok::Ident(word),
            }
        } else {
            let next = chars.get(i + 1).copied();
            let sym = match (c, next) {
                (':', Some('=')) => ":=",
                ('<', Some('>')) => "<>",
                ('<', Some('=')) => "<=",
                ('>', Some('=')) => ">=",
                (';', _) => ";",
                ('(', _) => "(",
                (')', _) => ")",
                ('+', _) => "+",
                ('-', _) => "-",
                ('*', _) => "*",
                ('=', _) => "=",
                ('<', _) => "<",
                ('>', _) => ">",
                _ => {
                    return Err(ParseError {
                        line: tl,
                        col: tc,
                        kind: ParseErrorKind::UnexpectedChar(c),
                    })
                }
            };
            i += sym.len();
            Tok::Sym(sym)
        };
        col += i - start;
        out.push(Spanned { tok, line: tl, col: tc });
    }
    out.push(Spanned {
        tok: Tok::Eof,
        line,
        col,
    });
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek2(&self) -> &Tok {
        let i = (self.pos + 1).min(self.toks.len() - 1);
        &self.toks[i].tok
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, kind: ParseErrorKind) -> ParseError {
        let s = &self.toks[self.pos];
        ParseError {
            line: s.line,
            col: s.col,
            kind,
        }
    }

    fn unexpected(&self, expected: &'static str) -> ParseError {
        self.error(ParseErrorKind::Unexpected {
            found: self.peek().to_string(),
            expected,
        })
    }

    fn expect_kw(&mut self, kw: &'static str) -> Result<(), ParseError> {
        if *self.peek() == Tok::Kw(kw) {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected(kw))
        }
    }

    fn expect_sym(&mut self, sym: &'static str) -> Result<(), ParseError> {
        if *self.peek() == Tok::Sym(sym) {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected(sym))
        }
    }

    fn ident(&mut self) -> Result<String, ParseError> {
        match self.peek().clone() {
            Tok::Ident(x) => {
                self.bump();
                Ok(x)
            }
            Tok::Kw(k) => Err(self.error(ParseErrorKind::ReservedWord(k.to_owned()))),
            _ => Err(self.unexpected("a variable")),
        }
    }

    fn seq(&mut self) -> Result<Stmt, ParseError> {
        let first = self.simple()?;
        if *self.peek() == Tok::Sym(";") {
            self.bump();
            let rest = self.seq()?;
            Ok(Stmt::seq(first, rest))
        } else {
            Ok(first)
        }
    }

    fn simple(&mut self) -> Result<Stmt, ParseError> {
        match self.peek().clone() {
            Tok::Kw("skip") => {
                self.bump();
                Ok(Stmt::Skip)
            }
            Tok::Kw("if") => {
                self.bump();
                let e = self.expr()?;
                self.expect_kw("then")?;
                let t = self.seq()?;
                self.expect_kw("else")?;
                let f = self.seq()?;
                self.expect_kw("end")?;
                Ok(Stmt::if_(e, t, f))
            }
            Tok::Kw("while") => {
                self.bump();
                let e = self.expr()?;
                self.expect_kw("do")?;
                let b = self.seq()?;
                self.expect_kw("end")?;
                Ok(Stmt::while_(e, b))
            }
            Tok::Kw("input") => {
                self.bump();
                let x = self.ident()?;
                Ok(Stmt::Input(x))
            }
            Tok::Kw("output") => {
                self.bump();
                Ok(Stmt::Output(self.expr()?))
            }
            Tok::Kw(k) if *self.peek2() == Tok::Sym(":=") => {
                Err(self.error(ParseErrorKind::ReservedWord(k.to_owned())))
            }
            Tok::Ident(x) => {
                self.bump();
                self.expect_sym(":=")?;
                let e = self.expr()?;
                Ok(Stmt::Assign(x, e))
            }
            _ => Err(self.unexpected("a statement")),
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        self.binary(1)
    }

    fn binop(&self) -> Option<BinOp> {
        Some(match self.peek() {
            Tok::Kw("or") => BinOp::Or,
            Tok::Kw("and") => BinOp::And,
            Tok::Sym("=") => BinOp::Eq,
            Tok::Sym("<>") => BinOp::Ne,
            Tok::Sym("<") => BinOp::Lt,
            Tok::Sym("<=") => BinOp::Le,
            Tok::Sym(">") => BinOp::Gt,
            Tok::Sym(">=") => BinOp::Ge,
            Tok::Sym("+") => BinOp::Add,
            Tok::Sym("-") => BinOp::Sub,
            Tok::Sym("*") => BinOp::Mul,
            _ => return None,
        })
    }

    /// Precedence climbing over left-associative levels; level 3 is `not`.
    fn binary(&mut self, level: u8) -> Result<Expr, ParseError> {
        if level == 3 {
            if *self.peek() == Tok::Kw("not") {
                self.bump();
                return Ok(Expr::not_(self.binary(3)?));
            }
            return self.binary(4);
        }
        if level > 6 {
            return self.primary();
        }
        let mut lhs = self.binary(level + 1)?;
        while let Some(op) = self.binop().filter(|op| op.precedence() == level) {
            self.bump();
            let rhs = self.binary(level + 1)?;
            lhs = Expr::bin(op, lhs, rhs);
        }
        Ok(lhs)
    }

    fn primary(&mut self) -> Result<Expr, ParseError> {
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                Ok(Expr::Int(n))
            }
            Tok::Ident(x) => {
                self.bump();
                Ok(Expr::Var(x))
            }
            Tok::Kw("true") => {
                self.bump();
                Ok(Expr::int(1))
            }
            Tok::Kw("false") => {
                self.bump();
                Ok(Expr::int(0))
            }
            Tok::Sym("(") => {
                self.bump();
                let e = self.expr()?;
                self.expect_sym(")")?;
                Ok(e)
            }
            Tok::Sym("-") => {
                self.bump();
                if let Tok::Int(n) = self.peek().clone() {
                    self.bump();
                    Ok(Expr::Int(-n))
                } else {
                    let e = self.primary()?;
                    Ok(Expr::bin(BinOp::Sub, Expr::int(0), e))
                }
            }
            _ => Err(self.unexpected("an expression")),
        }
    }
}

pub fn parse_program(text: &str) -> Result<Stmt, ParseError> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
    };
    let s = p.seq()?;
    if *p.peek() != Tok::Eof {
        return Err(p.unexpected("`;` or end of input"));
    }
    Ok(s)
}

pub fn parse_expr(text: &str) -> Result<Expr, ParseError> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
    };
    let e = p.expr()?;
    if *p.peek() != Tok::Eof {
        return Err(p.unexpected("end of input"));
    }
    Ok(e)
}
