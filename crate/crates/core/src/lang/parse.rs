//! Recursive-descent parser for the concrete syntax.
//!
//! Types: `unit | bool | nat | var[T] | T * T | T -> T | (T)`, with `*`
//! binding tighter than `->`, `*` left-associative and `->`
//! right-associative.
//!
//! Terms, loosest first: `M; N` (right-assoc) < binders and `M := N` < `=` <
//! `+ -` < `*` < application < prefix operators < atoms. The binder forms
//! (`fun`, `if`, `let`, `new x`) extend as far to the right as possible; a
//! `while` body is a single statement, so `while c do a; b` runs `b` once.

use super::syntax::{BinOp, NewDecl, TermExpr, TypeExpr, UnOp};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at {line}:{column}: {message}")]
pub struct ParseError {
    pub offset: usize,
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Num(u64),
    LParen,
    RParen,
    LAngle,
    RAngle,
    LBracket,
    RBracket,
    Comma,
    Colon,
    Arrow,
    Assign,
    Bang,
    Semi,
    Star,
    Plus,
    Minus,
    Equals,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Num(n) => format!("`{n}`"),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LAngle => "`<`".into(),
            Tok::RAngle => "`>`".into(),
            Tok::LBracket => "`[`".into(),
            Tok::RBracket => "`]`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::Assign => "`:=`".into(),
            Tok::Bang => "`!`".into(),
            Tok::Semi => "`;`".into(),
            Tok::Star => "`*`".into(),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Equals => "`=`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

const KEYWORDS: &[&str] = &[
    "fun", "if", "then", "else", "let", "in", "new", "mkvar", "fst", "snd", "skip", "true", "false",
    "not", "while", "do", "succ", "pred", "iszero", "div", "bot", "fix", "unit", "bool", "nat",
    "var",
];

pub fn is_keyword(s: &str) -> bool {
    KEYWORDS.contains(&s)
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        // Line comments.
        if c == b'-' && bytes.get(i + 1) == Some(&b'-') {
            while i < bytes.len() && bytes[i] != b'\n' {
                i += 1;
            }
            continue;
        }
        let start = i;
        let tok = match c {
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'<' => Tok::LAngle,
            b'>' => Tok::RAngle,
            b'[' => Tok::LBracket,
            b']' => Tok::RBracket,
            b',' => Tok::Comma,
            b'!' => Tok::Bang,
            b';' => Tok::Semi,
            b'*' => Tok::Star,
            b'+' => Tok::Plus,
            b'=' => Tok::Equals,
            b':' => {
                if bytes.get(i + 1) == Some(&b'=') {
                    i += 1;
                    Tok::Assign
                } else {
                    Tok::Colon
                }
            }
            b'-' => {
                if bytes.get(i + 1) == Some(&b'>') {
                    i += 1;
                    Tok::Arrow
                } else {
                    Tok::Minus
                }
            }
            b'0'..=b'9' => {
                let mut j = i;
                while j < bytes.len() && bytes[j].is_ascii_digit() {
                    j += 1;
                }
                let text = &src[i..j];
                let n = text.parse::<u64>().map_err(|_| error_at(src, i, "numeral out of range"))?;
                i = j - 1;
                Tok::Num(n)
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                let mut j = i;
                while j < bytes.len()
                    && (bytes[j].is_ascii_alphanumeric() || bytes[j] == b'_' || bytes[j] == b'\'')
                {
                    j += 1;
                }
                let text = src[i..j].to_string();
                i = j - 1;
                Tok::Ident(text)
            }
            _ => {
                let ch = src[i..].chars().next().unwrap_or('?');
                return Err(error_at(src, i, &format!("unexpected character `{ch}`")));
            }
        };
        out.push((tok, start));
        i += 1;
    }
    out.push((Tok::Eof, src.len()));
    Ok(out)
}

fn error_at(src: &str, offset: usize, message: &str) -> ParseError {
    let before = &src[..offset.min(src.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    ParseError { offset, line, column, message: message.to_string() }
}

struct Parser<'a> {
    src: &'a str,
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Result<Self, ParseError> {
        Ok(Parser { src, toks: lex(src)?, pos: 0 })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn fail<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(error_at(self.src, self.toks[self.pos].1, &message.into()))
    }

    fn expect(&mut self, tok: Tok) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            self.fail(format!("expected {}, found {}", tok.describe(), self.peek().describe()))
        }
    }

    fn is_kw(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn expect_kw(&mut self, kw: &str) -> Result<(), ParseError> {
        if self.is_kw(kw) {
            self.bump();
            Ok(())
        } else {
            self.fail(format!("expected `{kw}`, found {}", self.peek().describe()))
        }
    }

    fn ident(&mut self) -> Result<String, ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) if !is_keyword(&s) => {
                self.bump();
                Ok(s)
            }
            other => self.fail(format!("expected an identifier, found {}", other.describe())),
        }
    }

    fn finish(&self) -> Result<(), ParseError> {
        if *self.peek() == Tok::Eof {
            Ok(())
        } else {
            self.fail(format!("unexpected {} after end of expression", self.peek().describe()))
        }
    }

    // ---- types ----

    fn ty(&mut self) -> Result<TypeExpr, ParseError> {
        let lhs = self.ty_prod()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let rhs = self.ty()?;
            Ok(TypeExpr::arrow(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn ty_prod(&mut self) -> Result<TypeExpr, ParseError> {
        let mut acc = self.ty_atom()?;
        while *self.peek() == Tok::Star {
            self.bump();
            let rhs = self.ty_atom()?;
            acc = TypeExpr::prod(acc, rhs);
        }
        Ok(acc)
    }

    fn ty_atom(&mut self) -> Result<TypeExpr, ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) if s == "unit" => {
                self.bump();
                Ok(TypeExpr::Unit)
            }
            Tok::Ident(s) if s == "bool" => {
                self.bump();
                Ok(TypeExpr::Bool)
            }
            Tok::Ident(s) if s == "nat" => {
                self.bump();
                Ok(TypeExpr::Nat)
            }
            Tok::Ident(s) if s == "var" => {
                self.bump();
                self.expect(Tok::LBracket)?;
                let inner = self.ty()?;
                self.expect(Tok::RBracket)?;
                Ok(TypeExpr::var(inner))
            }
            Tok::LParen => {
                self.bump();
                let inner = self.ty()?;
                self.expect(Tok::RParen)?;
                Ok(inner)
            }
            other => self.fail(format!("expected a type, found {}", other.describe())),
        }
    }

    fn bracketed_type(&mut self) -> Result<TypeExpr, ParseError> {
        self.expect(Tok::LBracket)?;
        let t = self.ty()?;
        self.expect(Tok::RBracket)?;
        Ok(t)
    }

    // ---- terms ----

    fn term(&mut self) -> Result<TermExpr, ParseError> {
        let first = self.stmt()?;
        if *self.peek() == Tok::Semi {
            self.bump();
            let rest = self.term()?;
            Ok(TermExpr::seq(first, rest))
        } else {
            Ok(first)
        }
    }

    fn binder(&mut self) -> Result<String, ParseError> {
        if matches!(self.peek(), Tok::Ident(s) if s == "_") {
            self.bump();
            return Ok("_".to_string());
        }
        self.ident()
    }

    fn stmt(&mut self) -> Result<TermExpr, ParseError> {
        if self.is_kw("fun") {
            self.bump();
            let x = self.binder()?;
            self.expect(Tok::Colon)?;
            // Arrow types in binders must be parenthesised.
            let ty = self.ty_prod()?;
            self.expect(Tok::Arrow)?;
            let body = self.term()?;
            return Ok(TermExpr::Lam(x, ty, Box::new(body)));
        }
        if self.is_kw("if") {
            self.bump();
            let c = self.term()?;
            self.expect_kw("then")?;
            let t = self.term()?;
            self.expect_kw("else")?;
            let e = self.term()?;
            return Ok(TermExpr::ite(c, t, e));
        }
        if self.is_kw("let") {
            self.bump();
            if *self.peek() == Tok::LParen {
                self.bump();
                let x = self.binder()?;
                self.expect(Tok::Comma)?;
                let y = self.binder()?;
                self.expect(Tok::RParen)?;
                self.expect(Tok::Equals)?;
                let m = self.term()?;
                self.expect_kw("in")?;
                let n = self.term()?;
                return Ok(TermExpr::LetPair(x, y, Box::new(m), Box::new(n)));
            }
            let x = self.binder()?;
            self.expect(Tok::Equals)?;
            let m = self.term()?;
            self.expect_kw("in")?;
            let n = self.term()?;
            return Ok(TermExpr::Let(x, Box::new(m), Box::new(n)));
        }
        if self.is_kw("new") && *self.peek_at(1) != Tok::LBracket {
            self.bump();
            let mut decls = Vec::new();
            loop {
                let name = self.ident()?;
                let ty = if *self.peek() == Tok::Colon {
                    self.bump();
                    Some(self.ty()?)
                } else {
                    None
                };
                let init = if *self.peek() == Tok::Assign {
                    self.bump();
                    Some(self.stmt()?)
                } else {
                    None
                };
                if ty.is_none() && init.is_none() {
                    return self.fail("a declaration needs a type annotation or an initialiser");
                }
                decls.push(NewDecl { name, ty, init });
                if *self.peek() == Tok::Comma {
                    self.bump();
                } else {
                    break;
                }
            }
            self.expect_kw("in")?;
            let body = self.term()?;
            return Ok(TermExpr::NewIn(decls, Box::new(body)));
        }
        if self.is_kw("while") {
            self.bump();
            let c = self.term()?;
            self.expect_kw("do")?;
            let body = self.stmt()?;
            return Ok(TermExpr::While(Box::new(c), Box::new(body)));
        }
        let lhs = self.cmp()?;
        if *self.peek() == Tok::Assign {
            self.bump();
            let rhs = self.stmt()?;
            return Ok(TermExpr::assign(lhs, rhs));
        }
        Ok(lhs)
    }

    fn cmp(&mut self) -> Result<TermExpr, ParseError> {
        let lhs = self.arith()?;
        if *self.peek() == Tok::Equals {
            self.bump();
            let rhs = self.arith()?;
            return Ok(TermExpr::bin(BinOp::Eq, lhs, rhs));
        }
        Ok(lhs)
    }

    fn arith(&mut self) -> Result<TermExpr, ParseError> {
        let mut acc = self.mul()?;
        loop {
            let op = match self.peek() {
                Tok::Plus => BinOp::Add,
                Tok::Minus => BinOp::Sub,
                _ => break,
            };
            self.bump();
            let rhs = self.mul()?;
            acc = TermExpr::bin(op, acc, rhs);
        }
        Ok(acc)
    }

    fn mul(&mut self) -> Result<TermExpr, ParseError> {
        let mut acc = self.app()?;
        while *self.peek() == Tok::Star {
            self.bump();
            let rhs = self.app()?;
            acc = TermExpr::bin(BinOp::Mul, acc, rhs);
        }
        Ok(acc)
    }

    fn starts_unary(&self) -> bool {
        match self.peek() {
            Tok::Ident(s) => {
                !is_keyword(s)
                    || matches!(
                        s.as_str(),
                        "skip"
                            | "true"
                            | "false"
                            | "fst"
                            | "snd"
                            | "not"
                            | "succ"
                            | "pred"
                            | "iszero"
                            | "bot"
                            | "fix"
                    )
                    || (s == "new" && *self.peek_at(1) == Tok::LBracket)
            }
            Tok::Num(_) | Tok::LParen | Tok::LAngle | Tok::Bang => true,
            Tok::LBracket => *self.peek_at(1) == Tok::RBracket,
            _ => false,
        }
    }

    fn app(&mut self) -> Result<TermExpr, ParseError> {
        let mut acc = if self.is_kw("mkvar") {
            self.bump();
            let a = self.unary()?;
            let b = self.unary()?;
            TermExpr::mkvar(a, b)
        } else if self.is_kw("div") {
            self.bump();
            let a = self.unary()?;
            let b = self.unary()?;
            TermExpr::Div(Box::new(a), Box::new(b))
        } else {
            self.unary()?
        };
        while self.starts_unary() {
            let arg = self.unary()?;
            acc = TermExpr::app(acc, arg);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<TermExpr, ParseError> {
        let op = match self.peek() {
            Tok::Bang => Some(UnOp::Deref),
            Tok::Ident(s) => match s.as_str() {
                "fst" => Some(UnOp::Fst),
                "snd" => Some(UnOp::Snd),
                "not" => Some(UnOp::Not),
                "succ" => Some(UnOp::Succ),
                "pred" => Some(UnOp::Pred),
                "iszero" => Some(UnOp::IsZero),
                _ => None,
            },
            _ => None,
        };
        if let Some(op) = op {
            self.bump();
            let inner = self.unary()?;
            return Ok(TermExpr::Unary(op, Box::new(inner)));
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<TermExpr, ParseError> {
        match self.peek().clone() {
            Tok::Num(n) => {
                self.bump();
                Ok(TermExpr::Num(n))
            }
            Tok::LParen => {
                self.bump();
                if *self.peek() == Tok::RParen {
                    self.bump();
                    return Ok(TermExpr::Skip);
                }
                let t = self.term()?;
                self.expect(Tok::RParen)?;
                Ok(t)
            }
            Tok::LAngle => {
                self.bump();
                let a = self.term()?;
                self.expect(Tok::Comma)?;
                let b = self.term()?;
                self.expect(Tok::RAngle)?;
                Ok(TermExpr::pair(a, b))
            }
            Tok::LBracket => {
                self.bump();
                self.expect(Tok::RBracket)?;
                Ok(TermExpr::Hole)
            }
            Tok::Ident(s) => match s.as_str() {
                "skip" => {
                    self.bump();
                    Ok(TermExpr::Skip)
                }
                "true" => {
                    self.bump();
                    Ok(TermExpr::True)
                }
                "false" => {
                    self.bump();
                    Ok(TermExpr::False)
                }
                "new" => {
                    self.bump();
                    Ok(TermExpr::New(self.bracketed_type()?))
                }
                "bot" => {
                    self.bump();
                    Ok(TermExpr::Bot(self.bracketed_type()?))
                }
                "fix" => {
                    self.bump();
                    Ok(TermExpr::Fix(self.bracketed_type()?))
                }
                _ if is_keyword(&s) => self.fail(format!("unexpected keyword `{s}`")),
                _ => {
                    self.bump();
                    Ok(TermExpr::Var(s))
                }
            },
            other => self.fail(format!("expected a term, found {}", other.describe())),
        }
    }
}

pub fn parse_type(text: &str) -> Result<TypeExpr, ParseError> {
    let mut p = Parser::new(text)?;
    let t = p.ty()?;
    p.finish()?;
    Ok(t)
}

/// Parses a term, sugar left in place. Holes `[]` are accepted so that the
/// same grammar serves context templates.
pub fn parse_term(text: &str) -> Result<TermExpr, ParseError> {
    let mut p = Parser::new(text)?;
    let t = p.term()?;
    p.finish()?;
    Ok(t)
}
