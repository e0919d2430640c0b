//! Pretty-printer producing text that `parse` reads back to the same AST.

use super::syntax::{BinOp, TermExpr, TypeExpr, UnOp};

const SEQ: u8 = 0;
const STMT: u8 = 1;
const CMP: u8 = 2;
const ARITH: u8 = 3;
const MUL: u8 = 4;
const APP: u8 = 5;
const UNARY: u8 = 6;

pub fn print_type(t: &TypeExpr) -> String {
    let mut out = String::new();
    write_type(t, 0, &mut out);
    out
}

// Levels: 0 arrow, 1 product, 2 atom.
fn write_type(t: &TypeExpr, level: u8, out: &mut String) {
    match t {
        TypeExpr::Unit => out.push_str("unit"),
        TypeExpr::Bool => out.push_str("bool"),
        TypeExpr::Nat => out.push_str("nat"),
        TypeExpr::Var(a) => {
            out.push_str("var[");
            write_type(a, 0, out);
            out.push(']');
        }
        TypeExpr::Prod(a, b) => {
            let paren = level > 1;
            if paren {
                out.push('(');
            }
            write_type(a, 1, out);
            out.push_str(" * ");
            write_type(b, 2, out);
            if paren {
                out.push(')');
            }
        }
        TypeExpr::Arrow(a, b) => {
            let paren = level > 0;
            if paren {
                out.push('(');
            }
            write_type(a, 1, out);
            out.push_str(" -> ");
            write_type(b, 0, out);
            if paren {
                out.push(')');
            }
        }
    }
}

pub fn print_term(t: &TermExpr) -> String {
    let mut out = String::new();
    write_term(t, SEQ, true, &mut out);
    out
}

fn level_of(t: &TermExpr) -> u8 {
    match t {
        TermExpr::Seq(..) => SEQ,
        TermExpr::Lam(..)
        | TermExpr::If(..)
        | TermExpr::Let(..)
        | TermExpr::LetPair(..)
        | TermExpr::NewIn(..)
        | TermExpr::While(..)
        | TermExpr::Assign(..) => STMT,
        TermExpr::Bin(BinOp::Eq, ..) => CMP,
        TermExpr::Bin(BinOp::Add | BinOp::Sub, ..) => ARITH,
        TermExpr::Bin(BinOp::Mul, ..) => MUL,
        TermExpr::App(..) | TermExpr::MkVar(..) | TermExpr::Div(..) => APP,
        TermExpr::Unary(..) => UNARY,
        _ => 7,
    }
}

/// Binder forms swallow everything to their right.
fn is_greedy(t: &TermExpr) -> bool {
    matches!(
        t,
        TermExpr::Lam(..)
            | TermExpr::If(..)
            | TermExpr::Let(..)
            | TermExpr::LetPair(..)
            | TermExpr::NewIn(..)
            | TermExpr::While(..)
    )
}

/// `level` is the loosest form allowed unparenthesised here; `tail` says
/// whether nothing of the enclosing term follows on the right.
fn write_term(t: &TermExpr, level: u8, tail: bool, out: &mut String) {
    let paren = level_of(t) < level || (is_greedy(t) && !tail);
    if paren {
        out.push('(');
    }
    let tail = tail || paren;
    match t {
        TermExpr::Var(x) => out.push_str(x),
        TermExpr::Skip => out.push_str("skip"),
        TermExpr::True => out.push_str("true"),
        TermExpr::False => out.push_str("false"),
        TermExpr::Num(n) => out.push_str(&n.to_string()),
        TermExpr::Loc(l) => out.push_str(&format!("@l{l}")),
        TermExpr::Hole => out.push_str("[]"),
        TermExpr::New(ty) => {
            out.push_str("new[");
            write_type(ty, 0, out);
            out.push(']');
        }
        TermExpr::Bot(ty) => {
            out.push_str("bot[");
            write_type(ty, 0, out);
            out.push(']');
        }
        TermExpr::Fix(ty) => {
            out.push_str("fix[");
            write_type(ty, 0, out);
            out.push(']');
        }
        TermExpr::Pair(a, b) => {
            out.push('<');
            write_term(a, SEQ, true, out);
            out.push_str(", ");
            write_term(b, SEQ, true, out);
            out.push('>');
        }
        TermExpr::Seq(a, b) => {
            write_term(a, STMT, false, out);
            out.push_str("; ");
            write_term(b, SEQ, tail, out);
        }
        TermExpr::Lam(x, ty, body) => {
            out.push_str("fun ");
            out.push_str(x);
            out.push_str(": ");
            write_type(ty, 1, out);
            out.push_str(" -> ");
            write_term(body, SEQ, true, out);
        }
        TermExpr::If(c, a, b) => {
            out.push_str("if ");
            write_term(c, SEQ, true, out);
            out.push_str(" then ");
            write_term(a, SEQ, true, out);
            out.push_str(" else ");
            write_term(b, SEQ, true, out);
        }
        TermExpr::Let(x, m, n) => {
            out.push_str("let ");
            out.push_str(x);
            out.push_str(" = ");
            write_term(m, SEQ, true, out);
            out.push_str(" in ");
            write_term(n, SEQ, true, out);
        }
        TermExpr::LetPair(x, y, m, n) => {
            out.push_str(&format!("let ({x}, {y}) = "));
            write_term(m, SEQ, true, out);
            out.push_str(" in ");
            write_term(n, SEQ, true, out);
        }
        TermExpr::NewIn(decls, body) => {
            out.push_str("new ");
            for (i, d) in decls.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                out.push_str(&d.name);
                if let Some(ty) = &d.ty {
                    out.push_str(": ");
                    write_type(ty, 0, out);
                }
                if let Some(init) = &d.init {
                    out.push_str(" := ");
                    write_term(init, STMT, true, out);
                }
            }
            out.push_str(" in ");
            write_term(body, SEQ, true, out);
        }
        TermExpr::While(c, body) => {
            out.push_str("while ");
            write_term(c, SEQ, true, out);
            out.push_str(" do ");
            write_term(body, STMT, true, out);
        }
        TermExpr::Assign(a, b) => {
            write_term(a, CMP, false, out);
            out.push_str(" := ");
            write_term(b, STMT, tail, out);
        }
        TermExpr::Bin(op, a, b) => {
            let (sym, l, r) = match op {
                BinOp::Eq => ("=", ARITH, ARITH),
                BinOp::Add => ("+", ARITH, MUL),
                BinOp::Sub => ("-", ARITH, MUL),
                BinOp::Mul => ("*", MUL, APP),
            };
            write_term(a, l, false, out);
            out.push(' ');
            out.push_str(sym);
            out.push(' ');
            write_term(b, r, false, out);
        }
        TermExpr::App(f, a) => {
            write_term(f, APP, false, out);
            out.push(' ');
            write_term(a, UNARY, false, out);
        }
        TermExpr::MkVar(a, b) | TermExpr::Div(a, b) => {
            out.push_str(if matches!(t, TermExpr::MkVar(..)) { "mkvar " } else { "div " });
            write_term(a, UNARY, false, out);
            out.push(' ');
            write_term(b, UNARY, false, out);
        }
        TermExpr::Unary(op, a) => {
            out.push_str(match op {
                UnOp::Deref => "!",
                UnOp::Fst => "fst ",
                UnOp::Snd => "snd ",
                UnOp::Not => "not ",
                UnOp::Succ => "succ ",
                UnOp::Pred => "pred ",
                UnOp::IsZero => "iszero ",
            });
            write_term(a, UNARY, false, out);
        }
    }
    if paren {
        out.push(')');
    }
}
