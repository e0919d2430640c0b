use super::syntax::{BinOp, Lang, TermExpr, TypeExpr, UnOp};
use std::collections::BTreeMap;
use thiserror::Error;

/// Variables in binding order (later entries shadow earlier ones), the content
/// types of runtime locations (a location of content `A` has type `var[A]`),
/// the language mode, and the expected type of a hole.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TypingContext {
    pub lang: Lang,
    vars: Vec<(String, TypeExpr)>,
    pub locations: BTreeMap<usize, TypeExpr>,
    pub hole: Option<TypeExpr>,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum TypeError {
    #[error("unbound variable `{0}`")]
    Unbound(String),
    #[error("in `{term}`: expected {expected}, found {found}")]
    Mismatch { term: String, expected: String, found: TypeExpr },
    #[error("in `{term}`: {what} is only available in nat mode")]
    NatInL2 { term: String, what: String },
    #[error("`{0}` is a runtime location and cannot appear here")]
    UnknownLocation(String),
    #[error("a hole `[]` appears but no hole type was given")]
    UntypedHole,
    #[error("in `{term}`: {message}")]
    Other { term: String, message: String },
    #[error("variable `{0}` is bound twice at the same level")]
    Duplicate(String),
}

impl TypingContext {
    pub fn new(lang: Lang) -> Self {
        TypingContext { lang, ..Default::default() }
    }

    /// Builds a top-level context; names must be distinct.
    pub fn from_bindings(
        lang: Lang,
        bindings: impl IntoIterator<Item = (String, TypeExpr)>,
    ) -> Result<Self, TypeError> {
        let mut ctx = TypingContext::new(lang);
        for (x, t) in bindings {
            if ctx.vars.iter().any(|(y, _)| *y == x) {
                return Err(TypeError::Duplicate(x));
            }
            ctx.vars.push((x, t));
        }
        Ok(ctx)
    }

    pub fn with_hole(mut self, ty: TypeExpr) -> Self {
        self.hole = Some(ty);
        self
    }

    /// Adds a binding in an inner scope, shadowing any earlier one.
    pub fn push(&mut self, x: &str, t: TypeExpr) {
        self.vars.push((x.to_string(), t));
    }

    pub fn pop(&mut self) {
        self.vars.pop();
    }

    pub fn lookup(&self, x: &str) -> Option<&TypeExpr> {
        self.vars.iter().rev().find(|(y, _)| y == x).map(|(_, t)| t)
    }

    pub fn bindings(&self) -> &[(String, TypeExpr)] {
        &self.vars
    }
}

fn mismatch(term: &TermExpr, expected: impl Into<String>, found: TypeExpr) -> TypeError {
    TypeError::Mismatch { term: term.to_string(), expected: expected.into(), found }
}

fn nat_only(ctx: &TypingContext, term: &TermExpr, what: &str) -> Result<(), TypeError> {
    match ctx.lang {
        Lang::Lnat => Ok(()),
        Lang::L2 => Err(TypeError::NatInL2 { term: term.to_string(), what: what.to_string() }),
    }
}

fn check_type(ctx: &TypingContext, term: &TermExpr, t: &TypeExpr) -> Result<(), TypeError> {
    if t.mentions_nat() {
        nat_only(ctx, term, "the type nat")?;
    }
    Ok(())
}

fn expect(term: &TermExpr, got: TypeExpr, want: &TypeExpr) -> Result<(), TypeError> {
    if got == *want {
        Ok(())
    } else {
        Err(mismatch(term, want.to_string(), got))
    }
}

fn var_content(term: &TermExpr, t: TypeExpr) -> Result<TypeExpr, TypeError> {
    match t {
        TypeExpr::Var(a) => Ok(*a),
        other => Err(mismatch(term, "a variable type var[_]", other)),
    }
}

pub fn typecheck(ctx: &TypingContext, m: &TermExpr) -> Result<TypeExpr, TypeError> {
    let mut ctx = ctx.clone();
    type_of(&mut ctx, m)
}

pub(crate) fn type_of(ctx: &mut TypingContext, m: &TermExpr) -> Result<TypeExpr, TypeError> {
    use TypeExpr as T;
    Ok(match m {
        TermExpr::Var(x) => ctx.lookup(x).cloned().ok_or_else(|| TypeError::Unbound(x.clone()))?,
        TermExpr::Lam(x, a, body) => {
            check_type(ctx, m, a)?;
            ctx.push(x, a.clone());
            let b = type_of(ctx, body);
            ctx.pop();
            T::arrow(a.clone(), b?)
        }
        TermExpr::App(f, a) => match type_of(ctx, f)? {
            T::Arrow(dom, cod) => {
                let ta = type_of(ctx, a)?;
                expect(a, ta, &dom)?;
                *cod
            }
            other => return Err(mismatch(f, "a function type", other)),
        },
        TermExpr::Pair(a, b) => T::prod(type_of(ctx, a)?, type_of(ctx, b)?),
        TermExpr::Unary(op, a) => {
            let ta = type_of(ctx, a)?;
            match op {
                UnOp::Fst | UnOp::Snd => match ta {
                    T::Prod(l, r) => {
                        if *op == UnOp::Fst {
                            *l
                        } else {
                            *r
                        }
                    }
                    other => return Err(mismatch(a, "a product type", other)),
                },
                UnOp::Deref => var_content(a, ta)?,
                UnOp::Not => {
                    expect(a, ta, &T::Bool)?;
                    T::Bool
                }
                UnOp::Succ | UnOp::Pred | UnOp::IsZero => {
                    nat_only(ctx, m, "arithmetic")?;
                    expect(a, ta, &T::Nat)?;
                    if *op == UnOp::IsZero {
                        T::Bool
                    } else {
                        T::Nat
                    }
                }
            }
        }
        TermExpr::Skip => T::Unit,
        TermExpr::True | TermExpr::False => T::Bool,
        TermExpr::If(c, a, b) => {
            let tc = type_of(ctx, c)?;
            expect(c, tc, &T::Bool)?;
            let ta = type_of(ctx, a)?;
            let tb = type_of(ctx, b)?;
            if ta != tb {
                return Err(mismatch(b, ta.to_string(), tb));
            }
            ta
        }
        TermExpr::New(a) => {
            check_type(ctx, m, a)?;
            T::var(a.clone())
        }
        TermExpr::Assign(x, v) => {
            let content = var_content(x, type_of(ctx, x)?)?;
            let tv = type_of(ctx, v)?;
            expect(v, tv, &content)?;
            T::Unit
        }
        TermExpr::MkVar(w, r) => {
            let tw = type_of(ctx, w)?;
            let tr = type_of(ctx, r)?;
            let a = match tw {
                T::Arrow(a, u) if *u == T::Unit => *a,
                other => return Err(mismatch(w, "a write method A -> unit", other)),
            };
            expect(r, tr, &T::arrow(T::Unit, a.clone()))?;
            T::var(a)
        }
        TermExpr::Loc(l) => T::var(
            ctx.locations
                .get(l)
                .cloned()
                .ok_or_else(|| TypeError::UnknownLocation(m.to_string()))?,
        ),
        TermExpr::Num(_) => {
            nat_only(ctx, m, "numerals")?;
            T::Nat
        }
        TermExpr::Bin(op, a, b) => {
            nat_only(ctx, m, "arithmetic")?;
            let ta = type_of(ctx, a)?;
            expect(a, ta, &T::Nat)?;
            let tb = type_of(ctx, b)?;
            expect(b, tb, &T::Nat)?;
            if *op == BinOp::Eq {
                T::Bool
            } else {
                T::Nat
            }
        }
        TermExpr::Div(a, b) => {
            nat_only(ctx, m, "arithmetic")?;
            let ta = type_of(ctx, a)?;
            expect(a, ta, &T::Nat)?;
            let tb = type_of(ctx, b)?;
            expect(b, tb, &T::Nat)?;
            T::prod(T::Nat, T::Nat)
        }
        TermExpr::Seq(a, b) => {
            let ta = type_of(ctx, a)?;
            expect(a, ta, &T::Unit)?;
            type_of(ctx, b)?
        }
        TermExpr::NewIn(decls, body) => {
            let mut pushed = 0;
            let result = (|| {
                for d in decls {
                    let t = decl_type(ctx, m, d)?;
                    ctx.push(&d.name, T::var(t));
                    pushed += 1;
                }
                type_of(ctx, body)
            })();
            for _ in 0..pushed {
                ctx.pop();
            }
            result?
        }
        TermExpr::Let(x, a, b) => {
            let ta = type_of(ctx, a)?;
            ctx.push(x, ta);
            let tb = type_of(ctx, b);
            ctx.pop();
            tb?
        }
        TermExpr::LetPair(x, y, a, b) => match type_of(ctx, a)? {
            T::Prod(l, r) => {
                ctx.push(x, *l);
                ctx.push(y, *r);
                let tb = type_of(ctx, b);
                ctx.pop();
                ctx.pop();
                tb?
            }
            other => return Err(mismatch(a, "a product type", other)),
        },
        TermExpr::While(c, b) => {
            let tc = type_of(ctx, c)?;
            expect(c, tc, &T::Bool)?;
            let tb = type_of(ctx, b)?;
            expect(b, tb, &T::Unit)?;
            T::Unit
        }
        TermExpr::Fix(t) => {
            check_type(ctx, m, t)?;
            if !matches!(t, T::Arrow(..)) {
                return Err(TypeError::Other {
                    term: m.to_string(),
                    message: "fixed points exist only at function types".into(),
                });
            }
            T::arrow(T::arrow(t.clone(), t.clone()), t.clone())
        }
        TermExpr::Bot(t) => {
            check_type(ctx, m, t)?;
            t.clone()
        }
        TermExpr::Hole => ctx.hole.clone().ok_or(TypeError::UntypedHole)?,
    })
}

/// The content type of one `new` declaration; annotation and initialiser
/// must agree when both are present.
pub(crate) fn decl_type(
    ctx: &mut TypingContext,
    whole: &TermExpr,
    d: &super::syntax::NewDecl,
) -> Result<TypeExpr, TypeError> {
    if let Some(t) = &d.ty {
        check_type(ctx, whole, t)?;
    }
    match (&d.ty, &d.init) {
        (Some(t), Some(init)) => {
            let ti = type_of(ctx, init)?;
            expect(init, ti, t)?;
            Ok(t.clone())
        }
        (Some(t), None) => Ok(t.clone()),
        (None, Some(init)) => type_of(ctx, init),
        (None, None) => Err(TypeError::Other {
            term: whole.to_string(),
            message: format!("declaration of `{}` has neither type nor initialiser", d.name),
        }),
    }
}
