//! Elaboration of surface constructs into the core calculus.
//!
//! The output contains only variables, abstraction, application, pairs and
//! projections, constants, `if`, `new[A]`, `:=`, `!`, `mkvar` and the nat
//! primitives. Binder types are recovered by typechecking, so the input must
//! be well typed.

use super::syntax::{NewDecl, TermExpr, TypeExpr, UnOp};
use super::typing::{decl_type, type_of, TypeError, TypingContext};
use std::collections::BTreeSet;

pub fn desugar(m: &TermExpr) -> Result<TermExpr, TypeError> {
    desugar_in(&TypingContext::new(super::syntax::Lang::Lnat), m)
}

pub fn desugar_in(ctx: &TypingContext, m: &TermExpr) -> Result<TermExpr, TypeError> {
    if !m.has_sugar() {
        return Ok(m.clone());
    }
    let mut used = BTreeSet::new();
    m.walk(&mut |t| collect_names(t, &mut used));
    for (x, _) in ctx.bindings() {
        used.insert(x.clone());
    }
    let mut d = Desugarer { ctx: ctx.clone(), used, counter: 0 };
    d.ctx.lang = super::syntax::Lang::Lnat;
    d.go(m)
}

fn collect_names(t: &TermExpr, used: &mut BTreeSet<String>) {
    match t {
        TermExpr::Var(x) | TermExpr::Lam(x, ..) | TermExpr::Let(x, ..) => {
            used.insert(x.clone());
        }
        TermExpr::LetPair(x, y, ..) => {
            used.insert(x.clone());
            used.insert(y.clone());
        }
        TermExpr::NewIn(decls, _) => {
            for d in decls {
                used.insert(d.name.clone());
            }
        }
        _ => {}
    }
}

struct Desugarer {
    ctx: TypingContext,
    used: BTreeSet<String>,
    counter: usize,
}

/// `λ_:unit. b` applied to `a`, i.e. `a; b`.
fn seq_core(dummy: &str, a: TermExpr, b: TermExpr) -> TermExpr {
    TermExpr::app(TermExpr::lam(dummy, TypeExpr::Unit, b), a)
}

/// The reference-based fixed point at `A -> B`:
/// `λf. new y: A -> B in y := λa. f !y a; !y`.
pub fn fix_core(t: &TypeExpr) -> TermExpr {
    let (a, _) = match t {
        TypeExpr::Arrow(a, b) => (a.as_ref().clone(), b.as_ref().clone()),
        _ => unreachable!("fixed points are typechecked at arrow types"),
    };
    let y = TermExpr::var("y");
    let body = seq_core(
        "d",
        TermExpr::assign(
            y.clone(),
            TermExpr::lam(
                "a",
                a,
                TermExpr::app(
                    TermExpr::app(TermExpr::var("f"), TermExpr::deref(y.clone())),
                    TermExpr::var("a"),
                ),
            ),
        ),
        TermExpr::deref(y),
    );
    TermExpr::lam(
        "f",
        TypeExpr::arrow(t.clone(), t.clone()),
        TermExpr::app(TermExpr::lam("y", TypeExpr::var(t.clone()), body), TermExpr::New(t.clone())),
    )
}

/// A closed divergent term of type `t`. At function types the result is a
/// value that loops once applied.
pub fn bot_core(t: &TypeExpr) -> TermExpr {
    match t {
        TypeExpr::Arrow(..) => {
            TermExpr::app(fix_core(t), TermExpr::lam("f", t.clone(), TermExpr::var("f")))
        }
        other => {
            let thunk = TypeExpr::arrow(TypeExpr::Unit, other.clone());
            TermExpr::app(
                TermExpr::app(fix_core(&thunk), TermExpr::lam("f", thunk, TermExpr::var("f"))),
                TermExpr::Skip,
            )
        }
    }
}

impl Desugarer {
    fn fresh(&mut self, base: &str) -> String {
        loop {
            let name = format!("_{base}{}", self.counter);
            self.counter += 1;
            if self.used.insert(name.clone()) {
                return name;
            }
        }
    }

    fn ty(&mut self, m: &TermExpr) -> Result<TypeExpr, TypeError> {
        type_of(&mut self.ctx, m)
    }

    fn under<T>(
        &mut self,
        x: &str,
        t: TypeExpr,
        f: impl FnOnce(&mut Self) -> Result<T, TypeError>,
    ) -> Result<T, TypeError> {
        self.ctx.push(x, t);
        let r = f(self);
        self.ctx.pop();
        r
    }

    fn go(&mut self, m: &TermExpr) -> Result<TermExpr, TypeError> {
        if !m.has_sugar() {
            return Ok(m.clone());
        }
        let b = |d: &mut Self, t: &TermExpr| d.go(t).map(Box::new);
        Ok(match m {
            TermExpr::Lam(x, t, body) => {
                let body = self.under(x, t.clone(), |d| d.go(body))?;
                TermExpr::lam(x, t.clone(), body)
            }
            TermExpr::App(f, a) => TermExpr::App(b(self, f)?, b(self, a)?),
            TermExpr::Pair(f, a) => TermExpr::Pair(b(self, f)?, b(self, a)?),
            TermExpr::Unary(UnOp::Not, a) => {
                TermExpr::ite(self.go(a)?, TermExpr::False, TermExpr::True)
            }
            TermExpr::Unary(op, a) => TermExpr::Unary(*op, b(self, a)?),
            TermExpr::If(c, x, y) => TermExpr::If(b(self, c)?, b(self, x)?, b(self, y)?),
            TermExpr::Assign(x, y) => TermExpr::Assign(b(self, x)?, b(self, y)?),
            TermExpr::MkVar(x, y) => TermExpr::MkVar(b(self, x)?, b(self, y)?),
            TermExpr::Bin(op, x, y) => TermExpr::Bin(*op, b(self, x)?, b(self, y)?),
            TermExpr::Div(x, y) => TermExpr::Div(b(self, x)?, b(self, y)?),
            TermExpr::Seq(x, y) => {
                let d = self.fresh("d");
                seq_core(&d, self.go(x)?, self.go(y)?)
            }
            TermExpr::Let(x, a, body) => {
                let ta = self.ty(a)?;
                let a = self.go(a)?;
                let body = self.under(x, ta.clone(), |d| d.go(body))?;
                TermExpr::app(TermExpr::lam(x, ta, body), a)
            }
            TermExpr::LetPair(x, y, a, body) => {
                let ta = self.ty(a)?;
                let (l, r) = match &ta {
                    TypeExpr::Prod(l, r) => (l.as_ref().clone(), r.as_ref().clone()),
                    _ => unreachable!("typechecked"),
                };
                let a = self.go(a)?;
                self.ctx.push(x, l.clone());
                self.ctx.push(y, r.clone());
                let body = self.go(body);
                self.ctx.pop();
                self.ctx.pop();
                let p = self.fresh("p");
                let inner = TermExpr::app(
                    TermExpr::lam(
                        x,
                        l,
                        TermExpr::app(TermExpr::lam(y, r, body?), TermExpr::snd(TermExpr::var(&p))),
                    ),
                    TermExpr::fst(TermExpr::var(&p)),
                );
                TermExpr::app(TermExpr::lam(&p, ta, inner), a)
            }
            TermExpr::NewIn(decls, body) => self.new_in(m, decls, body)?,
            TermExpr::While(c, body) => {
                let c = self.go(c)?;
                let body = self.go(body)?;
                let w = self.fresh("w");
                let u = self.fresh("u");
                let d = self.fresh("d");
                let step = TypeExpr::arrow(TypeExpr::Unit, TypeExpr::Unit);
                let loop_body = TermExpr::ite(
                    c,
                    seq_core(&d, body, TermExpr::app(TermExpr::var(&w), TermExpr::Skip)),
                    TermExpr::Skip,
                );
                let functional =
                    TermExpr::lam(&w, step.clone(), TermExpr::lam(&u, TypeExpr::Unit, loop_body));
                TermExpr::app(TermExpr::app(fix_core(&step), functional), TermExpr::Skip)
            }
            TermExpr::Fix(t) => fix_core(t),
            TermExpr::Bot(t) => bot_core(t),
            TermExpr::Var(_)
            | TermExpr::Skip
            | TermExpr::True
            | TermExpr::False
            | TermExpr::New(_)
            | TermExpr::Loc(_)
            | TermExpr::Num(_)
            | TermExpr::Hole => m.clone(),
        })
    }

    /// `new x: A := M in N` becomes `(λv:A. (λx:var[A]. x := v; N) new[A]) M`,
    /// so `M` is evaluated outside the scope of `x`.
    fn new_in(
        &mut self,
        whole: &TermExpr,
        decls: &[NewDecl],
        body: &TermExpr,
    ) -> Result<TermExpr, TypeError> {
        let Some((first, rest)) = decls.split_first() else {
            return self.go(body);
        };
        let t = decl_type(&mut self.ctx, whole, first)?;
        let init = match &first.init {
            Some(i) => Some(self.go(i)?),
            None => None,
        };
        let inner = self.under(&first.name, TypeExpr::var(t.clone()), |d| d.new_in(whole, rest, body))?;
        let x = &first.name;
        Ok(match init {
            None => TermExpr::app(TermExpr::lam(x, TypeExpr::var(t.clone()), inner), TermExpr::New(t)),
            Some(init) => {
                let v = self.fresh("v");
                let d = self.fresh("d");
                let cell = TermExpr::app(
                    TermExpr::lam(
                        x,
                        TypeExpr::var(t.clone()),
                        seq_core(&d, TermExpr::assign(TermExpr::var(x), TermExpr::var(&v)), inner),
                    ),
                    TermExpr::New(t.clone()),
                );
                TermExpr::app(TermExpr::lam(&v, t, cell), init)
            }
        })
    }
}
