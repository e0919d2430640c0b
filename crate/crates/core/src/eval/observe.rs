//! Refuting contextual equivalence by testing.
//!
//! A context template is a term with holes `[]` of a known type. Two terms
//! are compared by plugging them into each template and running both
//! programs. A template on which exactly one of them converges refutes the
//! equivalence. When both converge at a ground type with different values,
//! the template is strengthened with an equality test so that the returned
//! witness again separates convergence from divergence.

use super::machine::{eval, Configuration, EvalError, Outcome};
use crate::lang::{parse_term, parse_type, typecheck, BinOp, Lang, TermExpr, TypeExpr, TypingContext};
use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ContextTemplate {
    pub hole: TypeExpr,
    pub term: TermExpr,
}

impl ContextTemplate {
    pub fn new(hole: TypeExpr, term: TermExpr) -> Self {
        ContextTemplate { hole, term }
    }

    pub fn plug(&self, m: &TermExpr) -> TermExpr {
        self.term.plug(m)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Consistent { tested: usize },
    /// `context` makes the left term converge and the right one not, or the
    /// other way round as recorded by `left_converges`.
    Witness { context: TermExpr, left_converges: bool },
}

impl Verdict {
    pub fn is_consistent(&self) -> bool {
        matches!(self, Verdict::Consistent { .. })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ObsError {
    #[error("context `{context}` is ill-typed for this hole: {reason}")]
    IllTypedContext { context: String, reason: String },
    #[error("the two plugged programs have different types ({0} vs {1})")]
    TypeMismatch(TypeExpr, TypeExpr),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// Runs every template on `m` and `n` and reports the first separating one.
pub fn observational_test(
    m: &TermExpr,
    n: &TermExpr,
    contexts: &[ContextTemplate],
    fuel: u64,
) -> Result<Verdict, ObsError> {
    for c in contexts {
        let (cm, cn) = (c.plug(m), c.plug(n));
        let tm = closed_type(&c.term, &cm)?;
        let tn = closed_type(&c.term, &cn)?;
        if tm != tn {
            return Err(ObsError::TypeMismatch(tm, tn));
        }
        let om = eval(&Configuration::new(), &cm, fuel)?;
        let on = eval(&Configuration::new(), &cn, fuel)?;
        if om.converged() != on.converged() {
            return Ok(Verdict::Witness { context: c.term.clone(), left_converges: om.converged() });
        }
        if let (Outcome::Value { value: vm, .. }, Outcome::Value { value: vn, .. }) = (&om, &on) {
            if tm.is_ground() && vm != vn {
                let context = observe_equal(&tm, vm, &c.term);
                return Ok(Verdict::Witness { context, left_converges: true });
            }
        }
    }
    Ok(Verdict::Consistent { tested: contexts.len() })
}

fn closed_type(context: &TermExpr, plugged: &TermExpr) -> Result<TypeExpr, ObsError> {
    typecheck(&TypingContext::new(Lang::Lnat), plugged).map_err(|e| ObsError::IllTypedContext {
        context: context.to_string(),
        reason: e.to_string(),
    })
}

fn diverge() -> TermExpr {
    TermExpr::Bot(TypeExpr::Unit)
}

/// A unit-typed term that converges iff `subject` evaluates to the ground
/// value `v`.
pub fn observe_equal(ty: &TypeExpr, v: &TermExpr, subject: &TermExpr) -> TermExpr {
    match (ty, v) {
        (TypeExpr::Unit, _) => TermExpr::seq(subject.clone(), TermExpr::Skip),
        (TypeExpr::Bool, TermExpr::True) => TermExpr::ite(subject.clone(), TermExpr::Skip, diverge()),
        (TypeExpr::Bool, _) => TermExpr::ite(subject.clone(), diverge(), TermExpr::Skip),
        (TypeExpr::Nat, _) => TermExpr::ite(
            TermExpr::bin(BinOp::Eq, subject.clone(), v.clone()),
            TermExpr::Skip,
            diverge(),
        ),
        (TypeExpr::Prod(a, b), TermExpr::Pair(va, vb)) => {
            let p = "_eq";
            let left = observe_equal(a, va, &TermExpr::fst(TermExpr::var(p)));
            let right = observe_equal(b, vb, &TermExpr::snd(TermExpr::var(p)));
            TermExpr::Let(p.to_string(), Box::new(subject.clone()), Box::new(TermExpr::seq(left, right)))
        }
        _ => unreachable!("only ground values are compared"),
    }
}

/// Bounds for generated batteries.
#[derive(Clone, Copy, Debug)]
pub struct BatteryBounds {
    pub depth: usize,
    /// Maximal number of sample values or observers kept per type.
    pub width: usize,
    pub cap: usize,
}

impl Default for BatteryBounds {
    fn default() -> Self {
        BatteryBounds { depth: 2, width: 6, cap: 200 }
    }
}

fn take<T>(mut v: Vec<T>, n: usize) -> Vec<T> {
    v.truncate(n);
    v
}

/// Interleaves several candidate lists so that truncation keeps variety.
fn interleave<T>(lists: Vec<Vec<T>>) -> Vec<T> {
    let mut iters: Vec<_> = lists.into_iter().map(|l| l.into_iter()).collect();
    let mut out = Vec::new();
    loop {
        let mut any = false;
        for it in iters.iter_mut() {
            if let Some(x) = it.next() {
                out.push(x);
                any = true;
            }
        }
        if !any {
            return out;
        }
    }
}

/// Closed sample terms of type `ty`, including stateful, strict and
/// divergent functions and bad variables.
pub fn sample_values(ty: &TypeExpr, b: BatteryBounds) -> Vec<TermExpr> {
    sample_at(ty, b.depth, b.width)
}

fn sample_at(ty: &TypeExpr, depth: usize, width: usize) -> Vec<TermExpr> {
    let name = |s: &str| format!("_{s}{depth}");
    match ty {
        TypeExpr::Unit => vec![TermExpr::Skip],
        TypeExpr::Bool => vec![TermExpr::True, TermExpr::False],
        TypeExpr::Nat => take(vec![0, 1, 2, 5, 3, 7].into_iter().map(TermExpr::Num).collect(), width),
        TypeExpr::Prod(a, b) => {
            let va = sample_at(a, depth, width);
            let vb = sample_at(b, depth, width);
            let mut out = Vec::new();
            // A diagonal walk keeps both components varied under truncation.
            for k in 0..va.len().max(vb.len()) * 2 {
                for i in 0..=k {
                    let j = k - i;
                    if i < va.len() && j < vb.len() {
                        out.push(TermExpr::pair(va[i].clone(), vb[j].clone()));
                    }
                }
                if out.len() >= width {
                    break;
                }
            }
            take(out, width)
        }
        TypeExpr::Arrow(a, r) => {
            let x = name("x");
            let results = sample_at(r, depth.saturating_sub(1), width);
            let constants: Vec<_> = results
                .iter()
                .take(2)
                .map(|v| TermExpr::lam(&x, (**a).clone(), v.clone()))
                .collect();
            let mut strict = Vec::new();
            let mut stateful = Vec::new();
            if depth > 0 {
                for o in observers_at(a, depth - 1, width).into_iter().take(3) {
                    for v in results.iter().take(2) {
                        let body = TermExpr::seq(forget(&o.plug(&TermExpr::var(&x))), v.clone());
                        strict.push(TermExpr::lam(&x, (**a).clone(), body));
                    }
                }
                if results.len() >= 2 {
                    let c = name("c");
                    let body = TermExpr::ite(
                        TermExpr::deref(TermExpr::var(&c)),
                        TermExpr::seq(TermExpr::assign(TermExpr::var(&c), TermExpr::False), results[0].clone()),
                        results[1].clone(),
                    );
                    stateful.push(TermExpr::NewIn(
                        vec![crate::lang::NewDecl { name: c, ty: None, init: Some(TermExpr::True) }],
                        Box::new(TermExpr::lam(&x, (**a).clone(), body)),
                    ));
                }
                // Functions defined on a single ground argument.
                if a.is_ground() {
                    for v in sample_at(a, depth - 1, width).into_iter().take(2) {
                        let guard = observe_equal(a, &v, &TermExpr::var(&x));
                        strict.push(TermExpr::lam(&x, (**a).clone(), TermExpr::seq(guard, results[0].clone())));
                    }
                }
                // Case analysis on a boolean argument.
                if **a == TypeExpr::Bool && results.len() >= 2 {
                    strict.push(TermExpr::lam(
                        &x,
                        TypeExpr::Bool,
                        TermExpr::ite(TermExpr::var(&x), results[1].clone(), results[0].clone()),
                    ));
                }
            }
            let divergent = vec![TermExpr::lam(&x, (**a).clone(), TermExpr::Bot((**r).clone()))];
            take(interleave(vec![constants, strict, stateful, divergent]), width)
        }
        TypeExpr::Var(a) => {
            let contents = sample_at(a, depth.saturating_sub(1), width);
            let r = name("r");
            let mut cells: Vec<_> = contents
                .iter()
                .take(2)
                .map(|v| {
                    TermExpr::NewIn(
                        vec![crate::lang::NewDecl { name: r.clone(), ty: None, init: Some(v.clone()) }],
                        Box::new(TermExpr::var(&r)),
                    )
                })
                .collect();
            cells.push(TermExpr::New((**a).clone()));
            let bad: Vec<_> = contents
                .iter()
                .take(1)
                .map(|v| {
                    TermExpr::mkvar(
                        TermExpr::lam(&name("w"), (**a).clone(), TermExpr::Skip),
                        TermExpr::lam(&name("u"), TypeExpr::Unit, v.clone()),
                    )
                })
                .collect();
            take(interleave(vec![cells, bad]), width)
        }
    }
}

/// `let _ = t in skip`, forgetting a ground result.
fn forget(t: &TermExpr) -> TermExpr {
    TermExpr::Let("_".to_string(), Box::new(t.clone()), Box::new(TermExpr::Skip))
}

/// Templates with one hole of type `ty` whose results are ground.
pub fn observers(ty: &TypeExpr, b: BatteryBounds) -> Vec<TermExpr> {
    observers_at(ty, b.depth, b.width)
}

fn observers_at(ty: &TypeExpr, depth: usize, width: usize) -> Vec<TermExpr> {
    let name = |s: &str| format!("_{s}{depth}");
    if ty.is_ground() {
        return vec![TermExpr::Hole];
    }
    let out = match ty {
        TypeExpr::Prod(a, b) => {
            let p = name("p");
            let oa = observers_at(a, depth, width);
            let ob = observers_at(b, depth, width);
            let both: Vec<_> = oa
                .iter()
                .zip(ob.iter())
                .map(|(x, y)| {
                    TermExpr::Let(
                        p.clone(),
                        Box::new(TermExpr::Hole),
                        Box::new(TermExpr::pair(
                            x.plug(&TermExpr::fst(TermExpr::var(&p))),
                            y.plug(&TermExpr::snd(TermExpr::var(&p))),
                        )),
                    )
                })
                .collect();
            let firsts = oa.iter().map(|x| x.plug(&TermExpr::fst(TermExpr::Hole))).collect();
            let seconds = ob.iter().map(|y| y.plug(&TermExpr::snd(TermExpr::Hole))).collect();
            interleave(vec![both, firsts, seconds])
        }
        TypeExpr::Arrow(a, r) => {
            let f = name("f");
            let args = sample_at(a, depth, width);
            let results = if depth == 0 { vec![forget_template()] } else { observers_at(r, depth - 1, width) };
            let mut once = Vec::new();
            for o in &results {
                for v in &args {
                    once.push(o.plug(&TermExpr::app(TermExpr::Hole, v.clone())));
                }
            }
            let mut twice = Vec::new();
            for (i, v1) in args.iter().enumerate().take(3) {
                for v2 in args.iter().skip(i).take(3) {
                    let o = &results[0];
                    twice.push(TermExpr::Let(
                        f.clone(),
                        Box::new(TermExpr::Hole),
                        Box::new(TermExpr::pair(
                            o.plug(&TermExpr::app(TermExpr::var(&f), v1.clone())),
                            o.plug(&TermExpr::app(TermExpr::var(&f), v2.clone())),
                        )),
                    ));
                }
            }
            let touch = vec![forget_template()];
            interleave(vec![once, twice, touch])
        }
        TypeExpr::Var(a) => {
            let v = name("v");
            let contents = sample_at(a, depth.saturating_sub(1), width);
            let reads = observers_at(a, depth.saturating_sub(1), width);
            let direct: Vec<_> = reads.iter().map(|o| o.plug(&TermExpr::deref(TermExpr::Hole))).collect();
            let mut write_read = Vec::new();
            for c in &contents {
                for o in reads.iter().take(2) {
                    write_read.push(TermExpr::Let(
                        v.clone(),
                        Box::new(TermExpr::Hole),
                        Box::new(TermExpr::seq(
                            TermExpr::assign(TermExpr::var(&v), c.clone()),
                            o.plug(&TermExpr::deref(TermExpr::var(&v))),
                        )),
                    ));
                }
            }
            let write_only: Vec<_> = contents
                .iter()
                .take(1)
                .map(|c| TermExpr::assign(TermExpr::Hole, c.clone()))
                .collect();
            interleave(vec![write_read, direct, write_only])
        }
        _ => unreachable!("ground types handled above"),
    };
    take(dedup(out), width.max(1) * 2)
}

fn forget_template() -> TermExpr {
    forget(&TermExpr::Hole)
}

fn dedup(v: Vec<TermExpr>) -> Vec<TermExpr> {
    let mut seen = std::collections::HashSet::new();
    v.into_iter().filter(|t| seen.insert(t.clone())).collect()
}

/// Contexts for comparing terms of type `hole` whose free variables are
/// `free`: every observer of the result type, under every choice of sample
/// arguments for the free variables (up to `cap` templates).
pub fn battery(hole: &TypeExpr, free: &[(String, TypeExpr)], b: BatteryBounds) -> Vec<ContextTemplate> {
    let obs = observers(hole, b);
    let mut closers: Vec<Vec<(String, TermExpr)>> = vec![Vec::new()];
    for (x, t) in free {
        let mut next = Vec::new();
        for prefix in &closers {
            for v in sample_values(t, b) {
                let mut p = prefix.clone();
                p.push((x.clone(), v));
                next.push(p);
            }
        }
        closers = next;
    }
    let mut out = Vec::new();
    'outer: for o in &obs {
        for closing in &closers {
            let mut t = o.clone();
            for (x, v) in closing.iter().rev() {
                t = TermExpr::Let(x.clone(), Box::new(v.clone()), Box::new(t));
            }
            out.push(ContextTemplate::new(hole.clone(), t));
            if out.len() >= b.cap {
                break 'outer;
            }
        }
    }
    out
}

const LIBRARY: &str = include_str!("contexts.txt");

/// The hand-written templates shipped with the crate, as `(hole type,
/// template)` pairs.
pub fn library() -> Vec<ContextTemplate> {
    LIBRARY
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| {
            let (ty, term) = l.split_once('|').expect("library lines are `type | template`");
            ContextTemplate::new(
                parse_type(ty.trim()).expect("library type parses"),
                parse_term(term.trim()).expect("library template parses"),
            )
        })
        .collect()
}

/// Generated battery plus the matching library templates, each closed over
/// the free variables by sample arguments.
pub fn shipped_battery(hole: &TypeExpr, free: &[(String, TypeExpr)], b: BatteryBounds) -> Vec<ContextTemplate> {
    let mut out = battery(hole, free, b);
    let closers = battery(&TypeExpr::Unit, free, BatteryBounds { cap: 8, ..b });
    for lib in library().into_iter().filter(|c| c.hole == *hole) {
        for closer in &closers {
            // Replace the unit observer `[]` of each closer by the template.
            out.push(ContextTemplate::new(hole.clone(), closer.term.plug(&lib.term)));
        }
    }
    out
}
