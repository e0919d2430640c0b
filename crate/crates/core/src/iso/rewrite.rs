//! Single applications of the five defining equations, in either direction,
//! at any position of a type.

use crate::lang::TypeExpr;
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Equation {
    /// `A × B = B × A`
    Commutativity,
    /// `A × (B × C) = (A × B) × C`
    Associativity,
    /// `A × unit = A`
    UnitRight,
    /// `bool × A → B = (A → B) × (A → B)`
    BoolDistribution,
    /// `var[A] = (A → unit) × (unit → A)`
    VarExpansion,
}

pub const EQUATIONS: [Equation; 5] = [
    Equation::Commutativity,
    Equation::Associativity,
    Equation::UnitRight,
    Equation::BoolDistribution,
    Equation::VarExpansion,
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Direction {
    LeftToRight,
    RightToLeft,
}

/// The result of rewriting the root of `t` with `eq` in direction `dir`, if
/// the corresponding side matches.
pub fn rewrite_root(t: &TypeExpr, eq: Equation, dir: Direction) -> Option<TypeExpr> {
    use Direction::*;
    use TypeExpr as T;
    match (eq, dir, t) {
        (Equation::Commutativity, _, T::Prod(a, b)) => Some(T::Prod(b.clone(), a.clone())),
        (Equation::Associativity, LeftToRight, T::Prod(a, bc)) => match bc.as_ref() {
            T::Prod(b, c) => Some(T::prod(T::Prod(a.clone(), b.clone()), c.as_ref().clone())),
            _ => None,
        },
        (Equation::Associativity, RightToLeft, T::Prod(ab, c)) => match ab.as_ref() {
            T::Prod(a, b) => Some(T::prod(a.as_ref().clone(), T::Prod(b.clone(), c.clone()))),
            _ => None,
        },
        (Equation::UnitRight, LeftToRight, T::Prod(a, u)) if **u == T::Unit => Some(a.as_ref().clone()),
        (Equation::UnitRight, RightToLeft, a) => Some(T::prod(a.clone(), T::Unit)),
        (Equation::BoolDistribution, LeftToRight, T::Arrow(dom, b)) => match dom.as_ref() {
            T::Prod(bl, a) if **bl == T::Bool => {
                let f = T::Arrow(a.clone(), b.clone());
                Some(T::prod(f.clone(), f))
            }
            _ => None,
        },
        (Equation::BoolDistribution, RightToLeft, T::Prod(f, g)) if f == g => match f.as_ref() {
            T::Arrow(a, b) => Some(T::arrow(T::Prod(Box::new(T::Bool), a.clone()), b.as_ref().clone())),
            _ => None,
        },
        (Equation::VarExpansion, LeftToRight, T::Var(a)) => Some(T::prod(
            T::arrow(a.as_ref().clone(), T::Unit),
            T::arrow(T::Unit, a.as_ref().clone()),
        )),
        (Equation::VarExpansion, RightToLeft, T::Prod(w, r)) => match (w.as_ref(), r.as_ref()) {
            (T::Arrow(a, u), T::Arrow(u2, a2)) if **u == T::Unit && **u2 == T::Unit && a == a2 => {
                Some(T::Var(a.clone()))
            }
            _ => None,
        },
        _ => None,
    }
}

/// Every type obtained by one application of one equation, in either
/// direction, at one position of `t`.
pub fn single_rewrites(t: &TypeExpr) -> Vec<(Equation, Direction, TypeExpr)> {
    let mut out = Vec::new();
    for eq in EQUATIONS {
        for dir in [Direction::LeftToRight, Direction::RightToLeft] {
            if let Some(r) = rewrite_root(t, eq, dir) {
                out.push((eq, dir, r));
            }
        }
    }
    let wrap = |out: &mut Vec<_>, sub: &TypeExpr, rebuild: &dyn Fn(TypeExpr) -> TypeExpr| {
        for (eq, dir, r) in single_rewrites(sub) {
            out.push((eq, dir, rebuild(r)));
        }
    };
    match t {
        TypeExpr::Prod(a, b) => {
            wrap(&mut out, a, &|r| TypeExpr::Prod(Box::new(r), b.clone()));
            wrap(&mut out, b, &|r| TypeExpr::Prod(a.clone(), Box::new(r)));
        }
        TypeExpr::Arrow(a, b) => {
            wrap(&mut out, a, &|r| TypeExpr::Arrow(Box::new(r), b.clone()));
            wrap(&mut out, b, &|r| TypeExpr::Arrow(a.clone(), Box::new(r)));
        }
        TypeExpr::Var(a) => wrap(&mut out, a, &|r| TypeExpr::Var(Box::new(r))),
        _ => {}
    }
    out
}
