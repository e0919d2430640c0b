//! Types as finite families of arenas.

use super::{arrow, lifted_sum, product, product_of, unit_lift, Arena, ArenaFamily};
use crate::iso::NatType;
use crate::lang::TypeExpr;

/// The family denoted by an L2 type. `bool` is two empty arenas, index 0
/// standing for `true`; products are indexed row-major.
pub fn interpret_type(t: &TypeExpr) -> Result<ArenaFamily, NatType> {
    Ok(match t {
        TypeExpr::Unit => vec![Arena::empty()],
        TypeExpr::Bool => vec![Arena::empty(), Arena::empty()],
        TypeExpr::Nat => return Err(NatType),
        TypeExpr::Prod(a, b) => {
            let (fa, fb) = (interpret_type(a)?, interpret_type(b)?);
            let mut out = Vec::with_capacity(fa.len() * fb.len());
            for x in &fa {
                for y in &fb {
                    out.push(product(x, y));
                }
            }
            out
        }
        TypeExpr::Arrow(a, b) => {
            let (fa, fb) = (interpret_type(a)?, interpret_type(b)?);
            let sum = lifted_sum(&fb);
            vec![product_of(&fa.iter().map(|x| arrow(x, &sum)).collect::<Vec<_>>())]
        }
        TypeExpr::Var(a) => vec![var_arena(&interpret_type(a)?)],
    })
}

/// `Π_i(A_i ⇒ T1) × ΣA_i`: one write method per component (`p0/p{i}`) and
/// the read method (`p1`).
pub fn var_arena(fa: &[Arena]) -> Arena {
    let t1 = unit_lift();
    let write = product_of(&fa.iter().map(|x| arrow(x, &t1)).collect::<Vec<_>>());
    product(&write, &lifted_sum(fa))
}
