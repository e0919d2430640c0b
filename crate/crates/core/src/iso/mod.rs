//! The equational theory of type isomorphisms: normal forms, decision,
//! coercion synthesis and the type corpus used for cross-validation.

pub mod coerce;
pub mod normal;
pub mod rewrite;

pub use coerce::synthesize_coercions;
pub use normal::{iso_e, normalize, Factor, NatType, NormalForm, Product};
pub use rewrite::{rewrite_root, single_rewrites, Direction, Equation, EQUATIONS};

use crate::lang::{Lang, TypeExpr};

/// All types of AST size at most `bound`, smallest first, without
/// duplicates. `Lang::Lnat` adds `nat` as a leaf.
pub fn enumerate_types(bound: usize, lang: Lang) -> Vec<TypeExpr> {
    let mut by_size: Vec<Vec<TypeExpr>> = vec![Vec::new()];
    for size in 1..=bound {
        let mut here = Vec::new();
        if size == 1 {
            here.push(TypeExpr::Unit);
            here.push(TypeExpr::Bool);
            if lang == Lang::Lnat {
                here.push(TypeExpr::Nat);
            }
        } else {
            for a in &by_size[size - 1] {
                here.push(TypeExpr::var(a.clone()));
            }
            for left in 1..size - 1 {
                let right = size - 1 - left;
                for a in &by_size[left] {
                    for b in &by_size[right] {
                        here.push(TypeExpr::prod(a.clone(), b.clone()));
                        here.push(TypeExpr::arrow(a.clone(), b.clone()));
                    }
                }
            }
        }
        by_size.push(here);
    }
    by_size.into_iter().flatten().collect()
}
