//! Canonical representatives of types modulo the isomorphism theory.
//!
//! Every type is equal to `bool^n × Π U` where each factor is
//! `U = (Π U) → (bool^m × Π U)`. Factors are kept as a sorted multiset with
//! multiplicities, so equality of normal forms is structural equality.

use crate::lang::TypeExpr;
use serde::Serialize;
use std::cmp::Ordering;
use std::fmt;
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Error)]
#[error("nat has no finite normal form; the theory covers the boolean language only")]
pub struct NatType;

/// A function factor `arg → result`.
#[derive(Clone, Debug, Serialize)]
pub struct Factor {
    pub arg: Product,
    pub result: Box<NormalForm>,
    #[serde(skip)]
    hash: u64,
}

/// A multiset of factors; the empty product is `unit`.
/// Invariant: sorted by `Factor`'s order, no repeated factor, counts ≥ 1.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Product {
    pub factors: Vec<(Factor, u64)>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct NormalForm {
    pub bools: u32,
    pub body: Product,
}

fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

impl Product {
    pub fn unit() -> Self {
        Product::default()
    }

    pub fn is_unit(&self) -> bool {
        self.factors.is_empty()
    }

    /// Number of factors counted with multiplicity.
    pub fn len(&self) -> u64 {
        self.factors.iter().map(|(_, c)| c).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    fn structural_hash(&self) -> u64 {
        self.factors
            .iter()
            .fold(0x5851_f42d_4c95_7f2d, |h, (f, c)| mix(h ^ mix(f.hash.wrapping_add(c.wrapping_mul(0x2545_f491)))))
    }

    /// Multiset union.
    pub fn merge(&self, other: &Product) -> Product {
        let mut all: Vec<(Factor, u64)> = self.factors.iter().chain(other.factors.iter()).cloned().collect();
        all.sort_by(|a, b| a.0.cmp(&b.0));
        let mut out: Vec<(Factor, u64)> = Vec::with_capacity(all.len());
        for (f, c) in all {
            match out.last_mut() {
                Some((g, k)) if *g == f => *k = k.saturating_add(c),
                _ => out.push((f, c)),
            }
        }
        Product { factors: out }
    }

    pub fn repeat(factor: Factor, count: u64) -> Product {
        if count == 0 {
            Product::unit()
        } else {
            Product { factors: vec![(factor, count)] }
        }
    }

    /// Factors in canonical order, each repeated by its multiplicity.
    pub fn expanded(&self) -> impl Iterator<Item = &Factor> {
        self.factors.iter().flat_map(|(f, c)| std::iter::repeat_n(f, *c as usize))
    }
}

impl Factor {
    pub fn new(arg: Product, result: NormalForm) -> Self {
        let hash = mix(0x0123_4567_89ab_cdef ^ mix(arg.structural_hash()).wrapping_mul(31) ^ result.structural_hash());
        Factor { arg, result: Box::new(result), hash }
    }

    pub fn structural_hash(&self) -> u64 {
        self.hash
    }
}

impl PartialEq for Factor {
    fn eq(&self, other: &Self) -> bool {
        self.hash == other.hash && self.arg == other.arg && self.result == other.result
    }
}

impl Eq for Factor {}

impl std::hash::Hash for Factor {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        state.write_u64(self.hash);
    }
}

impl Ord for Factor {
    /// Hash first, full structure on ties.
    fn cmp(&self, other: &Self) -> Ordering {
        self.hash
            .cmp(&other.hash)
            .then_with(|| self.arg.cmp(&other.arg))
            .then_with(|| self.result.cmp(&other.result))
    }
}

impl PartialOrd for Factor {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl NormalForm {
    pub fn unit() -> Self {
        NormalForm::default()
    }

    pub fn structural_hash(&self) -> u64 {
        mix(u64::from(self.bools).wrapping_mul(0x1000_0000_01b3) ^ self.body.structural_hash())
    }

    /// The canonical type denoted: `bool × … × bool × U × … × U`,
    /// right-nested, with `unit` for the empty product.
    pub fn to_type(&self) -> TypeExpr {
        let mut parts: Vec<TypeExpr> = (0..self.bools).map(|_| TypeExpr::Bool).collect();
        parts.extend(self.body.expanded().map(Factor::to_type));
        tuple_type(parts)
    }

    /// Number of components of the family interpretation: `2^bools`.
    pub fn family_size(&self) -> u128 {
        1u128 << self.bools.min(127)
    }
}

impl Factor {
    pub fn to_type(&self) -> TypeExpr {
        let arg = tuple_type(self.arg.expanded().map(Factor::to_type).collect());
        TypeExpr::arrow(arg, self.result.to_type())
    }
}

/// Right-nested product of the parts; `unit` when empty.
pub fn tuple_type(mut parts: Vec<TypeExpr>) -> TypeExpr {
    let Some(mut acc) = parts.pop() else {
        return TypeExpr::Unit;
    };
    while let Some(p) = parts.pop() {
        acc = TypeExpr::prod(p, acc);
    }
    acc
}

impl fmt::Display for NormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_type())
    }
}

pub fn normalize(a: &TypeExpr) -> Result<NormalForm, NatType> {
    Ok(match a {
        TypeExpr::Unit => NormalForm::unit(),
        TypeExpr::Bool => NormalForm { bools: 1, body: Product::unit() },
        TypeExpr::Nat => return Err(NatType),
        TypeExpr::Prod(l, r) => {
            let (l, r) = (normalize(l)?, normalize(r)?);
            NormalForm { bools: l.bools + r.bools, body: l.body.merge(&r.body) }
        }
        TypeExpr::Arrow(l, r) => {
            let (l, r) = (normalize(l)?, normalize(r)?);
            // bool^n × T → S is (T → S)^(2^n).
            let copies = 1u64.checked_shl(l.bools).unwrap_or(u64::MAX);
            NormalForm { bools: 0, body: Product::repeat(Factor::new(l.body, r), copies) }
        }
        TypeExpr::Var(c) => {
            let c = c.as_ref().clone();
            normalize(&TypeExpr::prod(
                TypeExpr::arrow(c.clone(), TypeExpr::Unit),
                TypeExpr::arrow(TypeExpr::Unit, c),
            ))?
        }
    })
}

/// Decides equality in the theory by comparing normal forms.
pub fn iso_e(a: &TypeExpr, b: &TypeExpr) -> Result<bool, NatType> {
    Ok(normalize(a)? == normalize(b)?)
}
