//! Witness terms for provable isomorphisms.
//!
//! Each type `A` is connected to the flat tuple of its normal form by a pair
//! of terms: `forward` takes a value of `A` to the tuple (booleans first,
//! then function factors in canonical order), `backward` rebuilds `A` from
//! the tuple. Two types with equal normal forms share the flat tuple type, so
//! composing one side's `forward` with the other side's `backward` gives the
//! coercions. Effectful results are always bound by `(λr. …) M` before being
//! taken apart, so no computation is duplicated.

use super::normal::{normalize, tuple_type, Factor, NatType, NormalForm};
use crate::lang::{TermExpr, TypeExpr};
use std::cell::Cell;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Key {
    Bool,
    Fun(Factor),
}

fn layout(nf: &NormalForm) -> Vec<Key> {
    let mut keys: Vec<Key> = (0..nf.bools).map(|_| Key::Bool).collect();
    keys.extend(nf.body.expanded().cloned().map(Key::Fun));
    keys
}

fn layout_of(t: &TypeExpr) -> Vec<Key> {
    layout(&normalize(t).expect("checked for nat at entry"))
}

/// Stable sort of the concatenated layouts of a product's two sides:
/// `perm[k]` is the position in the concatenation of the `k`-th sorted slot.
fn merge_permutation(left: &[Key], right: &[Key]) -> Vec<usize> {
    let all: Vec<&Key> = left.iter().chain(right.iter()).collect();
    let mut idx: Vec<usize> = (0..all.len()).collect();
    idx.sort_by(|&i, &j| all[i].cmp(all[j]));
    idx
}

fn fst(t: TermExpr) -> TermExpr {
    match t {
        TermExpr::Pair(a, _) => *a,
        other => TermExpr::fst(other),
    }
}

fn snd(t: TermExpr) -> TermExpr {
    match t {
        TermExpr::Pair(_, b) => *b,
        other => TermExpr::snd(other),
    }
}

/// Right-nested tuple, `skip` when empty.
fn tuple(mut parts: Vec<TermExpr>) -> TermExpr {
    let Some(mut acc) = parts.pop() else {
        return TermExpr::Skip;
    };
    while let Some(p) = parts.pop() {
        acc = TermExpr::pair(p, acc);
    }
    acc
}

fn projections(t: &TermExpr, len: usize) -> Vec<TermExpr> {
    let mut out = Vec::with_capacity(len);
    let mut rest = t.clone();
    for i in 0..len {
        if i + 1 == len {
            out.push(rest.clone());
        } else {
            out.push(fst(rest.clone()));
            rest = snd(rest);
        }
    }
    out
}

struct Gen {
    counter: Cell<usize>,
}

impl Gen {
    fn fresh(&self, base: &str) -> String {
        let n = self.counter.get();
        self.counter.set(n + 1);
        format!("_{base}{n}")
    }

    /// Slots of `e : ty` in canonical order; `e` must be effect-free.
    fn forward(&self, ty: &TypeExpr, e: TermExpr) -> Vec<TermExpr> {
        match ty {
            TypeExpr::Unit => Vec::new(),
            TypeExpr::Bool => vec![e],
            TypeExpr::Nat => unreachable!("checked for nat at entry"),
            TypeExpr::Prod(a, b) => {
                let (ka, kb) = (layout_of(a), layout_of(b));
                let mut parts = self.forward(a, fst(e.clone()));
                parts.extend(self.forward(b, snd(e)));
                merge_permutation(&ka, &kb).into_iter().map(|i| parts[i].clone()).collect()
            }
            TypeExpr::Arrow(a, b) => {
                let na = normalize(a).expect("checked for nat at entry");
                let arg_ty = tuple_type(na.body.expanded().map(Factor::to_type).collect());
                let m = na.body.len() as usize;
                (0..1u64 << na.bools)
                    .map(|bits| {
                        let t = self.fresh("t");
                        let r = self.fresh("r");
                        let mut slots: Vec<TermExpr> =
                            (0..na.bools).map(|i| bool_const(bits >> i & 1 == 1)).collect();
                        slots.extend(projections(&TermExpr::var(&t), m));
                        let call = TermExpr::app(e.clone(), self.backward(a, &slots));
                        let flat = tuple(self.forward(b, TermExpr::var(&r)));
                        TermExpr::lam(
                            &t,
                            arg_ty.clone(),
                            TermExpr::app(TermExpr::lam(&r, b.as_ref().clone(), flat), call),
                        )
                    })
                    .collect()
            }
            TypeExpr::Var(c) => {
                let v = self.fresh("v");
                let d = self.fresh("d");
                let methods = TermExpr::pair(
                    TermExpr::lam(&v, c.as_ref().clone(), TermExpr::assign(e.clone(), TermExpr::var(&v))),
                    TermExpr::lam(&d, TypeExpr::Unit, TermExpr::deref(e)),
                );
                self.forward(&var_expansion(c), methods)
            }
        }
    }

    /// Rebuilds a value of `ty` from effect-free slot terms in canonical order.
    fn backward(&self, ty: &TypeExpr, slots: &[TermExpr]) -> TermExpr {
        match ty {
            TypeExpr::Unit => TermExpr::Skip,
            TypeExpr::Bool => slots[0].clone(),
            TypeExpr::Nat => unreachable!("checked for nat at entry"),
            TypeExpr::Prod(a, b) => {
                let (ka, kb) = (layout_of(a), layout_of(b));
                let perm = merge_permutation(&ka, &kb);
                let mut concat = vec![TermExpr::Skip; slots.len()];
                for (k, &i) in perm.iter().enumerate() {
                    concat[i] = slots[k].clone();
                }
                let (sa, sb) = concat.split_at(ka.len());
                TermExpr::pair(self.backward(a, sa), self.backward(b, sb))
            }
            TypeExpr::Arrow(a, b) => {
                let na = normalize(a).expect("checked for nat at entry");
                let nb = normalize(b).expect("checked for nat at entry");
                let x = self.fresh("a");
                let parts = self.forward(a, TermExpr::var(&x));
                let n = na.bools as usize;
                let arg = tuple(parts[n..].to_vec());
                let result_ty = nb.to_type();
                let result_len = layout(&nb).len();
                let leaf = |bits: usize| {
                    let s = self.fresh("s");
                    let rebuilt = self.backward(b, &projections(&TermExpr::var(&s), result_len));
                    TermExpr::app(
                        TermExpr::lam(&s, result_ty.clone(), rebuilt),
                        TermExpr::app(slots[bits].clone(), arg.clone()),
                    )
                };
                TermExpr::lam(&x, a.as_ref().clone(), dispatch(&parts[..n], 0, 0, &leaf))
            }
            TypeExpr::Var(c) => match self.backward(&var_expansion(c), slots) {
                TermExpr::Pair(w, r) => TermExpr::mkvar(*w, *r),
                other => TermExpr::mkvar(TermExpr::fst(other.clone()), TermExpr::snd(other)),
            },
        }
    }
}

fn bool_const(b: bool) -> TermExpr {
    if b {
        TermExpr::True
    } else {
        TermExpr::False
    }
}

/// Nested conditionals on the boolean slots selecting copy `bits`.
fn dispatch(bools: &[TermExpr], i: usize, bits: usize, leaf: &dyn Fn(usize) -> TermExpr) -> TermExpr {
    if i == bools.len() {
        return leaf(bits);
    }
    TermExpr::ite(
        bools[i].clone(),
        dispatch(bools, i + 1, bits | 1 << i, leaf),
        dispatch(bools, i + 1, bits, leaf),
    )
}

fn var_expansion(c: &TypeExpr) -> TypeExpr {
    TypeExpr::prod(TypeExpr::arrow(c.clone(), TypeExpr::Unit), TypeExpr::arrow(TypeExpr::Unit, c.clone()))
}

/// Terms `x: a ⊢ m : b` and `y: b ⊢ n : a` witnessing `a ≅ b`, or `None`
/// when the normal forms differ.
pub fn synthesize_coercions(a: &TypeExpr, b: &TypeExpr) -> Result<Option<(TermExpr, TermExpr)>, NatType> {
    let (na, nb) = (normalize(a)?, normalize(b)?);
    if na != nb {
        return Ok(None);
    }
    let (x, y) = (TermExpr::var("x"), TermExpr::var("y"));
    if a == b {
        return Ok(Some((x, y)));
    }
    if let Some(pair) = direct_template(a, b) {
        return Ok(Some(pair));
    }
    if let Some((to_a, to_b)) = direct_template(b, a) {
        // Swap the roles of `x` and `y`; the templates bind neither.
        return Ok(Some((to_b.subst("y", &TermExpr::var("x")), to_a.subst("x", &TermExpr::var("y")))));
    }
    let g = Gen { counter: Cell::new(0) };
    let m = g.backward(b, &g.forward(a, x));
    let n = g.backward(a, &g.forward(b, y));
    Ok(Some((m, n)))
}

/// The witness templates of single equations applied at the root.
fn direct_template(a: &TypeExpr, b: &TypeExpr) -> Option<(TermExpr, TermExpr)> {
    let (x, y) = (TermExpr::var("x"), TermExpr::var("y"));
    if let TypeExpr::Var(c) = a {
        if *b == var_expansion(c) {
            let m = TermExpr::pair(
                TermExpr::lam("v", c.as_ref().clone(), TermExpr::assign(x.clone(), TermExpr::var("v"))),
                TermExpr::lam("d", TypeExpr::Unit, TermExpr::deref(x)),
            );
            let n = TermExpr::mkvar(TermExpr::fst(y.clone()), TermExpr::snd(y));
            return Some((m, n));
        }
    }
    if let (TypeExpr::Prod(p, q), TypeExpr::Prod(q2, p2)) = (a, b) {
        if p == p2 && q == q2 {
            let m = TermExpr::pair(TermExpr::snd(x.clone()), TermExpr::fst(x));
            let n = TermExpr::pair(TermExpr::snd(y.clone()), TermExpr::fst(y));
            return Some((m, n));
        }
    }
    None
}
