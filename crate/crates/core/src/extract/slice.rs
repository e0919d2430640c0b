//! Subtracting a sub-bijection from a bijection between finite sets.
//!
//! Given `f : E → F` and `g : E' → F'` with `E' ⊆ E` and `F' ⊆ F`, every
//! `x ∈ E∖E'` is sent forward by `f`; while the image lands in `F'` it is
//! pulled back by `g` and sent forward again. The walk visits each element
//! of `F'` at most once, so it escapes after at most `|F'| + 1` steps.

use super::ExtractError;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Debug;

pub type Bijection<X> = BTreeMap<X, X>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Slice<X> {
    pub map: Bijection<X>,
    /// Number of applications of `f` used for each element.
    pub chase_lengths: BTreeMap<X, usize>,
}

fn inverse<X: Ord + Clone>(f: &Bijection<X>) -> Option<Bijection<X>> {
    let inv: Bijection<X> = f.iter().map(|(x, y)| (y.clone(), x.clone())).collect();
    (inv.len() == f.len()).then_some(inv)
}

/// `f ∖ g`.
pub fn slice_iso<X: Ord + Clone + Debug>(f: &Bijection<X>, g: &Bijection<X>) -> Result<Slice<X>, ExtractError> {
    let pre = |m: &str| Err(ExtractError::Precondition(m.to_string()));
    let Some(_) = inverse(f) else { return pre("f is not injective") };
    let Some(g_inv) = inverse(g) else { return pre("g is not injective") };
    let range: BTreeSet<&X> = f.values().collect();
    if !g.keys().all(|x| f.contains_key(x)) || !g.values().all(|y| range.contains(y)) {
        return pre("g is not a sub-bijection of f");
    }
    let mut out = Slice { map: BTreeMap::new(), chase_lengths: BTreeMap::new() };
    for x in f.keys().filter(|x| !g.contains_key(*x)) {
        let mut y = &f[x];
        let mut steps = 1;
        while let Some(back) = g_inv.get(y) {
            y = &f[back];
            steps += 1;
            debug_assert!(steps <= g.len() + 1);
        }
        out.map.insert(x.clone(), y.clone());
        out.chase_lengths.insert(x.clone(), steps);
    }
    Ok(out)
}

/// `f ; g` where both are total on the relevant domain.
fn then(f: &Bijection<u8>, g: &Bijection<u8>) -> Bijection<u8> {
    f.iter().map(|(x, y)| (*x, g[y])).collect()
}

/// Sets `E' ⊆ E`, `F' ⊆ F`, `G' ⊆ G` with bijections `f : E → F`,
/// `f' : E' → F'`, `g : F → G`, `g' : F' → G'` on which slicing does not
/// commute with composition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NonFunctoriality {
    pub f: Bijection<u8>,
    pub f_sub: Bijection<u8>,
    pub g: Bijection<u8>,
    pub g_sub: Bijection<u8>,
    /// `(f ∖ f') ; (g ∖ g')`.
    pub slice_then_compose: Bijection<u8>,
    /// `(f ; g) ∖ (f' ; g')`.
    pub compose_then_slice: Bijection<u8>,
}

fn permutations(items: &[u8]) -> Vec<Vec<u8>> {
    if items.is_empty() {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let x = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, x);
            out.push(p);
        }
    }
    out
}

fn subsets(n: u8, k: usize) -> Vec<Vec<u8>> {
    (0u32..1 << n).filter(|m| m.count_ones() as usize == k).map(|m| (0..n).filter(|i| m & (1 << i) != 0).collect()).collect()
}

fn bijections(from: &[u8], to: &[u8]) -> Vec<Bijection<u8>> {
    permutations(to).into_iter().map(|p| from.iter().copied().zip(p).collect()).collect()
}

/// Exhaustive search over `E = F = G = {0..n}` for `n ≤ max`, smallest
/// instances first.
pub fn find_nonfunctoriality(max: u8) -> Option<NonFunctoriality> {
    for n in 1..=max {
        let all: Vec<u8> = (0..n).collect();
        let full = bijections(&all, &all);
        for k in 1..n as usize {
            let subs = subsets(n, k);
            for e1 in &subs {
                for f1_range in &subs {
                    for g1_range in &subs {
                        for f in &full {
                            for g in &full {
                                for f_sub in bijections(e1, f1_range) {
                                    for g_sub in bijections(f1_range, g1_range) {
                                        let a = slice_iso(f, &f_sub).ok()?;
                                        let b = slice_iso(g, &g_sub).ok()?;
                                        let lhs: Bijection<u8> = a.map.iter().map(|(x, y)| (*x, b.map[y])).collect();
                                        let rhs = slice_iso(&then(f, g), &then(&f_sub, &g_sub)).ok()?.map;
                                        if lhs != rhs {
                                            return Some(NonFunctoriality {
                                                f: f.clone(),
                                                f_sub,
                                                g: g.clone(),
                                                g_sub,
                                                slice_then_compose: lhs,
                                                compose_then_slice: rhs,
                                            });
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    None
}
