//! Tree isomorphisms between unfoldings of arenas.
//!
//! The unfolding of a move `m` is the tree of paths starting at `m`. Two
//! moves are `k`-isomorphic when their unfoldings agree to depth `k`, the
//! child bijections preserving the question/answer label. Classes of
//! `≃_k` are computed for all moves of several arenas at once by partition
//! refinement keyed by the multiset of labelled child classes.

use super::{Arena, Kind};
use serde::Serialize;
use std::collections::BTreeMap;

/// A `depth`-isomorphism from `source` to `target`. Invariant: when
/// `depth > 0`, `children` holds one `(depth - 1)`-isomorphism per move
/// enabled by `source`, sorted by source, whose targets are exactly the
/// moves enabled by `target`; when `depth == 0` it is empty.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct KIso {
    pub depth: usize,
    pub source: usize,
    pub target: usize,
    pub children: Vec<KIso>,
}

impl KIso {
    pub fn empty(source: usize, target: usize) -> KIso {
        KIso { depth: 0, source, target, children: Vec::new() }
    }

    pub fn truncate(&self, k: usize) -> KIso {
        if k == 0 {
            return KIso::empty(self.source, self.target);
        }
        KIso {
            depth: k.min(self.depth),
            source: self.source,
            target: self.target,
            children: self.children.iter().map(|c| c.truncate(k - 1)).collect(),
        }
    }

    pub fn is_prefix_of(&self, other: &KIso) -> bool {
        self.depth <= other.depth && *self == other.truncate(self.depth)
    }

    pub fn inverse(&self) -> KIso {
        let mut children: Vec<KIso> = self.children.iter().map(KIso::inverse).collect();
        children.sort_by_key(|c| c.source);
        KIso { depth: self.depth, source: self.target, target: self.source, children }
    }

    /// `self ; other`, of depth the smaller of the two. `None` when the
    /// endpoints do not meet.
    pub fn compose(&self, other: &KIso) -> Option<KIso> {
        if self.target != other.source {
            return None;
        }
        let depth = self.depth.min(other.depth);
        if depth == 0 {
            return Some(KIso::empty(self.source, other.target));
        }
        let children = self
            .children
            .iter()
            .map(|c| {
                let next = other.children.iter().find(|d| d.source == c.target)?;
                c.compose(next)
            })
            .collect::<Option<Vec<_>>>()?;
        Some(KIso { depth, source: self.source, target: other.target, children })
    }

    /// Checks the invariant against the arenas the endpoints live in.
    pub fn validate(&self, a: &Arena, b: &Arena) -> bool {
        if self.source >= a.len() || self.target >= b.len() {
            return false;
        }
        if self.depth == 0 {
            return self.children.is_empty();
        }
        let sources: Vec<usize> = self.children.iter().map(|c| c.source).collect();
        let mut targets: Vec<usize> = self.children.iter().map(|c| c.target).collect();
        targets.sort_unstable();
        sources == a.children(self.source)
            && targets == b.children(self.target)
            && self.children.iter().all(|c| {
                c.depth + 1 == self.depth
                    && c.target < b.len()
                    && a.qa(c.source) == b.qa(c.target)
                    && c.validate(a, b)
            })
    }

    /// Applies the tree map to a path `m_0 m_1 …` starting at `source`.
    pub fn apply(&self, path: &[usize]) -> Option<Vec<usize>> {
        let (&first, rest) = path.split_first()?;
        if first != self.source {
            return None;
        }
        let mut out = vec![self.target];
        let mut node = self;
        for &m in rest {
            node = node.children.iter().find(|c| c.source == m)?;
            out.push(node.target);
        }
        Some(out)
    }

    /// Conjugates by renamings of the source and target arenas.
    pub fn rename(&self, pa: &[usize], pb: &[usize]) -> KIso {
        let mut children: Vec<KIso> = self.children.iter().map(|c| c.rename(pa, pb)).collect();
        children.sort_by_key(|c| c.source);
        KIso { depth: self.depth, source: pa[self.source], target: pb[self.target], children }
    }
}

/// A path isomorphism unfolded to a finite depth: one tree map per initial
/// move of the source, sorted by source.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PathIso {
    pub isos: Vec<KIso>,
}

impl PathIso {
    pub fn depth(&self) -> usize {
        self.isos.iter().map(|k| k.depth).min().unwrap_or(0)
    }

    pub fn identity(a: &Arena, depth: usize) -> PathIso {
        fn go(a: &Arena, m: usize, depth: usize) -> KIso {
            if depth == 0 {
                return KIso::empty(m, m);
            }
            KIso { depth, source: m, target: m, children: a.children(m).iter().map(|&c| go(a, c, depth - 1)).collect() }
        }
        PathIso { isos: a.initials().iter().map(|&i| go(a, i, depth)).collect() }
    }

    /// Maps a path given as its sequence of moves.
    pub fn apply(&self, path: &[usize]) -> Option<Vec<usize>> {
        let first = *path.first()?;
        self.isos.iter().find(|k| k.source == first)?.apply(path)
    }

    pub fn inverse(&self) -> PathIso {
        let mut isos: Vec<KIso> = self.isos.iter().map(KIso::inverse).collect();
        isos.sort_by_key(|k| k.source);
        PathIso { isos }
    }

    pub fn truncate(&self, depth: usize) -> PathIso {
        PathIso { isos: self.isos.iter().map(|k| k.truncate(depth)).collect() }
    }

    pub fn rename(&self, pa: &[usize], pb: &[usize]) -> PathIso {
        let mut isos: Vec<KIso> = self.isos.iter().map(|k| k.rename(pa, pb)).collect();
        isos.sort_by_key(|k| k.source);
        PathIso { isos }
    }

    pub fn validate(&self, a: &Arena, b: &Arena) -> bool {
        let sources: Vec<usize> = self.isos.iter().map(|k| k.source).collect();
        let mut targets: Vec<usize> = self.isos.iter().map(|k| k.target).collect();
        targets.sort_unstable();
        sources == a.initials() && targets == b.initials() && self.isos.iter().all(|k| k.validate(a, b))
    }
}

/// Disjoint union of arenas with per-round class assignments.
struct Refinement {
    qa: Vec<Kind>,
    children: Vec<Vec<usize>>,
    offsets: Vec<usize>,
    labelled: bool,
    /// `rounds[k][v]` is the `≃_k` class of `v`.
    rounds: Vec<Vec<usize>>,
}

impl Refinement {
    fn new(arenas: &[&Arena], labelled: bool) -> Refinement {
        let mut qa = Vec::new();
        let mut children = Vec::new();
        let mut offsets = Vec::new();
        for a in arenas {
            let off = qa.len();
            offsets.push(off);
            for m in 0..a.len() {
                qa.push(a.qa(m));
                children.push(a.children(m).iter().map(|&c| c + off).collect());
            }
        }
        let n = qa.len();
        Refinement { qa, children, offsets, labelled, rounds: vec![vec![0; n]] }
    }

    fn label(&self, v: usize) -> Option<Kind> {
        self.labelled.then_some(self.qa[v])
    }

    fn step(&mut self) -> bool {
        let prev = self.rounds.last().expect("round 0 exists");
        let keys: Vec<Vec<(Option<Kind>, usize)>> = (0..self.qa.len())
            .map(|v| {
                let mut k: Vec<_> = self.children[v].iter().map(|&c| (self.label(c), prev[c])).collect();
                k.sort_unstable();
                k
            })
            .collect();
        let mut ids: BTreeMap<&Vec<(Option<Kind>, usize)>, usize> = BTreeMap::new();
        for k in &keys {
            let next = ids.len();
            ids.entry(k).or_insert(next);
        }
        let count_before = count_classes(prev);
        let next: Vec<usize> = keys.iter().map(|k| ids[k]).collect();
        let changed = ids.len() != count_before;
        self.rounds.push(next);
        changed
    }

    fn run(&mut self, k: usize) {
        while self.rounds.len() <= k {
            self.step();
        }
    }

    /// Refines until stable; the last round is then `⋂_k ≃_k`.
    fn fixpoint(&mut self) -> &[usize] {
        while self.step() {}
        self.rounds.last().expect("nonempty")
    }

    /// A `k`-isomorphism between two equivalent vertices, children matched
    /// class by class in index order.
    fn witness(&self, u: usize, v: usize, k: usize, ou: usize, ov: usize) -> KIso {
        if k == 0 {
            return KIso::empty(u - ou, v - ov);
        }
        let round = &self.rounds[(k - 1).min(self.rounds.len() - 1)];
        let mut pool: BTreeMap<(Option<Kind>, usize), Vec<usize>> = BTreeMap::new();
        for &c in self.children[v].iter().rev() {
            pool.entry((self.label(c), round[c])).or_default().push(c);
        }
        let children = self.children[u]
            .iter()
            .map(|&c| {
                let d = pool.get_mut(&(self.label(c), round[c])).and_then(Vec::pop).expect("equal classes match");
                self.witness(c, d, k - 1, ou, ov)
            })
            .collect();
        KIso { depth: k, source: u - ou, target: v - ov, children }
    }
}

fn count_classes(round: &[usize]) -> usize {
    round.iter().copied().max().map_or(0, |m| m + 1)
}

fn k_iso_with(a: &Arena, m: usize, b: &Arena, n: usize, k: usize, labelled: bool) -> Option<KIso> {
    let mut r = Refinement::new(&[a, b], labelled);
    r.run(k);
    let (oa, ob) = (r.offsets[0], r.offsets[1]);
    (r.rounds[k][m + oa] == r.rounds[k][n + ob]).then(|| r.witness(m + oa, n + ob, k, oa, ob))
}

/// A `k`-isomorphism from `m` in `a` to `n` in `b` preserving the
/// question/answer label of every matched move.
pub fn k_iso(a: &Arena, m: usize, b: &Arena, n: usize, k: usize) -> Option<KIso> {
    k_iso_with(a, m, b, n, k, true)
}

/// The unlabelled variant: bare tree isomorphism of the unfoldings, for
/// which `≃_1` is equality of arity.
pub fn k_iso_shape(a: &Arena, m: usize, b: &Arena, n: usize, k: usize) -> Option<KIso> {
    k_iso_with(a, m, b, n, k, false)
}

/// A decided path isomorphism, unfoldable to any depth.
#[derive(Clone, Debug)]
pub struct PathIsoWitness {
    refinement: std::sync::Arc<RefinementData>,
    /// Initial move pairs `(in a, in b)`, sorted.
    pub initials: Vec<(usize, usize)>,
}

#[derive(Debug)]
struct RefinementData {
    qa: Vec<Kind>,
    children: Vec<Vec<usize>>,
    classes: Vec<usize>,
    offsets: [usize; 2],
}

impl PathIsoWitness {
    pub fn unfold(&self, depth: usize) -> PathIso {
        let d = &self.refinement;
        PathIso { isos: self.initials.iter().map(|&(i, j)| self.tree(i + d.offsets[0], j + d.offsets[1], depth)).collect() }
    }

    fn tree(&self, u: usize, v: usize, depth: usize) -> KIso {
        let d = &self.refinement;
        let [ou, ov] = d.offsets;
        if depth == 0 {
            return KIso::empty(u - ou, v - ov);
        }
        let mut pool: BTreeMap<(Kind, usize), Vec<usize>> = BTreeMap::new();
        for &c in d.children[v].iter().rev() {
            pool.entry((d.qa[c], d.classes[c])).or_default().push(c);
        }
        let children = d.children[u]
            .iter()
            .map(|&c| {
                let e = pool.get_mut(&(d.qa[c], d.classes[c])).and_then(Vec::pop).expect("stable classes match");
                self.tree(c, e, depth - 1)
            })
            .collect();
        KIso { depth, source: u - ou, target: v - ov, children }
    }
}

/// Decides whether the path trees of `a` and `b` are isomorphic, returning
/// a witness matching initial moves and children class by class.
pub fn path_iso_decide(a: &Arena, b: &Arena) -> Option<PathIsoWitness> {
    if a.initials().len() != b.initials().len() {
        return None;
    }
    let mut r = Refinement::new(&[a, b], true);
    let classes = r.fixpoint().to_vec();
    let (oa, ob) = (r.offsets[0], r.offsets[1]);
    let mut pool: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &j in b.initials().iter().rev() {
        pool.entry(classes[j + ob]).or_default().push(j);
    }
    let initials = a
        .initials()
        .iter()
        .map(|&i| Some((i, pool.get_mut(&classes[i + oa])?.pop()?)))
        .collect::<Option<Vec<_>>>()?;
    let data = RefinementData { qa: r.qa, children: r.children, classes, offsets: [oa, ob] };
    Some(PathIsoWitness { refinement: std::sync::Arc::new(data), initials })
}

/// A bijection on family indices with a path isomorphism per component.
#[derive(Clone, Debug)]
pub struct FamilyIso {
    /// `bijection[i]` is the index in the target family matched with `i`.
    pub bijection: Vec<usize>,
    pub components: Vec<PathIsoWitness>,
}

/// Matches the components of two finite families up to path isomorphism.
/// Path isomorphism is an equivalence, so greedy matching is complete.
pub fn family_iso_decide(fa: &[Arena], fb: &[Arena]) -> Option<FamilyIso> {
    if fa.len() != fb.len() {
        return None;
    }
    let mut used = vec![false; fb.len()];
    let mut bijection = Vec::with_capacity(fa.len());
    let mut components = Vec::with_capacity(fa.len());
    for a in fa {
        let (j, w) = fb.iter().enumerate().filter(|(j, _)| !used[*j]).find_map(|(j, b)| Some((j, path_iso_decide(a, b)?)))?;
        used[j] = true;
        bijection.push(j);
        components.push(w);
    }
    Some(FamilyIso { bijection, components })
}
