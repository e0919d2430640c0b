//! Bipartite chase graphs and the tree isomorphisms read off them.
//!
//! For a thread `s` and an extension `sa`, the vertices are the one-move
//! extensions of `sa` in the source and of `φ(sa)` in the target. Each
//! source vertex `x` points to the last move of `φ(sa·x)`; each target
//! vertex `y` extending `φ(s)` points back to the `x` with `φ(s·x) = φ(s)·y`.
//! Sinks are the target moves justified by the image `b` of `a`, and
//! chasing from a move justified by `a` lands on one of them.

use super::{ExtractError, Lifting, SeqMorphism};
use crate::arena::{KIso, PathIso};
use crate::plays::{self, Entry, Play};
use crate::strategy::Strategy;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

#[derive(Clone, Debug)]
pub struct SlicingGraph {
    pub s: Play,
    pub a: Entry,
    /// The last move of `φ(sa)`.
    pub b: Entry,
    /// Extensions of `sa`, with their image under `φ` when it exists.
    pub forward: BTreeMap<Entry, Option<Entry>>,
    /// Target extensions of `φ(s)` and the source extension mapped to them.
    pub back: BTreeMap<Entry, Entry>,
    /// Extensions of `φ(sa)`.
    pub targets: BTreeSet<Entry>,
}

impl SlicingGraph {
    fn boundary(&self) -> usize {
        self.s.len()
    }

    /// Target vertices justified by `b`.
    pub fn j_b(&self) -> BTreeSet<Entry> {
        self.targets.iter().filter(|y| y.justifier == Some(self.boundary())).copied().collect()
    }

    /// Source vertices justified by `a`.
    pub fn j_a(&self) -> Vec<Entry> {
        self.forward.keys().filter(|x| x.justifier == Some(self.boundary())).copied().collect()
    }

    /// Vertices without an outgoing edge.
    pub fn sinks(&self) -> BTreeSet<Entry> {
        let mut out: BTreeSet<Entry> = self.targets.iter().filter(|y| !self.back.contains_key(y)).copied().collect();
        out.extend(self.forward.iter().filter(|(_, y)| y.is_none()).map(|(x, _)| *x));
        out
    }

    /// The alternating walk `x_0 y_0 x_1 y_1 … y_n` ending in `J_b`.
    pub fn chase(&self, start: Entry) -> Result<Vec<Entry>, ExtractError> {
        let limit = self.back.len() + 1;
        let mut path = vec![start];
        let mut x = start;
        for _ in 0..limit {
            let diverged = |path: &[Entry]| ExtractError::ChaseDiverged { start, path: path.to_vec() };
            let y = self.forward.get(&x).copied().flatten().ok_or_else(|| diverged(&path))?;
            path.push(y);
            if y.justifier == Some(self.boundary()) {
                return Ok(path);
            }
            x = *self.back.get(&y).ok_or_else(|| diverged(&path))?;
            path.push(x);
        }
        Err(ExtractError::ChaseDiverged { start, path })
    }

    /// Edges are functional by construction; checks that the sinks are
    /// exactly `J_b`, that every chase from `J_a` terminates there and
    /// that the induced map `J_a → J_b` is a bijection.
    pub fn validate(&self) -> Result<BTreeMap<Entry, Entry>, ExtractError> {
        let stuck = || ExtractError::NotBijective(self.s.extended(self.a));
        if self.sinks() != self.j_b() {
            return Err(stuck());
        }
        let mut map = BTreeMap::new();
        for x in self.j_a() {
            let path = self.chase(x)?;
            map.insert(x, *path.last().expect("nonempty"));
        }
        let image: BTreeSet<Entry> = map.values().copied().collect();
        if image != self.j_b() {
            return Err(stuck());
        }
        Ok(map)
    }
}

/// The chase graph of `φ` at `(s, sa)`. Source extensions whose image
/// cannot be computed get no outgoing edge.
pub fn build_slicing_graph(phi: &dyn SeqMorphism, s: &Play, sa: &Play) -> Result<SlicingGraph, ExtractError> {
    if sa.ip() != *s || sa.is_empty() {
        return Err(ExtractError::Precondition("sa must extend s by one move".into()));
    }
    let a = *sa.last().expect("nonempty");
    let image_s = phi.apply(s)?;
    let image_sa = phi.apply(sa)?;
    if image_sa.ip() != image_s {
        return Err(ExtractError::NotSequential(sa.clone()));
    }
    let b = *image_sa.last().expect("same length");
    let last_of = |t: &Play, base: &Play| -> Option<Entry> {
        let im = phi.apply(t).ok()?;
        (im.ip() == *base).then(|| *im.last().expect("nonempty"))
    };
    let forward = plays::extensions(phi.source(), sa).into_iter().map(|x| (x, last_of(&sa.extended(x), &image_sa))).collect();
    let mut back = BTreeMap::new();
    for x in plays::extensions(phi.source(), s) {
        if let Some(y) = last_of(&s.extended(x), &image_s) {
            if back.insert(y, x).is_some() {
                return Err(ExtractError::NotBijective(s.clone()));
            }
        }
    }
    let targets = plays::extensions(phi.target(), &image_sa).into_iter().collect();
    Ok(SlicingGraph { s: s.clone(), a, b, forward, back, targets })
}

/// Memoized construction of the coherent families `h^k`.
pub struct Extractor {
    phi: Arc<dyn SeqMorphism>,
    graphs: HashMap<Play, SlicingGraph>,
    isos: HashMap<(Play, usize), KIso>,
}

impl Extractor {
    pub fn new(phi: Arc<dyn SeqMorphism>) -> Self {
        Extractor { phi, graphs: HashMap::new(), isos: HashMap::new() }
    }

    pub fn graph(&mut self, sa: &Play) -> Result<&SlicingGraph, ExtractError> {
        if !self.graphs.contains_key(sa) {
            let g = build_slicing_graph(self.phi.as_ref(), &sa.ip(), sa)?;
            self.graphs.insert(sa.clone(), g);
        }
        Ok(&self.graphs[sa])
    }

    /// `h^k` at `sa`: a `k`-isomorphism from the last move of `sa` to the
    /// last move of `φ(sa)`. Each child is the composite of the labels
    /// along its chase, forward edges labelled one level down at `sa`,
    /// backward edges by inverses one level down at `s`.
    pub fn h(&mut self, sa: &Play, k: usize) -> Result<KIso, ExtractError> {
        if let Some(iso) = self.isos.get(&(sa.clone(), k)) {
            return Ok(iso.clone());
        }
        let g = self.graph(sa)?.clone();
        let iso = if k == 0 {
            KIso::empty(g.a.mv, g.b.mv)
        } else {
            let s = sa.ip();
            let mut children = Vec::new();
            let kids = self.phi.source().children(g.a.mv).to_vec();
            for c in kids {
                let path = g.chase(Entry::new(c, Some(s.len())))?;
                let mut acc: Option<KIso> = None;
                for (i, pair) in path.windows(2).enumerate() {
                    let label = if i % 2 == 0 {
                        self.h(&sa.extended(pair[0]), k - 1)?
                    } else {
                        self.h(&s.extended(pair[1]), k - 1)?.inverse()
                    };
                    acc = Some(match acc {
                        None => label,
                        Some(prev) => prev
                            .compose(&label)
                            .ok_or_else(|| ExtractError::Precondition("chase labels do not compose".into()))?,
                    });
                }
                children.push(acc.expect("chases have at least one edge"));
            }
            KIso { depth: k, source: g.a.mv, target: g.b.mv, children }
        };
        self.isos.insert((sa.clone(), k), iso.clone());
        Ok(iso)
    }
}

/// `h^k` for the extension `sa` of `s`.
pub fn extract_k_iso(phi: Arc<dyn SeqMorphism>, s: &Play, sa: &Play, k: usize) -> Result<KIso, ExtractError> {
    if sa.ip() != *s {
        return Err(ExtractError::Precondition("sa must extend s by one move".into()));
    }
    Extractor::new(phi).h(sa, k)
}

/// Length of the strategy plays the extraction of a depth-`depth`
/// isomorphism inspects: threads of up to `depth + 1` source moves, each
/// lifted to twice as many moves.
pub fn required_bound(depth: usize) -> usize {
    2 * (depth + 1)
}

/// The path isomorphism induced by an isomorphism half `σ`, unfolded to
/// `depth`. The initial bijection is read off one-move threads.
pub fn extract_path_iso(sigma: &Strategy, depth: usize) -> Result<PathIso, ExtractError> {
    let phi: Arc<dyn SeqMorphism> = Arc::new(Lifting::new(sigma.clone()));
    let mut ex = Extractor::new(phi.clone());
    let mut isos = Vec::new();
    let mut hit = BTreeSet::new();
    for &i in phi.source().initials() {
        let t = Play(vec![Entry::new(i, None)]);
        let iso = ex.h(&t, depth)?;
        if !hit.insert(iso.target) {
            return Err(ExtractError::NotBijective(Play::new()));
        }
        isos.push(iso);
    }
    if hit.len() != phi.target().initials().len() {
        return Err(ExtractError::NotBijective(Play::new()));
    }
    Ok(PathIso { isos })
}
