//! From strategy isomorphisms to combinatorial morphisms and back.
//!
//! A sequential morphism maps threads of the source arena (justified,
//! single initial move, with no alternation or bracketing requirement) to
//! threads of the target. An isomorphism strategy induces one by lifting;
//! a path morphism extends to one move by move. Slicing chases turn the
//! induced bijections between one-move extensions into tree isomorphisms.

mod graph;
mod slice;

pub use graph::{build_slicing_graph, extract_k_iso, extract_path_iso, required_bound, Extractor, SlicingGraph};
pub use slice::{find_nonfunctoriality, slice_iso, Bijection, NonFunctoriality, Slice};

use crate::arena::{Arena, PathIso, Polarity};
use crate::plays::{self, path_play, Arrow, Entry, Play, Side};
use crate::strategy::{thread_local, Strategy, StrategyError};
use std::sync::Arc;
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ExtractError {
    #[error("cannot lift {0:?}: the strategy is not half of an isomorphism")]
    LiftFailed(Play),
    #[error("image of {0:?} does not extend the image of its prefix")]
    NotSequential(Play),
    #[error("{0:?} is not a thread of the source arena")]
    NotThread(Play),
    #[error("{0:?} is not a path")]
    NotPath(Vec<usize>),
    #[error("induced map on extensions of {0:?} is not a bijection")]
    NotBijective(Play),
    #[error("chase from {start:?} did not reach a new extension: {path:?}")]
    ChaseDiverged { start: Entry, path: Vec<Entry> },
    #[error("slicing precondition violated: {0}")]
    Precondition(String),
    #[error(transparent)]
    Strategy(#[from] StrategyError),
}

/// A map from threads of `source` to threads of `target` commuting with
/// `ip` and preserving question/answer labels.
pub trait SeqMorphism: Send + Sync {
    fn source(&self) -> &Arena;
    fn target(&self) -> &Arena;
    fn apply(&self, s: &Play) -> Result<Play, ExtractError>;
}

/// Every thread of `a` up to length `max`: a single initial move, then
/// arbitrary justified moves.
pub fn pre_threads(a: &Arena, max: usize) -> Vec<Play> {
    let mut out = vec![Play::new()];
    let mut frontier: Vec<Play> = a.initials().iter().map(|&i| Play(vec![Entry::new(i, None)])).collect();
    while let Some(s) = frontier.pop() {
        if s.len() > max {
            continue;
        }
        if s.len() < max {
            frontier.extend(plays::extensions(a, &s).into_iter().map(|e| s.extended(e)));
        }
        out.push(s);
    }
    out.sort();
    out
}

/// Checks `ip ∘ φ = φ ∘ ip`, label preservation and, when `justified`,
/// `jp ∘ φ = φ ∘ jp` on the given threads.
pub fn check_morphism(phi: &dyn SeqMorphism, threads: &[Play], justified: bool) -> Result<(), ExtractError> {
    for s in threads {
        let image = phi.apply(s)?;
        if image.len() != s.len() || !plays::is_justified(phi.target(), &image) || phi.apply(&s.ip())? != image.ip() {
            return Err(ExtractError::NotSequential(s.clone()));
        }
        if let (Some(x), Some(y)) = (s.last(), image.last()) {
            let labels = phi.source().qa(x.mv) == phi.target().qa(y.mv);
            let pointers = !justified || x.justifier == y.justifier;
            if !labels || !pointers {
                return Err(ExtractError::NotSequential(s.clone()));
            }
        }
    }
    Ok(())
}

pub struct IdentityMorphism {
    arena: Arena,
}

impl IdentityMorphism {
    pub fn new(arena: Arena) -> Self {
        IdentityMorphism { arena }
    }
}

impl SeqMorphism for IdentityMorphism {
    fn source(&self) -> &Arena {
        &self.arena
    }
    fn target(&self) -> &Arena {
        &self.arena
    }
    fn apply(&self, s: &Play) -> Result<Play, ExtractError> {
        Ok(s.clone())
    }
}

type ThreadMap = dyn Fn(&Play) -> Result<Play, ExtractError> + Send + Sync;

/// A morphism given by a function, for hand-made fixtures.
pub struct FnMorphism {
    source: Arena,
    target: Arena,
    f: Box<ThreadMap>,
}

impl FnMorphism {
    pub fn new(source: Arena, target: Arena, f: impl Fn(&Play) -> Result<Play, ExtractError> + Send + Sync + 'static) -> Self {
        FnMorphism { source, target, f: Box::new(f) }
    }
}

impl SeqMorphism for FnMorphism {
    fn source(&self) -> &Arena {
        &self.source
    }
    fn target(&self) -> &Arena {
        &self.target
    }
    fn apply(&self, s: &Play) -> Result<Play, ExtractError> {
        (self.f)(s)
    }
}

/// `ψ ∘ φ`.
pub struct Composed {
    first: Arc<dyn SeqMorphism>,
    second: Arc<dyn SeqMorphism>,
}

impl Composed {
    pub fn new(first: Arc<dyn SeqMorphism>, second: Arc<dyn SeqMorphism>) -> Self {
        Composed { first, second }
    }
}

impl SeqMorphism for Composed {
    fn source(&self) -> &Arena {
        self.first.source()
    }
    fn target(&self) -> &Arena {
        self.second.target()
    }
    fn apply(&self, s: &Play) -> Result<Play, ExtractError> {
        self.second.apply(&self.first.apply(s)?)
    }
}

/// `φ_σ`: a thread `s` of `A` lifts to the unique play `s'` of `σ` with
/// `s'↾A = s`, and maps to `s'↾B`.
pub struct Lifting {
    sigma: Strategy,
}

impl Lifting {
    pub fn new(sigma: Strategy) -> Self {
        Lifting { sigma }
    }

    pub fn strategy(&self) -> &Strategy {
        &self.sigma
    }

    /// The play of `σ` over `s`. Player's moves in `A` are answered by
    /// `σ`; before Opponent's moves in `A` the unique Opponent move in `B`
    /// provoking them is found by trying each candidate.
    pub fn lift(&self, s: &Play) -> Result<Play, ExtractError> {
        let g = self.sigma.game();
        let arena = &g.arena;
        if s.initial_count() > 1 || s.0.first().is_some_and(|e| e.justifier.is_some()) {
            return Err(ExtractError::NotThread(s.clone()));
        }
        let fail = |n: usize| ExtractError::LiftFailed(s.prefix(n));
        let mut lifted = Play::new();
        let mut at: Vec<usize> = Vec::with_capacity(s.len());
        for (i, e) in s.0.iter().enumerate() {
            if e.mv >= g.left.len() {
                return Err(ExtractError::NotThread(s.clone()));
            }
            let mv = g.global(Side::Left, e.mv);
            let just = e.justifier.map(|j| at[j]);
            if arena.op(mv) == Polarity::O {
                lifted.push(Entry::new(mv, just));
                at.push(lifted.len() - 1);
                let r = self.sigma.respond(&lifted).filter(|r| g.side(r.mv) == Side::Right).ok_or_else(|| fail(i + 1))?;
                lifted.push(r);
                continue;
            }
            let here = lifted.len();
            let want = Entry::new(mv, Some(just.unwrap_or(here)));
            let provoking = right_opponent_moves(g, &lifted)
                .into_iter()
                .filter(|b| just.is_some() || b.justifier.is_none())
                .find(|&b| self.sigma.respond(&lifted.extended(b)) == Some(want))
                .ok_or_else(|| fail(i + 1))?;
            lifted.push(provoking);
            lifted.push(want);
            at.push(here + 1);
        }
        Ok(lifted)
    }
}

/// Opponent moves on the right justified by earlier moves (or initial on
/// the empty play), bracketing ignored.
fn right_opponent_moves(g: &Arrow, s: &Play) -> Vec<Entry> {
    let a = &g.arena;
    let mut out: Vec<Entry> = Vec::new();
    if s.is_empty() {
        out.extend(a.initials().iter().map(|&i| Entry::new(i, None)));
    }
    for (j, e) in s.0.iter().enumerate() {
        for &c in a.children(e.mv) {
            if g.side(c) == Side::Right && a.op(c) == Polarity::O {
                out.push(Entry::new(c, Some(j)));
            }
        }
    }
    out
}

impl SeqMorphism for Lifting {
    fn source(&self) -> &Arena {
        &self.sigma.game().left
    }
    fn target(&self) -> &Arena {
        &self.sigma.game().right
    }
    fn apply(&self, s: &Play) -> Result<Play, ExtractError> {
        let lifted = self.lift(s)?;
        Ok(self.sigma.game().restrict(&lifted, Side::Right))
    }
}

/// `F(σ)`.
pub fn strategy_to_seq_morphism(sigma: &Strategy) -> Lifting {
    Lifting::new(sigma.clone())
}

/// `G(φ)`: on each thread Player keeps `φ(s↾A) = s↾B`.
pub fn seq_morphism_to_strategy(phi: Arc<dyn SeqMorphism>) -> Strategy {
    let game = Arrow::new(phi.source().clone(), phi.target().clone());
    let g = game.clone();
    let reply = move |t: &Play| -> Option<Entry> {
        let p = t.len() - 1;
        let left = g.positions(t, Side::Left);
        let right = g.positions(t, Side::Right);
        let (ta, tb) = (g.restrict(t, Side::Left), g.restrict(t, Side::Right));
        if g.side(t.0[p].mv) == Side::Left {
            let image = phi.apply(&ta).ok()?;
            if image.len() != tb.len() + 1 || image.ip() != tb {
                return None;
            }
            let b = *image.last()?;
            return Some(Entry::new(g.global(Side::Right, b.mv), Some(right[b.justifier?])));
        }
        let candidates: Vec<Entry> = if ta.is_empty() {
            phi.source().initials().iter().map(|&i| Entry::new(i, None)).collect()
        } else {
            plays::extensions(phi.source(), &ta)
        };
        let a = candidates.into_iter().find(|&a| phi.apply(&ta.extended(a)).is_ok_and(|im| im == tb))?;
        let j = match a.justifier {
            Some(j) => left[j],
            None if t.0[p].justifier.is_none() => p,
            None => return None,
        };
        Some(Entry::new(g.global(Side::Left, a.mv), Some(j)))
    };
    Strategy::from_oracle(game, thread_local(reply))
}

/// A map on paths, given by their moves.
pub trait PathMorphism: Send + Sync {
    fn apply_path(&self, path: &[usize]) -> Result<Vec<usize>, ExtractError>;
}

impl PathMorphism for PathIso {
    fn apply_path(&self, path: &[usize]) -> Result<Vec<usize>, ExtractError> {
        self.apply(path).ok_or_else(|| ExtractError::NotPath(path.to_vec()))
    }
}

/// `H(φ)`: the restriction of a justified morphism to paths.
pub struct OnPaths {
    phi: Arc<dyn SeqMorphism>,
}

impl PathMorphism for OnPaths {
    fn apply_path(&self, path: &[usize]) -> Result<Vec<usize>, ExtractError> {
        let image = self.phi.apply(&path_play(path))?;
        if !plays::is_path(self.phi.target(), &image) {
            return Err(ExtractError::NotPath(image.moves()));
        }
        Ok(image.moves())
    }
}

pub fn restrict_to_paths(phi: Arc<dyn SeqMorphism>) -> OnPaths {
    OnPaths { phi }
}

/// `φ*`: each move becomes the last move of the image of its path and
/// keeps its pointer.
pub struct PathExtension {
    source: Arena,
    target: Arena,
    paths: Arc<dyn PathMorphism>,
}

impl SeqMorphism for PathExtension {
    fn source(&self) -> &Arena {
        &self.source
    }
    fn target(&self) -> &Arena {
        &self.target
    }
    fn apply(&self, s: &Play) -> Result<Play, ExtractError> {
        let mut out = Play::new();
        for p in 0..s.len() {
            let mut path = vec![s.0[p].mv];
            let mut k = p;
            while let Some(j) = s.0[k].justifier {
                path.push(s.0[j].mv);
                k = j;
            }
            path.reverse();
            let image = self.paths.apply_path(&path)?;
            out.push(Entry::new(*image.last().ok_or_else(|| ExtractError::NotPath(path.clone()))?, s.0[p].justifier));
        }
        Ok(out)
    }
}

pub fn extend_path_morphism(source: Arena, target: Arena, paths: Arc<dyn PathMorphism>) -> PathExtension {
    PathExtension { source, target, paths }
}

/// Every path of `a` with at most `max` moves.
pub fn paths_up_to(a: &Arena, max: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut stack: Vec<Vec<usize>> = a.initials().iter().map(|&i| vec![i]).collect();
    while let Some(p) = stack.pop() {
        if p.len() < max {
            let last = *p.last().expect("nonempty");
            stack.extend(a.children(last).iter().map(|&c| [p.as_slice(), &[c]].concat()));
        }
        out.push(p);
    }
    out.sort();
    out
}
