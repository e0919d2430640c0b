//! Strategies on arrow games, explored to a bound.
//!
//! A strategy answers O-ending plays with an optional Player move. Explicit
//! strategies carry a finite table; oracle strategies compute the answer
//! from the whole play, so history-sensitive behaviour needs no state.

mod compose;
mod fixtures;

pub use compose::compose;
pub(crate) use fixtures::thread_local;
pub use fixtures::{
    cell, copycat, involution_i, nat_index, hotel_strategies, relabel, DefaultHotel, HotelBijection, HotelRoom,
    Involution, ShiftedHotel,
};

use crate::arena::{Arena, Polarity};
use crate::plays::{self, Arrow, Entry, Play, PlayError};
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

/// Format tag of strategy dumps.
pub const STRATEGY_FORMAT: &str = "gamiso-strategy/1";

pub type Oracle = Arc<dyn Fn(&Play) -> Option<Entry> + Send + Sync>;

#[derive(Clone)]
enum Repr {
    /// O-ending play ↦ Player's reply.
    Explicit(Arc<BTreeMap<Play, Entry>>),
    Oracle(Oracle),
}

#[derive(Clone)]
pub struct Strategy {
    game: Arc<Arrow>,
    repr: Repr,
}

impl fmt::Debug for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match &self.repr {
            Repr::Explicit(m) => format!("explicit({} replies)", m.len()),
            Repr::Oracle(_) => "oracle".to_string(),
        };
        write!(f, "Strategy({kind} on {} ⇒ {} moves)", self.game.left.len(), self.game.right.len())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum StrategyError {
    #[error("strategy answered {play:?} with an illegal move {reply:?}")]
    IllegalReply { play: Play, reply: Entry },
    #[error("play {0:?} is not legal")]
    IllegalPlay(Play),
    #[error("play {0:?} does not end with a Player move")]
    NotPlayerEnding(Play),
    #[error("plays are not deterministic after {0:?}")]
    Nondeterministic(Play),
    #[error("prefix {0:?} is missing")]
    NotPrefixClosed(Play),
    #[error("middle arenas differ")]
    MismatchedMiddle,
    #[error(transparent)]
    Play(#[from] PlayError),
    #[error("malformed strategy document: {0}")]
    Format(String),
}

/// Which O-ending plays are explored: total length of the Player-ending
/// plays, whether Opponent may open new threads, and an optional filter on
/// Opponent moves (global indices in the game arena).
#[derive(Clone)]
pub struct Bounds {
    pub length: usize,
    pub threads_only: bool,
    pub opponent: Option<Arc<dyn Fn(&Arena, usize) -> bool + Send + Sync>>,
}

impl Bounds {
    pub fn new(length: usize) -> Bounds {
        Bounds { length, threads_only: false, opponent: None }
    }

    pub fn threads(mut self) -> Bounds {
        self.threads_only = true;
        self
    }

    pub fn filter(mut self, f: impl Fn(&Arena, usize) -> bool + Send + Sync + 'static) -> Bounds {
        self.opponent = Some(Arc::new(f));
        self
    }

    /// Opponent natural number indices strictly below `n`.
    pub fn nat_below(self, n: usize) -> Bounds {
        self.filter(move |a, m| nat_index(&a.get(m).id).is_none_or(|k| k < n))
    }

    fn opponent_moves(&self, arena: &Arena, s: &Play) -> Vec<Entry> {
        let mut v = plays::next_moves(arena, s, self.threads_only);
        if let Some(f) = &self.opponent {
            v.retain(|e| f(arena, e.mv));
        }
        v
    }
}

impl fmt::Debug for Bounds {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Bounds(length {}, threads_only {}, filtered {})", self.length, self.threads_only, self.opponent.is_some())
    }
}

impl Strategy {
    pub fn from_oracle(game: Arrow, f: impl Fn(&Play) -> Option<Entry> + Send + Sync + 'static) -> Strategy {
        Strategy { game: Arc::new(game), repr: Repr::Oracle(Arc::new(f)) }
    }

    /// The strategy whose Player-ending plays are `plays` and their even
    /// prefixes. Plays must be legal and agree wherever they overlap.
    pub fn explicit(game: Arrow, plays: impl IntoIterator<Item = Play>) -> Result<Strategy, StrategyError> {
        let mut table = BTreeMap::new();
        for s in plays {
            if !plays::is_legal(&game.arena, &s) {
                return Err(StrategyError::IllegalPlay(s));
            }
            if s.len() % 2 == 1 {
                return Err(StrategyError::NotPlayerEnding(s));
            }
            for n in (2..=s.len()).step_by(2) {
                let reply = s.0[n - 1];
                match table.insert(s.prefix(n - 1), reply) {
                    Some(old) if old != reply => return Err(StrategyError::Nondeterministic(s.prefix(n - 1))),
                    _ => {}
                }
            }
        }
        Ok(Strategy { game: Arc::new(game), repr: Repr::Explicit(Arc::new(table)) })
    }

    /// Like [`Strategy::explicit`] but rejects sets that are not closed
    /// under even prefixes.
    pub fn from_play_set(game: Arrow, plays: &[Play]) -> Result<Strategy, StrategyError> {
        let set: BTreeSet<&Play> = plays.iter().collect();
        for s in plays {
            for n in (0..s.len()).step_by(2) {
                let p = s.prefix(n);
                if !set.contains(&p) {
                    return Err(StrategyError::NotPrefixClosed(p));
                }
            }
        }
        Strategy::explicit(game, plays.iter().cloned())
    }

    pub fn game(&self) -> &Arrow {
        &self.game
    }

    pub fn arena(&self) -> &Arena {
        &self.game.arena
    }

    pub fn is_explicit(&self) -> bool {
        matches!(self.repr, Repr::Explicit(_))
    }

    /// Player's reply to an O-ending play.
    pub fn respond(&self, s: &Play) -> Option<Entry> {
        match &self.repr {
            Repr::Explicit(t) => t.get(s).copied(),
            Repr::Oracle(f) => f(s),
        }
    }

    /// `s ∈ σ`: every Player move of `s` is the strategy's reply.
    pub fn contains(&self, s: &Play) -> bool {
        if s.len() % 2 == 1 || !plays::is_legal(self.arena(), s) {
            return false;
        }
        (1..s.len()).step_by(2).all(|p| self.respond(&s.prefix(p)) == Some(s.0[p]))
    }

    /// Walks every O-ending play within `bounds` reachable through replies,
    /// reporting each with the reply (if any). Replies are checked legal.
    pub fn walk(&self, bounds: &Bounds, visit: &mut dyn FnMut(&Play, Option<Entry>)) -> Result<(), StrategyError> {
        let mut s = Play::new();
        self.walk_from(&mut s, bounds, visit)
    }

    fn walk_from(&self, s: &mut Play, b: &Bounds, visit: &mut dyn FnMut(&Play, Option<Entry>)) -> Result<(), StrategyError> {
        if s.len() + 2 > b.length {
            return Ok(());
        }
        let arena = &self.game.arena;
        for o in b.opponent_moves(arena, s) {
            s.push(o);
            let reply = self.respond(s);
            visit(s, reply);
            if let Some(r) = reply {
                let legal = arena.op(r.mv) == Polarity::P && plays::next_moves(arena, s, false).contains(&r);
                if !legal {
                    return Err(StrategyError::IllegalReply { play: s.clone(), reply: r });
                }
                s.push(r);
                self.walk_from(s, b, visit)?;
                s.0.pop();
            }
            s.0.pop();
        }
        Ok(())
    }

    /// Every Player-ending play within `bounds`, `ε` included, sorted.
    pub fn materialize(&self, bounds: &Bounds) -> Result<Vec<Play>, StrategyError> {
        let mut out = vec![Play::new()];
        self.walk(bounds, &mut |s, r| {
            if let Some(r) = r {
                out.push(s.extended(r));
            }
        })?;
        out.sort();
        Ok(out)
    }

    /// The explicit strategy of the plays within `bounds`.
    pub fn to_explicit(&self, bounds: &Bounds) -> Result<Strategy, StrategyError> {
        Strategy::explicit((*self.game).clone(), self.materialize(bounds)?)
    }

    /// An O-ending play within `bounds` with no reply, if any.
    pub fn totality_gap(&self, bounds: &Bounds) -> Result<Option<Play>, StrategyError> {
        let mut gap = None;
        self.walk(bounds, &mut |s, r| {
            if r.is_none() && gap.is_none() {
                gap = Some(s.clone());
            }
        })?;
        Ok(gap)
    }

    pub fn to_json(&self, bounds: &Bounds) -> Result<serde_json::Value, StrategyError> {
        let plays: Vec<serde_json::Value> = self.materialize(bounds)?.iter().map(|s| s.to_json(&self.game.arena)).collect();
        Ok(serde_json::json!({ "format": STRATEGY_FORMAT, "plays": plays }))
    }

    pub fn from_json(game: Arrow, v: &serde_json::Value) -> Result<Strategy, StrategyError> {
        if v["format"] != STRATEGY_FORMAT {
            return Err(StrategyError::Format(format!("expected format `{STRATEGY_FORMAT}`")));
        }
        let list = v["plays"].as_array().ok_or_else(|| StrategyError::Format("missing `plays`".into()))?;
        let plays = list.iter().map(|p| Play::from_json(&game.arena, p)).collect::<Result<Vec<_>, _>>()?;
        Strategy::from_play_set(game, &plays)
    }
}

/// Interprets the plays as a strategy on `game` after checking the
/// defining conditions: nonempty, prefix-closed, deterministic, legal.
pub fn is_strategy(game: &Arrow, plays: &[Play]) -> bool {
    !plays.is_empty() && Strategy::from_play_set(game.clone(), plays).is_ok()
}

/// The first O-ending play within `bounds` where the strategies reply
/// differently, searching both trees at once.
pub fn first_difference(a: &Strategy, b: &Strategy, bounds: &Bounds) -> Option<Play> {
    fn go(a: &Strategy, b: &Strategy, s: &mut Play, bounds: &Bounds) -> Option<Play> {
        if s.len() + 2 > bounds.length {
            return None;
        }
        for o in bounds.opponent_moves(a.arena(), s) {
            s.push(o);
            let (ra, rb) = (a.respond(s), b.respond(s));
            if ra != rb {
                return Some(s.clone());
            }
            if let Some(r) = ra {
                s.push(r);
                if let Some(d) = go(a, b, s, bounds) {
                    return Some(d);
                }
                s.0.pop();
            }
            s.0.pop();
        }
        None
    }
    go(a, b, &mut Play::new(), bounds)
}

/// Same Player-ending plays within `bounds`.
pub fn equals_up_to(a: &Strategy, b: &Strategy, bounds: &Bounds) -> bool {
    a.arena() == b.arena() && first_difference(a, b, bounds).is_none()
}

/// Every complete play of `a` within `bounds` is a play of `b`.
pub fn comp_preorder(a: &Strategy, b: &Strategy, bounds: &Bounds) -> Result<bool, StrategyError> {
    Ok(a.materialize(bounds)?.iter().filter(|s| plays::is_complete(a.arena(), s)).all(|s| b.contains(s)))
}

fn replies(plays_: &[Play]) -> impl Iterator<Item = (Play, Entry)> + '_ {
    plays_.iter().filter(|s| !s.is_empty()).map(|s| (s.ip(), *s.last().expect("nonempty")))
}

/// Player points into the current thread and replies as it would on the
/// thread alone.
pub fn is_single_threaded(sigma: &Strategy, bounds: &Bounds) -> Result<bool, StrategyError> {
    let all = sigma.materialize(bounds)?;
    let mut by_thread: HashMap<Play, Entry> = HashMap::new();
    for (sa, b) in replies(&all) {
        let pos = plays::current_thread_positions(&sa)?;
        let Some(j) = b.justifier.and_then(|j| pos.iter().position(|&p| p == j)) else {
            return Ok(false);
        };
        let thread = sa.select(&pos);
        let local = Entry::new(b.mv, Some(j));
        if *by_thread.entry(thread.clone()).or_insert(local) != local || !sigma.contains(&thread.extended(local)) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Player always points inside its P-view.
pub fn is_visible(sigma: &Strategy, bounds: &Bounds) -> Result<bool, StrategyError> {
    let all = sigma.materialize(bounds)?;
    let visible = replies(&all).all(|(sa, b)| b.justifier.is_some_and(|j| plays::p_view_positions(sigma.arena(), &sa).contains(&j)));
    Ok(visible)
}

/// Plays with equal P-views get equal replies (pointers read in the view).
pub fn is_innocent(sigma: &Strategy, bounds: &Bounds) -> Result<bool, StrategyError> {
    let all = sigma.materialize(bounds)?;
    let mut by_view: HashMap<Play, Entry> = HashMap::new();
    for (sa, b) in replies(&all) {
        let pos = plays::p_view_positions(sigma.arena(), &sa);
        let Some(j) = b.justifier.and_then(|j| pos.iter().position(|&p| p == j)) else {
            return Ok(false);
        };
        let local = Entry::new(b.mv, Some(j));
        if *by_view.entry(sa.select(&pos)).or_insert(local) != local {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `σ;τ = id` and `τ;σ = id` within `bounds`.
pub fn is_iso_pair(sigma: &Strategy, tau: &Strategy, bounds: &Bounds) -> Result<bool, StrategyError> {
    let there = compose(sigma, tau)?;
    let back = compose(tau, sigma)?;
    let ida = copycat(&sigma.game().left);
    let idb = copycat(&sigma.game().right);
    Ok(equals_up_to(&there, &ida, bounds) && equals_up_to(&back, &idb, bounds))
}
