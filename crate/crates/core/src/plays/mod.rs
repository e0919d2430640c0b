//! Justified sequences over an arena and the structure on them: legality,
//! views, threads, restriction to the two sides of an arrow, zig-zag
//! conditions and dual plays.

mod arrow;

pub use arrow::{Arrow, Side};

use crate::arena::{Arena, Kind, Polarity};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// One move occurrence. `justifier` is an absolute position in the
/// enclosing sequence, `None` exactly for initial moves.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Entry {
    pub mv: usize,
    pub justifier: Option<usize>,
}

impl Entry {
    pub fn new(mv: usize, justifier: Option<usize>) -> Entry {
        Entry { mv, justifier }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Play(pub Vec<Entry>);

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum PlayError {
    #[error("empty play")]
    Empty,
    #[error("play is not pre-zig-zag")]
    NotPreZigzag,
    #[error("play has odd length")]
    OddLength,
    #[error("unknown move `{0}`")]
    UnknownMove(String),
    #[error("unknown part `{0}`")]
    BadPart(String),
    #[error("malformed play document: {0}")]
    Format(String),
}

impl Play {
    pub fn new() -> Play {
        Play(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[Entry] {
        &self.0
    }

    pub fn last(&self) -> Option<&Entry> {
        self.0.last()
    }

    pub fn push(&mut self, e: Entry) {
        self.0.push(e);
    }

    pub fn extended(&self, e: Entry) -> Play {
        let mut p = self.clone();
        p.0.push(e);
        p
    }

    pub fn prefix(&self, n: usize) -> Play {
        Play(self.0[..n].to_vec())
    }

    /// `ip(sa) = s`, `ip(ε) = ε`.
    pub fn ip(&self) -> Play {
        self.prefix(self.len().saturating_sub(1))
    }

    /// The prefix ending at the justifier of the last move; empty when the
    /// last move is initial.
    pub fn jp(&self) -> Play {
        match self.0.last() {
            Some(Entry { justifier: Some(j), .. }) => self.prefix(j + 1),
            _ => Play::new(),
        }
    }

    /// Position of the initial move hereditarily justifying each position.
    pub fn roots(&self) -> Vec<usize> {
        let mut roots = Vec::with_capacity(self.len());
        for (p, e) in self.0.iter().enumerate() {
            let r = e.justifier.map_or(p, |j| roots[j]);
            roots.push(r);
        }
        roots
    }

    /// Restricts to the given increasing positions; pointers leaving the
    /// selection become `None`.
    pub fn select(&self, positions: &[usize]) -> Play {
        let mut map = vec![None; self.len()];
        for (i, &p) in positions.iter().enumerate() {
            map[p] = Some(i);
        }
        Play(
            positions
                .iter()
                .map(|&p| {
                    let e = self.0[p];
                    Entry { mv: e.mv, justifier: e.justifier.and_then(|j| map[j]) }
                })
                .collect(),
        )
    }

    pub fn initial_count(&self) -> usize {
        self.0.iter().filter(|e| e.justifier.is_none()).count()
    }

    pub fn moves(&self) -> Vec<usize> {
        self.0.iter().map(|e| e.mv).collect()
    }

    pub fn to_json(&self, arena: &Arena) -> serde_json::Value {
        let doc: Vec<EntryDoc> =
            self.0.iter().map(|e| EntryDoc { mv: arena.get(e.mv).id.clone(), justifier: e.justifier }).collect();
        serde_json::to_value(doc).expect("plays serialize")
    }

    pub fn from_json(arena: &Arena, v: &serde_json::Value) -> Result<Play, PlayError> {
        let doc: Vec<EntryDoc> = serde_json::from_value(v.clone()).map_err(|e| PlayError::Format(e.to_string()))?;
        doc.into_iter()
            .map(|d| {
                let mv = arena.index_of(&d.mv).ok_or_else(|| PlayError::UnknownMove(d.mv.clone()))?;
                Ok(Entry { mv, justifier: d.justifier })
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Play)
    }
}

#[derive(Serialize, Deserialize)]
struct EntryDoc {
    #[serde(rename = "move")]
    mv: String,
    justifier: Option<usize>,
}

/// Pointers go strictly backwards to an enabling move; pointer-less
/// entries are initial moves.
pub fn is_justified(arena: &Arena, s: &Play) -> bool {
    s.0.iter().enumerate().all(|(p, e)| {
        e.mv < arena.len()
            && match e.justifier {
                None => arena.is_initial(e.mv),
                Some(j) => j < p && arena.enables(s.0[j].mv, e.mv),
            }
    })
}

pub fn is_alternating(arena: &Arena, s: &Play) -> bool {
    s.0.windows(2).all(|w| arena.op(w[0].mv) != arena.op(w[1].mv))
}

/// Positions of unanswered questions, oldest first, after each prefix is
/// processed; `None` when some answer does not answer the pending question.
fn question_stack(arena: &Arena, s: &Play) -> Option<Vec<usize>> {
    let mut open: Vec<usize> = Vec::new();
    for (p, e) in s.0.iter().enumerate() {
        match arena.qa(e.mv) {
            Kind::Q => open.push(p),
            Kind::A => {
                if open.last().copied() != e.justifier || e.justifier.is_none() {
                    return None;
                }
                open.pop();
            }
        }
    }
    Some(open)
}

pub fn is_well_bracketed(arena: &Arena, s: &Play) -> bool {
    question_stack(arena, s).is_some()
}

/// The most recent unanswered question of a well-bracketed sequence.
pub fn pending_question(arena: &Arena, s: &Play) -> Option<usize> {
    question_stack(arena, s)?.last().copied()
}

/// Justified, alternating and well-bracketed.
pub fn is_legal(arena: &Arena, s: &Play) -> bool {
    is_justified(arena, s) && is_alternating(arena, s) && is_well_bracketed(arena, s)
}

/// Justified and well-bracketed.
pub fn is_pre_legal(arena: &Arena, s: &Play) -> bool {
    is_justified(arena, s) && is_well_bracketed(arena, s)
}

/// Every question has been answered.
pub fn is_complete(arena: &Arena, s: &Play) -> bool {
    question_stack(arena, s).is_some_and(|open| open.is_empty())
}

/// Except for the initial move, every move points to its predecessor.
pub fn is_path(arena: &Arena, s: &Play) -> bool {
    is_justified(arena, s)
        && s.0.iter().enumerate().all(|(p, e)| if p == 0 { e.justifier.is_none() } else { e.justifier == Some(p - 1) })
}

/// A path given by its moves.
pub fn path_play(moves: &[usize]) -> Play {
    Play(moves.iter().enumerate().map(|(p, &m)| Entry { mv: m, justifier: p.checked_sub(1) }).collect())
}

/// Positions of the P-view, increasing.
pub fn p_view_positions(arena: &Arena, s: &Play) -> Vec<usize> {
    let mut out = Vec::new();
    let mut k = s.len();
    while k > 0 {
        let p = k - 1;
        let e = s.0[p];
        match e.justifier {
            None => {
                out.push(p);
                break;
            }
            Some(_) if arena.op(e.mv) == Polarity::P => {
                out.push(p);
                k = p;
            }
            Some(j) => {
                out.push(p);
                out.push(j);
                k = j;
            }
        }
    }
    out.reverse();
    out
}

/// `⌜s⌝`, pointers renumbered; pointers leaving the view become `None`.
pub fn p_view(arena: &Arena, s: &Play) -> Play {
    s.select(&p_view_positions(arena, s))
}

/// Positions hereditarily justified by the initial move of the last move.
pub fn current_thread_positions(s: &Play) -> Result<Vec<usize>, PlayError> {
    if s.is_empty() {
        return Err(PlayError::Empty);
    }
    let roots = s.roots();
    let r = *roots.last().expect("nonempty");
    Ok((0..s.len()).filter(|&p| roots[p] == r).collect())
}

pub fn current_thread(s: &Play) -> Result<Play, PlayError> {
    Ok(s.select(&current_thread_positions(s)?))
}

/// All legal one-move continuations of `s` by the player whose turn it is
/// (Opponent on the empty play). New initial moves are offered only when
/// `threads_only` is false or `s` is empty.
pub fn next_moves(arena: &Arena, s: &Play, threads_only: bool) -> Vec<Entry> {
    let turn = s.last().map_or(Polarity::O, |e| arena.op(e.mv).flip());
    let mut out = Vec::new();
    if turn == Polarity::O && (!threads_only || s.is_empty()) {
        out.extend(arena.initials().iter().map(|&i| Entry::new(i, None)));
    }
    for (j, e) in s.0.iter().enumerate() {
        for &c in arena.children(e.mv) {
            if arena.op(c) == turn && arena.qa(c) == Kind::Q {
                out.push(Entry::new(c, Some(j)));
            }
        }
    }
    if let Some(pq) = pending_question(arena, s) {
        for &c in arena.children(s.0[pq].mv) {
            if arena.op(c) == turn && arena.qa(c) == Kind::A {
                out.push(Entry::new(c, Some(pq)));
            }
        }
    }
    out
}

/// All one-move justified extensions of a thread, ignoring alternation and
/// bracketing: each earlier move paired with a move it enables.
pub fn extensions(arena: &Arena, s: &Play) -> Vec<Entry> {
    s.0.iter()
        .enumerate()
        .flat_map(|(j, e)| arena.children(e.mv).iter().map(move |&c| Entry::new(c, Some(j))))
        .collect()
}

/// `Σ_i ar(s_i)`.
pub fn q_count(arena: &Arena, s: &Play) -> usize {
    s.0.iter().map(|e| arena.children(e.mv).len()).sum()
}
