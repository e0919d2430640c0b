//! Arenas explored on demand, possibly infinitely branching.

use super::{Arena, Kind, Move, Polarity};
use std::collections::{BTreeMap, VecDeque};

/// An arena given by generators. `children` may be infinite; consumers
/// take finite prefixes. Moves are compared by identifier.
pub trait LazyArena {
    fn initials(&self) -> Vec<Move>;
    fn children(&self, id: &str) -> Box<dyn Iterator<Item = Move> + '_>;

    /// The finite sub-arena reached from the initial moves through paths of
    /// at most `depth` moves, keeping the first `width` children of each
    /// move, plus the answers of questions on the frontier. Generators list
    /// answers first, so any `width ≥ 1` keeps the result complete.
    fn explore(&self, depth: usize, width: usize) -> Arena {
        let mut index: BTreeMap<String, usize> = BTreeMap::new();
        let mut moves: Vec<Move> = Vec::new();
        let mut enabling = Vec::new();
        let mut queue = VecDeque::new();
        let mut initials = Vec::new();
        for m in self.initials() {
            let i = moves.len();
            index.insert(m.id.clone(), i);
            initials.push(i);
            moves.push(m);
            queue.push_back((i, 1));
        }
        while let Some((i, d)) = queue.pop_front() {
            let id = moves[i].id.clone();
            let frontier = d >= depth;
            if frontier && moves[i].qa == Kind::A {
                continue;
            }
            let kids: Vec<Move> = if frontier {
                self.children(&id).take_while(|c| c.qa == Kind::A).collect()
            } else {
                self.children(&id).take(width).collect()
            };
            for c in kids {
                let j = match index.get(&c.id) {
                    Some(&j) => j,
                    None => {
                        let j = moves.len();
                        index.insert(c.id.clone(), j);
                        moves.push(c);
                        queue.push_back((j, d + 1));
                        j
                    }
                };
                enabling.push((i, j));
            }
        }
        Arena::from_parts(moves, initials, enabling).expect("identifiers are unique by construction")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HotelSide {
    /// `(nat → unit) → (nat → unit) → unit`
    Left,
    /// `(nat → unit) → (unit → unit) → unit`
    Right,
}

/// The two call-by-value arenas of the nat counterexample. Shape:
/// `q0 ⊢ a0, n{k}`; `n{k} ⊢ na{k}`; `a0 ⊢ q'`; `q' ⊢ a` and then either
/// `q' ⊢ m{k}`, `m{k} ⊢ ma{k}` (left) or `q' ⊢ u`, `u ⊢ ua` (right).
#[derive(Clone, Copy, Debug)]
pub struct HotelArena {
    pub side: HotelSide,
}

fn mv(id: impl Into<String>, op: Polarity, qa: Kind) -> Move {
    Move { id: id.into(), op, qa }
}

impl LazyArena for HotelArena {
    fn initials(&self) -> Vec<Move> {
        vec![mv("q0", Polarity::O, Kind::Q)]
    }

    fn children(&self, id: &str) -> Box<dyn Iterator<Item = Move> + '_> {
        use Kind::*;
        use Polarity::*;
        match id {
            "q0" => Box::new(std::iter::once(mv("a0", P, A)).chain((0..).map(|k| mv(format!("n{k}"), P, Q)))),
            "a0" => Box::new(std::iter::once(mv("q'", O, Q))),
            "q'" => match self.side {
                HotelSide::Left => Box::new(std::iter::once(mv("a", P, A)).chain((0..).map(|k| mv(format!("m{k}"), P, Q)))),
                HotelSide::Right => Box::new([mv("a", P, A), mv("u", P, Q)].into_iter()),
            },
            "u" => Box::new(std::iter::once(mv("ua", O, A))),
            _ => {
                if let Some(k) = id.strip_prefix('n').and_then(|k| k.parse::<u64>().ok()) {
                    Box::new(std::iter::once(mv(format!("na{k}"), O, A)))
                } else if let Some(k) = id.strip_prefix('m').and_then(|k| k.parse::<u64>().ok()) {
                    Box::new(std::iter::once(mv(format!("ma{k}"), O, A)))
                } else {
                    Box::new(std::iter::empty())
                }
            }
        }
    }
}

impl HotelArena {
    /// The sub-arena with natural number indices below `width`.
    pub fn truncate(&self, width: usize) -> Arena {
        self.explore(5, width + 1)
    }
}

/// The pair `(left, right)` of lazily generated counterexample arenas.
pub fn hotel_arenas() -> (HotelArena, HotelArena) {
    (HotelArena { side: HotelSide::Left }, HotelArena { side: HotelSide::Right })
}
