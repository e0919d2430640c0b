//! Composition by interaction and hiding.
//!
//! The composite is an oracle: given an O-ending play `t` on `A ⇒ C` it
//! rebuilds the unique interaction `u` with `u↾A,C = t`, letting the two
//! components bounce through `B` until one of them leaves it.

use super::{Strategy, StrategyError};
use crate::plays::{Arrow, Entry, Play, Side};

/// Internal moves allowed between two visible moves before the
/// interaction is declared divergent.
const CHATTER: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Tag {
    A,
    B,
    C,
}

#[derive(Default)]
struct Interaction {
    tag: Vec<Tag>,
    local: Vec<usize>,
    just: Vec<Option<usize>>,
}

impl Interaction {
    fn push(&mut self, tag: Tag, local: usize, just: Option<usize>) -> usize {
        self.tag.push(tag);
        self.local.push(local);
        self.just.push(just);
        self.tag.len() - 1
    }

    /// The restriction to `left, right` as a play on `game`, with the
    /// positions it keeps. Pointers into the other component are dropped.
    fn restrict(&self, game: &Arrow, left: Tag, right: Tag) -> (Play, Vec<usize>) {
        let pos: Vec<usize> = (0..self.tag.len()).filter(|&p| self.tag[p] == left || self.tag[p] == right).collect();
        let mut index = vec![None; self.tag.len()];
        for (i, &p) in pos.iter().enumerate() {
            index[p] = Some(i);
        }
        let play = pos
            .iter()
            .map(|&p| {
                let side = if self.tag[p] == left { Side::Left } else { Side::Right };
                Entry::new(game.global(side, self.local[p]), self.just[p].and_then(|j| index[j]))
            })
            .collect();
        (Play(play), pos)
    }
}

struct Composite {
    sigma: Strategy,
    tau: Strategy,
    game: Arrow,
}

impl Composite {
    /// Lets the components play until a move leaves `B`; returns its
    /// position in `u`.
    fn bounce(&self, u: &mut Interaction, mut sigma_to_move: bool) -> Option<usize> {
        for _ in 0..CHATTER {
            let (g, left, right, strat) = if sigma_to_move {
                (self.sigma.game(), Tag::A, Tag::B, &self.sigma)
            } else {
                (self.tau.game(), Tag::B, Tag::C, &self.tau)
            };
            let (play, pos) = u.restrict(g, left, right);
            let r = strat.respond(&play)?;
            let tag = if g.side(r.mv) == Side::Left { left } else { right };
            let p = u.push(tag, g.local(r.mv), Some(pos[r.justifier?]));
            if tag != Tag::B {
                return Some(p);
            }
            sigma_to_move = !sigma_to_move;
        }
        None
    }

    fn respond(&self, t: &Play) -> Option<Entry> {
        let g = &self.game;
        let mut u = Interaction::default();
        let mut t2u: Vec<usize> = Vec::with_capacity(t.len());
        let mut u2t: Vec<Option<usize>> = Vec::new();
        let mut k = 0;
        while k < t.len() {
            let o = t.0[k];
            let side = g.side(o.mv);
            let tag = if side == Side::Left { Tag::A } else { Tag::C };
            let p = u.push(tag, g.local(o.mv), o.justifier.map(|j| t2u[j]));
            t2u.push(p);
            let out = self.bounce(&mut u, tag == Tag::A)?;
            u2t.resize(u.tag.len(), None);
            u2t[p] = Some(k);
            let reply = self.visible(&u, &u2t, out)?;
            if k + 1 == t.len() {
                return Some(reply);
            }
            if t.0[k + 1] != reply {
                return None;
            }
            u2t[out] = Some(k + 1);
            t2u.push(out);
            k += 2;
        }
        None
    }

    /// The entry of a visible move of `u` in the coordinates of `A ⇒ C`.
    /// An `A` initial move pointing to a `B` initial move is redirected to
    /// the `C` move justifying the latter.
    fn visible(&self, u: &Interaction, u2t: &[Option<usize>], p: usize) -> Option<Entry> {
        let side = if u.tag[p] == Tag::A { Side::Left } else { Side::Right };
        let mut j = u.just[p]?;
        if u.tag[j] == Tag::B {
            j = u.just[j]?;
        }
        Some(Entry::new(self.game.global(side, u.local[p]), Some(u2t[j]?)))
    }
}

/// `σ;τ` for `σ : A ⇒ B` and `τ : B ⇒ C`.
pub fn compose(sigma: &Strategy, tau: &Strategy) -> Result<Strategy, StrategyError> {
    if sigma.game().right != tau.game().left {
        return Err(StrategyError::MismatchedMiddle);
    }
    let game = Arrow::new(sigma.game().left.clone(), tau.game().right.clone());
    let c = Composite { sigma: sigma.clone(), tau: tau.clone(), game: game.clone() };
    Ok(Strategy::from_oracle(game, move |t| c.respond(t)))
}
