use super::{Entry, Play, PlayError};
use crate::arena::{arrow, Arena, Polarity};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }
}

/// The arena `left ⇒ right` with the bookkeeping to move between global
/// and per-side indices: right moves come first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrow {
    pub left: Arena,
    pub right: Arena,
    pub arena: Arena,
}

impl Arrow {
    pub fn new(left: Arena, right: Arena) -> Arrow {
        let arena = arrow(&left, &right);
        Arrow { left, right, arena }
    }

    /// `1 ⇒ a`, the same game as `a`.
    pub fn on(a: Arena) -> Arrow {
        Arrow::new(Arena::empty(), a)
    }

    /// The arrow with the sides exchanged.
    pub fn dual(&self) -> Arrow {
        Arrow::new(self.right.clone(), self.left.clone())
    }

    pub fn side(&self, m: usize) -> Side {
        if m < self.right.len() {
            Side::Right
        } else {
            Side::Left
        }
    }

    pub fn local(&self, m: usize) -> usize {
        match self.side(m) {
            Side::Right => m,
            Side::Left => m - self.right.len(),
        }
    }

    pub fn global(&self, side: Side, m: usize) -> usize {
        match side {
            Side::Right => m,
            Side::Left => m + self.right.len(),
        }
    }

    pub fn component(&self, side: Side) -> &Arena {
        match side {
            Side::Left => &self.left,
            Side::Right => &self.right,
        }
    }

    pub fn positions(&self, s: &Play, side: Side) -> Vec<usize> {
        (0..s.len()).filter(|&p| self.side(s.0[p].mv) == side).collect()
    }

    /// The subsequence on one side, moves renumbered locally; left initial
    /// moves lose their pointer into the right side.
    pub fn restrict(&self, s: &Play, side: Side) -> Play {
        let mut r = s.select(&self.positions(s, side));
        for e in &mut r.0 {
            e.mv = self.local(e.mv);
        }
        r
    }

    /// Conditions 1 and 2: Player always answers on the other side, and a
    /// Player move on the left is justified by an initial right move
    /// exactly when it immediately follows that move.
    pub fn is_pre_zigzag(&self, s: &Play) -> bool {
        let a = &self.arena;
        let is_right_initial = |p: usize| s.0[p].justifier.is_none();
        for p in 1..s.len() {
            let e = s.0[p];
            if a.op(e.mv) != Polarity::P {
                continue;
            }
            let prev = s.0[p - 1];
            if a.op(prev.mv) == Polarity::O && self.side(prev.mv) == self.side(e.mv) {
                return false;
            }
            if self.side(e.mv) == Side::Left {
                let follows = a.op(prev.mv) == Polarity::O && is_right_initial(p - 1);
                let points = e.justifier.is_some_and(is_right_initial);
                if follows != (e.justifier == Some(p - 1)) || points != follows {
                    return false;
                }
            }
        }
        true
    }

    /// Pre-zig-zag, and the two restrictions carry the same pointers.
    pub fn is_zigzag(&self, s: &Play) -> bool {
        if !self.is_pre_zigzag(s) {
            return false;
        }
        let (l, r) = (self.restrict(s, Side::Left), self.restrict(s, Side::Right));
        let (n, m) = (l.len(), r.len());
        let k = n.min(m);
        (n == m || n + 1 == m || m + 1 == n) && (0..k).all(|i| l.0[i].justifier == r.0[i].justifier)
    }

    /// The play on `right ⇒ left` with the same restrictions: each pair of
    /// moves is exchanged and the pointer between a right initial move and
    /// the left initial move answering it is reversed.
    pub fn dual_play(&self, s: &Play) -> Result<Play, PlayError> {
        if s.len() % 2 == 1 {
            return Err(PlayError::OddLength);
        }
        if !self.is_pre_zigzag(s) {
            return Err(PlayError::NotPreZigzag);
        }
        let d = self.dual();
        let mut out = vec![Entry::new(0, None); s.len()];
        for (p, e) in s.0.iter().enumerate() {
            let side = self.side(e.mv);
            let mv = d.global(side.other(), self.local(e.mv));
            let justifier = match e.justifier {
                None => {
                    let answer = p + 1;
                    if answer >= s.len() || s.0[answer].justifier != Some(p) || self.side(s.0[answer].mv) != Side::Left {
                        return Err(PlayError::NotPreZigzag);
                    }
                    Some(answer ^ 1)
                }
                Some(j) if side == Side::Left && s.0[j].justifier.is_none() => None,
                Some(j) => Some(j ^ 1),
            };
            out[p ^ 1] = Entry { mv, justifier };
        }
        Ok(Play(out))
    }
}
