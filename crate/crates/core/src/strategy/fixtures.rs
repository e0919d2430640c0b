//! Concrete strategies: copycat and relabellings, the reference cell, the
//! non-innocent involution on `(bool → unit) → unit`, and the nat pair
//! built from Hilbert's hotel bijections.

use super::Strategy;
use crate::arena::{lifted_sum, var_arena, Arena, ArenaFamily, Kind, HotelSide};
use crate::plays::{current_thread_positions, Arrow, Entry, Play, Side};
use std::sync::Arc;

/// Runs `f` on the current thread and maps its pointer back.
pub(crate) fn thread_local(f: impl Fn(&Play) -> Option<Entry> + Send + Sync) -> impl Fn(&Play) -> Option<Entry> + Send + Sync {
    move |s| {
        let pos = current_thread_positions(s).ok()?;
        let r = f(&s.select(&pos))?;
        Some(Entry::new(r.mv, Some(pos[r.justifier?])))
    }
}

/// Copy strategy on `left ⇒ right` along an arena isomorphism given as
/// `right_to_left[m]` = left local move copied from right local move `m`.
/// Every Opponent move is copied immediately, so partners are `p ^ 1`.
pub fn relabel(game: Arrow, right_to_left: Vec<usize>) -> Strategy {
    let mut left_to_right = vec![usize::MAX; right_to_left.len()];
    for (r, &l) in right_to_left.iter().enumerate() {
        left_to_right[l] = r;
    }
    let g = game.clone();
    Strategy::from_oracle(game, move |s| {
        let p = s.len().checked_sub(1)?;
        let e = s.0[p];
        let local = g.local(e.mv);
        match g.side(e.mv) {
            Side::Right => {
                let justifier = Some(e.justifier.map_or(p, |j| j ^ 1));
                Some(Entry::new(g.global(Side::Left, *right_to_left.get(local)?), justifier))
            }
            Side::Left => Some(Entry::new(g.global(Side::Right, *left_to_right.get(local)?), Some(e.justifier? ^ 1))),
        }
    })
}

/// `id_A` on `A ⇒ A`.
pub fn copycat(a: &Arena) -> Strategy {
    relabel(Arrow::new(a.clone(), a.clone()), (0..a.len()).collect())
}

/// The reference cell on `1 ⇒ T(var A)`. The lift is answered at once,
/// writes are acknowledged, a read answers the component of the latest
/// write and then plays copycat between the read payload and the written
/// argument. A read before any write gets no reply.
pub fn cell(fam: &ArenaFamily) -> Strategy {
    let game = Arrow::on(lifted_sum(&[var_arena(fam)]));
    let g = game.clone();
    let reply = move |t: &Play| -> Option<Entry> {
        let a = &g.arena;
        let id = |p: usize| a.get(t.0[p].mv).id.as_str();
        let at = |name: String, j: usize| Some(Entry::new(a.index_of(&name)?, Some(j)));
        // Partners: each reply is paired with the move it answers, except a
        // read answer, paired with the write question it reads from.
        let mut partner = vec![usize::MAX; t.len()];
        let mut last_write = None;
        for p in 0..t.len() {
            if id(p).starts_with("R/c0/p0/") && id(p).ends_with("/R/q") {
                last_write = Some(p);
            }
            if p % 2 == 1 {
                let other = if id(p).starts_with("R/c0/p1/a") { last_write? } else { p - 1 };
                partner[p] = other;
                partner[p - 1] = p;
            }
        }
        let p = t.len() - 1;
        let name = id(p);
        if name == "R/q" {
            return at("R/a0".into(), p);
        }
        if name == "R/c0/p1/q" {
            let w = last_write?;
            let comp = id(w).strip_prefix("R/c0/p0/")?.split('/').next()?.strip_prefix('p')?.to_string();
            return at(format!("R/c0/p1/a{comp}"), p);
        }
        if let Some(head) = name.strip_suffix("/R/q").filter(|h| h.starts_with("R/c0/p0/")) {
            return at(format!("{head}/R/a0"), p);
        }
        let j = partner[t.0[p].justifier?];
        if let Some(rest) = name.strip_prefix("R/c0/p1/c") {
            let (comp, tail) = rest.split_once('/')?;
            return at(format!("R/c0/p0/p{comp}/L/{tail}"), j);
        }
        let rest = name.strip_prefix("R/c0/p0/p")?;
        let (comp, tail) = rest.split_once("/L/")?;
        at(format!("R/c0/p1/c{comp}/{tail}"), j)
    };
    Strategy::from_oracle(game, thread_local(reply))
}

/// The moves of `(bool → unit) → unit`: `q ⊢ a, q1, q2`, `q1 ⊢ a1`,
/// `q2 ⊢ a2`, as local indices.
#[derive(Clone, Debug)]
pub struct Involution {
    pub arena: Arena,
    pub q: usize,
    pub a: usize,
    pub q1: usize,
    pub a1: usize,
    pub q2: usize,
    pub a2: usize,
}

impl Default for Involution {
    fn default() -> Self {
        Involution::new()
    }
}

impl Involution {
    pub fn new() -> Involution {
        let ty = crate::lang::parse_type("(bool -> unit) -> unit").expect("fixed type parses");
        let arena = crate::arena::interpret_type(&ty).expect("no nat").remove(0);
        let q = arena.initials()[0];
        let a = arena.sole_answer(q).expect("one answer");
        let qs: Vec<usize> = arena.children(q).iter().copied().filter(|&c| arena.qa(c) == Kind::Q).collect();
        let (q1, q2) = (qs[0], qs[1]);
        let (a1, a2) = (arena.sole_answer(q1).expect("answered"), arena.sole_answer(q2).expect("answered"));
        Involution { arena, q, a, q1, a1, q2, a2 }
    }

    pub fn game(&self) -> Arrow {
        Arrow::new(self.arena.clone(), self.arena.clone())
    }
}

/// Copycat on `(bool → unit) → unit`, except that from the second time in
/// a thread Opponent asks `q1` or `q2` on the left, the copy asks the
/// other one. Answers go back to the question they were asked for.
pub fn involution_i() -> Strategy {
    let inv = Involution::new();
    let game = inv.game();
    let g = game.clone();
    let reply = move |t: &Play| -> Option<Entry> {
        let p = t.len() - 1;
        let e = t.0[p];
        let local = g.local(e.mv);
        let side = g.side(e.mv);
        if side == Side::Right && local == inv.q {
            return Some(Entry::new(g.global(Side::Left, inv.q), Some(p)));
        }
        let j = e.justifier?;
        let asked = g.arena.qa(e.mv) == Kind::Q;
        if !asked {
            // The partner question's answer, on the other side.
            let other = t.0[j ^ 1].mv;
            let ans = g.component(side.other()).sole_answer(g.local(other))?;
            return Some(Entry::new(g.global(side.other(), ans), Some(j ^ 1)));
        }
        let is_arg_q = |m: usize| g.side(m) == Side::Left && (g.local(m) == inv.q1 || g.local(m) == inv.q2);
        let seen = t.0[..p].iter().any(|x| is_arg_q(x.mv));
        let target = match (seen, local) {
            (true, l) if l == inv.q1 => inv.q2,
            (true, l) if l == inv.q2 => inv.q1,
            (_, l) => l,
        };
        Some(Entry::new(g.global(Side::Right, target), Some(j ^ 1)))
    };
    Strategy::from_oracle(game, thread_local(reply))
}

/// A room of the hotel `ℕ + {1..n}`: a natural number, or the unit
/// argument of the `c`-th call (1-based).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum HotelRoom {
    Nat(usize),
    Unit(usize),
}

/// For every `n`, a bijection between `n + 1` copies of ℕ and `ℕ + n`.
pub trait HotelBijection: Send + Sync {
    fn forward(&self, n: usize, copy: usize, k: usize) -> HotelRoom;
    fn backward(&self, n: usize, room: HotelRoom) -> (usize, usize);
}

/// Copy 0 takes the multiples of `n + 1`; copy `c` sends 0 to its unit
/// room and `k ≥ 1` to `(k - 1)(n + 1) + c`.
#[derive(Clone, Copy, Debug, Default)]
pub struct DefaultHotel;

impl HotelBijection for DefaultHotel {
    fn forward(&self, n: usize, copy: usize, k: usize) -> HotelRoom {
        match (copy, k) {
            (0, k) => HotelRoom::Nat(k * (n + 1)),
            (c, 0) => HotelRoom::Unit(c),
            (c, k) => HotelRoom::Nat((k - 1) * (n + 1) + c),
        }
    }

    fn backward(&self, n: usize, room: HotelRoom) -> (usize, usize) {
        match room {
            HotelRoom::Unit(c) => (c, 0),
            HotelRoom::Nat(m) => match (m % (n + 1), m / (n + 1)) {
                (0, q) => (0, q),
                (r, q) => (r, q + 1),
            },
        }
    }
}

/// Like [`DefaultHotel`] but copy `c` sends 1 to its unit room, 0 to `c`
/// and `k ≥ 2` to `(k - 1)(n + 1) + c`.
#[derive(Clone, Copy, Debug, Default)]
pub struct ShiftedHotel;

impl HotelBijection for ShiftedHotel {
    fn forward(&self, n: usize, copy: usize, k: usize) -> HotelRoom {
        match (copy, k) {
            (0, k) => HotelRoom::Nat(k * (n + 1)),
            (c, 0) => HotelRoom::Nat(c),
            (c, 1) => HotelRoom::Unit(c),
            (c, k) => HotelRoom::Nat((k - 1) * (n + 1) + c),
        }
    }

    fn backward(&self, n: usize, room: HotelRoom) -> (usize, usize) {
        match room {
            HotelRoom::Unit(c) => (c, 1),
            HotelRoom::Nat(m) => match (m % (n + 1), m / (n + 1)) {
                (0, q) => (0, q),
                (r, 0) => (r, 0),
                (r, q) => (r, q + 1),
            },
        }
    }
}

/// The natural number index of a counterexample move id (`n{k}`, `na{k}`,
/// `m{k}`, `ma{k}`, possibly under side tags).
pub fn nat_index(id: &str) -> Option<usize> {
    let last = id.rsplit('/').next()?;
    let split = last.find(|c: char| c.is_ascii_digit())?;
    let (head, digits) = last.split_at(split);
    matches!(head, "n" | "na" | "m" | "ma").then(|| digits.parse().ok()).flatten()
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Direction {
    /// Left arena has `m{k}` below `q'`; right has `u`.
    Forward,
    Backward,
}

fn hotel_reply(g: &Arrow, dir: Direction, hotel: &dyn HotelBijection, t: &Play) -> Option<Entry> {
    let a = &g.arena;
    let name = |p: usize| a.get(t.0[p].mv).id.as_str();
    let at = |n: String, j: usize| Some(Entry::new(a.index_of(&n)?, Some(j)));
    let p = t.len() - 1;
    let here = name(p);
    if here == "R/q0" {
        return at("L/q0".into(), p);
    }
    let j = t.0[p].justifier?;
    let partner = j ^ 1;
    // Calls so far, in order; `n` is their number.
    let calls: Vec<usize> = (0..p).filter(|&x| name(x) == "R/q'").collect();
    let n = calls.len();
    let copy_index = |x: usize| calls.iter().position(|&c| c == x).map(|i| i + 1);
    let room_move = |room: HotelRoom| match room {
        HotelRoom::Nat(m) => at(format!("R/n{m}"), 0),
        HotelRoom::Unit(c) => at("R/u".into(), *calls.get(c.checked_sub(1)?)?),
    };
    let copy_move = |copy: usize, k: usize| match copy {
        0 => at(format!("R/n{k}"), 0),
        c => at(format!("R/m{k}"), *calls.get(c - 1)?),
    };
    match here {
        "L/a0" => return at("R/a0".into(), partner),
        "R/q'" => return at("L/q'".into(), partner),
        "L/a" => return at("R/a".into(), partner),
        _ => {}
    }
    if here.starts_with("R/") {
        // An answer: answer the question the partner move was copied from.
        let q = t.0[partner].mv;
        let ans = a.sole_answer(q)?;
        return Some(Entry::new(ans, Some(partner)));
    }
    let k = nat_index(here);
    match (dir, here.strip_prefix("L/")?) {
        (Direction::Forward, s) if s.starts_with("n") => room_move(hotel.forward(n, 0, k?)),
        (Direction::Forward, s) if s.starts_with("m") => room_move(hotel.forward(n, copy_index(partner)?, k?)),
        (Direction::Backward, s) if s.starts_with("n") => {
            let (c, k) = hotel.backward(n, HotelRoom::Nat(k?));
            copy_move(c, k)
        }
        (Direction::Backward, "u") => {
            let (c, k) = hotel.backward(n, HotelRoom::Unit(copy_index(partner)?));
            copy_move(c, k)
        }
        _ => None,
    }
}

/// The mutually inverse pair on the counterexample arenas (with natural
/// number indices below `width`): `σ` on `nat-arena ⇒ unit-arena` and `τ`
/// back. Each call `q'` opens a new copy of ℕ that the hotel bijection
/// lodges in the other side's rooms.
pub fn hotel_strategies(hotel: Arc<dyn HotelBijection>, width: usize) -> (Strategy, Strategy) {
    let (left, right) = crate::arena::hotel_arenas();
    debug_assert_eq!((left.side, right.side), (HotelSide::Left, HotelSide::Right));
    let (nat, unit) = (left.truncate(width), right.truncate(width));
    let mk = |game: Arrow, dir: Direction| {
        let (g, h) = (game.clone(), hotel.clone());
        Strategy::from_oracle(game, thread_local(move |t: &Play| hotel_reply(&g, dir, &*h, t)))
    };
    (mk(Arrow::new(nat.clone(), unit.clone()), Direction::Forward), mk(Arrow::new(unit, nat), Direction::Backward))
}
