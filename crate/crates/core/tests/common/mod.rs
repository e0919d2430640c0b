#![allow(dead_code)]

use gamiso::arena::{Arena, Kind, Move, Polarity};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub fn mv(id: &str, op: Polarity, qa: Kind) -> Move {
    Move { id: id.to_string(), op, qa }
}

/// The arena `q ⊢ a, q1, q2; q1 ⊢ a1; q2 ⊢ a2`, built by hand.
pub fn two_question_arena() -> Arena {
    use Kind::*;
    use Polarity::*;
    let moves = vec![mv("q", O, Q), mv("a", P, A), mv("q1", P, Q), mv("q2", P, Q), mv("a1", O, A), mv("a2", O, A)];
    Arena::from_parts(moves, vec![0], vec![(0, 1), (0, 2), (0, 3), (2, 4), (3, 5)]).unwrap()
}

/// A random well-formed arena with at most `max` moves before completion.
/// Some moves get a second enabler, so the result need not be a forest.
pub fn random_arena(seed: u64, max: usize) -> Arena {
    let mut rng = StdRng::seed_from_u64(seed);
    let n = rng.gen_range(1..=max);
    let mut moves: Vec<Move> = Vec::new();
    let mut initials = Vec::new();
    let mut edges = Vec::new();
    for i in 0..n {
        if i == 0 || rng.gen_bool(0.15) {
            initials.push(moves.len());
            moves.push(Move { id: format!("m{i}"), op: Polarity::O, qa: Kind::Q });
            continue;
        }
        let questions: Vec<usize> = (0..moves.len()).filter(|&j| moves[j].qa == Kind::Q).collect();
        let parent = if rng.gen_bool(0.8) { questions[rng.gen_range(0..questions.len())] } else { rng.gen_range(0..moves.len()) };
        let op = moves[parent].op.flip();
        let qa = if moves[parent].qa == Kind::A || rng.gen_bool(0.6) { Kind::Q } else { Kind::A };
        let me = moves.len();
        moves.push(Move { id: format!("m{i}"), op, qa });
        edges.push((parent, me));
        if rng.gen_bool(0.2) {
            let other = rng.gen_range(0..me);
            let ok = moves[other].op != op && !(moves[other].qa == Kind::A && qa == Kind::A) && other != parent;
            if ok {
                edges.push((other, me));
            }
        }
    }
    let count = moves.len();
    for q in 0..count {
        if moves[q].qa == Kind::Q && !edges.iter().any(|&(a, b)| a == q && moves[b].qa == Kind::A) {
            let me = moves.len();
            moves.push(Move { id: format!("ans{q}"), op: moves[q].op.flip(), qa: Kind::A });
            edges.push((q, me));
        }
    }
    let a = Arena::from_parts(moves, initials, edges).unwrap();
    a.validate().unwrap();
    a
}

/// AHU-style canonical string of the depth-`k` unfolding below `m`,
/// children labelled by question/answer.
pub fn canon(a: &Arena, m: usize, k: usize, labelled: bool) -> String {
    if k == 0 {
        return "()".into();
    }
    let mut kids: Vec<String> = a
        .children(m)
        .iter()
        .map(|&c| {
            let tag = if labelled { format!("{:?}", a.qa(c)) } else { String::new() };
            format!("{tag}{}", canon(a, c, k - 1, labelled))
        })
        .collect();
    kids.sort();
    format!("({})", kids.join(","))
}

pub fn longest_path(a: &Arena) -> usize {
    fn go(a: &Arena, m: usize) -> usize {
        1 + a.children(m).iter().map(|&c| go(a, c)).max().unwrap_or(0)
    }
    (0..a.len()).map(|m| go(a, m)).max().unwrap_or(0)
}

use gamiso::plays::{self, Arrow, Entry, Play};

/// P-view by the recursive definition, on raw slices.
pub fn p_view_oracle(a: &Arena, s: &[Entry]) -> Vec<usize> {
    fn go(a: &Arena, s: &[Entry], n: usize) -> Vec<usize> {
        if n == 0 {
            return vec![];
        }
        let p = n - 1;
        match s[p].justifier {
            None => vec![p],
            Some(_) if a.op(s[p].mv) == Polarity::P => {
                let mut v = go(a, s, p);
                v.push(p);
                v
            }
            Some(j) => {
                let mut v = go(a, s, j);
                v.push(j);
                v.push(p);
                v
            }
        }
    }
    go(a, s, s.len())
}

/// Every entry `(m, j)` with `s·(m, j)` legal, found by trying all pairs.
pub fn brute_next(a: &Arena, s: &Play) -> Vec<Entry> {
    let mut out = Vec::new();
    for m in 0..a.len() {
        for j in std::iter::once(None).chain((0..s.len()).map(Some)) {
            let e = Entry::new(m, j);
            if plays::is_legal(a, &s.extended(e)) {
                out.push(e);
            }
        }
    }
    out.sort();
    out
}

/// A random legal play of at most `len` moves; `filter` prunes candidates.
pub fn random_play(a: &Arena, seed: u64, len: usize, filter: impl Fn(&Play) -> bool) -> Play {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut s = Play::new();
    for _ in 0..len {
        let next: Vec<Entry> = plays::next_moves(a, &s, false).into_iter().filter(|&e| filter(&s.extended(e))).collect();
        if next.is_empty() {
            break;
        }
        s.push(next[rng.gen_range(0..next.len())]);
    }
    s
}

/// A random legal pre-zig-zag play on an arrow, truncated to even length.
pub fn random_pre_zigzag(g: &Arrow, seed: u64, len: usize) -> Play {
    let s = random_play(&g.arena, seed, len, |t| g.is_pre_zigzag(t));
    s.prefix(s.len() & !1)
}

use gamiso::arena::interpret_type;
use gamiso::strategy::{copycat, involution_i, hotel_strategies, relabel, Bounds, DefaultHotel, Involution, Strategy};
use std::sync::Arc;

/// Isomorphism pairs with their bounds; the last one has infinitely
/// branching arenas, truncated.
pub fn iso_fixtures() -> Vec<(Strategy, Strategy, Bounds)> {
    let inv = Involution::new();
    let mut perm: Vec<usize> = (0..inv.arena.len()).collect();
    perm.swap(inv.q1, inv.q2);
    perm.swap(inv.a1, inv.a2);
    let swap = relabel(inv.game(), perm);
    let (sigma, tau) = hotel_strategies(Arc::new(DefaultHotel), 64);
    let v = interpret_type(&gamiso::lang::parse_type("var[bool] -> unit").unwrap()).unwrap().remove(0);
    vec![
        (involution_i(), involution_i(), Bounds::new(10)),
        (swap.clone(), swap, Bounds::new(10)),
        (copycat(&v), copycat(&v), Bounds::new(8)),
        (sigma, tau, Bounds::new(8).nat_below(4)),
    ]
}

