//! Arenas: labelled enabling graphs with initial moves, the constructions
//! used to interpret types, and decision procedures for their geometric
//! equivalence.
//!
//! Moves are addressed by index. Every move also carries a structured
//! identifier built from constructor tags (`L/`, `R/`, `p{i}/`, `c{i}/`,
//! `q`, `a{i}`), unique within its arena.

mod interpret;
mod iso;
mod lazy;

pub use interpret::{interpret_type, var_arena};
pub use iso::{family_iso_decide, k_iso, k_iso_shape, path_iso_decide, FamilyIso, KIso, PathIso, PathIsoWitness};
pub use lazy::{hotel_arenas, LazyArena, HotelArena, HotelSide};

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Polarity {
    O,
    P,
}

impl Polarity {
    pub fn flip(self) -> Self {
        match self {
            Polarity::O => Polarity::P,
            Polarity::P => Polarity::O,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Kind {
    Q,
    A,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Move {
    pub id: String,
    pub op: Polarity,
    pub qa: Kind,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ArenaError {
    #[error("duplicate move id `{0}`")]
    DuplicateId(String),
    #[error("unknown move `{0}`")]
    UnknownMove(String),
    #[error("move index {0} out of range")]
    BadIndex(usize),
    #[error("initial move `{0}` is not an Opponent question")]
    BadInitial(String),
    #[error("`{0}` enables `{1}` with equal polarity")]
    SamePolarity(String, String),
    #[error("answer `{0}` enables answer `{1}`")]
    AnswerEnablesAnswer(String, String),
    #[error("question `{0}` enables no answer")]
    Incomplete(String),
    #[error("renaming is not a bijection on {0} moves")]
    NotBijective(usize),
    #[error("malformed arena document: {0}")]
    Format(String),
}

/// Invariant: `children[m]` and `parents[m]` are sorted and duplicate-free;
/// `initials` is sorted.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Arena {
    moves: Vec<Move>,
    initials: Vec<usize>,
    is_initial: Vec<bool>,
    children: Vec<Vec<usize>>,
    parents: Vec<Vec<usize>>,
}

impl Arena {
    /// The empty arena, terminal for `×`.
    pub fn empty() -> Arena {
        Arena::default()
    }

    /// Builds an arena without checking the labelling conditions; see
    /// [`Arena::validate`].
    pub fn from_parts(moves: Vec<Move>, initials: Vec<usize>, enabling: Vec<(usize, usize)>) -> Result<Arena, ArenaError> {
        let n = moves.len();
        let mut seen = BTreeMap::new();
        for m in &moves {
            if seen.insert(m.id.clone(), ()).is_some() {
                return Err(ArenaError::DuplicateId(m.id.clone()));
            }
        }
        let mut is_initial = vec![false; n];
        for &i in &initials {
            *is_initial.get_mut(i).ok_or(ArenaError::BadIndex(i))? = true;
        }
        let mut children = vec![Vec::new(); n];
        let mut parents = vec![Vec::new(); n];
        for &(a, b) in &enabling {
            if a >= n || b >= n {
                return Err(ArenaError::BadIndex(a.max(b)));
            }
            children[a].push(b);
            parents[b].push(a);
        }
        for v in children.iter_mut().chain(parents.iter_mut()) {
            v.sort_unstable();
            v.dedup();
        }
        let initials = (0..n).filter(|&i| is_initial[i]).collect();
        Ok(Arena { moves, initials, is_initial, children, parents })
    }

    /// Checks the labelling, enabling and completeness conditions.
    pub fn validate(&self) -> Result<(), ArenaError> {
        for &i in &self.initials {
            let m = &self.moves[i];
            if m.op != Polarity::O || m.qa != Kind::Q {
                return Err(ArenaError::BadInitial(m.id.clone()));
            }
        }
        for (a, kids) in self.children.iter().enumerate() {
            let ma = &self.moves[a];
            for &b in kids {
                let mb = &self.moves[b];
                if ma.op == mb.op {
                    return Err(ArenaError::SamePolarity(ma.id.clone(), mb.id.clone()));
                }
                if ma.qa == Kind::A && mb.qa == Kind::A {
                    return Err(ArenaError::AnswerEnablesAnswer(ma.id.clone(), mb.id.clone()));
                }
            }
            if ma.qa == Kind::Q && !kids.iter().any(|&b| self.moves[b].qa == Kind::A) {
                return Err(ArenaError::Incomplete(ma.id.clone()));
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.moves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }

    pub fn moves(&self) -> &[Move] {
        &self.moves
    }

    pub fn get(&self, m: usize) -> &Move {
        &self.moves[m]
    }

    pub fn initials(&self) -> &[usize] {
        &self.initials
    }

    pub fn is_initial(&self, m: usize) -> bool {
        self.is_initial[m]
    }

    /// `J_m`: the moves enabled by `m`, ascending.
    pub fn children(&self, m: usize) -> &[usize] {
        &self.children[m]
    }

    pub fn parents(&self, m: usize) -> &[usize] {
        &self.parents[m]
    }

    pub fn enables(&self, a: usize, b: usize) -> bool {
        self.children[a].binary_search(&b).is_ok()
    }

    pub fn op(&self, m: usize) -> Polarity {
        self.moves[m].op
    }

    pub fn qa(&self, m: usize) -> Kind {
        self.moves[m].qa
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.moves.iter().position(|m| m.id == id)
    }

    /// Number of moves enabled by `m`.
    pub fn arity(&self, m: usize) -> Result<usize, ArenaError> {
        self.children.get(m).map(Vec::len).ok_or(ArenaError::BadIndex(m))
    }

    /// The unique answer enabled by a question, when there is exactly one.
    pub fn sole_answer(&self, m: usize) -> Option<usize> {
        let mut it = self.children[m].iter().copied().filter(|&c| self.moves[c].qa == Kind::A);
        let first = it.next()?;
        it.next().is_none().then_some(first)
    }

    pub fn enabling(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.children.iter().enumerate().flat_map(|(a, kids)| kids.iter().map(move |&b| (a, b)))
    }

    fn tagged(&self, tag: &str, flip: bool) -> Vec<Move> {
        self.moves
            .iter()
            .map(|m| Move { id: format!("{tag}/{}", m.id), op: if flip { m.op.flip() } else { m.op }, qa: m.qa })
            .collect()
    }

    /// Appends `other`'s moves with `tag`, returning the index offset.
    fn absorb(moves: &mut Vec<Move>, enabling: &mut Vec<(usize, usize)>, other: &Arena, tag: &str, flip: bool) -> usize {
        let off = moves.len();
        moves.extend(other.tagged(tag, flip));
        enabling.extend(other.enabling().map(|(a, b)| (a + off, b + off)));
        off
    }

    pub fn to_json(&self) -> serde_json::Value {
        let doc = ArenaDoc {
            format: ARENA_FORMAT.to_string(),
            moves: self
                .moves
                .iter()
                .map(|m| MoveDoc { id: m.id.clone(), op: m.op, qa: m.qa })
                .collect(),
            initials: self.initials.iter().map(|&i| self.moves[i].id.clone()).collect(),
            enabling: self.enabling().map(|(a, b)| [self.moves[a].id.clone(), self.moves[b].id.clone()]).collect(),
        };
        serde_json::to_value(doc).expect("arena documents serialize")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Arena, ArenaError> {
        let doc: ArenaDoc = serde_json::from_value(v.clone()).map_err(|e| ArenaError::Format(e.to_string()))?;
        if doc.format != ARENA_FORMAT {
            return Err(ArenaError::Format(format!("expected format `{ARENA_FORMAT}`, found `{}`", doc.format)));
        }
        let moves: Vec<Move> = doc.moves.into_iter().map(|m| Move { id: m.id, op: m.op, qa: m.qa }).collect();
        let index: BTreeMap<&str, usize> = moves.iter().enumerate().map(|(i, m)| (m.id.as_str(), i)).collect();
        let look = |id: &str| index.get(id).copied().ok_or_else(|| ArenaError::UnknownMove(id.to_string()));
        let initials = doc.initials.iter().map(|id| look(id)).collect::<Result<Vec<_>, _>>()?;
        let enabling = doc
            .enabling
            .iter()
            .map(|[a, b]| Ok((look(a)?, look(b)?)))
            .collect::<Result<Vec<_>, ArenaError>>()?;
        Arena::from_parts(moves, initials, enabling)
    }

    /// Graphviz rendering; O-moves are boxes, P-moves ellipses, initial
    /// moves doubled.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph arena {\n  rankdir=TB;\n");
        for (i, m) in self.moves.iter().enumerate() {
            let shape = match m.op {
                Polarity::O => "box",
                Polarity::P => "ellipse",
            };
            let periph = if self.is_initial[i] { 2 } else { 1 };
            let _ = writeln!(
                out,
                "  m{i} [label=\"{} ({:?}{:?})\", shape={shape}, peripheries={periph}];",
                m.id.replace('"', "\\\""),
                m.op,
                m.qa
            );
        }
        for (a, b) in self.enabling() {
            let _ = writeln!(out, "  m{a} -> m{b};");
        }
        out.push_str("}\n");
        out
    }
}

pub const ARENA_FORMAT: &str = "gamiso-arena/1";

#[derive(Serialize, Deserialize)]
struct MoveDoc {
    id: String,
    op: Polarity,
    qa: Kind,
}

#[derive(Serialize, Deserialize)]
struct ArenaDoc {
    format: String,
    moves: Vec<MoveDoc>,
    initials: Vec<String>,
    enabling: Vec<[String; 2]>,
}

pub fn empty_arena() -> Arena {
    Arena::empty()
}

/// `Π_i a_i`: disjoint union, component `i` tagged `p{i}`.
pub fn product_of(arenas: &[Arena]) -> Arena {
    let mut moves = Vec::new();
    let mut enabling = Vec::new();
    let mut initials = Vec::new();
    for (i, a) in arenas.iter().enumerate() {
        let off = Arena::absorb(&mut moves, &mut enabling, a, &format!("p{i}"), false);
        initials.extend(a.initials.iter().map(|&m| m + off));
    }
    Arena::from_parts(moves, initials, enabling).expect("tags keep ids distinct")
}

pub fn product(a: &Arena, b: &Arena) -> Arena {
    product_of(&[a.clone(), b.clone()])
}

/// `a ⇒ b`. Indices `0..b.len()` are `b`'s moves (tag `R`), the rest are
/// `a`'s moves with flipped polarity (tag `L`), each initial of `a`
/// enabled by every initial of `b`.
pub fn arrow(a: &Arena, b: &Arena) -> Arena {
    let mut moves = Vec::new();
    let mut enabling = Vec::new();
    Arena::absorb(&mut moves, &mut enabling, b, "R", false);
    let off = Arena::absorb(&mut moves, &mut enabling, a, "L", true);
    for &ib in &b.initials {
        for &ia in &a.initials {
            enabling.push((ib, ia + off));
        }
    }
    Arena::from_parts(moves, b.initials.clone(), enabling).expect("tags keep ids distinct")
}

/// `Σ_i a_i`: a fresh initial question `q` (index 0) enables one answer
/// `a{i}` per component (index `1 + i`), which enables the initials of
/// component `i` (tag `c{i}`, polarity kept).
pub fn lifted_sum(arenas: &[Arena]) -> Arena {
    let n = arenas.len();
    let mut moves = vec![Move { id: "q".into(), op: Polarity::O, qa: Kind::Q }];
    let mut enabling = Vec::new();
    for i in 0..n {
        moves.push(Move { id: format!("a{i}"), op: Polarity::P, qa: Kind::A });
        enabling.push((0, 1 + i));
    }
    for (i, a) in arenas.iter().enumerate() {
        let off = Arena::absorb(&mut moves, &mut enabling, a, &format!("c{i}"), false);
        enabling.extend(a.initials.iter().map(|&m| (1 + i, m + off)));
    }
    Arena::from_parts(moves, vec![0], enabling).expect("tags keep ids distinct")
}

/// `T1 = Σ{1}`: a single question answered once.
pub fn unit_lift() -> Arena {
    lifted_sum(&[Arena::empty()])
}

/// Moves `m` to `perm[m]`; identifiers travel with their moves.
pub fn rename_moves(a: &Arena, perm: &[usize]) -> Result<Arena, ArenaError> {
    let n = a.len();
    let mut hit = vec![false; n];
    for &p in perm {
        if p >= n || std::mem::replace(&mut hit[p], true) {
            return Err(ArenaError::NotBijective(n));
        }
    }
    if perm.len() != n {
        return Err(ArenaError::NotBijective(n));
    }
    let mut moves = vec![None; n];
    for (m, mv) in a.moves.iter().enumerate() {
        moves[perm[m]] = Some(mv.clone());
    }
    let moves = moves.into_iter().map(|m| m.expect("bijection")).collect();
    let initials = a.initials.iter().map(|&i| perm[i]).collect();
    let enabling = a.enabling().map(|(x, y)| (perm[x], perm[y])).collect();
    Arena::from_parts(moves, initials, enabling)
}

/// The inverse permutation.
pub fn invert_permutation(perm: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; perm.len()];
    for (i, &p) in perm.iter().enumerate() {
        inv[p] = i;
    }
    inv
}

/// A finite indexed family of arenas.
pub type ArenaFamily = Vec<Arena>;
