//! Source terms of the non-trivial isomorphisms shipped as fixtures.

use super::{parse_term, parse_type, typecheck, Lang, TermExpr, TypeError, TypingContext, TypeExpr};

/// An involution on `(bool → unit) → unit` that is not the identity: the
/// first call of its argument goes through, later ones negate.
pub const INVOLUTION: &str = "
new r := true in
fun g: (bool -> unit) ->
  f (fun b: bool -> if !r then r := false; g b else g (not b))";

/// `(nat → unit) → (nat → unit) → unit` to `(nat → unit) → (unit → unit) → unit`.
/// After `n` calls, natural `k` of the first argument goes to room
/// `k(n+1)`; the `c`-th call's naturals go to its unit argument for 0 and
/// to `(k-1)(n+1)+c` otherwise.
pub const HOTEL_FORWARD: &str = "
new count := 0, func: nat -> unit -> unit := bot[nat -> unit -> unit] in
fun g: (nat -> unit) ->
  let x = f (fun n: nat -> g (n * (!count + 1))) in
  fun h: (unit -> unit) ->
    count := !count + 1;
    let c = !count in
    func := (let old = !func in fun n: nat -> if n = c then h else old n);
    x (fun n: nat -> if n = 0 then !func c skip else g ((n - 1) * (!count + 1) + c))";

/// The inverse of [`HOTEL_FORWARD`]: a room `q(n+1) + r` goes back to
/// natural `q` of the first argument when `r = 0`, and to natural `q+1`
/// of the `r`-th call otherwise.
pub const HOTEL_BACKWARD: &str = "
new count := 0, func: nat -> nat -> unit := bot[nat -> nat -> unit] in
fun g: (nat -> unit) ->
  let x = f (fun n: nat ->
    let (q, r) = div n (!count + 1) in
    if r = 0 then g q else !func r (q + 1)) in
  fun h: (nat -> unit) ->
    count := !count + 1;
    let c = !count in
    func := (let old = !func in fun n: nat -> if n = c then h else old n);
    x (fun u: unit -> !func c 0)";

/// A term with one free variable `f`.
#[derive(Clone, Debug)]
pub struct FixtureTerm {
    pub name: &'static str,
    pub lang: Lang,
    pub free: TypeExpr,
    pub ty: TypeExpr,
    pub term: TermExpr,
}

impl FixtureTerm {
    fn load(name: &'static str, lang: Lang, free: &str, ty: &str, src: &str) -> FixtureTerm {
        FixtureTerm {
            name,
            lang,
            free: parse_type(free).expect("fixture type parses"),
            ty: parse_type(ty).expect("fixture type parses"),
            term: parse_term(src).expect("fixture term parses"),
        }
    }

    /// The type the term has with `f` bound to its stated type.
    pub fn typecheck(&self) -> Result<TypeExpr, TypeError> {
        let mut ctx = TypingContext::new(self.lang);
        ctx.push("f", self.free.clone());
        typecheck(&ctx, &self.term)
    }

    /// The term with `f` bound to `arg`.
    pub fn apply(&self, arg: TermExpr) -> TermExpr {
        TermExpr::app(TermExpr::lam("f", self.free.clone(), self.term.clone()), arg)
    }
}

pub fn involution() -> FixtureTerm {
    let b = "(bool -> unit) -> unit";
    FixtureTerm::load("involution", Lang::L2, b, b, INVOLUTION)
}

pub fn hotel_forward() -> FixtureTerm {
    let nat = "(nat -> unit) -> (nat -> unit) -> unit";
    let unit = "(nat -> unit) -> (unit -> unit) -> unit";
    FixtureTerm::load("hotel-forward", Lang::Lnat, nat, unit, HOTEL_FORWARD)
}

pub fn hotel_backward() -> FixtureTerm {
    let nat = "(nat -> unit) -> (nat -> unit) -> unit";
    let unit = "(nat -> unit) -> (unit -> unit) -> unit";
    FixtureTerm::load("hotel-backward", Lang::Lnat, unit, nat, HOTEL_BACKWARD)
}

/// `second (first arg)`.
pub fn round_trip(first: &FixtureTerm, second: &FixtureTerm, arg: TermExpr) -> TermExpr {
    second.apply(first.apply(arg))
}
