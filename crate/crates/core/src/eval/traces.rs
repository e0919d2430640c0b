//! Contexts that record the calls a functional makes to its arguments, and
//! sample functionals to feed them. Used to spot-check the fixture
//! isomorphisms, whose behaviour is only visible through call sequences.

use super::observe::ContextTemplate;
use crate::lang::{parse_term, parse_type, TermExpr};

/// Each logged call shifts the log by one digit in this base.
const BASE: u64 = 64;

fn template(hole: &str, body: &str) -> ContextTemplate {
    let ty = parse_type(hole).expect("trace hole type parses");
    ContextTemplate::new(ty, parse_term(&format!("new log := 0 in ({body}); !log")).expect("trace context parses"))
}

fn logger(arg: &str, code: &str) -> String {
    format!("(fun n: {arg} -> log := !log * {BASE} + ({code}))")
}

/// Contexts for `(nat → unit) → (X → unit) → unit` where `X` is `arg`:
/// up to three continuations per application, and two interleaved
/// applications. Codes: first argument `n + 1`, `i`-th continuation
/// `n + 1 + 16i`, second application `n + 49`.
pub fn nat_contexts(arg: &str) -> Vec<ContextTemplate> {
    let hole = format!("(nat -> unit) -> ({arg} -> unit) -> unit");
    let code = |i: u64| if arg == "nat" { format!("n + {}", 1 + 16 * i) } else { format!("{}", 1 + 16 * i) };
    let g = logger("nat", "n + 1");
    let g2 = logger("nat", "n + 49");
    let h = |i: u64| logger(arg, &code(i));
    let bodies = [
        format!("let x = [] {g} in x {}", h(1)),
        format!("let x = [] {g} in x {}; x {}", h(1), h(2)),
        format!("let x = [] {g} in x {}; x {}; x {}", h(1), h(2), h(1)),
        format!("let x = [] {g} in let y = [] {g2} in y {}; x {}", h(1), h(2)),
        format!("let x = [] {g} in let y = [] {g2} in x {}; y {}; x {}", h(1), h(2), h(2)),
    ];
    bodies.iter().map(|b| template(&hole, b)).collect()
}

/// Contexts for `(bool → unit) → unit`: one or two applications.
pub fn bool_contexts() -> Vec<ContextTemplate> {
    let hole = "(bool -> unit) -> unit";
    let g = logger("bool", "if n then 1 else 2");
    let g2 = logger("bool", "if n then 3 else 4");
    let bodies = [format!("[] {g}"), format!("[] {g}; [] {g}"), format!("[] {g}; [] {g2}")];
    bodies.iter().map(|b| template(hole, b)).collect()
}

/// Sequences of calls `g k` with `k < bound`, enumerated by length.
fn call_scripts(callee: &str, bound: u64, max_len: usize) -> Vec<String> {
    let mut out = vec!["skip".to_string()];
    let mut layer = vec![Vec::<u64>::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for s in &layer {
            for k in 0..bound {
                let mut t = s.clone();
                t.push(k);
                next.push(t);
            }
        }
        out.extend(next.iter().map(|s| s.iter().map(|k| format!("{callee} {k}")).collect::<Vec<_>>().join("; ")));
        layer = next;
    }
    out
}

/// `count` functionals of type `(nat → unit) → (X → unit) → unit`, spread
/// over scripts calling `g` before receiving `h` and `g` or `h` after.
/// A quarter of them remember the previous continuation and call it from
/// the next one. Naturals stay below `bound`.
pub fn nat_functionals(arg: &str, bound: u64, count: usize) -> Vec<TermExpr> {
    let value = |k: u64| if arg == "nat" { k.to_string() } else { "skip".to_string() };
    let remembering = (count / 4).min(bound as usize);
    let mut out: Vec<TermExpr> = (0..remembering as u64)
        .map(|k| {
            let src = format!(
                "new last: {arg} -> unit := (fun z: {arg} -> skip) in
                 fun g: (nat -> unit) -> g {k}; fun h: ({arg} -> unit) -> !last {}; last := h; h {}",
                value((k + 1) % bound),
                value((k + 2) % bound)
            );
            parse_term(&src).expect("functional parses")
        })
        .collect();
    let count = count - remembering;
    let before = call_scripts("g", bound, 1);
    let h_call = |k: u64| if arg == "nat" { format!("h {k}") } else { "h skip".to_string() };
    let mut after = Vec::new();
    for k in 0..bound {
        after.push(h_call(k));
        after.push(format!("g {k}; {}", h_call((k + 3) % bound)));
        after.push(format!("{}; g {k}", h_call((k * 5 + 1) % bound)));
        after.push(format!("{}; {}", h_call(k), h_call((k + 1) % bound)));
    }
    let total = before.len() * after.len();
    // A stride coprime to `total` walks all pairs in a scattered order.
    let stride = (1..total).rev().find(|s| gcd(*s, total) == 1 && *s < total / 2 + 1).unwrap_or(1);
    for i in 0..count.min(total) {
        let idx = (i * stride) % total;
        let (b, a) = (&before[idx % before.len()], &after[idx / before.len()]);
        let src = format!("fun g: (nat -> unit) -> {b}; fun h: ({arg} -> unit) -> {a}");
        out.push(parse_term(&src).expect("functional parses"));
    }
    out
}

/// Functionals of type `(bool → unit) → unit` calling their argument up
/// to three times.
pub fn bool_functionals() -> Vec<TermExpr> {
    let mut scripts = vec!["skip".to_string()];
    let mut layer = vec![String::new()];
    for _ in 0..3 {
        let mut next = Vec::new();
        for s in &layer {
            for b in ["true", "false"] {
                next.push(if s.is_empty() { format!("g {b}") } else { format!("{s}; g {b}") });
            }
        }
        scripts.extend(next.iter().cloned());
        layer = next;
    }
    scripts.iter().map(|s| parse_term(&format!("fun g: (bool -> unit) -> {s}")).expect("functional parses")).collect()
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}
