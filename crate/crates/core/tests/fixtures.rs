use gamiso::eval::traces::*;
use gamiso::eval::*;
use gamiso::lang::fixtures::*;
use gamiso::lang::{parse_term, print_term};

#[test]
fn fixture_terms_typecheck_at_their_stated_types() {
    for t in [involution(), hotel_forward(), hotel_backward()] {
        assert_eq!(t.typecheck().unwrap(), t.ty, "{}", t.name);
        assert_eq!(parse_term(&print_term(&t.term)).unwrap(), t.term);
    }
}

fn consistent_on(m: &gamiso::lang::TermExpr, n: &gamiso::lang::TermExpr, ctx: &[ContextTemplate], fuel: u64) -> bool {
    observational_test(m, n, ctx, fuel).unwrap().is_consistent()
}

#[test]
fn involution_round_trip() {
    let m = involution();
    let ctx = bool_contexts();
    let mut moved = 0;
    for x in bool_functionals() {
        assert!(consistent_on(&round_trip(&m, &m, x.clone()), &x, &ctx, 100_000), "{x}");
        moved += usize::from(!consistent_on(&m.apply(x.clone()), &x, &ctx, 100_000));
    }
    assert!(moved > 0, "the involution is not the identity");
}

#[test]
fn hotel_round_trips() {
    let (fwd, bwd) = (hotel_forward(), hotel_backward());
    let fs = nat_functionals("nat", 8, 24);
    assert_eq!(fs.len(), 24);
    let ctx = nat_contexts("nat");
    for f in &fs {
        assert!(consistent_on(&round_trip(&fwd, &bwd, f.clone()), f, &ctx, 1_000_000), "{f}");
    }
    let ctx = nat_contexts("unit");
    for f in nat_functionals("unit", 8, 24) {
        assert!(consistent_on(&round_trip(&bwd, &fwd, f.clone()), &f, &ctx, 1_000_000), "{f}");
    }
}

#[test]
fn hotel_forward_moves_naturals() {
    let fwd = hotel_forward();
    // Only the context continuing once: later calls move the rooms again.
    let ctx = &nat_contexts("unit")[..1];
    let f = parse_term("fun g: (nat -> unit) -> g 1; fun h: (nat -> unit) -> h 0; g 2").unwrap();
    // Before any call natural 1 stays in room 1; the first call's 0 is its
    // unit argument and, after that call, natural 2 is lodged in room 4.
    let target = parse_term("fun g: (nat -> unit) -> g 1; fun h: (unit -> unit) -> h skip; g 4").unwrap();
    let off = parse_term("fun g: (nat -> unit) -> g 1; fun h: (unit -> unit) -> h skip; g 2").unwrap();
    assert!(consistent_on(&fwd.apply(f.clone()), &target, ctx, 1_000_000));
    assert!(!consistent_on(&fwd.apply(f), &off, ctx, 1_000_000));
}

#[test]
fn trace_contexts_converge_on_samples() {
    for (arg, ctx) in [("nat", nat_contexts("nat")), ("unit", nat_contexts("unit"))] {
        for f in nat_functionals(arg, 8, 24) {
            for c in &ctx {
                let out = eval(&Configuration::new(), &c.plug(&f), 1_000_000).unwrap();
                assert!(out.converged(), "{} on {f}", c.term);
            }
        }
    }
    for x in bool_functionals() {
        for c in bool_contexts() {
            assert!(eval(&Configuration::new(), &c.plug(&x), 100_000).unwrap().converged());
        }
    }
}
