mod common;

use common::*;
use gamiso::arena::*;
use gamiso::eval::{eval, Configuration, Outcome};
use gamiso::lang::{parse_term, parse_type, TermExpr};
use gamiso::plays::*;
use gamiso::strategy::*;
use gamiso::strategy::Strategy;
use proptest::prelude::*;
use std::sync::Arc;

fn ty_arena(s: &str) -> Arena {
    interpret_type(&parse_type(s).unwrap()).unwrap().remove(0)
}

/// Builds a play on `g` from `(side, local move, justifier)` triples.
fn play(g: &Arrow, moves: &[(Side, usize, Option<usize>)]) -> Play {
    Play(moves.iter().map(|&(s, m, j)| Entry::new(g.global(s, m), j)).collect())
}

/// Feeds Opponent moves by id; returns Player's reply ids (`None` when silent).
fn drive(sigma: &Strategy, opponent: &[(&str, Option<usize>)]) -> Vec<Option<String>> {
    let a = sigma.arena();
    let mut s = Play::new();
    let mut out = Vec::new();
    for &(id, j) in opponent {
        s.push(Entry::new(a.index_of(id).unwrap_or_else(|| panic!("no move {id}")), j));
        match sigma.respond(&s) {
            Some(r) => {
                out.push(Some(a.get(r.mv).id.clone()));
                s.push(r);
            }
            None => {
                out.push(None);
                break;
            }
        }
    }
    out
}

#[test]
fn copycat_on_small_arenas() {
    let e = copycat(&Arena::empty());
    assert_eq!(e.materialize(&Bounds::new(10)).unwrap(), vec![Play::new()]);
    let t1 = unit_lift();
    let id = copycat(&t1);
    let g = id.game().clone();
    let plays_ = id.materialize(&Bounds::new(4).threads()).unwrap();
    let full = play(&g, &[(Side::Right, 0, None), (Side::Left, 0, Some(0)), (Side::Left, 1, Some(1)), (Side::Right, 1, Some(0))]);
    assert_eq!(plays_, vec![Play::new(), full.prefix(2), full.clone()]);
    for s in &plays_ {
        for n in (0..=s.len()).step_by(2) {
            assert_eq!(g.restrict(&s.prefix(n), Side::Left), g.restrict(&s.prefix(n), Side::Right));
        }
    }
    assert!(is_strategy(&g, &plays_));
}

#[test]
fn copycat_is_an_identity_for_composition() {
    let a = ty_arena("(bool -> unit) -> unit");
    let id = copycat(&a);
    let b = Bounds::new(8);
    assert!(equals_up_to(&compose(&id, &id).unwrap(), &id, &b));
    let i = involution_i();
    assert!(equals_up_to(&compose(&i, &id).unwrap(), &i, &b));
    assert!(equals_up_to(&compose(&id, &i).unwrap(), &i, &b));
    let v = ty_arena("var[bool] -> bool");
    assert!(equals_up_to(&compose(&copycat(&v), &copycat(&v)).unwrap(), &copycat(&v), &Bounds::new(6)));
    let mismatch = compose(&copycat(&v), &id);
    assert_eq!(mismatch.unwrap_err(), StrategyError::MismatchedMiddle);
}

#[test]
fn involution_copies_then_swaps() {
    let inv = Involution::new();
    let g = inv.game();
    let i = involution_i();
    use Side::*;
    // q q q1 q1 a1 a1 q1 q2 a2 a1 a a: the second q1 is answered by q2.
    let fig = play(
        &g,
        &[
            (Right, inv.q, None),
            (Left, inv.q, Some(0)),
            (Left, inv.q1, Some(1)),
            (Right, inv.q1, Some(0)),
            (Right, inv.a1, Some(3)),
            (Left, inv.a1, Some(2)),
            (Left, inv.q1, Some(1)),
            (Right, inv.q2, Some(0)),
            (Right, inv.a2, Some(7)),
            (Left, inv.a1, Some(6)),
            (Left, inv.a, Some(1)),
            (Right, inv.a, Some(0)),
        ],
    );
    assert!(is_legal(&g.arena, &fig));
    assert!(i.contains(&fig));
    assert!(!copycat(&inv.arena).contains(&fig));
    assert!(i.contains(&fig.prefix(4)));
    assert!(g.is_zigzag(&fig));
    // Interleaving a second question before the first is answered swaps too.
    let early = play(&g, &[(Right, inv.q, None), (Left, inv.q, Some(0)), (Left, inv.q1, Some(1)), (Right, inv.q1, Some(0)), (Left, inv.q2, Some(1))]);
    assert_eq!(i.respond(&early), Some(Entry::new(g.global(Right, inv.q1), Some(0))));
}

#[test]
fn involution_against_copycat() {
    let i = involution_i();
    let id = copycat(&Involution::new().arena);
    assert!(equals_up_to(&i, &id, &Bounds::new(4)));
    for n in [6, 8, 10] {
        assert!(!equals_up_to(&i, &id, &Bounds::new(n)), "bound {n}");
    }
    // The shortest divergence: q q q1 q1 q2, answered by q1 instead of q2.
    let d = first_difference(&i, &id, &Bounds::new(6)).unwrap();
    assert_eq!(d.len(), 5);
}

#[test]
fn involution_is_its_own_inverse() {
    let i = involution_i();
    let id = copycat(&Involution::new().arena);
    let ii = compose(&i, &i).unwrap();
    assert!(equals_up_to(&ii, &id, &Bounds::new(12).threads()));
    assert!(equals_up_to(&ii, &id, &Bounds::new(8)));
    assert!(is_iso_pair(&i, &i, &Bounds::new(8)).unwrap());
}

#[test]
fn strategy_classes() {
    let inv = Involution::new();
    let b = Bounds::new(8);
    let id = copycat(&inv.arena);
    assert!(is_single_threaded(&id, &b).unwrap());
    assert!(is_visible(&id, &b).unwrap());
    assert!(is_innocent(&id, &b).unwrap());
    let i = involution_i();
    assert!(is_single_threaded(&i, &b).unwrap());
    assert!(is_visible(&i, &b).unwrap());
    assert!(!is_innocent(&i, &b).unwrap());
    // A second thread answered with a pointer into the first one.
    let g = inv.game();
    use Side::*;
    let s = play(&g, &[(Right, inv.q, None), (Left, inv.q, Some(0)), (Right, inv.q, None), (Left, inv.q, Some(0))]);
    let bad = Strategy::from_play_set(g.clone(), &[Play::new(), s.prefix(2), s.clone()]).unwrap();
    assert!(!is_visible(&bad, &b).unwrap());
    assert!(!is_single_threaded(&bad, &b).unwrap());
}

#[test]
fn explicit_strategies_are_checked() {
    let inv = Involution::new();
    let g = inv.game();
    use Side::*;
    let s = play(&g, &[(Right, inv.q, None), (Left, inv.q, Some(0))]);
    let t = play(&g, &[(Right, inv.q, None), (Right, inv.a, Some(0))]);
    assert!(matches!(Strategy::from_play_set(g.clone(), &[s.clone()]), Err(StrategyError::NotPrefixClosed(_))));
    assert!(matches!(Strategy::explicit(g.clone(), [s.clone(), t]), Err(StrategyError::Nondeterministic(_))));
    assert!(matches!(Strategy::explicit(g.clone(), [s.prefix(1)]), Err(StrategyError::NotPlayerEnding(_))));
    let lazy = play(&g, &[(Left, inv.q, None)]);
    assert!(matches!(Strategy::explicit(g.clone(), [lazy]), Err(StrategyError::IllegalPlay(_))));
    // Dumps round-trip.
    let i = involution_i();
    let b = Bounds::new(6);
    let doc = i.to_json(&b).unwrap();
    assert_eq!(doc["format"], STRATEGY_FORMAT);
    let back = Strategy::from_json(g, &doc).unwrap();
    assert!(back.is_explicit());
    assert!(equals_up_to(&back, &i, &b));
}

#[test]
fn complete_play_preorder() {
    let i = involution_i();
    let b = Bounds::new(8);
    assert!(comp_preorder(&i, &i, &b).unwrap());
    let prefix = i.to_explicit(&Bounds::new(4)).unwrap();
    assert!(comp_preorder(&prefix, &i, &b).unwrap());
    assert!(!comp_preorder(&i, &prefix, &b).unwrap());
    let id = copycat(&Involution::new().arena);
    assert!(!comp_preorder(&i, &id, &Bounds::new(12).threads()).unwrap());
}

#[test]
fn cell_protocol() {
    let fam = interpret_type(&parse_type("bool").unwrap()).unwrap();
    let c = cell(&fam);
    let w = |i: usize| format!("R/c0/p0/p{i}/R/q");
    // Lift, then write `false` (component 1), then read.
    let out = drive(&c, &[("R/q", None), (&w(1), Some(1)), ("R/c0/p1/q", Some(1))]);
    assert_eq!(out, vec![Some("R/a0".into()), Some("R/c0/p0/p1/R/a0".into()), Some("R/c0/p1/a1".into())]);
    // The latest write wins.
    let out = drive(&c, &[("R/q", None), (&w(1), Some(1)), (&w(0), Some(1)), ("R/c0/p1/q", Some(1))]);
    assert_eq!(out.last().unwrap().as_deref(), Some("R/c0/p1/a0"));
    // Without interaction only the lift is played; reading first is silent.
    assert_eq!(c.materialize(&Bounds::new(2)).unwrap().len(), 2);
    assert_eq!(drive(&c, &[("R/q", None), ("R/c0/p1/q", Some(1))]), vec![Some("R/a0".into()), None]);
}

#[test]
fn cell_copies_payloads() {
    let fam = interpret_type(&parse_type("unit -> unit").unwrap()).unwrap();
    let c = cell(&fam);
    let out = drive(
        &c,
        &[
            ("R/q", None),
            ("R/c0/p0/p0/R/q", Some(1)),
            ("R/c0/p1/q", Some(1)),
            ("R/c0/p1/c0/p0/R/q", Some(5)),
            ("R/c0/p0/p0/L/p0/R/a0", Some(7)),
        ],
    );
    assert_eq!(
        out,
        vec![
            Some("R/a0".into()),
            Some("R/c0/p0/p0/R/a0".into()),
            Some("R/c0/p1/a0".into()),
            Some("R/c0/p0/p0/L/p0/R/q".into()),
            Some("R/c0/p1/c0/p0/R/a0".into()),
        ]
    );
    let s = c.materialize(&Bounds::new(10)).unwrap();
    assert!(is_strategy(c.game(), &s));
}

/// Straight-line scripts over one boolean reference: `Some(b)` writes, `None` reads.
fn script_program(ops: &[Option<bool>]) -> TermExpr {
    let mut body = String::from("let x = new[bool] in ");
    for op in ops {
        match op {
            Some(b) => body.push_str(&format!("x := {b}; ")),
            None => body.push_str("!x; "),
        }
    }
    body.push_str("!x");
    parse_term(&body).unwrap()
}

proptest! {
    #[test]
    fn cell_agrees_with_the_interpreter(ops in prop::collection::vec(prop::option::of(any::<bool>()), 0..6)) {
        let c = cell(&interpret_type(&parse_type("bool").unwrap()).unwrap());
        let mut opponent: Vec<(String, Option<usize>)> = vec![("R/q".into(), None)];
        for op in &ops {
            match op {
                Some(b) => opponent.push((format!("R/c0/p0/p{}/R/q", usize::from(!b)), Some(1))),
                None => opponent.push(("R/c0/p1/q".into(), Some(1))),
            }
        }
        opponent.push(("R/c0/p1/q".into(), Some(1)));
        let refs: Vec<(&str, Option<usize>)> = opponent.iter().map(|(s, j)| (s.as_str(), *j)).collect();
        let game_says = drive(&c, &refs);
        // Reads before the first write stop the cell; the interpreter sticks.
        let out = eval(&Configuration::new(), &script_program(&ops), 10_000).unwrap();
        match out {
            Outcome::StuckRead(_) => prop_assert_eq!(game_says.last().unwrap(), &None),
            Outcome::Value { value, .. } => {
                let idx = if value == TermExpr::True { 0 } else { 1 };
                prop_assert_eq!(game_says.len(), opponent.len());
                prop_assert_eq!(game_says.last().unwrap().clone(), Some(format!("R/c0/p1/a{idx}")));
            }
            other => prop_assert!(false, "unexpected {other:?}"),
        }
    }
}

#[test]
fn composition_is_associative_on_samples() {
    let inv = Involution::new();
    let a = &inv.arena;
    // The automorphism exchanging the two argument questions.
    let mut perm: Vec<usize> = (0..a.len()).collect();
    perm.swap(inv.q1, inv.q2);
    perm.swap(inv.a1, inv.a2);
    let swap = relabel(inv.game(), perm);
    let i = involution_i();
    let b = Bounds::new(8);
    assert!(is_iso_pair(&swap, &swap, &b).unwrap());
    for (x, y, z) in [(&i, &swap, &i), (&swap, &i, &swap), (&i, &i, &swap)] {
        let left = compose(&compose(x, y).unwrap(), z).unwrap();
        let right = compose(x, &compose(y, z).unwrap()).unwrap();
        assert!(equals_up_to(&left, &right, &b));
        assert!(is_single_threaded(&left, &Bounds::new(6)).unwrap());
    }
}

#[test]
fn hotel_pair_before_any_call_is_the_identity() {
    let (sigma, _tau) = hotel_strategies(Arc::new(DefaultHotel), 64);
    let out = drive(&sigma, &[("R/q0", None), ("L/n3", Some(1)), ("R/na3", Some(3)), ("L/a0", Some(1))]);
    assert_eq!(out, vec![Some("L/q0".into()), Some("R/n3".into()), Some("L/na3".into()), Some("R/a0".into())]);
    // After one call, f's argument is stretched and x(·)'s argument shares the rooms.
    let out = drive(
        &sigma,
        &[("R/q0", None), ("L/a0", Some(1)), ("R/q'", Some(3)), ("L/m0", Some(5)), ("R/ua", Some(7)), ("L/m2", Some(5)), ("L/n2", Some(1))],
    );
    assert_eq!(
        out,
        vec![
            Some("L/q0".into()),
            Some("R/a0".into()),
            Some("L/q'".into()),
            Some("R/u".into()),
            Some("L/ma0".into()),
            Some("R/n3".into()),
            Some("R/n4".into()),
        ]
    );
}

#[test]
fn hotel_bijections_are_bijective() {
    for h in [&DefaultHotel as &dyn HotelBijection, &ShiftedHotel] {
        for n in 0..5 {
            let mut seen = std::collections::BTreeSet::new();
            for copy in 0..=n {
                for k in 0..40 {
                    let room = h.forward(n, copy, k);
                    assert_eq!(h.backward(n, room), (copy, k));
                    assert!(seen.insert(room));
                }
            }
            for c in 1..=n {
                assert!(seen.contains(&HotelRoom::Unit(c)));
            }
            for m in 0..30 {
                assert!(seen.contains(&HotelRoom::Nat(m)));
            }
        }
    }
    assert_eq!(nat_index("R/na12"), Some(12));
    assert_eq!(nat_index("L/q'"), None);
    assert_eq!(nat_index("R/a0"), None);
}

#[test]
fn hotel_pair_is_an_isomorphism() {
    let b = Bounds::new(8).nat_below(4);
    for hotel in [Arc::new(DefaultHotel) as Arc<dyn HotelBijection>, Arc::new(ShiftedHotel)] {
        let (sigma, tau) = hotel_strategies(hotel, 64);
        assert!(is_iso_pair(&sigma, &tau, &b).unwrap());
        assert_eq!(sigma.totality_gap(&b).unwrap(), None);
        assert!(is_visible(&sigma, &b).unwrap());
        assert!(!is_visible(&tau, &b).unwrap());
    }
}

#[test]
fn isomorphisms_are_pre_zigzag_with_dual_partners() {
    for (n, (sigma, tau, b)) in iso_fixtures().into_iter().enumerate() {
        let finite = n < 3;
        let plays_ = sigma.materialize(&b).unwrap();
        let duals: std::collections::BTreeSet<Play> = tau.materialize(&b).unwrap().into_iter().collect();
        for s in &plays_ {
            assert!(sigma.game().is_pre_zigzag(s), "{s:?}");
            let d = sigma.game().dual_play(s).unwrap();
            assert!(tau.contains(&d));
            if !finite {
                continue;
            }
            let (l, r) = (sigma.game().restrict(s, Side::Left), sigma.game().restrict(s, Side::Right));
            assert_eq!(q_count(&sigma.game().left, &l), q_count(&sigma.game().right, &r));
            if s.len() >= 2 {
                let g = sigma.game();
                let arity = |m: usize| g.component(g.side(m)).children(g.local(m)).len();
                assert_eq!(arity(s.0[s.len() - 2].mv), arity(s.0[s.len() - 1].mv));
            }
        }
        if finite {
            // Duals of Player moves are Opponent moves: an exact bijection
            // needs the unfiltered bound.
            let mine: std::collections::BTreeSet<Play> = plays_.iter().map(|s| sigma.game().dual_play(s).unwrap()).collect();
            assert_eq!(mine, duals);
        }
        // The counterexample's forward half is visible, its inverse is not.
        assert!(is_visible(&sigma, &b).unwrap());
        if is_visible(&tau, &b).unwrap() {
            assert!(plays_.iter().all(|s| sigma.game().is_zigzag(s)));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn materializations_are_strategies(seed in any::<u64>(), n in 2usize..9) {
        let fixtures = iso_fixtures();
        let (sigma, _, b) = &fixtures[(seed % 4) as usize];
        let b = Bounds { length: n.min(b.length), ..b.clone() };
        let plays_ = sigma.materialize(&b).unwrap();
        prop_assert!(is_strategy(sigma.game(), &plays_));
        prop_assert_eq!(sigma.totality_gap(&b).unwrap(), None);
    }

    #[test]
    fn composition_preserves_single_threadedness(seed in any::<u64>()) {
        let fixtures = iso_fixtures();
        let (x, y, _) = &fixtures[(seed % 3) as usize];
        let z = compose(x, y).unwrap();
        prop_assert!(is_single_threaded(&z, &Bounds::new(6)).unwrap());
    }
}

#[test]
fn random_legal_plays_have_copycat_duals() {
    let a = two_question_arena();
    let g = Arrow::new(a.clone(), a.clone());
    let id = copycat(&a);
    for seed in 0..50 {
        let s = random_play(&g.arena, seed, 10, |t| t.len() % 2 == 1 || id.contains(t));
        let s = s.prefix(s.len() & !1);
        assert!(id.contains(&s));
        assert!(id.contains(&g.dual_play(&s).unwrap()));
    }
}
