mod common;

use common::*;
use gamiso::arena::*;
use gamiso::lang::parse_type;
use gamiso::plays::*;
use proptest::prelude::*;

fn e(mv: usize, j: Option<usize>) -> Entry {
    Entry::new(mv, j)
}

fn two_q_arrow() -> Arrow {
    let a = two_question_arena();
    Arrow::new(a.clone(), a)
}

/// Global index of a named move on one side of an arrow.
fn at(g: &Arrow, side: Side, id: &str) -> usize {
    g.global(side, g.component(side).index_of(id).unwrap())
}

#[test]
fn legality_examples() {
    let a = two_question_arena();
    let (q, ans, q1, a1) = (0, 1, 2, 4);
    let s = Play(vec![e(q, None), e(q1, Some(0)), e(a1, Some(1)), e(ans, Some(0))]);
    assert!(is_legal(&a, &s));
    assert!(is_complete(&a, &s));
    // Answering the outer question while the inner one is pending.
    let t = Play(vec![e(q, None), e(q1, Some(0)), e(ans, Some(0))]);
    assert!(is_justified(&a, &t));
    assert!(!is_well_bracketed(&a, &t));
    assert!(!is_pre_legal(&a, &t));
    // Two Player moves in a row.
    let u = Play(vec![e(q, None), e(q1, Some(0)), e(2 + 1, Some(0))]);
    assert!(!is_alternating(&a, &u));
    assert!(is_pre_legal(&a, &u));
    assert!(!is_justified(&a, &Play(vec![e(q1, None)])));
    assert!(!is_justified(&a, &Play(vec![e(q, None), e(a1, Some(0))])));
}

#[test]
fn views_and_threads() {
    let g = two_q_arrow();
    let (rq, lq, lq1, la1, lq2) =
        (at(&g, Side::Right, "q"), at(&g, Side::Left, "q"), at(&g, Side::Left, "q1"), at(&g, Side::Left, "a1"), at(&g, Side::Left, "q2"));
    let rq1 = at(&g, Side::Right, "q1");
    let s = Play(vec![e(rq, None), e(lq, Some(0)), e(lq1, Some(1)), e(rq1, Some(0)), e(rq1 + 2, Some(3)), e(la1, Some(2))]);
    assert!(is_legal(&g.arena, &s));
    // P-view after the last move: q q q1 . . a1 keeps the pointer to q1.
    assert_eq!(p_view_positions(&g.arena, &s), vec![0, 1, 2, 3, 4, 5]);
    let t = s.extended(e(lq2, Some(1)));
    assert_eq!(p_view_positions(&g.arena, &t), vec![0, 1, 6]);
    let v = p_view(&g.arena, &s.prefix(3));
    assert_eq!(v.len(), 3);
    // Two threads interleaved.
    let a = two_question_arena();
    let two = Play(vec![e(0, None), e(2, Some(0)), e(0, None), e(3, Some(2)), e(4, Some(1))]);
    assert_eq!(current_thread_positions(&two).unwrap(), vec![0, 1, 4]);
    assert_eq!(current_thread(&two.prefix(4)).unwrap(), Play(vec![e(0, None), e(3, Some(0))]));
    assert!(current_thread(&Play::new()).is_err());
    assert_eq!(two.initial_count(), 2);
    assert_eq!(two.jp(), two.prefix(2));
    assert_eq!(two.prefix(3).jp(), Play::new());
    assert_eq!(two.ip(), two.prefix(4));
    assert_eq!(q_count(&a, &two.prefix(2)), 4);
}

#[test]
fn restriction_and_zigzag() {
    let g = two_q_arrow();
    let (rq, lq, la, ra) = (at(&g, Side::Right, "q"), at(&g, Side::Left, "q"), at(&g, Side::Left, "a"), at(&g, Side::Right, "a"));
    let copy = Play(vec![e(rq, None), e(lq, Some(0)), e(la, Some(1)), e(ra, Some(0))]);
    assert!(g.is_zigzag(&copy));
    let l = g.restrict(&copy, Side::Left);
    let r = g.restrict(&copy, Side::Right);
    assert_eq!(l, r);
    assert_eq!(l, Play(vec![e(0, None), e(1, Some(0))]));
    // Answering without consulting the argument is pre-zig-zag but not zig-zag.
    let lazy = Play(vec![e(rq, None), e(ra, Some(0))]);
    assert!(!g.is_pre_zigzag(&lazy));
    // Player answering the second Opponent question with a pointer to the
    // wrong copy: the restrictions disagree.
    use Kind::*;
    use Polarity::*;
    let c = Arena::from_parts(
        vec![mv("q", O, Q), mv("a", P, A), mv("p", P, Q), mv("pa", O, A), mv("r", O, Q), mv("ra", P, A)],
        vec![0],
        vec![(0, 1), (0, 2), (2, 3), (2, 4), (4, 5)],
    )
    .unwrap();
    let h = Arrow::new(c.clone(), c);
    let m = |side, id| at(&h, side, id);
    let (l, r) = (Side::Left, Side::Right);
    let base = Play(vec![
        e(m(r, "q"), None),
        e(m(l, "q"), Some(0)),
        e(m(l, "p"), Some(1)),
        e(m(r, "p"), Some(0)),
        e(m(r, "r"), Some(3)),
        e(m(l, "r"), Some(2)),
        e(m(l, "ra"), Some(5)),
        e(m(r, "ra"), Some(4)),
        e(m(r, "pa"), Some(3)),
        e(m(l, "pa"), Some(2)),
        e(m(l, "p"), Some(1)),
        e(m(r, "p"), Some(0)),
        e(m(r, "r"), Some(3)),
    ]);
    let good = base.extended(e(m(l, "r"), Some(2)));
    let bad = base.extended(e(m(l, "r"), Some(10)));
    for s in [&good, &bad] {
        assert!(is_legal(&h.arena, s));
        assert!(h.is_pre_zigzag(s));
    }
    assert!(h.is_zigzag(&good));
    assert!(!h.is_zigzag(&bad));
}

#[test]
fn dual_examples() {
    let g = two_q_arrow();
    let (rq, lq, la, ra) = (at(&g, Side::Right, "q"), at(&g, Side::Left, "q"), at(&g, Side::Left, "a"), at(&g, Side::Right, "a"));
    let copy = Play(vec![e(rq, None), e(lq, Some(0)), e(la, Some(1)), e(ra, Some(0))]);
    let d = g.dual_play(&copy).unwrap();
    let gd = g.dual();
    assert_eq!(d, Play(vec![e(gd.global(Side::Right, 0), None), e(gd.global(Side::Left, 0), Some(0)), e(gd.global(Side::Left, 1), Some(1)), e(gd.global(Side::Right, 1), Some(0))]));
    assert!(is_legal(&gd.arena, &d));
    assert_eq!(g.dual_play(&copy.prefix(3)), Err(PlayError::OddLength));
    assert_eq!(gd.dual_play(&d).unwrap(), copy);
}

#[test]
fn play_json_round_trip() {
    let a = parse_type("var[bool]").map(|t| interpret_type(&t).unwrap().remove(0)).unwrap();
    let s = random_play(&a, 3, 6, |_| true);
    let j = s.to_json(&a);
    assert_eq!(Play::from_json(&a, &j).unwrap(), s);
    let bad = serde_json::json!([{"move": "nope", "justifier": null}]);
    assert!(matches!(Play::from_json(&a, &bad), Err(PlayError::UnknownMove(_))));
}

#[test]
fn paths() {
    let a = two_question_arena();
    assert!(is_path(&a, &path_play(&[0, 2, 4])));
    assert!(!is_path(&a, &path_play(&[0, 4])));
    assert!(!is_path(&a, &Play(vec![e(0, None), e(2, Some(0)), e(3, Some(0))])));
}

fn arenas() -> Vec<Arena> {
    ["(bool -> unit) -> unit", "var[bool] -> bool", "(unit -> bool) -> bool * unit", "bool -> bool"]
        .iter()
        .map(|s| interpret_type(&parse_type(s).unwrap()).unwrap().remove(0))
        .collect()
}

proptest! {
    #[test]
    fn next_moves_agrees_with_brute_force(seed in any::<u64>(), which in 0usize..4, len in 0usize..9) {
        let a = &arenas()[which];
        let s = random_play(a, seed, len, |_| true);
        prop_assert!(is_legal(a, &s));
        let mut fast = next_moves(a, &s, false);
        fast.sort();
        prop_assert_eq!(fast, brute_next(a, &s));
        let thread = next_moves(a, &s, true);
        prop_assert!(thread.iter().all(|e| e.justifier.is_some() || s.is_empty()));
    }

    #[test]
    fn p_view_agrees_with_recursive_definition(seed in any::<u64>(), which in 0usize..4, len in 1usize..12) {
        let a = &arenas()[which];
        let s = random_play(a, seed, len, |_| true);
        prop_assert_eq!(p_view_positions(a, &s), p_view_oracle(a, &s.0));
    }

    #[test]
    fn threads_are_closed_under_justification(seed in any::<u64>(), which in 0usize..4, len in 1usize..12) {
        let a = &arenas()[which];
        let s = random_play(a, seed, len, |_| true);
        let t = current_thread(&s).unwrap();
        prop_assert_eq!(t.initial_count(), 1);
        prop_assert!(is_justified(a, &t));
    }

    #[test]
    fn dual_is_an_involution_preserving_restrictions(seed in any::<u64>(), l in 0usize..4, r in 0usize..4, len in 0usize..12) {
        let all = arenas();
        let g = Arrow::new(all[l].clone(), all[r].clone());
        let s = random_pre_zigzag(&g, seed, len);
        prop_assert!(is_legal(&g.arena, &s) && g.is_pre_zigzag(&s));
        let gd = g.dual();
        let d = g.dual_play(&s).unwrap();
        prop_assert!(gd.is_pre_zigzag(&d));
        prop_assert!(is_justified(&gd.arena, &d));
        prop_assert_eq!(gd.restrict(&d, Side::Right), g.restrict(&s, Side::Left));
        prop_assert_eq!(gd.restrict(&d, Side::Left), g.restrict(&s, Side::Right));
        prop_assert_eq!(gd.is_zigzag(&d), g.is_zigzag(&s));
        prop_assert_eq!(gd.dual_play(&d).unwrap(), s);
    }
}
