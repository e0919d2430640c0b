mod common;

use common::*;
use gamiso::arena::*;
use gamiso::iso::enumerate_types;
use gamiso::lang::{parse_type, Lang, TypeExpr};
use proptest::prelude::*;

fn ty(s: &str) -> TypeExpr {
    parse_type(s).unwrap()
}

fn identity(a: &Arena, m: usize, k: usize) -> KIso {
    if k == 0 {
        return KIso::empty(m, m);
    }
    KIso { depth: k, source: m, target: m, children: a.children(m).iter().map(|&c| identity(a, c, k - 1)).collect() }
}

#[test]
fn unit_lift_is_a_single_answered_question() {
    let t1 = lifted_sum(&[Arena::empty()]);
    t1.validate().unwrap();
    assert_eq!(t1.len(), 2);
    assert_eq!(t1.initials(), &[0]);
    assert_eq!(t1.children(0), &[1]);
    assert_eq!((t1.op(1), t1.qa(1)), (Polarity::P, Kind::A));
    assert_eq!(t1, unit_lift());
}

#[test]
fn two_question_arena_is_the_interpretation() {
    let fam = interpret_type(&ty("(bool -> unit) -> unit")).unwrap();
    assert_eq!(fam.len(), 1);
    let a = &fam[0];
    a.validate().unwrap();
    let q = a.initials()[0];
    assert_eq!(a.initials().len(), 1);
    assert_eq!(a.arity(q).unwrap(), 3);
    let questions: Vec<usize> = a.children(q).iter().copied().filter(|&c| a.qa(c) == Kind::Q).collect();
    assert_eq!(questions.len(), 2);
    for &c in &questions {
        assert_eq!(a.children(c).len(), 1);
        assert_eq!(a.qa(a.children(c)[0]), Kind::A);
    }
    let hand = two_question_arena();
    assert_eq!(canon(a, q, 3, true), canon(&hand, 0, 3, true));
    assert!(path_iso_decide(a, &hand).is_some());
    let built = arrow(&product(&unit_lift(), &unit_lift()), &unit_lift());
    assert!(path_iso_decide(&built, &hand).is_some());
}

#[test]
fn ground_families() {
    let u = interpret_type(&TypeExpr::Unit).unwrap();
    assert_eq!(u, vec![Arena::empty()]);
    assert_eq!(interpret_type(&TypeExpr::Bool).unwrap().len(), 2);
    assert_eq!(interpret_type(&ty("bool * bool * unit")).unwrap().len(), 4);
    assert!(interpret_type(&TypeExpr::Nat).is_err());
}

#[test]
fn interpretations_are_well_formed() {
    for t in enumerate_types(4, Lang::L2) {
        for a in interpret_type(&t).unwrap() {
            a.validate().unwrap_or_else(|e| panic!("{t}: {e}"));
        }
    }
}

#[test]
fn arity_examples() {
    let a = two_question_arena();
    assert_eq!(a.arity(1).unwrap(), 0);
    assert_eq!(a.arity(0).unwrap(), 3);
    assert!(a.arity(99).is_err());
    let perm = vec![5, 4, 3, 2, 1, 0];
    let r = rename_moves(&a, &perm).unwrap();
    for m in 0..a.len() {
        assert_eq!(a.arity(m).unwrap(), r.arity(perm[m]).unwrap());
    }
}

#[test]
fn k_iso_examples() {
    let a = two_question_arena();
    for m in 0..a.len() {
        for n in 0..a.len() {
            assert_eq!(k_iso(&a, m, &a, n, 0), Some(KIso::empty(m, n)));
            assert_eq!(k_iso_shape(&a, m, &a, n, 1).is_some(), a.arity(m).unwrap() == a.arity(n).unwrap());
        }
    }
    // Depth-two moves whose children have arities {0,1} and {0,0}.
    use Kind::*;
    use Polarity::*;
    let x = Arena::from_parts(
        vec![mv("r", O, Q), mv("ra", P, A), mv("c", P, Q), mv("ca", O, A)],
        vec![0],
        vec![(0, 1), (0, 2), (2, 3)],
    )
    .unwrap();
    let y = Arena::from_parts(
        vec![mv("r", O, Q), mv("ra", P, A), mv("rb", P, A)],
        vec![0],
        vec![(0, 1), (0, 2)],
    )
    .unwrap();
    assert!(k_iso_shape(&x, 0, &y, 0, 1).is_some());
    assert!(k_iso_shape(&x, 0, &y, 0, 2).is_none());
    assert!(k_iso(&x, 0, &y, 0, 2).is_none());
}

#[test]
fn labels_matter_for_k_iso() {
    use Kind::*;
    use Polarity::*;
    let x = Arena::from_parts(vec![mv("r", O, Q), mv("a", P, A), mv("b", P, A)], vec![0], vec![(0, 1), (0, 2)]).unwrap();
    let y = Arena::from_parts(
        vec![mv("r", O, Q), mv("a", P, A), mv("c", P, Q), mv("d", O, A)],
        vec![0],
        vec![(0, 1), (0, 2), (2, 3)],
    )
    .unwrap();
    assert!(k_iso_shape(&x, 0, &y, 0, 1).is_some());
    assert!(k_iso(&x, 0, &y, 0, 1).is_none());
}

#[test]
fn path_iso_examples() {
    let a = two_question_arena();
    let w = path_iso_decide(&a, &a).unwrap();
    assert_eq!(w.unfold(3), PathIso::identity(&a, 3));
    use Kind::*;
    use Polarity::*;
    let chain = Arena::from_parts(vec![mv("q", O, Q), mv("p", P, Q), mv("a", O, A)], vec![0], vec![(0, 1), (1, 2)]);
    let fan = Arena::from_parts(vec![mv("q", O, Q), mv("a", P, A), mv("b", P, A)], vec![0], vec![(0, 1), (0, 2)]);
    let (chain, fan) = (chain.unwrap(), fan.unwrap());
    assert!(path_iso_decide(&chain, &fan).is_none());
    assert!(path_iso_decide(&product(&Arena::empty(), &a), &a).is_some());
}

#[test]
fn family_examples() {
    let fam = |s: &str| interpret_type(&ty(s)).unwrap();
    let f = family_iso_decide(&fam("bool -> unit"), &fam("bool -> unit")).unwrap();
    assert_eq!(f.bijection, vec![0]);
    assert!(family_iso_decide(&fam("bool"), &fam("unit")).is_none());
    assert!(family_iso_decide(&fam("var[bool]"), &fam("(bool -> unit) * (unit -> bool)")).is_some());
    assert!(family_iso_decide(&fam("unit -> unit"), &fam("unit -> bool")).is_none());
}

#[test]
fn renaming_behaves_like_relabelling() {
    let a = interpret_type(&ty("var[bool] -> bool")).unwrap().remove(0);
    let n = a.len();
    let id: Vec<usize> = (0..n).collect();
    assert_eq!(rename_moves(&a, &id).unwrap(), a);
    let p: Vec<usize> = (0..n).map(|i| (i * 7 + 3) % n).collect();
    let q: Vec<usize> = (0..n).rev().collect();
    let once = rename_moves(&rename_moves(&a, &p).unwrap(), &q).unwrap();
    let pq: Vec<usize> = p.iter().map(|&i| q[i]).collect();
    assert_eq!(once, rename_moves(&a, &pq).unwrap());
    let r = rename_moves(&a, &p).unwrap();
    let w = path_iso_decide(&r, &a).unwrap().unfold(8);
    assert!(w.validate(&r, &a));
    assert!(rename_moves(&a, &vec![0; n]).is_err());
}

#[test]
fn json_and_dot_round_trip() {
    let a = interpret_type(&ty("var[bool]")).unwrap().remove(0);
    let j = a.to_json();
    assert_eq!(j["format"], ARENA_FORMAT);
    assert_eq!(Arena::from_json(&j).unwrap(), a);
    let dot = a.to_dot();
    assert!(dot.starts_with("digraph arena {"));
    assert_eq!(dot.matches("->").count(), a.enabling().count());
    let bad = serde_json::json!({"format": ARENA_FORMAT, "moves": [], "initials": ["x"], "enabling": []});
    assert!(Arena::from_json(&bad).is_err());
}

#[test]
fn validator_rejects_malformed_arenas() {
    use Kind::*;
    use Polarity::*;
    let incomplete = Arena::from_parts(vec![mv("q", O, Q)], vec![0], vec![]).unwrap();
    assert!(matches!(incomplete.validate(), Err(ArenaError::Incomplete(_))));
    let same = Arena::from_parts(vec![mv("q", O, Q), mv("a", O, A)], vec![0], vec![(0, 1)]).unwrap();
    assert!(matches!(same.validate(), Err(ArenaError::SamePolarity(..))));
    let init = Arena::from_parts(vec![mv("a", P, A)], vec![0], vec![]).unwrap();
    assert!(matches!(init.validate(), Err(ArenaError::BadInitial(_))));
    assert!(Arena::from_parts(vec![mv("q", O, Q), mv("q", P, A)], vec![0], vec![]).is_err());
}

#[test]
fn hotel_arenas_have_the_expected_shape() {
    let (l, r) = hotel_arenas();
    assert_eq!(l.initials().len(), 1);
    assert_eq!(r.initials().len(), 1);
    let (tl, tr) = (l.truncate(8), r.truncate(8));
    tl.validate().unwrap();
    tr.validate().unwrap();
    let q0 = tl.index_of("q0").unwrap();
    assert_eq!(tl.arity(q0).unwrap(), 9);
    let ql = tl.index_of("q'").unwrap();
    let qr = tr.index_of("q'").unwrap();
    assert_eq!(tl.arity(ql).unwrap(), 9);
    assert_eq!(tr.arity(qr).unwrap(), 2);
    // Four levels of exploration stay well formed at any width.
    for w in 1..5 {
        l.explore(4, w).validate().unwrap();
        r.explore(4, w).validate().unwrap();
    }
}

proptest! {
    #[test]
    fn k_iso_agrees_with_canonical_strings(s1 in any::<u64>(), s2 in any::<u64>(), k in 0usize..5) {
        let (a, b) = (random_arena(s1, 7), random_arena(s2, 7));
        for m in 0..a.len() {
            for n in 0..b.len() {
                for labelled in [true, false] {
                    let w = if labelled { k_iso(&a, m, &b, n, k) } else { k_iso_shape(&a, m, &b, n, k) };
                    prop_assert_eq!(w.is_some(), canon(&a, m, k, labelled) == canon(&b, n, k, labelled));
                    if let (Some(w), true) = (w, labelled) {
                        prop_assert!(w.validate(&a, &b));
                        for j in 0..=k {
                            prop_assert!(w.truncate(j).validate(&a, &b));
                            prop_assert!(w.truncate(j).is_prefix_of(&w));
                        }
                        prop_assert_eq!(w.compose(&w.inverse()).unwrap(), identity(&a, m, k));
                    }
                }
            }
        }
    }

    #[test]
    fn path_iso_agrees_with_canonical_strings(s1 in any::<u64>(), s2 in any::<u64>()) {
        let (a, b) = (random_arena(s1, 6), random_arena(s2 % 8 + s1.wrapping_mul(3), 6));
        let depth = longest_path(&a).max(longest_path(&b));
        let key = |x: &Arena| {
            let mut v: Vec<String> = x.initials().iter().map(|&i| canon(x, i, depth, true)).collect();
            v.sort();
            v
        };
        let w = path_iso_decide(&a, &b);
        prop_assert_eq!(w.is_some(), key(&a) == key(&b));
        if let Some(w) = w {
            prop_assert!(w.unfold(depth).validate(&a, &b));
        }
    }

    #[test]
    fn renaming_preserves_path_isomorphism(s in any::<u64>(), rot in 0usize..50) {
        let a = random_arena(s, 8);
        let n = a.len();
        let perm: Vec<usize> = (0..n).map(|i| (i + rot) % n).collect();
        let r = rename_moves(&a, &perm).unwrap();
        r.validate().unwrap();
        let w = path_iso_decide(&a, &r).unwrap();
        let depth = longest_path(&a);
        prop_assert!(w.unfold(depth).validate(&a, &r));
        let b = random_arena(s ^ 0x55, 8);
        prop_assert_eq!(path_iso_decide(&a, &b).is_some(), path_iso_decide(&r, &b).is_some());
    }
}
