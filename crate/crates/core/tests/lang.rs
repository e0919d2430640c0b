use gamiso::lang::*;
use proptest::prelude::*;

fn ty(s: &str) -> TypeExpr {
    parse_type(s).unwrap()
}

fn term(s: &str) -> TermExpr {
    parse_term(s).unwrap()
}

#[test]
fn type_precedence() {
    assert_eq!(ty("unit"), TypeExpr::Unit);
    assert_eq!(ty("var[bool]"), TypeExpr::var(TypeExpr::Bool));
    assert_eq!(
        ty("bool * unit -> unit"),
        TypeExpr::arrow(TypeExpr::prod(TypeExpr::Bool, TypeExpr::Unit), TypeExpr::Unit)
    );
    assert_eq!(
        ty("unit -> unit -> bool"),
        TypeExpr::arrow(TypeExpr::Unit, TypeExpr::arrow(TypeExpr::Unit, TypeExpr::Bool))
    );
    assert_eq!(
        ty("unit * bool * unit"),
        TypeExpr::prod(TypeExpr::prod(TypeExpr::Unit, TypeExpr::Bool), TypeExpr::Unit)
    );
}

#[test]
fn parse_errors_carry_positions() {
    let e = parse_type("bool ->").unwrap_err();
    assert_eq!((e.line, e.column), (1, 8));
    let e = parse_term("fun x: bool ->\n  x )").unwrap_err();
    assert_eq!(e.line, 2);
    assert!(parse_term("@l0").is_err());
}

#[test]
fn basic_terms() {
    assert_eq!(term("skip"), TermExpr::Skip);
    assert_eq!(term("mkvar m n"), TermExpr::mkvar(TermExpr::var("m"), TermExpr::var("n")));
    assert!(matches!(term("new r := true in !r"), TermExpr::NewIn(..)));
    assert_eq!(
        term("a; b; c"),
        TermExpr::seq(TermExpr::var("a"), TermExpr::seq(TermExpr::var("b"), TermExpr::var("c")))
    );
    assert_eq!(
        term("x := !y; z"),
        TermExpr::seq(
            TermExpr::assign(TermExpr::var("x"), TermExpr::deref(TermExpr::var("y"))),
            TermExpr::var("z")
        )
    );
    assert_eq!(
        term("f x y"),
        TermExpr::app(TermExpr::app(TermExpr::var("f"), TermExpr::var("x")), TermExpr::var("y"))
    );
}

#[test]
fn typing_rules() {
    let empty = TypingContext::new(Lang::L2);
    assert_eq!(typecheck(&empty, &term("new[unit]")).unwrap(), ty("var[unit]"));
    let ctx = TypingContext::from_bindings(Lang::L2, [("x".to_string(), TypeExpr::Bool)]).unwrap();
    assert_eq!(typecheck(&ctx, &term("x")).unwrap(), TypeExpr::Bool);
    assert_eq!(
        typecheck(&empty, &term("mkvar (fun x: bool -> skip) (fun d: unit -> true)")).unwrap(),
        ty("var[bool]")
    );
    assert!(matches!(typecheck(&empty, &term("y")), Err(TypeError::Unbound(_))));
    assert!(matches!(typecheck(&empty, &term("if skip then true else false")), Err(TypeError::Mismatch { .. })));
    assert!(matches!(typecheck(&empty, &term("1")), Err(TypeError::NatInL2 { .. })));
    assert!(typecheck(&TypingContext::new(Lang::Lnat), &term("let (q, r) = div 7 2 in q * 2 + r = 7")).is_ok());
    assert!(TypingContext::from_bindings(
        Lang::L2,
        [("x".to_string(), TypeExpr::Bool), ("x".to_string(), TypeExpr::Unit)]
    )
    .is_err());
}

#[test]
fn mismatch_names_the_subterm() {
    let err = typecheck(&TypingContext::new(Lang::L2), &term("fun x: bool -> !x")).unwrap_err();
    assert!(err.to_string().contains("`x`"), "{err}");
}

#[test]
fn desugar_shapes() {
    let d = desugar(&term("skip; true")).unwrap();
    match d {
        TermExpr::App(f, a) => {
            assert!(matches!(*f, TermExpr::Lam(_, TypeExpr::Unit, _)));
            assert_eq!(*a, TermExpr::Skip);
        }
        other => panic!("{other}"),
    }
    let d = desugar(&term("new x: bool in !x")).unwrap();
    assert_eq!(d, term("(fun x: var[bool] -> !x) new[bool]"));
    let prog = term("new r := true in while !r do r := false");
    let d = desugar(&prog).unwrap();
    assert!(!d.has_sugar());
    assert_eq!(desugar(&d).unwrap(), d);
    let empty = TypingContext::new(Lang::L2);
    assert_eq!(typecheck(&empty, &d).unwrap(), typecheck(&empty, &prog).unwrap());
}

#[test]
fn desugar_avoids_capture() {
    let ctx = TypingContext::from_bindings(Lang::L2, [("_d0".to_string(), TypeExpr::Bool)]).unwrap();
    let m = term("skip; _d0");
    let d = desugar_in(&ctx, &m).unwrap();
    assert_eq!(typecheck(&ctx, &d).unwrap(), TypeExpr::Bool);
    match d {
        TermExpr::App(f, _) => assert!(matches!(*f, TermExpr::Lam(ref x, ..) if x != "_d0")),
        other => panic!("{other}"),
    }
}

fn arb_type() -> impl Strategy<Value = TypeExpr> {
    let leaf = prop_oneof![Just(TypeExpr::Unit), Just(TypeExpr::Bool), Just(TypeExpr::Nat)];
    leaf.prop_recursive(4, 16, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| TypeExpr::prod(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| TypeExpr::arrow(a, b)),
            inner.prop_map(TypeExpr::var),
        ]
    })
}

fn arb_name() -> impl Strategy<Value = String> {
    prop_oneof![Just("x"), Just("y"), Just("f"), Just("r0")].prop_map(str::to_string)
}

fn arb_term() -> impl Strategy<Value = TermExpr> {
    let leaf = prop_oneof![
        arb_name().prop_map(TermExpr::Var),
        Just(TermExpr::Skip),
        Just(TermExpr::True),
        Just(TermExpr::False),
        Just(TermExpr::Hole),
        (0u64..20).prop_map(TermExpr::Num),
        arb_type().prop_map(TermExpr::New),
        arb_type().prop_map(TermExpr::Bot),
        arb_type().prop_map(TermExpr::Fix),
    ];
    leaf.prop_recursive(5, 48, 3, |inner| {
        let b = || inner.clone().prop_map(Box::new);
        let unop = prop_oneof![
            Just(UnOp::Fst),
            Just(UnOp::Snd),
            Just(UnOp::Deref),
            Just(UnOp::Not),
            Just(UnOp::Succ),
            Just(UnOp::Pred),
            Just(UnOp::IsZero)
        ];
        let binop = prop_oneof![Just(BinOp::Add), Just(BinOp::Sub), Just(BinOp::Mul), Just(BinOp::Eq)];
        prop_oneof![
            (arb_name(), arb_type(), b()).prop_map(|(x, t, m)| TermExpr::Lam(x, t, m)),
            (b(), b()).prop_map(|(f, a)| TermExpr::App(f, a)),
            (b(), b()).prop_map(|(f, a)| TermExpr::Pair(f, a)),
            (unop, b()).prop_map(|(o, a)| TermExpr::Unary(o, a)),
            (b(), b(), b()).prop_map(|(c, x, y)| TermExpr::If(c, x, y)),
            (b(), b()).prop_map(|(f, a)| TermExpr::Assign(f, a)),
            (b(), b()).prop_map(|(f, a)| TermExpr::MkVar(f, a)),
            (binop, b(), b()).prop_map(|(o, f, a)| TermExpr::Bin(o, f, a)),
            (b(), b()).prop_map(|(f, a)| TermExpr::Div(f, a)),
            (b(), b()).prop_map(|(f, a)| TermExpr::Seq(f, a)),
            (arb_name(), b(), b()).prop_map(|(x, m, n)| TermExpr::Let(x, m, n)),
            (arb_name(), arb_name(), b(), b()).prop_map(|(x, y, m, n)| TermExpr::LetPair(x, y, m, n)),
            (b(), b()).prop_map(|(c, m)| TermExpr::While(c, m)),
            (
                prop::collection::vec(
                    (arb_name(), proptest::option::of(arb_type()), proptest::option::of(inner.clone())),
                    1..3
                ),
                b()
            )
                .prop_map(|(ds, body)| {
                    let decls = ds
                        .into_iter()
                        .map(|(name, ty, init)| {
                            let ty = if ty.is_none() && init.is_none() { Some(TypeExpr::Unit) } else { ty };
                            NewDecl { name, ty, init }
                        })
                        .collect();
                    TermExpr::NewIn(decls, body)
                }),
        ]
    })
}

proptest! {
    #[test]
    fn type_print_parse_roundtrip(t in arb_type()) {
        prop_assert_eq!(parse_type(&print_type(&t)).unwrap(), t);
    }

    #[test]
    fn term_print_parse_roundtrip(m in arb_term()) {
        let text = print_term(&m);
        let back = parse_term(&text);
        prop_assert!(back.is_ok(), "{} : {:?}", text, back);
        prop_assert_eq!(back.unwrap(), m);
    }
}
