//! The built-in example suite run by `gamiso fixtures`.

use gamiso::arena::{interpret_type, PathIso};
use gamiso::eval::observational_test;
use gamiso::eval::traces::{bool_contexts, bool_functionals, nat_contexts, nat_functionals};
use gamiso::extract::{extract_path_iso, find_nonfunctoriality};
use gamiso::iso::{enumerate_types, iso_e, single_rewrites};
use gamiso::lang::fixtures::{hotel_backward, hotel_forward, involution, round_trip};
use gamiso::lang::{parse_type, Lang};
use gamiso::strategy::{first_difference, involution_i, is_iso_pair, hotel_strategies, Bounds, DefaultHotel, Involution};
use gamiso::strategy::copycat;
use std::sync::Arc;

pub struct Row {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn row(name: &'static str, check: impl FnOnce() -> Result<String, String>) -> Row {
    match check() {
        Ok(detail) => Row { name, passed: true, detail },
        Err(detail) => Row { name, passed: false, detail },
    }
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

pub fn run_all() -> Vec<Row> {
    vec![
        row("equations preserve normal forms", || {
            let mut n = 0;
            for t in enumerate_types(3, Lang::L2) {
                for (eq, dir, u) in single_rewrites(&t) {
                    n += 1;
                    if !iso_e(&t, &u).map_err(err)? {
                        return Err(format!("{eq:?} {dir:?} on {t} gives {u}"));
                    }
                }
            }
            Ok(format!("{n} rewrites"))
        }),
        row("two-question arena", || {
            let inv = Involution::new();
            let a = &inv.arena;
            let shape = a.initials().len() == 1
                && a.children(inv.q).len() == 3
                && [inv.q1, inv.q2].iter().all(|&q| a.children(q).len() == 1);
            let fam = interpret_type(&parse_type("(bool -> unit) -> unit").map_err(err)?).map_err(err)?;
            (shape && fam.len() == 1).then(|| format!("{} moves", a.len())).ok_or_else(|| "unexpected shape".into())
        }),
        row("involution is its own inverse", || {
            let i = involution_i();
            is_iso_pair(&i, &i, &Bounds::new(10)).map_err(err)?.then(|| "plays up to 10".into()).ok_or_else(|| "i;i differs from copycat".into())
        }),
        row("involution is not copycat", || {
            let i = involution_i();
            let d = first_difference(&i, &copycat(&Involution::new().arena), &Bounds::new(6));
            d.map(|p| format!("first difference after {} moves", p.len())).ok_or_else(|| "no difference".into())
        }),
        row("involution extracts to the identity", || {
            let k = extract_path_iso(&involution_i(), 3).map_err(err)?;
            (k == PathIso::identity(&Involution::new().arena, 3)).then(|| "depth 3".into()).ok_or_else(|| format!("{k:?}"))
        }),
        row("involution term round trip", || {
            let m = involution();
            let ctx = bool_contexts();
            let xs = bool_functionals();
            for x in &xs {
                let v = observational_test(&round_trip(&m, &m, x.clone()), x, &ctx, 100_000).map_err(err)?;
                if !v.is_consistent() {
                    return Err(format!("refuted on {x}"));
                }
            }
            Ok(format!("{} arguments, {} contexts", xs.len(), ctx.len()))
        }),
        row("hotel strategies are inverse", || {
            let (sigma, tau) = hotel_strategies(Arc::new(DefaultHotel), 8);
            let b = Bounds::new(8).nat_below(4);
            is_iso_pair(&sigma, &tau, &b).map_err(err)?.then(|| "plays up to 8, naturals below 4".into()).ok_or_else(|| "not inverse".into())
        }),
        row("hotel terms typecheck", || {
            for t in [hotel_forward(), hotel_backward()] {
                let got = t.typecheck().map_err(err)?;
                if got != t.ty {
                    return Err(format!("{} has type {got}", t.name));
                }
            }
            Ok("both".into())
        }),
        row("hotel term round trips", || {
            let (fwd, bwd) = (hotel_forward(), hotel_backward());
            let mut n = 0;
            for (first, second, arg) in [(&fwd, &bwd, "nat"), (&bwd, &fwd, "unit")] {
                let ctx = nat_contexts(arg);
                for f in nat_functionals(arg, 8, 20) {
                    let v = observational_test(&round_trip(first, second, f.clone()), &f, &ctx, 1_000_000).map_err(err)?;
                    if !v.is_consistent() {
                        return Err(format!("refuted on {f}"));
                    }
                    n += 1;
                }
            }
            Ok(format!("{n} arguments"))
        }),
        row("slicing is not functorial", || {
            let w = find_nonfunctoriality(4).ok_or("no witness on sets of size up to 4")?;
            Ok(format!("witness on {} elements", w.f.len()))
        }),
    ]
}
