use std::sync::Arc;

use super::*;
use crate::error::Error;
use crate::fixtures::{bool2, chain, corrupted_lattice_reflection, delta1, m3, reflection};
use crate::presheaf::{yoneda, Presheaf};

fn raw_without(c: &FinCategory, g: &str, f: &str) -> RawCategory {
    let mut raw = c.to_raw();
    raw.compose.retain(|(gg, ff, _)| !(gg == g && ff == f));
    raw
}

#[test]
fn terminal_category() {
    let t = FinCategory::terminal();
    assert_eq!((t.num_objects(), t.num_morphisms()), (1, 1));
    assert!(t.axiom_violations().is_empty());
}

#[test]
fn raw_round_trip_validates() {
    let d = delta1();
    let back = validate_category(&d.to_raw()).unwrap();
    assert_eq!(back, d);
}

#[test]
fn omitted_composite_is_reported() {
    let errs = validate_category(&raw_without(&delta1(), "d0", "s")).unwrap_err();
    assert!(errs.contains(&Violation::MissingComposite {
        g: "d0".into(),
        f: "s".into()
    }));
}

#[test]
fn wrong_composite_breaks_an_axiom() {
    let d = delta1();
    let mut raw = d.to_raw();
    // d0_s.d1_s equals d0_s; claiming d1_s breaks associativity
    for entry in raw.compose.iter_mut() {
        if entry.0 == "d0_s" && entry.1 == "d1_s" {
            entry.2 = "d1_s".into();
        }
    }
    assert!(validate_category(&raw).is_err());
}

#[test]
fn composition_convention() {
    let d = delta1();
    let (d0, s) = (d.morphism("d0").unwrap(), d.morphism("s").unwrap());
    // s.d0 : V -> E -> V is the identity; d0.s : E -> V -> E is d0_s
    assert_eq!(d.compose(s, d0), d.id(d.object("V").unwrap()));
    assert_eq!(d.mor_name(d.compose(d0, s)), "d0_s");
}

#[test]
fn opposite_is_an_involution() {
    let d = delta1();
    let op = opposite(&d);
    assert_eq!(opposite(&op), d);
    let (v, e) = (op.object("V").unwrap(), op.object("E").unwrap());
    assert_eq!(op.hom(e, v).len(), 2);
    assert_eq!(op.hom(v, e).len(), 1);
}

#[test]
fn preorder_hom_sets_are_subsingletons() {
    for c in [chain(3), m3(), bool2()] {
        assert!(c.is_preorder());
        assert!(c.axiom_violations().is_empty());
    }
    assert!(!delta1().is_preorder());
}

#[test]
fn lattice_reflection_passes_and_mutation_fails() {
    let r = reflection("lattice-3-2").unwrap();
    assert!(check_adjunction(&r).is_ok());
    match check_adjunction(&corrupted_lattice_reflection()) {
        Err(AdjunctionFailure::MistypedUnit { b, .. }) => assert_eq!(b, "n1"),
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn reflection_counit_is_iso() {
    let r = reflection("m3").unwrap();
    for a in r.small().objects() {
        let e = r.counit(a).unwrap();
        assert!(r.small().is_iso(e));
    }
}

#[test]
fn functor_composition_and_faithfulness() {
    let r = reflection("bool-2").unwrap();
    let lf = r.right().then(r.left()).unwrap();
    // L F is the identity on the subcategory
    for a in r.small().objects() {
        assert_eq!(lf.obj(a), a);
    }
    assert!(r.right().is_full() && r.right().is_faithful());
    // thin categories make every functor faithful; a <= b fails while L a <= L b
    assert!(r.left().is_faithful() && !r.left().is_full());
}

#[test]
fn elements_of_terminal_is_base() {
    let d = Arc::new(delta1());
    let el = category_of_elements(&Presheaf::terminal(d.clone()));
    assert!(find_isomorphism(el.category(), &d).is_some());
}

#[test]
fn elements_of_representable_is_slice() {
    let d = Arc::new(delta1());
    for c in d.objects() {
        let el = category_of_elements(&yoneda(&d, c));
        let sl = slice(&d, c);
        assert!(find_isomorphism(el.category(), &sl.cat).is_some());
    }
}

#[test]
fn isomorphism_search_rejects_different_categories() {
    let a = Arc::new(m3());
    let b = Arc::new(chain(5));
    assert!(find_isomorphism(&a, &b).is_none());
    assert!(find_isomorphism(&a, &a).is_some());
}

// Meets and Heyting implication computed from the order alone.
fn leq(c: &FinCategory, x: Obj, y: Obj) -> bool {
    !c.hom(x, y).is_empty()
}

fn brute_meet(c: &FinCategory, x: Obj, y: Obj) -> Option<Obj> {
    let lower: Vec<Obj> = c.objects().filter(|&z| leq(c, z, x) && leq(c, z, y)).collect();
    lower.iter().copied().find(|&m| lower.iter().all(|&z| leq(c, z, m)))
}

#[test]
fn products_in_lattices_are_meets() {
    for c in [chain(3), m3(), bool2()] {
        for x in c.objects() {
            for y in c.objects() {
                let p = binary_product(&c, x, y).map(|p| p.object);
                assert_eq!(p, brute_meet(&c, x, y));
            }
        }
        assert!(has_finite_limits(&c));
    }
}

#[test]
fn exponentials_exist_iff_heyting() {
    let heyting = |c: &FinCategory, b: Obj, t: Obj| {
        let cands: Vec<Obj> = c
            .objects()
            .filter(|&z| leq(c, brute_meet(c, z, b).unwrap(), t))
            .collect();
        cands.iter().copied().find(|&m| cands.iter().all(|&z| leq(c, z, m)))
    };
    for c in [chain(3), bool2(), m3()] {
        for b in c.objects() {
            for t in c.objects() {
                assert_eq!(exponential(&c, b, t).map(|e| e.object), heyting(&c, b, t));
            }
        }
    }
    let m = m3();
    let (a, b) = (m.object("a").unwrap(), m.object("b").unwrap());
    assert!(exponential(&m, b, a).is_none());
}

#[test]
fn pullback_square_analysis() {
    let c = bool2();
    let (a, b, top, bot) = (
        c.object("a").unwrap(),
        c.object("b").unwrap(),
        c.object("top").unwrap(),
        c.object("bot").unwrap(),
    );
    let f = c.hom(a, top)[0];
    let g = c.hom(b, top)[0];
    let pb = pullback(&c, f, g).unwrap();
    assert_eq!(pb.object, bot);
    let ida = c.id(a);
    let a_top = c.hom(a, top)[0];
    assert!(square_mediators(&c, ida, ida, a_top, a_top).is_unique());
}

#[test]
fn saturation_bound_is_enforced() {
    // a free endomorphism never closes
    let p = Presentation {
        objects: vec!["X".into()],
        generators: vec![("t".into(), 0, 0)],
        relations: vec![],
    };
    assert!(matches!(saturate(&p, 8), Err(Error::SaturationBound { .. })));
    // t.t.t = id closes to the cyclic group of order 3
    let p = Presentation {
        relations: vec![(0, vec![0, 0, 0], vec![])],
        ..p
    };
    assert_eq!(saturate(&p, 8).unwrap().num_morphisms(), 3);
}

#[test]
fn functor_validation_rejects_broken_composites() {
    let d = Arc::new(delta1());
    let mut mors: Vec<Mor> = d.morphisms().collect();
    let (d0, d1) = (d.morphism("d0").unwrap(), d.morphism("d1").unwrap());
    mors[d0.0] = d1;
    // d0 -> d1 alone keeps composites consistent only if d0_s goes to d1_s
    let bad = FinFunctor::new(d.clone(), d.clone(), d.objects().collect(), mors);
    assert!(bad.is_err());
}
