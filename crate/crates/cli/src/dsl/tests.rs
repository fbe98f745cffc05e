use std::sync::Arc;

use finitopos_core::fincat::{find_isomorphism, FinCategory};
use finitopos_core::fixtures;
use finitopos_core::presheaf::{presheaf_corpus, CorpusOptions, PresheafMap};
use finitopos_core::Budget;
use proptest::prelude::*;

use super::*;

const GRAPH: &str = r#"
# the walking reflexive pair
category G {
  objects: V, E;
  morphisms: d0: V -> E, d1: V -> E, s: E -> V;
  relations: s.d0 = id(V); s.d1 = id(V);
  close: 16;
}
presheaf P : G {
  set V = {a, b};
  set E = {la, lb, ab};
  act d0 = {la -> a, lb -> b, ab -> a};
  act d1 = {la -> a, lb -> b, ab -> b};
  act s = {a -> la, b -> lb};
}
"#;

fn first(text: &str) -> Diagnostic {
    load(text).expect_err("should be rejected").remove(0)
}

fn round_trip(doc: &Document) {
    let once = serialize(doc);
    let again = load(&once).unwrap_or_else(|e| panic!("{once}\n{}", e[0]));
    assert_eq!(serialize(&again), once);
}

#[test]
fn presentation_saturates_to_the_fixture() {
    let doc = load(GRAPH).unwrap();
    let g = doc.category("G").unwrap();
    assert_eq!(g.num_morphisms(), 7);
    let fixture = Arc::new(fixtures::delta1());
    assert!(find_isomorphism(g, &fixture).is_some());
}

#[test]
fn presheaf_actions_extend_to_composites() {
    let doc = load(GRAPH).unwrap();
    let p = doc.presheaf("P").unwrap();
    let c = p.base();
    let d0s = c.compose(c.morphism("d0").unwrap(), c.morphism("s").unwrap());
    // d0.s acts on E by first taking the source, then its loop
    let table: Vec<&str> = (0..3)
        .map(|e| p.set(c.dom(d0s)).label(p.act(d0s).apply(e)))
        .collect();
    assert_eq!(table, ["la", "lb", "la"]);
}

#[test]
fn fixture_names_resolve_in_quotes() {
    let doc = load(
        r#"presheaf X : "delta1" { set V = {v}; set E = {e}; act d0 = {e -> v}; act d1 = {e -> v}; act s = {v -> e}; }"#,
    )
    .unwrap();
    assert_eq!(doc.presheaf("X").unwrap().total_size(), 2);
    let d = first(r#"presheaf X : "nope" { }"#);
    assert_eq!(d.kind, DiagnosticKind::UnresolvedIdentifier);
}

#[test]
fn diagnostics_carry_line_and_column() {
    let d = first("category C {\n  objects: a;\n  morphisms: f: a -> b;\n}");
    assert_eq!(d.kind, DiagnosticKind::UnresolvedIdentifier);
    assert_eq!((d.span.line, d.span.col), (3, 22));
    assert_eq!(d.to_string(), "3:22: unresolved identifier: unknown object `b`");

    let d = first("category C {\n  objects a;\n}");
    assert_eq!(d.kind, DiagnosticKind::SyntaxError);
    assert_eq!((d.span.line, d.span.col), (2, 11));

    let d = first("category C { objects: a; }\ncategory C { objects: b; }");
    assert_eq!(d.kind, DiagnosticKind::DuplicateDefinition);
    assert_eq!((d.span.line, d.span.col), (2, 10));

    let d = first("category C { objects: a, a; }");
    assert_eq!(d.kind, DiagnosticKind::DuplicateDefinition);
}

#[test]
fn every_failing_item_is_reported() {
    let errs = load("category A { objects: ; }\ncategory B { objects: x; morphisms: f: x -> y; }").unwrap_err();
    assert_eq!(errs.len(), 2);
    assert_eq!(errs[0].kind, DiagnosticKind::Invalid);
    assert_eq!(errs[1].kind, DiagnosticKind::UnresolvedIdentifier);
}

#[test]
fn tables_are_validated() {
    let missing = "category C { objects: a, b, c; morphisms: f: a -> b, g: b -> c; compose: }";
    let d = first(missing);
    assert_eq!(d.kind, DiagnosticKind::Invalid);
    assert!(d.message.contains("missing composite"), "{}", d.message);

    let ill_typed = "category C { objects: a, b; morphisms: f: a -> b, g: b -> a; compose: g.f = f; f.g = id(b); }";
    assert_eq!(first(ill_typed).kind, DiagnosticKind::Invalid);

    let ok = "category C { objects: a, b; morphisms: f: a -> b, g: b -> a; compose: g.f = id(a); f.g = id(b); }";
    let c = load(ok).unwrap();
    assert!(c.category("C").unwrap().is_iso(c.category("C").unwrap().morphism("f").unwrap()));

    let mixed = "category C { objects: a; compose: close: 4; }";
    assert_eq!(first(mixed).kind, DiagnosticKind::Invalid);
}

#[test]
fn saturation_bound_is_reported() {
    let free = "category N { objects: a; morphisms: t: a -> a; close: 5; }";
    let d = first(free);
    assert_eq!(d.kind, DiagnosticKind::Invalid);
    assert!(d.message.contains("bound"), "{}", d.message);
    let huge = "category N { objects: a; close: 99999999; }";
    assert_eq!(first(huge).kind, DiagnosticKind::Invalid);
    let idem = "category N { objects: a; morphisms: t: a -> a; relations: t.t = t; }";
    assert_eq!(load(idem).unwrap().category("N").unwrap().num_morphisms(), 2);
}

#[test]
fn functor_images_are_inferred() {
    let text = r#"
category P { objects: p; }
functor T : "chain-2" -> P { objects: n0 -> p, n1 -> p; }
functor I : P -> "chain-2" { objects: p -> n1; }
reflection R { left: T; right: I; }
"#;
    let doc = load(text).unwrap();
    let t = doc.functor("T").unwrap();
    assert!(t.mor_table().iter().all(|&m| t.target().is_identity(m)));
    let r = doc.reflection("R").unwrap();
    assert_eq!(r.unit_table().len(), 2);
    assert_eq!(
        finitopos_core::fincat::check_adjunction(r).is_ok(),
        true,
        "the terminal reflection of a chain is an adjunction"
    );
}

#[test]
fn ambiguous_units_must_be_given() {
    let text = r#"
category C { objects: a, b; morphisms: f: a -> b, g: a -> b; compose: }
category P { objects: p; }
functor T : C -> P { objects: a -> p, b -> p; }
functor I : P -> C { objects: p -> b; }
reflection R { left: T; right: I; }
"#;
    let d = first(text);
    assert_eq!(d.kind, DiagnosticKind::Invalid);
    assert!(d.message.contains("2 candidate"), "{}", d.message);
    let given = text.replace("right: I; }", "right: I; unit: a -> f; }");
    assert!(load(&given).is_ok());
}

#[test]
fn maps_check_naturality() {
    let text = format!(
        "{GRAPH}
presheaf Q : G {{ set V = {{x}}; set E = {{lx}}; act d0 = {{lx -> x}}; act d1 = {{lx -> x}}; act s = {{x -> lx}}; }}
map h : P -> Q {{ at V = {{a -> x, b -> x}}; at E = {{la -> lx, lb -> lx, ab -> lx}}; }}
"
    );
    let doc = load(&text).unwrap();
    assert!(doc.map("h").unwrap().is_epi());
    let bad = text.replace("at V = {a -> x, b -> x}; ", "");
    assert_eq!(first(&bad).kind, DiagnosticKind::Invalid);
}

#[test]
fn invalid_utf8_is_a_syntax_error() {
    let errs = load_bytes(b"category C {\n \xff }").unwrap_err();
    assert_eq!(errs[0].kind, DiagnosticKind::SyntaxError);
    assert_eq!((errs[0].span.line, errs[0].span.col), (2, 2));
}

#[test]
fn names_are_quoted_only_when_needed() {
    assert_eq!(format_name("abc_1"), "abc_1");
    assert_eq!(format_name("lattice-3-2"), "\"lattice-3-2\"");
    assert_eq!(format_name("a\"b"), "\"a\\\"b\"");
    assert_eq!(format_name(""), "\"\"");
}

#[test]
fn fixture_reflections_round_trip() {
    for (name, r) in fixtures::all_reflections() {
        let doc = Document::from_reflection(&r);
        round_trip(&doc);
        let back = load(&serialize(&doc)).unwrap();
        assert_eq!(**back.category("B").unwrap(), **r.big(), "{name}");
        assert_eq!(back.reflection("R").unwrap().unit_table(), r.unit_table(), "{name}");
    }
}

#[test]
fn corpus_presheaves_and_maps_round_trip() {
    let base = Arc::new(fixtures::delta1());
    let corpus = presheaf_corpus(&base, CorpusOptions::default(), &Budget::unlimited()).unwrap();
    let mut doc = Document::new();
    doc.insert("G", Value::Category(base.clone())).unwrap();
    for (i, x) in corpus.iter().enumerate() {
        let v = Value::Presheaf {
            base: CatName::Declared("G".into()),
            presheaf: x.clone(),
        };
        doc.insert(format!("X{i}"), v).unwrap();
        let id = Value::Map {
            source: format!("X{i}"),
            target: format!("X{i}"),
            map: PresheafMap::identity(x),
        };
        doc.insert(format!("id{i}"), id).unwrap();
    }
    round_trip(&doc);
}

#[test]
fn odd_names_round_trip() {
    let c = FinCategory::discrete(&["id", "with space", "7", "quote\"d"]);
    let mut doc = Document::new();
    doc.insert("cat-name", Value::Category(Arc::new(c))).unwrap();
    round_trip(&doc);
}

fn token_soup() -> impl Strategy<Value = String> {
    let words = prop::sample::select(vec![
        "category", "functor", "presheaf", "map", "reflection", "objects", "morphisms", "relations",
        "compose", "close", "set", "act", "at", "left", "right", "unit", "id", "a", "b", "f", "g", "V",
        "E", "d0", "\"delta1\"", "\"chain-2\"", "0", "1", "3", "{", "}", "(", ")", ":", ";", ",", "=",
        ".", "->", "#", "\n",
    ]);
    prop::collection::vec(words, 0..80).prop_map(|w| w.join(" "))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn arbitrary_bytes_never_panic(bytes in prop::collection::vec(any::<u8>(), 0..256)) {
        let _ = load_bytes(&bytes);
    }

    #[test]
    fn token_soup_never_panics(text in token_soup()) {
        if let Ok(doc) = load(&text) {
            let once = serialize(&doc);
            let again = load(&once).expect("serialized output parses");
            prop_assert_eq!(serialize(&again), once);
        }
    }
}
