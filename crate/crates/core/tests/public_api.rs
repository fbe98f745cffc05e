//! The library through its public surface only.

use std::sync::Arc;

use finitopos_core::checks::{check_lcc, check_semi_left_exact, replay};
use finitopos_core::fixtures::{self, all_reflections, delta1_functors};
use finitopos_core::graphpre::{find_sle_failure, SearchBounds};
use finitopos_core::kan::{lan, ran, restrict};
use finitopos_core::presheaf::{count_nat_transformations, is_isomorphic, presheaf_corpus, yoneda, CorpusOptions};
use finitopos_core::verdict::Outcome;
use finitopos_core::Budget;

#[test]
fn kan_extensions_along_the_point_count_components_and_sections() {
    let b = Budget::default();
    let (_, to_point) = delta1_functors().into_iter().find(|(n, _)| n == "delta1:to-point").unwrap();
    let graphs = presheaf_corpus(to_point.source(), CorpusOptions { bound: 2, representables: true }, &b).unwrap();
    for g in &graphs {
        let components = lan(&to_point, g, &b).unwrap().output;
        let sections = ran(&to_point, g, &b).unwrap().output;
        let pt = to_point.target().objects().next().unwrap();
        // a global section of a reflexive graph picks a vertex and its loop
        let terminal = restrict(&to_point, &yoneda(to_point.target(), pt)).unwrap();
        assert_eq!(sections.size(pt), count_nat_transformations(&terminal, g, &b).unwrap());
        assert!(components.size(pt) <= g.size(to_point.source().object("V").unwrap()).max(1));
    }
}

#[test]
fn identity_extensions_are_isomorphic_to_their_input() {
    let b = Budget::default();
    for (name, r) in all_reflections().into_iter().filter(|(n, _)| n.ends_with(":identity")) {
        let c = Arc::clone(r.left().source());
        for x in presheaf_corpus(&c, CorpusOptions { bound: 1, representables: true }, &b).unwrap() {
            assert!(is_isomorphic(&lan(r.left(), &x, &b).unwrap().output, &x, &b).unwrap(), "{name}");
        }
    }
}

#[test]
fn shipped_verdicts() {
    let b = Budget::default();
    let lattice = fixtures::reflection("lattice-3-2").unwrap();
    assert!(check_semi_left_exact(&lattice, usize::MAX).unwrap().is_pass());
    let m3 = check_lcc(&fixtures::m3(), usize::MAX).unwrap();
    assert_eq!(m3.outcome, Outcome::Fail);
    replay(m3.witness.as_ref().unwrap(), &b).unwrap();
    let small = SearchBounds { max_vertices: 3, max_edges: 2, max_preorder: 3, ..SearchBounds::default() };
    let v = find_sle_failure(&small, &b).unwrap();
    assert_eq!(v.outcome, Outcome::Fail);
    replay(v.witness.as_ref().unwrap(), &b).unwrap();
}
