use std::collections::HashMap;
use std::sync::Arc;

use proptest::prelude::*;

use super::*;
use crate::budget::Budget;
use crate::fincat::{FinCategory, Mor, Obj};
use crate::finset::{FinFn, FinSet};
use crate::fixtures::{chain, delta1, m3};

/// A reflexive graph on `nv` vertices: loop `v` at index `v`, then `edges`.
pub(crate) fn graph(nv: usize, edges: &[(usize, usize)]) -> Presheaf {
    let d = Arc::new(delta1());
    let m = |n: &str| d.morphism(n).unwrap();
    let ne = nv + edges.len();
    let src: Vec<usize> = (0..nv).chain(edges.iter().map(|e| e.0)).collect();
    let tgt: Vec<usize> = (0..nv).chain(edges.iter().map(|e| e.1)).collect();
    let mut given = HashMap::new();
    given.insert(m("d0"), FinFn::new(src, nv).unwrap());
    given.insert(m("d1"), FinFn::new(tgt, nv).unwrap());
    given.insert(m("s"), FinFn::new((0..nv).collect(), ne).unwrap());
    let (v, e) = (d.object("V").unwrap(), d.object("E").unwrap());
    let mut sets = vec![FinSet::empty(); 2];
    sets[v.0] = FinSet::numbered("v", nv);
    sets[e.0] = FinSet::numbered("e", ne);
    Presheaf::from_generators(d, sets, &given).unwrap()
}

fn all_functions(n: usize, cod: usize) -> Vec<Vec<usize>> {
    (0..n).fold(vec![vec![]], |acc, _| {
        acc.into_iter()
            .flat_map(|v| {
                (0..cod).map(move |c| {
                    let mut w = v.clone();
                    w.push(c);
                    w
                })
            })
            .collect()
    })
}

/// Every family of component functions, filtered by naturality.
fn brute_nat(x: &Presheaf, y: &Presheaf) -> Vec<Vec<Vec<usize>>> {
    let c = x.base();
    let mut out: Vec<Vec<Vec<usize>>> = vec![vec![]];
    for o in c.objects() {
        let fs = all_functions(x.size(o), y.size(o));
        out = out
            .into_iter()
            .flat_map(|pre| {
                fs.iter().map(move |f| {
                    let mut p = pre.clone();
                    p.push(f.clone());
                    p
                })
            })
            .collect();
    }
    out.retain(|a| {
        c.morphisms().all(|f| {
            let (s, t) = (c.dom(f), c.cod(f));
            (0..x.size(t)).all(|z| y.act(f).apply(a[t.0][z]) == a[s.0][x.act(f).apply(z)])
        })
    });
    out.sort();
    out
}

fn budget() -> Budget {
    Budget::default()
}

fn small_graphs() -> Vec<Presheaf> {
    vec![
        graph(1, &[]),
        graph(2, &[]),
        graph(2, &[(0, 1)]),
        graph(2, &[(0, 1), (1, 0)]),
        graph(1, &[(0, 0)]),
        graph(3, &[(0, 1), (1, 2)]),
        graph(2, &[(0, 1), (0, 1)]),
    ]
}

#[test]
fn yoneda_on_terminal_is_singleton() {
    let t = Arc::new(FinCategory::terminal());
    let y = yoneda(&t, Obj(0));
    assert_eq!(y.sizes(), vec![1]);
}

#[test]
fn representable_sizes_are_hom_sizes() {
    for c in [delta1(), m3(), chain(3)] {
        let c = Arc::new(c);
        for a in c.objects() {
            let y = yoneda(&c, a);
            for d in c.objects() {
                assert_eq!(y.size(d), c.hom(d, a).len());
            }
        }
    }
}

#[test]
fn vertex_representable_is_terminal_graph() {
    let d = Arc::new(delta1());
    let y = yoneda(&d, d.object("V").unwrap());
    // hom(V, V) = {id}, hom(E, V) = {s}
    assert_eq!(y.sizes(), vec![1, 1]);
    assert!(is_isomorphic(&y, &Presheaf::terminal(d), &budget()).unwrap());
}

#[test]
fn nat_matches_brute_force() {
    let gs = small_graphs();
    for x in &gs {
        for y in &gs {
            let fast: Vec<Vec<usize>> = nat_transformations(x, y, &budget())
                .unwrap()
                .iter()
                .map(|m| m.key())
                .collect();
            let slow: Vec<Vec<usize>> = brute_nat(x, y).into_iter().map(|a| a.concat()).collect();
            assert_eq!(fast, slow);
        }
    }
}

#[test]
fn yoneda_lemma_counts() {
    for c in [delta1(), m3()] {
        let c = Arc::new(c);
        let corpus = presheaf_corpus(&c, CorpusOptions::default(), &budget()).unwrap();
        for x in &corpus {
            for a in c.objects() {
                let n = count_nat_transformations(&yoneda(&c, a), x, &budget()).unwrap();
                assert_eq!(n, x.size(a));
            }
        }
    }
}

#[test]
fn terminal_and_initial_hom_counts() {
    let d = Arc::new(delta1());
    for x in small_graphs() {
        assert_eq!(count_nat_transformations(&x, &Presheaf::terminal(d.clone()), &budget()).unwrap(), 1);
        assert_eq!(count_nat_transformations(&Presheaf::empty(d.clone()), &x, &budget()).unwrap(), 1);
    }
}

fn set_presheaf(n: usize) -> Presheaf {
    let t = Arc::new(FinCategory::terminal());
    Presheaf::new(t, vec![FinSet::numbered("x", n)], vec![FinFn::identity(n)]).unwrap()
}

#[test]
fn exponential_of_sets_is_function_set() {
    let e = exponential(&set_presheaf(2), &set_presheaf(3), &budget()).unwrap();
    assert_eq!(e.object.sizes(), vec![9]);
    let e = exponential(&set_presheaf(0), &set_presheaf(3), &budget()).unwrap();
    assert_eq!(e.object.sizes(), vec![1]);
}

/// Graph homomorphisms by brute force over vertex and edge maps.
fn graph_homs(g: &Presheaf, h: &Presheaf) -> usize {
    let d = g.base();
    let (v, e) = (d.object("V").unwrap(), d.object("E").unwrap());
    let (d0, d1, s) = (
        d.morphism("d0").unwrap(),
        d.morphism("d1").unwrap(),
        d.morphism("s").unwrap(),
    );
    let mut n = 0;
    for fv in all_functions(g.size(v), h.size(v)) {
        for fe in all_functions(g.size(e), h.size(e)) {
            let edges_ok = (0..g.size(e)).all(|x| {
                h.act(d0).apply(fe[x]) == fv[g.act(d0).apply(x)]
                    && h.act(d1).apply(fe[x]) == fv[g.act(d1).apply(x)]
            });
            let loops_ok = (0..g.size(v)).all(|x| fe[g.act(s).apply(x)] == h.act(s).apply(fv[x]));
            if edges_ok && loops_ok {
                n += 1;
            }
        }
    }
    n
}

#[test]
fn exponential_vertices_are_homomorphisms() {
    let gs = small_graphs();
    for g in &gs[..4] {
        for h in &gs[..4] {
            let e = exponential(g, h, &budget()).unwrap();
            let v = g.base().object("V").unwrap();
            assert_eq!(e.object.size(v), graph_homs(g, h));
        }
    }
}

#[test]
fn exponent_terminal_gives_value() {
    let d = Arc::new(delta1());
    for y in small_graphs() {
        let e = exponential(&Presheaf::terminal(d.clone()), &y, &budget()).unwrap();
        assert!(is_isomorphic(&e.object, &y, &budget()).unwrap());
    }
}

#[test]
fn currying_is_a_bijection() {
    let gs = small_graphs();
    let (w, x, y) = (&gs[2], &gs[1], &gs[3]);
    let e = exponential(x, y, &budget()).unwrap();
    let wx = product(w, x).unwrap().object;
    let hs = nat_transformations(&wx, y, &budget()).unwrap();
    let ks = nat_transformations(w, &e.object, &budget()).unwrap();
    assert_eq!(hs.len(), ks.len());
    for h in &hs {
        let k = curry(&e, w, h).unwrap();
        assert_eq!(&uncurry(&e, &k).unwrap(), h);
    }
    for k in &ks {
        assert_eq!(&curry(&e, w, &uncurry(&e, k).unwrap()).unwrap(), k);
    }
}

#[test]
fn pullback_of_terminal_maps_is_product() {
    let d = Arc::new(delta1());
    let gs = small_graphs();
    let one = Presheaf::terminal(d.clone());
    let bang = |x: &Presheaf| nat_transformations(x, &one, &budget()).unwrap().remove(0);
    let pb = pullback(&bang(&gs[2]), &bang(&gs[3])).unwrap();
    let pr = product(&gs[2], &gs[3]).unwrap();
    assert!(is_isomorphic(&pb.object, &pr.object, &budget()).unwrap());
    // 2 * 2 vertices; 3 * 4 edges
    assert_eq!(pr.object.sizes(), vec![12, 4]);
}

#[test]
fn pi_along_identity_is_identity() {
    let gs = small_graphs();
    let x = &gs[2];
    let z = &gs[3];
    for g in nat_transformations(z, x, &budget()).unwrap() {
        let id = PresheafMap::identity(x);
        let pi = dependent_product(&id, &g, &budget()).unwrap();
        assert!(is_isomorphic(pi.object(), z, &budget()).unwrap());
    }
}

#[test]
fn pi_of_sets_is_fibrewise_product() {
    // f : X -> Y and g : Z -> X as plain functions
    let x = set_presheaf(3);
    let y = set_presheaf(2);
    let z = set_presheaf(4);
    let f = PresheafMap::new(x.clone(), y.clone(), vec![FinFn::new(vec![0, 0, 1], 2).unwrap()]).unwrap();
    let g = PresheafMap::new(z.clone(), x.clone(), vec![FinFn::new(vec![0, 0, 1, 2], 3).unwrap()]).unwrap();
    let pi = dependent_product(&f, &g, &budget()).unwrap();
    let over = |yi: usize| pi.map.component(Obj(0)).table().iter().filter(|&&v| v == yi).count();
    // fibre over 0: |g^-1(0)| * |g^-1(1)| = 2 * 1; over 1: |g^-1(2)| = 1
    assert_eq!((over(0), over(1)), (2, 1));
}

#[test]
fn pi_over_terminal_is_exponential() {
    let d = Arc::new(delta1());
    let one = Presheaf::terminal(d.clone());
    let gs = small_graphs();
    let (x, v) = (&gs[2], &gs[1]);
    let xv = product(x, v).unwrap();
    let f = nat_transformations(x, &one, &budget()).unwrap().remove(0);
    let pi = dependent_product(&f, &xv.p1, &budget()).unwrap();
    let e = exponential(x, v, &budget()).unwrap();
    assert!(is_isomorphic(pi.object(), &e.object, &budget()).unwrap());
}

/// Maps over a fixed base `q`: those `h : A -> B` with `qb . h = qa`.
fn count_over(qa: &PresheafMap, qb: &PresheafMap) -> usize {
    nat_transformations(qa.source(), qb.source(), &budget())
        .unwrap()
        .into_iter()
        .filter(|h| h.then(qb).unwrap() == *qa)
        .count()
}

#[test]
fn pi_is_right_adjoint_to_pullback() {
    let d = Arc::new(delta1());
    let gs = small_graphs();
    let y = &gs[1];
    let x = &gs[2];
    let z = &gs[4];
    let fs = nat_transformations(x, y, &budget()).unwrap();
    let gz = nat_transformations(z, x, &budget()).unwrap();
    let ws = [gs[0].clone(), gs[1].clone(), Presheaf::terminal(d)];
    for f in fs.iter().take(2) {
        for g in gz.iter().take(2) {
            let pi = dependent_product(f, g, &budget()).unwrap();
            for w in &ws {
                for wmap in nat_transformations(w, y, &budget()).unwrap() {
                    let pb = pullback(&wmap, f).unwrap();
                    let lhs = count_over(&pb.p2, g);
                    let rhs = count_over(&wmap, &pi.map);
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }
}

fn brute_sieves(c: &FinCategory, o: Obj) -> usize {
    let arrows: Vec<Mor> = c.incoming(o).to_vec();
    (0u32..1 << arrows.len())
        .filter(|mask| {
            let inside = |m: Mor| {
                let i = arrows.iter().position(|&a| a == m).unwrap();
                mask & (1 << i) != 0
            };
            arrows.iter().all(|&u| {
                !inside(u) || c.incoming(c.dom(u)).iter().all(|&v| inside(c.compose(u, v)))
            })
        })
        .count()
}

#[test]
fn sieve_counts_match_brute_force() {
    for c in [FinCategory::terminal(), chain(3), delta1(), m3()] {
        let c = Arc::new(c);
        for o in c.objects() {
            let s = sieves_on(&c, o);
            assert_eq!(s.len(), brute_sieves(&c, o));
            assert!(s.iter().any(|x| x.members().is_empty()));
            assert!(s.iter().any(|x| x.members().len() == c.incoming(o).len()));
        }
    }
    assert_eq!(sieves_on(&Arc::new(FinCategory::terminal()), Obj(0)).len(), 2);
    let c3 = Arc::new(chain(3));
    assert_eq!(sieves_on(&c3, c3.object("n2").unwrap()).len(), 4);
}

#[test]
fn generated_sieve_is_right_closed() {
    let d = Arc::new(delta1());
    let e = d.object("E").unwrap();
    let s = Sieve::generated(d.clone(), e, &[d.morphism("d0").unwrap()]).unwrap();
    // d0 and d0.s
    assert_eq!(s.members().len(), 2);
    assert!(Sieve::new(d.clone(), e, vec![d.morphism("d0").unwrap()]).is_err());
}

#[test]
fn corpus_is_duplicate_free() {
    let d = Arc::new(delta1());
    let corpus = presheaf_corpus(&d, CorpusOptions::default(), &budget()).unwrap();
    for (i, a) in corpus.iter().enumerate() {
        for b in &corpus[i + 1..] {
            assert!(!is_isomorphic(a, b, &budget()).unwrap());
        }
    }
    let t = Arc::new(FinCategory::terminal());
    assert_eq!(presheaf_corpus(&t, CorpusOptions::default(), &budget()).unwrap().len(), 3);
}

#[test]
fn budget_is_enforced() {
    let gs = small_graphs();
    let r = nat_transformations(&gs[5], &gs[6], &Budget::new(3));
    assert!(matches!(r, Err(crate::error::Error::BudgetExceeded { .. })));
}

fn arb_graph_within(max_v: usize, max_e: usize) -> impl Strategy<Value = Presheaf> {
    (1usize..=max_v).prop_flat_map(move |nv| {
        prop::collection::vec((0..nv, 0..nv), 0..=max_e).prop_map(move |es| graph(nv, &es))
    })
}

fn arb_graph() -> impl Strategy<Value = Presheaf> {
    arb_graph_within(3, 3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn exponential_adjunction_counts(
        w in arb_graph_within(2, 2),
        x in arb_graph_within(2, 2),
        y in arb_graph_within(2, 2),
    ) {
        let e = exponential(&x, &y, &budget()).unwrap();
        e.object.validate().unwrap();
        let wx = product(&w, &x).unwrap().object;
        prop_assume!(wx.total_size() + y.total_size() + w.total_size() + e.object.total_size() <= 200);
        prop_assert_eq!(
            count_nat_transformations(&wx, &y, &budget()).unwrap(),
            count_nat_transformations(&w, &e.object, &budget()).unwrap()
        );
    }

    #[test]
    fn canonical_code_decides_isomorphism(x in arb_graph(), y in arb_graph()) {
        prop_assert_eq!(
            canonical_code(&x) == canonical_code(&y),
            is_isomorphic(&x, &y, &budget()).unwrap()
        );
    }

    #[test]
    fn pi_output_is_functorial(x in arb_graph(), z in arb_graph()) {
        let d = x.base().clone();
        let one = Presheaf::terminal(d);
        let f = nat_transformations(&x, &one, &budget()).unwrap().remove(0);
        if let Some(g) = nat_transformations(&z, &x, &budget()).unwrap().first() {
            let pi = dependent_product(&f, g, &budget()).unwrap();
            pi.object().validate().unwrap();
            pi.map.validate().unwrap();
        }
    }
}
