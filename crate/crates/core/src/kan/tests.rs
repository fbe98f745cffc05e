use std::collections::HashMap;
use std::sync::Arc;

use super::*;
use crate::fincat::{FinCategory, FinFunctor};
use crate::finset::{FinFn, FinSet};
use crate::fixtures::{all_reflections, delta1, delta1_functors, reflection};
use crate::presheaf::{
    count_nat_transformations, find_isomorphism, is_isomorphic, presheaf_corpus, yoneda,
    CorpusOptions, Presheaf,
};

fn budget() -> Budget {
    Budget::default()
}

fn functors() -> Vec<(String, FinFunctor)> {
    let mut out: Vec<(String, FinFunctor)> = all_reflections()
        .into_iter()
        .map(|(n, r)| (n, r.left().clone()))
        .collect();
    out.extend(delta1_functors());
    out
}

fn corpus(c: &Arc<FinCategory>) -> Vec<Presheaf> {
    presheaf_corpus(c, CorpusOptions::default(), &budget()).unwrap()
}

#[test]
fn restriction_along_identity() {
    let d = Arc::new(delta1());
    let id = FinFunctor::identity(d.clone());
    for y in corpus(&d) {
        assert_eq!(restrict(&id, &y).unwrap(), y);
    }
}

#[test]
fn restriction_on_lattice_fixture() {
    let r = reflection("lattice-3-2").unwrap();
    let (a, b) = (r.small().clone(), r.big().clone());
    // Y on {n0 < n2}: Y(n2) = {p, q}, Y(n0) = {r}, both elements restrict to r
    let n0 = a.object("n0").unwrap();
    let n2 = a.object("n2").unwrap();
    let mut sets = vec![FinSet::empty(); 2];
    sets[n0.0] = FinSet::numbered("r", 1);
    sets[n2.0] = FinSet::numbered("p", 2);
    let mut given = HashMap::new();
    given.insert(a.hom(n0, n2)[0], FinFn::new(vec![0, 0], 1).unwrap());
    let y = Presheaf::from_generators(a.clone(), sets, &given).unwrap();
    let ly = restrict(r.left(), &y).unwrap();
    let size = |n: &str| ly.size(b.object(n).unwrap());
    // L n0 = n0, L n1 = n2, L n2 = n2
    assert_eq!((size("n0"), size("n1"), size("n2")), (1, 2, 2));
    let n1_n2 = b.hom(b.object("n1").unwrap(), b.object("n2").unwrap())[0];
    assert_eq!(ly.act(n1_n2).table(), &[0, 1]);
}

#[test]
fn extensions_along_identity() {
    let d = Arc::new(delta1());
    let id = FinFunctor::identity(d.clone());
    for x in corpus(&d) {
        assert!(is_isomorphic(&lan(&id, &x, &budget()).unwrap().output, &x, &budget()).unwrap());
        assert!(is_isomorphic(&ran(&id, &x, &budget()).unwrap().output, &x, &budget()).unwrap());
    }
}

#[test]
fn co_yoneda() {
    for (name, l) in functors() {
        for b in l.source().objects() {
            let k = lan(&l, &yoneda(l.source(), b), &budget()).unwrap();
            let y = yoneda(l.target(), l.obj(b));
            assert!(is_isomorphic(&k.output, &y, &budget()).unwrap(), "{name} at {b}");
        }
    }
}

/// Connected components of the category of elements by union-find on
/// `(object, element)` pairs linked along every action.
fn components(x: &Presheaf) -> usize {
    let c = x.base();
    let mut id = HashMap::new();
    for o in c.objects() {
        for e in 0..x.size(o) {
            let n = id.len();
            id.insert((o, e), n);
        }
    }
    let mut parent: Vec<usize> = (0..id.len()).collect();
    fn find(p: &mut Vec<usize>, mut i: usize) -> usize {
        while p[i] != i {
            i = p[i];
        }
        i
    }
    for f in c.morphisms() {
        for e in 0..x.size(c.cod(f)) {
            let a = find(&mut parent, id[&(c.cod(f), e)]);
            let b = find(&mut parent, id[&(c.dom(f), x.act(f).apply(e))]);
            parent[a] = b;
        }
    }
    (0..parent.len()).filter(|&i| find(&mut parent, i) == i).count()
}

#[test]
fn lan_to_point_counts_components() {
    let d = Arc::new(delta1());
    let l = FinFunctor::to_terminal(d.clone(), Arc::new(FinCategory::terminal())).unwrap();
    for x in corpus(&d) {
        let k = lan(&l, &x, &budget()).unwrap();
        assert_eq!(k.output.total_size(), components(&x));
    }
}

#[test]
fn ran_to_point_is_global_sections() {
    let d = Arc::new(delta1());
    let l = FinFunctor::to_terminal(d.clone(), Arc::new(FinCategory::terminal())).unwrap();
    let one = Presheaf::terminal(d.clone());
    for x in corpus(&d) {
        let k = ran(&l, &x, &budget()).unwrap();
        assert_eq!(k.output.total_size(), count_nat_transformations(&one, &x, &budget()).unwrap());
    }
}

#[test]
fn ran_on_lattice_fixture() {
    // L_* X (a) = Nat(L^* y_a, X); compare sizes with that formula directly
    let r = reflection("lattice-3-2").unwrap();
    let l = r.left();
    for x in corpus(r.big()) {
        let k = ran(l, &x, &budget()).unwrap();
        for a in r.small().objects() {
            let ly = restrict(l, &yoneda(r.small(), a)).unwrap();
            assert_eq!(k.output.size(a), count_nat_transformations(&ly, &x, &budget()).unwrap());
        }
    }
}

#[test]
fn hom_bijections_on_corpus() {
    for (name, l) in functors() {
        let (bs, as_) = (corpus(l.source()), corpus(l.target()));
        for x in &bs {
            let lx = lan(&l, x, &budget()).unwrap().output;
            let rx = ran(&l, x, &budget()).unwrap().output;
            for y in &as_ {
                let ly = restrict(&l, y).unwrap();
                assert_eq!(
                    count_nat_transformations(&lx, y, &budget()).unwrap(),
                    count_nat_transformations(x, &ly, &budget()).unwrap(),
                    "{name}"
                );
                assert_eq!(
                    count_nat_transformations(&ly, x, &budget()).unwrap(),
                    count_nat_transformations(y, &rx, &budget()).unwrap(),
                    "{name}"
                );
            }
        }
    }
}

#[test]
fn triangle_identities() {
    for (name, l) in functors() {
        for x in corpus(l.source()).iter().take(12) {
            // L_! -| L^*: eps_(L_! X) . L_!(eta_X) = id
            let kx = lan(&l, x, &budget()).unwrap();
            let eta = lan_unit(&kx).unwrap();
            let k2 = lan(&l, eta.target(), &budget()).unwrap();
            let eps = lan_counit(&k2, &kx.output).unwrap();
            let lhs = lan_map(&kx, &k2, &eta).unwrap().then(&eps).unwrap();
            assert_eq!(lhs, PresheafMap::identity(&kx.output), "{name}");
            // L^* -| L_*: L_*(eps_X) . eta_(L_* X) = id
            let rx = ran(&l, x, &budget()).unwrap();
            let eps = ran_counit(&rx).unwrap();
            let r2 = ran(&l, eps.source(), &budget()).unwrap();
            let eta = ran_unit(&r2, &rx.output).unwrap();
            let lhs = eta.then(&ran_map(&r2, &rx, &eps).unwrap()).unwrap();
            assert_eq!(lhs, PresheafMap::identity(&rx.output), "{name}");
        }
        for y in corpus(l.target()).iter().take(12) {
            let ly = restrict(&l, y).unwrap();
            // L^* eps . eta L^* = id for L_! -| L^*
            let k = lan(&l, &ly, &budget()).unwrap();
            let eta = lan_unit(&k).unwrap();
            let eps = restrict_map(&l, &lan_counit(&k, y).unwrap()).unwrap();
            assert_eq!(eta.then(&eps).unwrap(), PresheafMap::identity(&ly), "{name}");
            // L^* eps . eta L^* = id for L^* -| L_*
            let r = ran(&l, &ly, &budget()).unwrap();
            let eta = restrict_map(&l, &ran_unit(&r, y).unwrap()).unwrap();
            let eps = ran_counit(&r).unwrap();
            assert_eq!(eta.then(&eps).unwrap(), PresheafMap::identity(&ly), "{name}");
        }
    }
}

#[test]
fn unit_on_representables_is_the_reflection_unit() {
    for (name, r) in all_reflections() {
        let l = r.left();
        let big = r.big();
        for b in big.objects() {
            let yb = yoneda(big, b);
            let eta = lan_unit(&lan(l, &yb, &budget()).unwrap()).unwrap();
            let target = yoneda(big, r.right().obj(l.obj(b)));
            let idx = big.hom(b, b).binary_search(&big.id(b)).unwrap();
            let image = eta.component(b).apply(idx);
            let want = big
                .hom(b, r.right().obj(l.obj(b)))
                .binary_search(&r.unit(b))
                .unwrap();
            // some isomorphism L^* L_! y_b ~ y_(F L b) carries eta(id_b) to unit_b
            let iso = find_isomorphism(eta.target(), &target, &budget()).unwrap();
            assert!(iso.is_some(), "{name}");
            let mut ok = false;
            crate::presheaf::for_each_nat(
                eta.target(),
                &target,
                crate::presheaf::NatOptions { injective: true },
                &budget(),
                |t| {
                    ok |= t[b.0][image] == want;
                    std::ops::ControlFlow::Continue(())
                },
            )
            .unwrap();
            assert!(ok, "{name} at {}", big.obj_name(b));
        }
    }
}

#[test]
fn theta_for_identity_is_identity() {
    let d = Arc::new(delta1());
    let id = FinFunctor::identity(d.clone());
    for x in corpus(&d).iter().take(10) {
        let t = theta(&id, x, &budget()).unwrap();
        assert!(t.map.is_iso() && t.is_epi());
    }
}

#[test]
fn theta_on_lattice_representables() {
    let r = reflection("lattice-3-2").unwrap();
    for b in r.big().objects() {
        let t = theta(r.left(), &yoneda(r.big(), b), &budget()).unwrap();
        t.map.validate().unwrap();
        // restricting theta gives the composite it was defined by
        let right = ran(r.left(), &yoneda(r.big(), b), &budget()).unwrap();
        let left = lan(r.left(), &yoneda(r.big(), b), &budget()).unwrap();
        let composite = ran_counit(&right).unwrap().then(&lan_unit(&left).unwrap()).unwrap();
        assert_eq!(restrict_map(r.left(), &t.map).unwrap(), composite);
    }
}
