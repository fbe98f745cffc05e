//! Finite-set-valued presheaves on a finite base category and the
//! natural transformations between them.

mod corpus;
mod exp;
mod nat;
mod pi;
mod sieve;

pub use corpus::{canonical_code, presheaf_corpus, CorpusOptions};
pub use exp::{curry, exponential, uncurry, Exponential};
pub use nat::{
    count_nat_transformations, find_isomorphism, for_each_nat, is_isomorphic, nat_transformations,
    NatOptions,
};
pub use pi::{dependent_product, elements_functor, from_elements, over_elements, DependentProduct};
pub use sieve::{sieves_on, Sieve};

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fincat::{FinCategory, Mor, Obj};
use crate::finset::{FinFn, FinSet};

struct Inner {
    base: Arc<FinCategory>,
    sets: Vec<FinSet>,
    act: Vec<FinFn>,
}

/// A contravariant functor `base^op -> FinSet`. `act(f)` for `f : c -> d`
/// maps `X(d)` to `X(c)`.
///
/// Cloning is cheap; the tables are shared.
#[derive(Clone)]
pub struct Presheaf(Arc<Inner>);

impl PartialEq for Presheaf {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (same_base(&self.0.base, &other.0.base)
                && self.0.sets == other.0.sets
                && self.0.act == other.0.act)
    }
}

impl Eq for Presheaf {}

impl fmt::Debug for Presheaf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sizes: Vec<usize> = self.0.sets.iter().map(|s| s.len()).collect();
        f.debug_struct("Presheaf").field("sizes", &sizes).finish()
    }
}

pub(crate) fn same_base(a: &Arc<FinCategory>, b: &Arc<FinCategory>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl Presheaf {
    /// Validates sizes and contravariant functoriality.
    pub fn new(base: Arc<FinCategory>, sets: Vec<FinSet>, act: Vec<FinFn>) -> Result<Self> {
        let p = Presheaf(Arc::new(Inner { base, sets, act }));
        p.validate()?;
        Ok(p)
    }

    /// Builds from trusted tables, re-validating in debug builds.
    pub(crate) fn new_unchecked(base: Arc<FinCategory>, sets: Vec<FinSet>, act: Vec<FinFn>) -> Self {
        let p = Presheaf(Arc::new(Inner { base, sets, act }));
        debug_assert!(p.validate().is_ok(), "{:?}", p.validate());
        p
    }

    /// Exhaustive functoriality check: `act(id) = id`, `act(g.f) = act(f) . act(g)`.
    pub fn validate(&self) -> Result<()> {
        let c = &*self.0.base;
        if self.0.sets.len() != c.num_objects() || self.0.act.len() != c.num_morphisms() {
            return Err(Error::InvalidPresheaf("tables do not cover the base".into()));
        }
        for f in c.morphisms() {
            let a = &self.0.act[f.0];
            if a.dom() != self.size(c.cod(f)) || a.cod() != self.size(c.dom(f)) {
                return Err(Error::InvalidPresheaf(format!(
                    "action of {} has the wrong type",
                    c.mor_name(f)
                )));
            }
        }
        for o in c.objects() {
            if self.0.act[c.id(o).0] != FinFn::identity(self.size(o)) {
                return Err(Error::InvalidPresheaf(format!(
                    "identity of {} does not act trivially",
                    c.obj_name(o)
                )));
            }
        }
        for f in c.morphisms() {
            for &g in c.outgoing(c.cod(f)) {
                let lhs = &self.0.act[c.compose(g, f).0];
                let rhs = self.0.act[g.0].then(&self.0.act[f.0]);
                if *lhs != rhs {
                    return Err(Error::InvalidPresheaf(format!(
                        "action of {}.{} is not the composite action",
                        c.mor_name(g),
                        c.mor_name(f)
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn base(&self) -> &Arc<FinCategory> {
        &self.0.base
    }

    pub fn set(&self, o: Obj) -> &FinSet {
        &self.0.sets[o.0]
    }

    pub fn size(&self, o: Obj) -> usize {
        self.0.sets[o.0].len()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.0.sets.iter().map(|s| s.len()).collect()
    }

    /// Total number of elements across all objects.
    pub fn total_size(&self) -> usize {
        self.0.sets.iter().map(|s| s.len()).sum()
    }

    pub fn act(&self, f: Mor) -> &FinFn {
        &self.0.act[f.0]
    }

    pub fn acts(&self) -> &[FinFn] {
        &self.0.act
    }

    pub fn sets(&self) -> &[FinSet] {
        &self.0.sets
    }

    /// Builds from actions on some morphisms; every other action is derived
    /// from `X(g.f) = X(f) . X(g)`. Fails if an action is left undetermined
    /// or the result is not functorial.
    pub fn from_generators(
        base: Arc<FinCategory>,
        sets: Vec<FinSet>,
        given: &std::collections::HashMap<Mor, FinFn>,
    ) -> Result<Self> {
        let c = &*base;
        if sets.len() != c.num_objects() {
            return Err(Error::InvalidPresheaf("sets do not cover the base".into()));
        }
        let mut act: Vec<Option<FinFn>> = vec![None; c.num_morphisms()];
        for o in c.objects() {
            act[c.id(o).0] = Some(FinFn::identity(sets[o.0].len()));
        }
        for (&m, f) in given {
            if m.0 >= c.num_morphisms() {
                return Err(Error::InvalidPresheaf("action on an unknown morphism".into()));
            }
            act[m.0] = Some(f.clone());
        }
        loop {
            let mut progress = false;
            for f in c.morphisms() {
                for &g in c.outgoing(c.cod(f)) {
                    let h = c.compose(g, f);
                    if act[h.0].is_some() {
                        continue;
                    }
                    if let (Some(ag), Some(af)) = (&act[g.0], &act[f.0]) {
                        if ag.cod() == af.dom() {
                            act[h.0] = Some(ag.then(af));
                            progress = true;
                        }
                    }
                }
            }
            if !progress {
                break;
            }
        }
        if let Some(m) = c.morphisms().find(|m| act[m.0].is_none()) {
            return Err(Error::InvalidPresheaf(format!(
                "no action given for {} and it is not a composite of given ones",
                c.mor_name(m)
            )));
        }
        Presheaf::new(base, sets, act.into_iter().map(Option::unwrap).collect())
    }

    /// Singleton at every object.
    pub fn terminal(base: Arc<FinCategory>) -> Self {
        let sets = vec![FinSet::singleton(); base.num_objects()];
        let act = vec![FinFn::identity(1); base.num_morphisms()];
        Presheaf::new_unchecked(base, sets, act)
    }

    pub fn empty(base: Arc<FinCategory>) -> Self {
        let sets = vec![FinSet::empty(); base.num_objects()];
        let act = vec![FinFn::identity(0); base.num_morphisms()];
        Presheaf::new_unchecked(base, sets, act)
    }

    /// Same tables with relabelled elements `prefix0, prefix1, ...` per object.
    pub fn relabel(&self, prefix: &str) -> Presheaf {
        let sets = self
            .0
            .sets
            .iter()
            .map(|s| FinSet::numbered(prefix, s.len()))
            .collect();
        Presheaf::new_unchecked(self.0.base.clone(), sets, self.0.act.clone())
    }
}

/// The representable `hom(-, c)`, acting by precomposition.
pub fn yoneda(base: &Arc<FinCategory>, c: Obj) -> Presheaf {
    let cat = &**base;
    let sets = cat
        .objects()
        .map(|d| FinSet::from_labels(cat.hom(d, c).iter().map(|&m| cat.mor_name(m).to_string()).collect()))
        .collect();
    let act = cat
        .morphisms()
        .map(|f| {
            // f : d -> e acts hom(e, c) -> hom(d, c), u |-> u . f
            let (d, e) = (cat.dom(f), cat.cod(f));
            let target = cat.hom(d, c);
            let map = cat
                .hom(e, c)
                .iter()
                .map(|&u| hom_position(target, cat.compose(u, f)))
                .collect();
            FinFn::from_vec(map, target.len())
        })
        .collect();
    Presheaf::new_unchecked(base.clone(), sets, act)
}

pub(crate) fn hom_position(hom: &[Mor], m: Mor) -> usize {
    hom.binary_search(&m).expect("morphism lies in the hom-set")
}

/// A natural transformation between presheaves on the same base.
#[derive(Clone, PartialEq, Eq)]
pub struct PresheafMap {
    source: Presheaf,
    target: Presheaf,
    components: Vec<FinFn>,
}

impl fmt::Debug for PresheafMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let comps: Vec<&[usize]> = self.components.iter().map(|c| c.table()).collect();
        f.debug_struct("PresheafMap").field("components", &comps).finish()
    }
}

impl PresheafMap {
    /// Validates component types and naturality.
    pub fn new(source: Presheaf, target: Presheaf, components: Vec<FinFn>) -> Result<Self> {
        if !same_base(source.base(), target.base()) {
            return Err(Error::ShapeMismatch("presheaves live on different bases".into()));
        }
        let m = PresheafMap {
            source,
            target,
            components,
        };
        m.validate()?;
        Ok(m)
    }

    pub(crate) fn new_unchecked(source: Presheaf, target: Presheaf, components: Vec<FinFn>) -> Self {
        let m = PresheafMap {
            source,
            target,
            components,
        };
        debug_assert!(m.validate().is_ok(), "{:?}", m.validate());
        m
    }

    pub(crate) fn from_tables(source: &Presheaf, target: &Presheaf, tables: Vec<Vec<usize>>) -> Self {
        let comps = tables
            .into_iter()
            .zip(target.sets())
            .map(|(t, s)| FinFn::from_vec(t, s.len()))
            .collect();
        PresheafMap::new_unchecked(source.clone(), target.clone(), comps)
    }

    pub fn validate(&self) -> Result<()> {
        let c = &**self.source.base();
        if self.components.len() != c.num_objects() {
            return Err(Error::InvalidMap("wrong number of components".into()));
        }
        for o in c.objects() {
            let k = &self.components[o.0];
            if k.dom() != self.source.size(o) || k.cod() != self.target.size(o) {
                return Err(Error::InvalidMap(format!(
                    "component at {} has the wrong type",
                    c.obj_name(o)
                )));
            }
        }
        for f in c.morphisms() {
            let (a, b) = (c.dom(f), c.cod(f));
            // target.act(f) . comp_b = comp_a . source.act(f)
            let lhs = self.components[b.0].then(self.target.act(f));
            let rhs = self.source.act(f).then(&self.components[a.0]);
            if lhs != rhs {
                return Err(Error::InvalidMap(format!("naturality fails at {}", c.mor_name(f))));
            }
        }
        Ok(())
    }

    pub fn identity(x: &Presheaf) -> Self {
        let comps = x.sets().iter().map(|s| FinFn::identity(s.len())).collect();
        PresheafMap::new_unchecked(x.clone(), x.clone(), comps)
    }

    pub fn source(&self) -> &Presheaf {
        &self.source
    }

    pub fn target(&self) -> &Presheaf {
        &self.target
    }

    pub fn component(&self, o: Obj) -> &FinFn {
        &self.components[o.0]
    }

    pub fn components(&self) -> &[FinFn] {
        &self.components
    }

    /// `other . self`.
    pub fn then(&self, other: &PresheafMap) -> Result<PresheafMap> {
        if self.target != other.source {
            return Err(Error::ShapeMismatch("maps are not composable".into()));
        }
        let comps = self
            .components
            .iter()
            .zip(&other.components)
            .map(|(f, g)| f.then(g))
            .collect();
        Ok(PresheafMap::new_unchecked(self.source.clone(), other.target.clone(), comps))
    }

    /// Componentwise bijective.
    pub fn is_iso(&self) -> bool {
        self.components.iter().all(FinFn::is_bijective)
    }

    /// Componentwise surjective.
    pub fn is_epi(&self) -> bool {
        self.components.iter().all(FinFn::is_surjective)
    }

    pub fn is_mono(&self) -> bool {
        self.components.iter().all(FinFn::is_injective)
    }

    pub fn inverse(&self) -> Option<PresheafMap> {
        let comps = self
            .components
            .iter()
            .map(FinFn::inverse)
            .collect::<Option<Vec<_>>>()?;
        Some(PresheafMap::new_unchecked(self.target.clone(), self.source.clone(), comps))
    }

    /// Flattened component tables, the canonical sort key.
    pub fn key(&self) -> Vec<usize> {
        self.components.iter().flat_map(|c| c.table().iter().copied()).collect()
    }
}

/// A binary product with its projections.
#[derive(Debug, Clone)]
pub struct ProductCone {
    pub object: Presheaf,
    pub p1: PresheafMap,
    pub p2: PresheafMap,
}

impl ProductCone {
    /// The pair `<f, g> : W -> X x Y`.
    pub fn pair(&self, f: &PresheafMap, g: &PresheafMap) -> Result<PresheafMap> {
        let y = self.p2.target();
        let tables = f
            .components()
            .iter()
            .zip(g.components())
            .enumerate()
            .map(|(o, (a, b))| {
                (0..a.dom())
                    .map(|w| a.apply(w) * y.size(Obj(o)) + b.apply(w))
                    .collect()
            })
            .collect();
        let m = PresheafMap::from_tables(f.source(), &self.object, tables);
        m.validate()?;
        Ok(m)
    }
}

/// Pointwise product `X(c) x Y(c)`; the pair `(x, y)` sits at index
/// `x * |Y(c)| + y`.
pub fn product(x: &Presheaf, y: &Presheaf) -> Result<ProductCone> {
    if !same_base(x.base(), y.base()) {
        return Err(Error::ShapeMismatch("presheaves live on different bases".into()));
    }
    let c = x.base().clone();
    let sets = c
        .objects()
        .map(|o| {
            let mut labels = Vec::with_capacity(x.size(o) * y.size(o));
            for a in x.set(o).labels() {
                for b in y.set(o).labels() {
                    labels.push(format!("({a},{b})"));
                }
            }
            FinSet::from_labels(labels)
        })
        .collect();
    let act = c
        .morphisms()
        .map(|f| {
            let (d, e) = (c.dom(f), c.cod(f));
            let (ax, ay) = (x.act(f), y.act(f));
            let mut map = Vec::with_capacity(x.size(e) * y.size(e));
            for a in 0..x.size(e) {
                for b in 0..y.size(e) {
                    map.push(ax.apply(a) * y.size(d) + ay.apply(b));
                }
            }
            FinFn::from_vec(map, x.size(d) * y.size(d))
        })
        .collect();
    let object = Presheaf::new_unchecked(c.clone(), sets, act);
    let p1 = c
        .objects()
        .map(|o| (0..x.size(o) * y.size(o)).map(|i| i / y.size(o)).collect())
        .collect();
    let p2 = c
        .objects()
        .map(|o| (0..x.size(o) * y.size(o)).map(|i| i % y.size(o)).collect())
        .collect();
    Ok(ProductCone {
        p1: PresheafMap::from_tables(&object, x, p1),
        p2: PresheafMap::from_tables(&object, y, p2),
        object,
    })
}

/// A pullback square `P -> X`, `P -> Y` over the cospan `X -> Z <- Y`.
#[derive(Debug, Clone)]
pub struct PullbackCone {
    pub object: Presheaf,
    pub p1: PresheafMap,
    pub p2: PresheafMap,
}

/// Pointwise pullback: pairs `(x, y)` with `f(x) = g(y)`, lexicographic.
pub fn pullback(f: &PresheafMap, g: &PresheafMap) -> Result<PullbackCone> {
    if f.target() != g.target() {
        return Err(Error::ShapeMismatch("maps do not share a codomain".into()));
    }
    let (x, y) = (f.source(), g.source());
    let c = x.base().clone();
    let mut pairs: Vec<Vec<(usize, usize)>> = Vec::with_capacity(c.num_objects());
    let mut index: Vec<std::collections::HashMap<(usize, usize), usize>> = Vec::new();
    for o in c.objects() {
        let mut ps = Vec::new();
        for a in 0..x.size(o) {
            for b in 0..y.size(o) {
                if f.component(o).apply(a) == g.component(o).apply(b) {
                    ps.push((a, b));
                }
            }
        }
        index.push(ps.iter().enumerate().map(|(i, &p)| (p, i)).collect());
        pairs.push(ps);
    }
    let sets = c
        .objects()
        .map(|o| {
            FinSet::from_labels(
                pairs[o.0]
                    .iter()
                    .map(|&(a, b)| format!("({},{})", x.set(o).label(a), y.set(o).label(b)))
                    .collect(),
            )
        })
        .collect();
    let act = c
        .morphisms()
        .map(|m| {
            let (d, e) = (c.dom(m), c.cod(m));
            let map = pairs[e.0]
                .iter()
                .map(|&(a, b)| index[d.0][&(x.act(m).apply(a), y.act(m).apply(b))])
                .collect();
            FinFn::from_vec(map, pairs[d.0].len())
        })
        .collect();
    let object = Presheaf::new_unchecked(c.clone(), sets, act);
    let p1 = pairs.iter().map(|ps| ps.iter().map(|p| p.0).collect()).collect();
    let p2 = pairs.iter().map(|ps| ps.iter().map(|p| p.1).collect()).collect();
    Ok(PullbackCone {
        p1: PresheafMap::from_tables(&object, x, p1),
        p2: PresheafMap::from_tables(&object, y, p2),
        object,
    })
}

/// The comparison map from the apex of a commuting square into the
/// canonical pullback of its cospan; the square is a pullback iff this map
/// is an isomorphism.
pub fn pullback_comparison(
    p1: &PresheafMap,
    p2: &PresheafMap,
    f: &PresheafMap,
    g: &PresheafMap,
) -> Result<(PullbackCone, PresheafMap)> {
    let lhs = p1.then(f)?;
    let rhs = p2.then(g)?;
    if lhs != rhs {
        return Err(Error::ShapeMismatch("square does not commute".into()));
    }
    let cone = pullback(f, g)?;
    let c = p1.source().base().clone();
    let tables = c
        .objects()
        .map(|o| {
            let ny = g.source().size(o);
            let pairs: std::collections::HashMap<(usize, usize), usize> = (0..cone.object.size(o))
                .map(|i| {
                    let (a, b) = (cone.p1.component(o).apply(i), cone.p2.component(o).apply(i));
                    ((a, b), i)
                })
                .collect();
            let _ = ny;
            (0..p1.source().size(o))
                .map(|w| pairs[&(p1.component(o).apply(w), p2.component(o).apply(w))])
                .collect()
        })
        .collect();
    let cmp = PresheafMap::from_tables(p1.source(), &cone.object, tables);
    Ok((cone, cmp))
}

#[cfg(test)]
mod tests;
