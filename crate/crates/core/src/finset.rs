//! Finite sets, total functions, and limits/colimits of finite-set-valued
//! diagrams.
//!
//! Elements are dense indices `0..n`; a [`FinSet`] attaches a unique label
//! to each index for display and serialization.

use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::fincat::{FinCategory, Mor, Obj};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct FinSet {
    labels: Vec<String>,
}

impl FinSet {
    pub fn new(labels: Vec<String>) -> Result<Self> {
        let mut seen = HashSet::new();
        for l in &labels {
            if !seen.insert(l.as_str()) {
                return Err(Error::InvalidDiagram(format!("duplicate element {l}")));
            }
        }
        Ok(FinSet { labels })
    }

    /// Labels are trusted to be distinct.
    pub(crate) fn from_labels(labels: Vec<String>) -> Self {
        debug_assert!(FinSet::new(labels.clone()).is_ok());
        FinSet { labels }
    }

    /// `{prefix0, prefix1, ...}`.
    pub fn numbered(prefix: &str, n: usize) -> Self {
        FinSet {
            labels: (0..n).map(|i| format!("{prefix}{i}")).collect(),
        }
    }

    pub fn singleton() -> Self {
        FinSet {
            labels: vec!["*".into()],
        }
    }

    pub fn empty() -> Self {
        FinSet::default()
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn position(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }
}

/// A total function `{0..dom} -> {0..cod}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FinFn {
    cod: usize,
    map: Vec<usize>,
}

impl FinFn {
    pub fn new(map: Vec<usize>, cod: usize) -> Result<Self> {
        if let Some(v) = map.iter().find(|&&v| v >= cod) {
            return Err(Error::InvalidDiagram(format!(
                "value {v} outside a codomain of size {cod}"
            )));
        }
        Ok(FinFn { cod, map })
    }

    pub(crate) fn from_vec(map: Vec<usize>, cod: usize) -> Self {
        debug_assert!(map.iter().all(|&v| v < cod));
        FinFn { cod, map }
    }

    pub fn identity(n: usize) -> Self {
        FinFn {
            cod: n,
            map: (0..n).collect(),
        }
    }

    pub fn dom(&self) -> usize {
        self.map.len()
    }

    pub fn cod(&self) -> usize {
        self.cod
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    pub fn table(&self) -> &[usize] {
        &self.map
    }

    /// `g . self`.
    pub fn then(&self, g: &FinFn) -> FinFn {
        debug_assert_eq!(self.cod, g.dom());
        FinFn {
            cod: g.cod,
            map: self.map.iter().map(|&x| g.map[x]).collect(),
        }
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.cod];
        self.map.iter().all(|&v| !std::mem::replace(&mut seen[v], true))
    }

    pub fn is_surjective(&self) -> bool {
        let mut seen = vec![false; self.cod];
        for &v in &self.map {
            seen[v] = true;
        }
        seen.into_iter().all(|b| b)
    }

    pub fn is_bijective(&self) -> bool {
        self.dom() == self.cod && self.is_injective()
    }

    pub fn inverse(&self) -> Option<FinFn> {
        if !self.is_bijective() {
            return None;
        }
        let mut inv = vec![0; self.cod];
        for (x, &y) in self.map.iter().enumerate() {
            inv[y] = x;
        }
        Some(FinFn {
            cod: self.dom(),
            map: inv,
        })
    }
}

/// A covariant functor from a finite index category to finite sets.
#[derive(Debug, Clone)]
pub struct SetDiagram {
    index: Arc<FinCategory>,
    sets: Vec<FinSet>,
    maps: Vec<FinFn>,
}

impl SetDiagram {
    pub fn new(index: Arc<FinCategory>, sets: Vec<FinSet>, maps: Vec<FinFn>) -> Result<Self> {
        let d = SetDiagram { index, sets, maps };
        d.validate()?;
        Ok(d)
    }

    pub(crate) fn new_unchecked(index: Arc<FinCategory>, sets: Vec<FinSet>, maps: Vec<FinFn>) -> Self {
        let d = SetDiagram { index, sets, maps };
        debug_assert!(d.validate().is_ok(), "{:?}", d.validate());
        d
    }

    fn validate(&self) -> Result<()> {
        let j = &*self.index;
        if self.sets.len() != j.num_objects() || self.maps.len() != j.num_morphisms() {
            return Err(Error::InvalidDiagram("tables do not cover the index".into()));
        }
        for f in j.morphisms() {
            let m = &self.maps[f.0];
            if m.dom() != self.sets[j.dom(f).0].len() || m.cod() != self.sets[j.cod(f).0].len() {
                return Err(Error::InvalidDiagram(format!(
                    "{} has the wrong type",
                    j.mor_name(f)
                )));
            }
        }
        for o in j.objects() {
            if self.maps[j.id(o).0] != FinFn::identity(self.sets[o.0].len()) {
                return Err(Error::InvalidDiagram(format!(
                    "identity of {} not sent to an identity",
                    j.obj_name(o)
                )));
            }
        }
        for f in j.morphisms() {
            for &g in j.outgoing(j.cod(f)) {
                if self.maps[j.compose(g, f).0] != self.maps[f.0].then(&self.maps[g.0]) {
                    return Err(Error::InvalidDiagram(format!(
                        "composite {}.{} not preserved",
                        j.mor_name(g),
                        j.mor_name(f)
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn index(&self) -> &Arc<FinCategory> {
        &self.index
    }

    pub fn set(&self, o: Obj) -> &FinSet {
        &self.sets[o.0]
    }

    pub fn map(&self, f: Mor) -> &FinFn {
        &self.maps[f.0]
    }
}

/// Compatible families with their projections.
#[derive(Debug, Clone)]
pub struct Limit {
    pub set: FinSet,
    /// One tuple per element, indexed by object of the index category.
    pub families: Vec<Vec<usize>>,
    pub projections: Vec<FinFn>,
    lookup: HashMap<Vec<usize>, usize>,
}

impl Limit {
    pub fn position(&self, family: &[usize]) -> Option<usize> {
        self.lookup.get(family).copied()
    }
}

/// The limit as the set of compatible families `(x_j)` with
/// `D(f)(x_j) = x_k` for every `f : j -> k`.
///
/// Families are enumerated in lexicographic order of their tuples. A
/// coordinate reachable from an earlier one along some morphism is forced,
/// so only free coordinates branch.
pub fn limit(d: &SetDiagram, budget: &Budget) -> Result<Limit> {
    let j = &*d.index;
    let n = j.num_objects();
    // constraints checked when object k is assigned: morphisms between k
    // and earlier objects, plus endomorphisms of k
    let mut checks: Vec<Vec<Mor>> = vec![Vec::new(); n];
    let mut forced_by: Vec<Option<Mor>> = vec![None; n];
    for f in j.morphisms() {
        let (a, b) = (j.dom(f).0, j.cod(f).0);
        let k = a.max(b);
        checks[k].push(f);
        if a < b && forced_by[b].is_none() {
            forced_by[b] = Some(f);
        }
    }
    let mut meter = budget.meter();
    let mut families = Vec::new();
    let mut cur = vec![0usize; n];

    fn rec(
        k: usize,
        d: &SetDiagram,
        checks: &[Vec<Mor>],
        forced_by: &[Option<Mor>],
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
        meter: &mut crate::budget::Meter,
    ) -> Result<()> {
        let j = &*d.index;
        if k == cur.len() {
            out.push(cur.clone());
            return Ok(());
        }
        let candidates: Vec<usize> = match forced_by[k] {
            Some(f) => vec![d.maps[f.0].apply(cur[j.dom(f).0])],
            None => (0..d.sets[k].len()).collect(),
        };
        for x in candidates {
            meter.tick()?;
            cur[k] = x;
            let ok = checks[k]
                .iter()
                .all(|&f| d.maps[f.0].apply(cur[j.dom(f).0]) == cur[j.cod(f).0]);
            if ok {
                rec(k + 1, d, checks, forced_by, cur, out, meter)?;
            }
        }
        Ok(())
    }

    if n > 0 {
        rec(0, d, &checks, &forced_by, &mut cur, &mut families, &mut meter)?;
    } else {
        families.push(Vec::new());
    }
    families.sort();
    let labels = families
        .iter()
        .map(|t| {
            let parts: Vec<&str> = t.iter().enumerate().map(|(o, &x)| d.sets[o].label(x)).collect();
            format!("({})", parts.join(","))
        })
        .collect();
    let projections = (0..n)
        .map(|o| FinFn::from_vec(families.iter().map(|t| t[o]).collect(), d.sets[o].len()))
        .collect();
    let lookup = families.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect();
    Ok(Limit {
        set: FinSet::from_labels(labels),
        families,
        projections,
        lookup,
    })
}

/// Quotient of the disjoint union with its injections.
#[derive(Debug, Clone)]
pub struct Colimit {
    pub set: FinSet,
    pub injections: Vec<FinFn>,
    /// Least `(object, element)` of each class.
    pub representatives: Vec<(Obj, usize)>,
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    // the smaller root survives, so every root is the least member of its class
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }
}

/// The quotient of `sum_j D(j)` by the equivalence generated by
/// `x ~ D(f)(x)`. Classes are ordered by their least member in the global
/// order (object index, then element index).
pub fn colimit(d: &SetDiagram) -> Colimit {
    let j = &*d.index;
    let mut offset = Vec::with_capacity(j.num_objects() + 1);
    offset.push(0);
    for o in j.objects() {
        offset.push(offset[o.0] + d.sets[o.0].len());
    }
    let total = *offset.last().unwrap();
    let mut uf = UnionFind::new(total);
    for f in j.morphisms() {
        let (a, b) = (j.dom(f).0, j.cod(f).0);
        for x in 0..d.sets[a].len() {
            uf.union(offset[a] + x, offset[b] + d.maps[f.0].apply(x));
        }
    }
    let mut class_of_root = HashMap::new();
    let mut representatives = Vec::new();
    let mut owner = Vec::with_capacity(total);
    for o in j.objects() {
        for x in 0..d.sets[o.0].len() {
            owner.push((o, x));
        }
    }
    for g in 0..total {
        let r = uf.find(g);
        if r == g {
            class_of_root.insert(r, representatives.len());
            representatives.push(owner[g]);
        }
    }
    let injections = j
        .objects()
        .map(|o| {
            let map = (0..d.sets[o.0].len())
                .map(|x| class_of_root[&uf.find(offset[o.0] + x)])
                .collect();
            FinFn::from_vec(map, representatives.len())
        })
        .collect();
    let labels = representatives
        .iter()
        .map(|&(o, x)| format!("{}/{}", j.obj_name(o), d.sets[o.0].label(x)))
        .collect();
    Colimit {
        set: FinSet::from_labels(labels),
        injections,
        representatives,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parallel_pair(f: Vec<usize>, g: Vec<usize>) -> SetDiagram {
        // index: a --f,g--> b
        let objects = vec!["a".to_string(), "b".to_string()];
        let morphisms = vec![
            ("id(a)".to_string(), 0, 0),
            ("id(b)".to_string(), 1, 1),
            ("f".to_string(), 0, 1),
            ("g".to_string(), 0, 1),
        ];
        let idx = FinCategory::from_parts(objects, morphisms, vec![0, 1], |g, f| {
            if g < 2 {
                f
            } else {
                g
            }
        });
        let idx = Arc::new(idx);
        let fa = idx.morphism("f").unwrap();
        let ga = idx.morphism("g").unwrap();
        let mut maps = vec![FinFn::identity(0); 4];
        maps[idx.id(idx.object("a").unwrap()).0] = FinFn::identity(3);
        maps[idx.id(idx.object("b").unwrap()).0] = FinFn::identity(2);
        maps[fa.0] = FinFn::new(f, 2).unwrap();
        maps[ga.0] = FinFn::new(g, 2).unwrap();
        let sets = vec![
            FinSet::new(vec!["a".into(), "b".into(), "c".into()]).unwrap(),
            FinSet::new(vec!["x".into(), "y".into()]).unwrap(),
        ];
        SetDiagram::new(idx, sets, maps).unwrap()
    }

    fn discrete(sizes: &[usize]) -> SetDiagram {
        let names: Vec<String> = (0..sizes.len()).map(|i| format!("o{i}")).collect();
        let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
        let idx = Arc::new(FinCategory::discrete(&refs));
        let sets = sizes.iter().map(|&n| FinSet::numbered("e", n)).collect();
        let maps = idx
            .morphisms()
            .map(|m| FinFn::identity(sizes[idx.dom(m).0]))
            .collect();
        SetDiagram::new(idx, sets, maps).unwrap()
    }

    #[test]
    fn empty_index_limit_is_singleton_and_colimit_empty() {
        let idx = Arc::new(FinCategory::from_parts(vec![], vec![], vec![], |g, _| g));
        let d = SetDiagram::new(idx, vec![], vec![]).unwrap();
        assert_eq!(limit(&d, &Budget::default()).unwrap().set.len(), 1);
        assert_eq!(colimit(&d).set.len(), 0);
    }

    #[test]
    fn discrete_limit_is_product_and_colimit_is_sum() {
        let d = discrete(&[2, 3]);
        assert_eq!(limit(&d, &Budget::default()).unwrap().set.len(), 6);
        assert_eq!(colimit(&d).set.len(), 5);
    }

    #[test]
    fn equalizer_matches_pointwise_agreement() {
        let (f, g) = (vec![0, 0, 1], vec![0, 1, 1]);
        // oracle: elements where f and g agree
        let oracle: Vec<usize> = (0..3).filter(|&e| f[e] == g[e]).collect();
        assert_eq!(oracle, vec![0, 2]);
        let lim = limit(&parallel_pair(f, g), &Budget::default()).unwrap();
        assert_eq!(lim.set.len(), 2);
        let a_proj: Vec<usize> = lim.projections[0].table().to_vec();
        assert_eq!(a_proj, oracle);
    }

    #[test]
    fn coequalizer_matches_brute_force_closure() {
        let (f, g) = (vec![0, 0, 1], vec![0, 1, 1]);
        // oracle: naive closure of the relation f(e) ~ g(e) on {x, y}
        let mut rel = [[false; 2]; 2];
        for i in 0..2 {
            rel[i][i] = true;
        }
        for e in 0..3 {
            rel[f[e]][g[e]] = true;
            rel[g[e]][f[e]] = true;
        }
        for k in 0..2 {
            for i in 0..2 {
                for j in 0..2 {
                    if rel[i][k] && rel[k][j] {
                        rel[i][j] = true;
                    }
                }
            }
        }
        let classes = (0..2).filter(|&i| (0..i).all(|j| !rel[i][j])).count();
        assert_eq!(classes, 1);
        let col = colimit(&parallel_pair(f, g));
        assert_eq!(col.set.len(), classes);
        // requotienting by the same relations changes nothing
        let again = colimit(&parallel_pair(vec![0, 0, 1], vec![0, 1, 1]));
        assert_eq!(again.set, col.set);
    }

    #[test]
    fn colimit_representatives_are_least_members() {
        let col = colimit(&parallel_pair(vec![1, 1, 1], vec![1, 1, 1]));
        // every a-element is glued to y; x stays alone
        assert_eq!(col.set.len(), 2);
        assert_eq!(col.representatives[0].1, 0);
        assert_eq!(col.set.label(0), "a/a");
        assert_eq!(col.set.label(1), "b/x");
    }

    #[test]
    fn limit_universal_property_exhaustive() {
        // cones from a 2-element apex into the parallel pair: each cone is a
        // map into {a,b,c} equalizing f and g; it must factor uniquely
        let d = parallel_pair(vec![0, 0, 1], vec![0, 1, 1]);
        let lim = limit(&d, &Budget::default()).unwrap();
        for c0 in 0..3 {
            for c1 in 0..3 {
                let cone = [c0, c1];
                let f = |e: usize| [0, 0, 1][e];
                let g = |e: usize| [0, 1, 1][e];
                if cone.iter().any(|&e| f(e) != g(e)) {
                    continue;
                }
                let mut mediators = 0;
                for m0 in 0..lim.set.len() {
                    for m1 in 0..lim.set.len() {
                        if lim.projections[0].apply(m0) == c0 && lim.projections[0].apply(m1) == c1 {
                            mediators += 1;
                        }
                    }
                }
                assert_eq!(mediators, 1);
            }
        }
    }

    #[test]
    fn budget_is_enforced() {
        let d = discrete(&[10, 10, 10]);
        assert!(matches!(
            limit(&d, &Budget::new(50)),
            Err(Error::BudgetExceeded { limit: 50 })
        ));
    }
}
