//! Dependent products in a presheaf category, computed through the
//! equivalence between presheaves over `Y` and presheaves on `el(Y)`.

use std::collections::HashMap;

use super::{Presheaf, PresheafMap};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::fincat::{category_of_elements, Elements, FinFunctor, Mor, Obj};
use crate::finset::{FinFn, FinSet};
use crate::kan::{ran, KanResult};

/// `g : Z -> X` as the presheaf `(c, x) |-> g_c^-1(x)` on `el(X)`.
pub fn over_elements(el: &Elements, g: &PresheafMap) -> Result<Presheaf> {
    let x = g.target();
    if *el.functor.target() != *x.base() || el.elements.len() != x.total_size() {
        return Err(Error::ShapeMismatch("elements do not belong to the target of g".into()));
    }
    let z = g.source();
    // fibre position of each z
    let mut fibres: HashMap<(Obj, usize), Vec<usize>> = HashMap::new();
    let mut pos = HashMap::new();
    for c in x.base().objects() {
        for zi in 0..z.size(c) {
            let f = fibres.entry((c, g.component(c).apply(zi))).or_default();
            pos.insert((c, zi), f.len());
            f.push(zi);
        }
    }
    let empty = Vec::new();
    let sets = el
        .elements
        .iter()
        .map(|&(c, xi)| {
            let f = fibres.get(&(c, xi)).unwrap_or(&empty);
            FinSet::from_labels(f.iter().map(|&zi| z.set(c).label(zi).to_string()).collect())
        })
        .collect();
    let act = el
        .morphisms
        .iter()
        .map(|&(u, y)| {
            let (c, d) = (x.base().dom(u), x.base().cod(u));
            let src = fibres.get(&(d, y)).unwrap_or(&empty);
            let tgt_len = fibres.get(&(c, x.act(u).apply(y))).map_or(0, Vec::len);
            let map = src.iter().map(|&zi| pos[&(c, z.act(u).apply(zi))]).collect();
            FinFn::from_vec(map, tgt_len)
        })
        .collect();
    Presheaf::new(el.category().clone(), sets, act)
}

/// The inverse construction: `Q` on `el(Y)` becomes `P(c) = sum_y Q(c, y)`
/// with its projection to `Y`.
pub fn from_elements(el: &Elements, y: &Presheaf, q: &Presheaf) -> Result<PresheafMap> {
    if q.base() != el.category() {
        return Err(Error::ShapeMismatch("presheaf does not live on el(Y)".into()));
    }
    let c = y.base().clone();
    let mut offset: HashMap<(Obj, usize), usize> = HashMap::new();
    let mut sets = Vec::new();
    let mut proj = Vec::new();
    for o in c.objects() {
        let mut labels = Vec::new();
        let mut p = Vec::new();
        for yi in 0..y.size(o) {
            let e = el.object_of(o, yi);
            offset.insert((o, yi), labels.len());
            for r in 0..q.size(e) {
                labels.push(format!("({},{})", y.set(o).label(yi), q.set(e).label(r)));
                p.push(yi);
            }
        }
        sets.push(FinSet::from_labels(labels));
        proj.push(p);
    }
    let act = c
        .morphisms()
        .map(|u| {
            let (s, t) = (c.dom(u), c.cod(u));
            let mut map = Vec::new();
            for yi in 0..y.size(t) {
                let m = el.morphism_of(u, yi);
                let base = offset[&(s, y.act(u).apply(yi))];
                for r in 0..q.size(el.object_of(t, yi)) {
                    map.push(base + q.act(m).apply(r));
                }
            }
            FinFn::from_vec(map, sets[s.0].len())
        })
        .collect();
    let p = Presheaf::new(c, sets, act)?;
    let m = PresheafMap::from_tables(&p, y, proj);
    m.validate()?;
    Ok(m)
}

/// `el(f) : el(X) -> el(Y)` for `f : X -> Y`.
pub fn elements_functor(ex: &Elements, ey: &Elements, f: &PresheafMap) -> FinFunctor {
    let obj_map = ex
        .elements
        .iter()
        .map(|&(c, x)| ey.object_of(c, f.component(c).apply(x)))
        .collect();
    let mor_map = ex
        .morphisms
        .iter()
        .map(|&(u, x): &(Mor, usize)| ey.morphism_of(u, f.component(ex.functor.target().cod(u)).apply(x)))
        .collect();
    FinFunctor::from_parts_unchecked(ex.category().clone(), ey.category().clone(), obj_map, mor_map)
}

/// `Pi_f g` with its projection to `Y`, plus the intermediate data.
#[derive(Debug, Clone)]
pub struct DependentProduct {
    pub map: PresheafMap,
    pub kan: KanResult,
}

impl DependentProduct {
    pub fn object(&self) -> &Presheaf {
        self.map.source()
    }
}

/// `Pi_f g` for `f : X -> Y`, `g : Z -> X`, as the right Kan extension
/// along `el(f)` of `g` viewed on `el(X)`.
pub fn dependent_product(f: &PresheafMap, g: &PresheafMap, budget: &Budget) -> Result<DependentProduct> {
    if g.target() != f.source() {
        return Err(Error::ShapeMismatch("g does not land in the domain of f".into()));
    }
    let ex = category_of_elements(f.source());
    let ey = category_of_elements(f.target());
    let elf = elements_functor(&ex, &ey, f);
    let q = over_elements(&ex, g)?;
    let kan = ran(&elf, &q, budget)?;
    let map = from_elements(&ey, f.target(), &kan.output)?;
    Ok(DependentProduct { map, kan })
}
