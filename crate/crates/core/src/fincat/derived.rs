//! Categories built from other categories: opposites, slices, comma
//! categories, and categories of elements; plus isomorphism search.

use std::collections::HashMap;
use std::sync::Arc;

use super::{identity_name, FinCategory, FinFunctor, Mor, Obj};
use crate::presheaf::Presheaf;

/// Dom/cod swapped, composition transposed. Names are kept.
pub fn opposite(c: &FinCategory) -> FinCategory {
    let objects = c.objects().map(|o| c.obj_name(o).to_string()).collect();
    let morphisms = c
        .morphisms()
        .map(|m| (c.mor_name(m).to_string(), c.cod(m).0, c.dom(m).0))
        .collect();
    let identity = c.objects().map(|o| c.id(o).0).collect();
    FinCategory::from_parts(objects, morphisms, identity, |g, f| c.compose(Mor(f), Mor(g)).0)
}

/// A category assembled from structured objects and morphisms, with the
/// data reordered to match the canonical indices.
#[derive(Debug, Clone)]
pub struct Assembled<O, M> {
    pub cat: Arc<FinCategory>,
    pub objects: Vec<O>,
    pub morphisms: Vec<M>,
}

impl<O: Clone, M: Clone> Assembled<O, M> {
    fn build(
        objects: Vec<(String, O)>,
        morphisms: Vec<(String, usize, usize, M)>,
        identity: Vec<usize>,
        compose: impl FnMut(usize, usize) -> usize,
    ) -> Self {
        let names = objects.iter().map(|o| o.0.clone()).collect();
        let mors = morphisms.iter().map(|m| (m.0.clone(), m.1, m.2)).collect();
        let (cat, obj_new, mor_new) = FinCategory::from_parts_indexed(names, mors, identity, compose);
        let mut obj_data = vec![None; objects.len()];
        for (old, o) in objects.into_iter().enumerate() {
            obj_data[obj_new[old]] = Some(o.1);
        }
        let mut mor_data = vec![None; morphisms.len()];
        for (old, m) in morphisms.into_iter().enumerate() {
            mor_data[mor_new[old]] = Some(m.3);
        }
        Assembled {
            cat: Arc::new(cat),
            objects: obj_data.into_iter().map(Option::unwrap).collect(),
            morphisms: mor_data.into_iter().map(Option::unwrap).collect(),
        }
    }
}

/// The slice `C / y`: objects are morphisms `f : x -> y`, morphisms
/// `h : (x, f) -> (x', f')` with `f' . h = f`. Object data is `f`;
/// morphism data is the underlying morphism `h`.
pub fn slice(c: &FinCategory, y: Obj) -> Assembled<Mor, Mor> {
    let objs: Vec<Mor> = c.incoming(y).to_vec();
    let pos: HashMap<Mor, usize> = objs.iter().enumerate().map(|(i, &f)| (f, i)).collect();
    let objects = objs.iter().map(|&f| (c.mor_name(f).to_string(), f)).collect();
    let mut morphisms = Vec::new();
    let mut index = HashMap::new();
    let mut identity = vec![0; objs.len()];
    for &f in &objs {
        for &h in c.outgoing(c.dom(f)) {
            for &f2 in c.hom(c.cod(h), y) {
                if c.compose(f2, h) != f {
                    continue;
                }
                let (i, j) = (pos[&f], pos[&f2]);
                let name = if c.is_identity(h) && i == j {
                    identity[i] = morphisms.len();
                    identity_name(c.mor_name(f))
                } else {
                    format!("{}|{}|{}", c.mor_name(h), c.mor_name(f), c.mor_name(f2))
                };
                index.insert((h, i, j), morphisms.len());
                morphisms.push((name, i, j, h));
            }
        }
    }
    let ends: Vec<(Mor, usize, usize)> = morphisms.iter().map(|m| (m.3, m.1, m.2)).collect();
    Assembled::build(objects, morphisms, identity, |g, f| {
        let (hg, _, tg) = ends[g];
        let (hf, sf, _) = ends[f];
        index[&(c.compose(hg, hf), sf, tg)]
    })
}

/// The comma category `a / L` for `L : B -> A`: objects `(b, phi : a -> L b)`,
/// morphisms `beta : (b', phi') -> (b, phi)` with `L beta . phi' = phi`.
/// Morphism data is `(beta, source object index)` in the assembled order.
pub fn comma_under(l: &FinFunctor, a: Obj) -> Assembled<(Obj, Mor), (Mor, usize)> {
    let (bb, aa) = (&**l.source(), &**l.target());
    let mut objs = Vec::new();
    for b in bb.objects() {
        for &phi in aa.hom(a, l.obj(b)) {
            objs.push((b, phi));
        }
    }
    let pos: HashMap<(Obj, Mor), usize> = objs.iter().enumerate().map(|(i, &o)| (o, i)).collect();
    let objects = objs
        .iter()
        .map(|&(b, phi)| (format!("{}|{}", bb.obj_name(b), aa.mor_name(phi)), (b, phi)))
        .collect::<Vec<_>>();
    let mut morphisms = Vec::new();
    let mut index = HashMap::new();
    let mut identity = vec![0; objs.len()];
    for (i, &(b1, phi1)) in objs.iter().enumerate() {
        for &beta in bb.outgoing(b1) {
            let phi = aa.compose(l.mor(beta), phi1);
            let j = pos[&(bb.cod(beta), phi)];
            let name = if bb.is_identity(beta) {
                identity[i] = morphisms.len();
                identity_name(&objects[i].0)
            } else {
                format!("{}|{}", bb.mor_name(beta), objects[i].0)
            };
            index.insert((beta, i), morphisms.len());
            morphisms.push((name, i, j, (beta, i)));
        }
    }
    let data: Vec<(Mor, usize)> = morphisms.iter().map(|m| m.3).collect();
    let mut asm = Assembled::build(objects, morphisms, identity, |g, f| {
        let (bg, _) = data[g];
        let (bf, src) = data[f];
        index[&(bb.compose(bg, bf), src)]
    });
    remap_sources(&mut asm);
    asm
}

/// The comma category `L / a`: objects `(b, psi : L b -> a)`, morphisms
/// `beta : (b', psi') -> (b, psi)` with `psi . L beta = psi'`.
pub fn comma_over(l: &FinFunctor, a: Obj) -> Assembled<(Obj, Mor), (Mor, usize)> {
    let (bb, aa) = (&**l.source(), &**l.target());
    let mut objs = Vec::new();
    for b in bb.objects() {
        for &psi in aa.hom(l.obj(b), a) {
            objs.push((b, psi));
        }
    }
    let objects = objs
        .iter()
        .map(|&(b, psi)| (format!("{}|{}", bb.obj_name(b), aa.mor_name(psi)), (b, psi)))
        .collect::<Vec<_>>();
    let mut morphisms = Vec::new();
    let mut index = HashMap::new();
    let mut identity = vec![0; objs.len()];
    for (i, &(b1, psi1)) in objs.iter().enumerate() {
        for &beta in bb.outgoing(b1) {
            for (j, &(b2, psi2)) in objs.iter().enumerate() {
                if b2 != bb.cod(beta) || aa.compose(psi2, l.mor(beta)) != psi1 {
                    continue;
                }
                let name = if bb.is_identity(beta) && i == j {
                    identity[i] = morphisms.len();
                    identity_name(&objects[i].0)
                } else {
                    format!("{}|{}|{}", bb.mor_name(beta), objects[i].0, aa.mor_name(psi2))
                };
                index.insert((beta, i, j), morphisms.len());
                morphisms.push((name, i, j, (beta, i)));
            }
        }
    }
    let ends: Vec<(Mor, usize, usize)> = morphisms.iter().map(|m| (m.3 .0, m.1, m.2)).collect();
    let mut asm = Assembled::build(objects, morphisms, identity, |g, f| {
        let (bg, _, tg) = ends[g];
        let (bf, sf, _) = ends[f];
        index[&(bb.compose(bg, bf), sf, tg)]
    });
    remap_sources(&mut asm);
    asm
}

// morphism data carries the pre-assembly source index; replace it by the
// assembled dom
fn remap_sources(asm: &mut Assembled<(Obj, Mor), (Mor, usize)>) {
    for m in asm.cat.morphisms() {
        asm.morphisms[m.0].1 = asm.cat.dom(m).0;
    }
}

/// The category of elements of `p` together with its projection to the base.
#[derive(Debug, Clone)]
pub struct Elements {
    pub functor: FinFunctor,
    /// `(c, x)` per object.
    pub elements: Vec<(Obj, usize)>,
    /// `(u, y)` per morphism `(c, P(u) y) -> (d, y)`.
    pub morphisms: Vec<(Mor, usize)>,
    index: HashMap<(Obj, usize), Obj>,
    mor_index: HashMap<(Mor, usize), Mor>,
}

impl Elements {
    pub fn category(&self) -> &Arc<FinCategory> {
        self.functor.source()
    }

    pub fn object_of(&self, c: Obj, x: usize) -> Obj {
        self.index[&(c, x)]
    }

    /// The morphism `(c, P(u) y) -> (d, y)` for `u : c -> d`.
    pub fn morphism_of(&self, u: Mor, y: usize) -> Mor {
        self.mor_index[&(u, y)]
    }
}

/// Objects `(c, x)` with `x` in `P(c)`; a morphism `(c, x) -> (d, y)` is
/// `u : c -> d` with `P(u)(y) = x`.
pub fn category_of_elements(p: &Presheaf) -> Elements {
    let c = &**p.base();
    let mut objects = Vec::new();
    let mut pos = HashMap::new();
    for o in c.objects() {
        for x in 0..p.size(o) {
            pos.insert((o, x), objects.len());
            objects.push((format!("{}:{}", c.obj_name(o), p.set(o).label(x)), (o, x)));
        }
    }
    let mut identity = vec![0; objects.len()];
    let mut morphisms = Vec::new();
    let mut index = HashMap::new();
    for u in c.morphisms() {
        let (s, t) = (c.dom(u), c.cod(u));
        for y in 0..p.size(t) {
            let x = p.act(u).apply(y);
            let (i, j) = (pos[&(s, x)], pos[&(t, y)]);
            let name = if c.is_identity(u) {
                identity[j] = morphisms.len();
                identity_name(&objects[j].0)
            } else {
                format!("{}:{}", c.mor_name(u), p.set(t).label(y))
            };
            index.insert((u, y), morphisms.len());
            morphisms.push((name, i, j, (u, y)));
        }
    }
    let data: Vec<(Mor, usize)> = morphisms.iter().map(|m| m.3).collect();
    let asm = Assembled::build(objects, morphisms, identity, |g, f| {
        // g = (v, z) : (d, P(v) z) -> (e, z), f = (u, P(v) z); g.f = (v.u, z)
        let (v, z) = data[g];
        let (u, _) = data[f];
        index[&(c.compose(v, u), z)]
    });
    let cat = asm.cat.clone();
    let obj_map = asm.objects.iter().map(|&(o, _)| o).collect();
    let mor_map = asm.morphisms.iter().map(|&(u, _)| u).collect();
    let index = asm.objects.iter().enumerate().map(|(i, &e)| (e, Obj(i))).collect();
    let mor_index = asm.morphisms.iter().enumerate().map(|(i, &e)| (e, Mor(i))).collect();
    Elements {
        functor: FinFunctor::from_parts_unchecked(cat, p.base().clone(), obj_map, mor_map),
        elements: asm.objects,
        morphisms: asm.morphisms,
        index,
        mor_index,
    }
}

/// Searches for an isomorphism of categories `c -> d`, pruning object
/// bijections by hom-set sizes.
pub fn find_isomorphism(c: &Arc<FinCategory>, d: &Arc<FinCategory>) -> Option<FinFunctor> {
    if c.num_objects() != d.num_objects() || c.num_morphisms() != d.num_morphisms() {
        return None;
    }
    let n = c.num_objects();
    let profile = |k: &FinCategory, o: Obj| {
        let mut out: Vec<usize> = k.objects().map(|x| k.hom(o, x).len()).collect();
        let mut inc: Vec<usize> = k.objects().map(|x| k.hom(x, o).len()).collect();
        out.sort();
        inc.sort();
        (out, inc, k.hom(o, o).len())
    };
    let pc: Vec<_> = c.objects().map(|o| profile(c, o)).collect();
    let pd: Vec<_> = d.objects().map(|o| profile(d, o)).collect();

    fn objs(
        c: &FinCategory,
        d: &FinCategory,
        pc: &[(Vec<usize>, Vec<usize>, usize)],
        pd: &[(Vec<usize>, Vec<usize>, usize)],
        map: &mut Vec<Obj>,
        used: &mut Vec<bool>,
        found: &mut dyn FnMut(&[Obj]) -> bool,
    ) -> bool {
        let i = map.len();
        if i == c.num_objects() {
            return found(map);
        }
        for t in 0..d.num_objects() {
            if used[t] || pc[i] != pd[t] {
                continue;
            }
            let ok = (0..i).all(|j| {
                c.hom(Obj(i), Obj(j)).len() == d.hom(Obj(t), map[j]).len()
                    && c.hom(Obj(j), Obj(i)).len() == d.hom(map[j], Obj(t)).len()
            });
            if !ok {
                continue;
            }
            used[t] = true;
            map.push(Obj(t));
            if objs(c, d, pc, pd, map, used, found) {
                return true;
            }
            map.pop();
            used[t] = false;
        }
        false
    }

    let mut result = None;
    let mut on_objects = |om: &[Obj]| -> bool {
        let mut mm: Vec<Option<Mor>> = vec![None; c.num_morphisms()];
        let mut used = vec![false; d.num_morphisms()];
        for o in c.objects() {
            mm[c.id(o).0] = Some(d.id(om[o.0]));
            used[d.id(om[o.0]).0] = true;
        }
        let order: Vec<Mor> = c.morphisms().filter(|&m| !c.is_identity(m)).collect();
        if let Some(f) = mors(c, d, om, &order, 0, &mut mm, &mut used) {
            result = Some(f);
            true
        } else {
            false
        }
    };

    fn mors(
        c: &Arc<FinCategory>,
        d: &Arc<FinCategory>,
        om: &[Obj],
        order: &[Mor],
        k: usize,
        mm: &mut Vec<Option<Mor>>,
        used: &mut Vec<bool>,
    ) -> Option<FinFunctor> {
        if k == order.len() {
            let table = mm.iter().map(|m| m.unwrap()).collect();
            return FinFunctor::new(c.clone(), d.clone(), om.to_vec(), table).ok();
        }
        let m = order[k];
        for &t in d.hom(om[c.dom(m).0], om[c.cod(m).0]) {
            if used[t.0] {
                continue;
            }
            mm[m.0] = Some(t);
            let consistent = c.outgoing(c.cod(m)).iter().all(|&g| match mm[g.0] {
                Some(tg) => mm[c.compose(g, m).0].map_or(true, |x| x == d.compose(tg, t)),
                None => true,
            }) && c.incoming(c.dom(m)).iter().all(|&f| match mm[f.0] {
                Some(tf) => mm[c.compose(m, f).0].map_or(true, |x| x == d.compose(t, tf)),
                None => true,
            });
            if consistent {
                used[t.0] = true;
                if let Some(f) = mors(c, d, om, order, k + 1, mm, used) {
                    return Some(f);
                }
                used[t.0] = false;
            }
            mm[m.0] = None;
        }
        None
    }

    let mut map = Vec::with_capacity(n);
    let mut used = vec![false; n];
    objs(c, d, &pc, &pd, &mut map, &mut used, &mut on_objects);
    result
}
