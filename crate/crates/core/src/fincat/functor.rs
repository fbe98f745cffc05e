use std::collections::HashMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{FinCategory, Mor, Obj};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinFunctor {
    source: Arc<FinCategory>,
    target: Arc<FinCategory>,
    obj_map: Vec<Obj>,
    mor_map: Vec<Mor>,
}

impl FinFunctor {
    /// Validates dom/cod preservation, identities, and every composite.
    pub fn new(
        source: Arc<FinCategory>,
        target: Arc<FinCategory>,
        obj_map: Vec<Obj>,
        mor_map: Vec<Mor>,
    ) -> Result<Self> {
        if obj_map.len() != source.num_objects() || mor_map.len() != source.num_morphisms() {
            return Err(Error::InvalidFunctor("tables do not cover the source".into()));
        }
        if obj_map.iter().any(|o| o.0 >= target.num_objects())
            || mor_map.iter().any(|m| m.0 >= target.num_morphisms())
        {
            return Err(Error::InvalidFunctor("table entry outside the target".into()));
        }
        let f = FinFunctor {
            source,
            target,
            obj_map,
            mor_map,
        };
        f.check()?;
        Ok(f)
    }

    fn check(&self) -> Result<()> {
        let (s, t) = (&*self.source, &*self.target);
        for m in s.morphisms() {
            let fm = self.mor_map[m.0];
            if t.dom(fm) != self.obj(s.dom(m)) || t.cod(fm) != self.obj(s.cod(m)) {
                return Err(Error::InvalidFunctor(format!(
                    "{} is sent to {} with the wrong endpoints",
                    s.mor_name(m),
                    t.mor_name(fm)
                )));
            }
        }
        for o in s.objects() {
            if self.mor(s.id(o)) != t.id(self.obj(o)) {
                return Err(Error::InvalidFunctor(format!(
                    "identity of {} not preserved",
                    s.obj_name(o)
                )));
            }
        }
        for f in s.morphisms() {
            for &g in s.outgoing(s.cod(f)) {
                if self.mor(s.compose(g, f)) != t.compose(self.mor(g), self.mor(f)) {
                    return Err(Error::InvalidFunctor(format!(
                        "composite {}.{} not preserved",
                        s.mor_name(g),
                        s.mor_name(f)
                    )));
                }
            }
        }
        Ok(())
    }

    /// Builds a functor from an object table and a partial morphism table,
    /// filling the rest by factoring through already-mapped morphisms.
    pub fn from_partial(
        source: Arc<FinCategory>,
        target: Arc<FinCategory>,
        obj_map: Vec<Obj>,
        partial: &HashMap<Mor, Mor>,
    ) -> Result<Self> {
        let s = &*source;
        let mut mors: Vec<Option<Mor>> = vec![None; s.num_morphisms()];
        for (&m, &v) in partial {
            mors[m.0] = Some(v);
        }
        for o in s.objects() {
            let id = target.id(obj_map[o.0]);
            match mors[s.id(o).0] {
                Some(v) if v != id => {
                    return Err(Error::InvalidFunctor(format!(
                        "identity of {} not preserved",
                        s.obj_name(o)
                    )))
                }
                _ => mors[s.id(o).0] = Some(id),
            }
        }
        loop {
            let mut progress = false;
            for f in s.morphisms() {
                let Some(ff) = mors[f.0] else { continue };
                for &g in s.outgoing(s.cod(f)) {
                    let Some(fg) = mors[g.0] else { continue };
                    let gf = s.compose(g, f);
                    if mors[gf.0].is_none() {
                        let Some(v) = target.try_compose(fg, ff) else {
                            return Err(Error::InvalidFunctor(format!(
                                "images of {} and {} do not compose",
                                s.mor_name(g),
                                s.mor_name(f)
                            )));
                        };
                        mors[gf.0] = Some(v);
                        progress = true;
                    }
                }
            }
            if !progress {
                break;
            }
        }
        if let Some(m) = s.morphisms().find(|m| mors[m.0].is_none()) {
            return Err(Error::InvalidFunctor(format!(
                "no image given for {} and it is not a composite of mapped morphisms",
                s.mor_name(m)
            )));
        }
        Self::new(source, target, obj_map, mors.into_iter().map(Option::unwrap).collect())
    }

    pub fn identity(c: Arc<FinCategory>) -> Self {
        FinFunctor {
            obj_map: c.objects().collect(),
            mor_map: c.morphisms().collect(),
            source: c.clone(),
            target: c,
        }
    }

    /// The unique functor to a one-object, one-morphism category.
    pub fn to_terminal(c: Arc<FinCategory>, terminal: Arc<FinCategory>) -> Result<Self> {
        if terminal.num_morphisms() != 1 {
            return Err(Error::ShapeMismatch("target is not terminal".into()));
        }
        Ok(FinFunctor {
            obj_map: vec![Obj(0); c.num_objects()],
            mor_map: vec![Mor(0); c.num_morphisms()],
            source: c,
            target: terminal,
        })
    }

    pub(crate) fn from_parts_unchecked(
        source: Arc<FinCategory>,
        target: Arc<FinCategory>,
        obj_map: Vec<Obj>,
        mor_map: Vec<Mor>,
    ) -> Self {
        let f = FinFunctor {
            source,
            target,
            obj_map,
            mor_map,
        };
        debug_assert!(f.check().is_ok());
        f
    }

    pub fn source(&self) -> &Arc<FinCategory> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FinCategory> {
        &self.target
    }

    #[inline]
    pub fn obj(&self, o: Obj) -> Obj {
        self.obj_map[o.0]
    }

    #[inline]
    pub fn mor(&self, m: Mor) -> Mor {
        self.mor_map[m.0]
    }

    pub fn obj_table(&self) -> &[Obj] {
        &self.obj_map
    }

    pub fn mor_table(&self) -> &[Mor] {
        &self.mor_map
    }

    /// `other . self`.
    pub fn then(&self, other: &FinFunctor) -> Result<FinFunctor> {
        if *self.target != *other.source {
            return Err(Error::ShapeMismatch("functors are not composable".into()));
        }
        Ok(FinFunctor {
            source: self.source.clone(),
            target: other.target.clone(),
            obj_map: self.obj_map.iter().map(|&o| other.obj(o)).collect(),
            mor_map: self.mor_map.iter().map(|&m| other.mor(m)).collect(),
        })
    }

    /// Injective on every hom-set.
    pub fn is_faithful(&self) -> bool {
        let s = &*self.source;
        s.objects().all(|a| {
            s.objects().all(|b| {
                let mut img: Vec<Mor> = s.hom(a, b).iter().map(|&m| self.mor(m)).collect();
                img.sort();
                img.dedup();
                img.len() == s.hom(a, b).len()
            })
        })
    }

    /// Surjective on every hom-set.
    pub fn is_full(&self) -> bool {
        let (s, t) = (&*self.source, &*self.target);
        s.objects().all(|a| {
            s.objects().all(|b| {
                let img: Vec<Mor> = s.hom(a, b).iter().map(|&m| self.mor(m)).collect();
                t.hom(self.obj(a), self.obj(b)).iter().all(|m| img.contains(m))
            })
        })
    }
}

/// A natural transformation between parallel functors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinNatTrans {
    source: FinFunctor,
    target: FinFunctor,
    components: Vec<Mor>,
}

impl FinNatTrans {
    pub fn new(source: FinFunctor, target: FinFunctor, components: Vec<Mor>) -> Result<Self> {
        if source.source != target.source || source.target != target.target {
            return Err(Error::ShapeMismatch("functors are not parallel".into()));
        }
        let (c, d) = (&*source.source, &*source.target);
        if components.len() != c.num_objects() {
            return Err(Error::InvalidNatTrans("wrong number of components".into()));
        }
        for o in c.objects() {
            let m = components[o.0];
            if m.0 >= d.num_morphisms() || d.dom(m) != source.obj(o) || d.cod(m) != target.obj(o) {
                return Err(Error::InvalidNatTrans(format!(
                    "component at {} has the wrong type",
                    c.obj_name(o)
                )));
            }
        }
        for f in c.morphisms() {
            let (a, b) = (c.dom(f), c.cod(f));
            let lhs = d.compose(target.mor(f), components[a.0]);
            let rhs = d.compose(components[b.0], source.mor(f));
            if lhs != rhs {
                return Err(Error::InvalidNatTrans(format!(
                    "naturality fails at {}",
                    c.mor_name(f)
                )));
            }
        }
        Ok(FinNatTrans {
            source,
            target,
            components,
        })
    }

    pub fn component(&self, o: Obj) -> Mor {
        self.components[o.0]
    }

    pub fn source(&self) -> &FinFunctor {
        &self.source
    }

    pub fn target(&self) -> &FinFunctor {
        &self.target
    }
}

/// An adjunction `L -| F` with `L : B -> A`, `F : A -> B`, and the unit
/// components `b -> F L b` kept as raw data so that a mistyped unit can
/// be reported as a checker failure rather than refused outright.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reflection {
    left: FinFunctor,
    right: FinFunctor,
    unit: Vec<Mor>,
}

impl Reflection {
    pub fn new(left: FinFunctor, right: FinFunctor, unit: Vec<Mor>) -> Result<Self> {
        if left.target != right.source || right.target != left.source {
            return Err(Error::ShapeMismatch(
                "left adjoint and right adjoint do not form a round trip".into(),
            ));
        }
        if unit.len() != left.source.num_objects()
            || unit.iter().any(|m| m.0 >= left.source.num_morphisms())
        {
            return Err(Error::ShapeMismatch("unit table does not cover B".into()));
        }
        Ok(Reflection { left, right, unit })
    }

    /// Builds the reflection with the unit chosen as the unique morphism
    /// `b -> F L b`, failing when some such hom-set is not a singleton.
    pub fn with_unique_unit(left: FinFunctor, right: FinFunctor) -> Result<Self> {
        let b = left.source.clone();
        let mut unit = Vec::new();
        for o in b.objects() {
            let fl = right.obj(left.obj(o));
            match b.hom(o, fl) {
                [m] => unit.push(*m),
                h => {
                    return Err(Error::NonUnique {
                        context: format!("unit component at {}", b.obj_name(o)),
                        count: h.len(),
                    })
                }
            }
        }
        Self::new(left, right, unit)
    }

    /// The identity reflection of a category onto itself.
    pub fn identity(c: Arc<FinCategory>) -> Self {
        let unit = c.objects().map(|o| c.id(o)).collect();
        Reflection {
            left: FinFunctor::identity(c.clone()),
            right: FinFunctor::identity(c),
            unit,
        }
    }

    pub fn left(&self) -> &FinFunctor {
        &self.left
    }

    pub fn right(&self) -> &FinFunctor {
        &self.right
    }

    /// The category `B` (domain of the left adjoint).
    pub fn big(&self) -> &Arc<FinCategory> {
        &self.left.source
    }

    /// The reflective subcategory `A`.
    pub fn small(&self) -> &Arc<FinCategory> {
        &self.left.target
    }

    pub fn unit(&self, b: Obj) -> Mor {
        self.unit[b.0]
    }

    pub fn unit_table(&self) -> &[Mor] {
        &self.unit
    }

    pub fn with_unit(&self, unit: Vec<Mor>) -> Result<Self> {
        Self::new(self.left.clone(), self.right.clone(), unit)
    }

    /// The unit as a validated natural transformation `Id_B => F L`.
    pub fn unit_nat(&self) -> Result<FinNatTrans> {
        let fl = self.left.then(&self.right)?;
        FinNatTrans::new(FinFunctor::identity(self.big().clone()), fl, self.unit.clone())
    }

    /// The transpose `L b -> a` of `u : b -> F a`, if unique.
    pub fn transpose(&self, b: Obj, a: Obj, u: Mor) -> Option<Mor> {
        let (bb, aa) = (self.big(), self.small());
        let mut found = None;
        for &v in aa.hom(self.left.obj(b), a) {
            if bb.try_compose(self.right.mor(v), self.unit[b.0]) == Some(u) {
                if found.is_some() {
                    return None;
                }
                found = Some(v);
            }
        }
        found
    }

    /// The counit component `L F a -> a`, the transpose of `id_{F a}`.
    pub fn counit(&self, a: Obj) -> Option<Mor> {
        let fa = self.right.obj(a);
        self.transpose(fa, a, self.big().id(fa))
    }
}

/// Why [`check_adjunction`] rejected a reflection.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum AdjunctionFailure {
    /// The unit component at `b` is not a morphism `b -> F L b`.
    MistypedUnit { b: String, component: String },
    /// `u : b -> F a` has `count` factorizations through the unit.
    Factorizations {
        b: String,
        a: String,
        u: String,
        count: usize,
    },
    /// The right adjoint is not full and faithful.
    NotFullyFaithful,
}

/// Exhaustively checks the universal property of the unit: every
/// `u : b -> F a` factors uniquely as `F v . unit_b`. The first failure in
/// canonical order (b, then a, then u) is returned.
pub fn check_adjunction(r: &Reflection) -> std::result::Result<usize, AdjunctionFailure> {
    let (bb, aa) = (r.big(), r.small());
    let mut checked = 0;
    for b in bb.objects() {
        let eta = r.unit(b);
        if bb.dom(eta) != b || bb.cod(eta) != r.right.obj(r.left.obj(b)) {
            return Err(AdjunctionFailure::MistypedUnit {
                b: bb.obj_name(b).into(),
                component: bb.mor_name(eta).into(),
            });
        }
        for a in aa.objects() {
            for &u in bb.hom(b, r.right.obj(a)) {
                let count = aa
                    .hom(r.left.obj(b), a)
                    .iter()
                    .filter(|&&v| bb.compose(r.right.mor(v), eta) == u)
                    .count();
                checked += 1;
                if count != 1 {
                    return Err(AdjunctionFailure::Factorizations {
                        b: bb.obj_name(b).into(),
                        a: aa.obj_name(a).into(),
                        u: bb.mor_name(u).into(),
                        count,
                    });
                }
            }
        }
    }
    Ok(checked)
}
