//! Finite categories given by total composition tables.
//!
//! Objects and morphisms are addressed by dense indices ([`Obj`], [`Mor`]).
//! Every constructor orders objects and morphisms lexicographically by
//! name, so indices follow the canonical order and iteration is
//! deterministic.

mod derived;
mod functor;
mod limits;
mod saturate;

pub use derived::{Assembled, Elements, category_of_elements, comma_under, comma_over, find_isomorphism, opposite, slice};
pub use functor::{check_adjunction, AdjunctionFailure, FinFunctor, FinNatTrans, Reflection};
pub use limits::{
    binary_product, exponential, has_finite_limits, is_iso, pullback, square_mediators,
    terminal_object, Exponential, MediatorAnalysis, Product, Pullback,
};
pub use saturate::{saturate, Presentation, DEFAULT_CLOSE_BOUND};

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, Violation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Obj(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mor(pub usize);

impl fmt::Display for Obj {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

impl fmt::Display for Mor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// Name of the identity morphism on an object named `obj`.
pub fn identity_name(obj: &str) -> String {
    format!("id({obj})")
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct MorphismInfo {
    name: String,
    dom: Obj,
    cod: Obj,
}

/// Raw, unvalidated category data keyed by identifiers.
///
/// `compose` lists triples `(g, f, h)` meaning `g.f = h`, i.e. `f` first.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawCategory {
    pub objects: Vec<String>,
    pub morphisms: Vec<(String, String, String)>,
    pub identities: Vec<(String, String)>,
    pub compose: Vec<(String, String, String)>,
}

#[derive(Clone)]
pub struct FinCategory {
    objects: Vec<String>,
    morphisms: Vec<MorphismInfo>,
    identity: Vec<Mor>,
    outgoing: Vec<Vec<Mor>>,
    incoming: Vec<Vec<Mor>>,
    out_pos: Vec<usize>,
    // comp[f][out_pos[g]] = g . f
    comp: Vec<Vec<Mor>>,
    hom: Vec<Vec<Mor>>,
    obj_index: HashMap<String, Obj>,
    mor_index: HashMap<String, Mor>,
}

impl PartialEq for FinCategory {
    fn eq(&self, other: &Self) -> bool {
        self.objects == other.objects
            && self.morphisms == other.morphisms
            && self.identity == other.identity
            && self.comp == other.comp
    }
}

impl Eq for FinCategory {}

impl fmt::Debug for FinCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FinCategory")
            .field("objects", &self.objects)
            .field("morphisms", &self.morphisms.len())
            .finish()
    }
}

impl FinCategory {
    /// Builds a category from trusted index-level data, reordering
    /// everything lexicographically by name.
    ///
    /// `compose(g, f)` is only called on composable pairs (cod f = dom g).
    /// Names must be unique; the laws are not checked here, see
    /// [`FinCategory::axiom_violations`].
    pub(crate) fn from_parts<F>(
        objects: Vec<String>,
        morphisms: Vec<(String, usize, usize)>,
        identity: Vec<usize>,
        compose: F,
    ) -> Self
    where
        F: FnMut(usize, usize) -> usize,
    {
        Self::from_parts_indexed(objects, morphisms, identity, compose).0
    }

    /// Like [`FinCategory::from_parts`], also returning the old-to-new
    /// index maps for objects and morphisms.
    pub(crate) fn from_parts_indexed<F>(
        objects: Vec<String>,
        morphisms: Vec<(String, usize, usize)>,
        identity: Vec<usize>,
        mut compose: F,
    ) -> (Self, Vec<usize>, Vec<usize>)
    where
        F: FnMut(usize, usize) -> usize,
    {
        let mut obj_order: Vec<usize> = (0..objects.len()).collect();
        obj_order.sort_by(|&a, &b| objects[a].cmp(&objects[b]));
        let mut obj_new = vec![0; objects.len()];
        for (new, &old) in obj_order.iter().enumerate() {
            obj_new[old] = new;
        }
        let mut mor_order: Vec<usize> = (0..morphisms.len()).collect();
        mor_order.sort_by(|&a, &b| morphisms[a].0.cmp(&morphisms[b].0));
        let mut mor_new = vec![0; morphisms.len()];
        for (new, &old) in mor_order.iter().enumerate() {
            mor_new[old] = new;
        }

        let objs: Vec<String> = obj_order.iter().map(|&o| objects[o].clone()).collect();
        let mors: Vec<MorphismInfo> = mor_order
            .iter()
            .map(|&m| MorphismInfo {
                name: morphisms[m].0.clone(),
                dom: Obj(obj_new[morphisms[m].1]),
                cod: Obj(obj_new[morphisms[m].2]),
            })
            .collect();
        let mut ident = vec![Mor(0); objs.len()];
        for (old, &m) in identity.iter().enumerate() {
            ident[obj_new[old]] = Mor(mor_new[m]);
        }

        let n = objs.len();
        let mut outgoing = vec![Vec::new(); n];
        let mut incoming = vec![Vec::new(); n];
        let mut hom = vec![Vec::new(); n * n];
        let mut out_pos = vec![0; mors.len()];
        for (i, m) in mors.iter().enumerate() {
            out_pos[i] = outgoing[m.dom.0].len();
            outgoing[m.dom.0].push(Mor(i));
            incoming[m.cod.0].push(Mor(i));
            hom[m.dom.0 * n + m.cod.0].push(Mor(i));
        }
        let mut comp = Vec::with_capacity(mors.len());
        for f in 0..mors.len() {
            let old_f = mor_order[f];
            let row: Vec<Mor> = outgoing[mors[f].cod.0]
                .iter()
                .map(|&g| Mor(mor_new[compose(mor_order[g.0], old_f)]))
                .collect();
            comp.push(row);
        }
        let obj_index = objs
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), Obj(i)))
            .collect();
        let mor_index = mors
            .iter()
            .enumerate()
            .map(|(i, m)| (m.name.clone(), Mor(i)))
            .collect();
        let cat = FinCategory {
            objects: objs,
            morphisms: mors,
            identity: ident,
            outgoing,
            incoming,
            out_pos,
            comp,
            hom,
            obj_index,
            mor_index,
        };
        (cat, obj_new, mor_new)
    }

    /// The one-object, one-morphism category.
    pub fn terminal() -> Self {
        Self::discrete(&["*"])
    }

    pub fn discrete(names: &[&str]) -> Self {
        let objects: Vec<String> = names.iter().map(|s| s.to_string()).collect();
        let morphisms = objects
            .iter()
            .enumerate()
            .map(|(i, o)| (identity_name(o), i, i))
            .collect();
        let identity = (0..objects.len()).collect();
        Self::from_parts(objects, morphisms, identity, |g, _| g)
    }

    /// The preorder category on `names` with `rel[i][j]` meaning `i <= j`.
    /// `rel` must be reflexive and transitive. The morphism `i -> j` is
    /// named `i_j`; identities follow [`identity_name`].
    pub fn from_preorder(names: &[String], rel: &[Vec<bool>]) -> Result<Self> {
        let n = names.len();
        for i in 0..n {
            if !rel[i][i] {
                return Err(Error::InvalidPreorder(format!("{} is not reflexive", names[i])));
            }
            for j in 0..n {
                for k in 0..n {
                    if rel[i][j] && rel[j][k] && !rel[i][k] {
                        return Err(Error::InvalidPreorder(format!(
                            "{} <= {} <= {} but not {} <= {}",
                            names[i], names[j], names[k], names[i], names[k]
                        )));
                    }
                }
            }
        }
        let mut morphisms = Vec::new();
        let mut index = HashMap::new();
        let mut identity = vec![0; n];
        for i in 0..n {
            for j in 0..n {
                if rel[i][j] {
                    let name = if i == j {
                        identity[i] = morphisms.len();
                        identity_name(&names[i])
                    } else {
                        format!("{}_{}", names[i], names[j])
                    };
                    index.insert((i, j), morphisms.len());
                    morphisms.push((name, i, j));
                }
            }
        }
        let ends: Vec<(usize, usize)> = morphisms.iter().map(|m| (m.1, m.2)).collect();
        let cat = Self::from_parts(names.to_vec(), morphisms, identity, |g, f| {
            index[&(ends[f].0, ends[g].1)]
        });
        let names_set: std::collections::HashSet<&String> =
            cat.morphisms.iter().map(|m| &m.name).collect();
        if names_set.len() != cat.morphisms.len() {
            return Err(Error::InvalidCategory(vec![Violation::Other(
                "morphism names collide".into(),
            )]));
        }
        Ok(cat)
    }

    pub fn num_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn num_morphisms(&self) -> usize {
        self.morphisms.len()
    }

    pub fn objects(&self) -> impl ExactSizeIterator<Item = Obj> + Clone {
        (0..self.objects.len()).map(Obj)
    }

    pub fn morphisms(&self) -> impl ExactSizeIterator<Item = Mor> + Clone {
        (0..self.morphisms.len()).map(Mor)
    }

    pub fn obj_name(&self, o: Obj) -> &str {
        &self.objects[o.0]
    }

    pub fn mor_name(&self, m: Mor) -> &str {
        &self.morphisms[m.0].name
    }

    pub fn object(&self, name: &str) -> Option<Obj> {
        self.obj_index.get(name).copied()
    }

    pub fn morphism(&self, name: &str) -> Option<Mor> {
        self.mor_index.get(name).copied()
    }

    pub fn dom(&self, m: Mor) -> Obj {
        self.morphisms[m.0].dom
    }

    pub fn cod(&self, m: Mor) -> Obj {
        self.morphisms[m.0].cod
    }

    pub fn id(&self, o: Obj) -> Mor {
        self.identity[o.0]
    }

    pub fn is_identity(&self, m: Mor) -> bool {
        self.identity[self.dom(m).0] == m
    }

    /// `g . f`, defined when `cod f = dom g`.
    pub fn try_compose(&self, g: Mor, f: Mor) -> Option<Mor> {
        (self.cod(f) == self.dom(g)).then(|| self.comp[f.0][self.out_pos[g.0]])
    }

    /// `g . f`; panics if the pair is not composable.
    #[inline]
    pub fn compose(&self, g: Mor, f: Mor) -> Mor {
        debug_assert_eq!(self.cod(f), self.dom(g), "composing non-composable morphisms");
        self.comp[f.0][self.out_pos[g.0]]
    }

    pub fn hom(&self, a: Obj, b: Obj) -> &[Mor] {
        &self.hom[a.0 * self.objects.len() + b.0]
    }

    /// Morphisms with domain `o`.
    pub fn outgoing(&self, o: Obj) -> &[Mor] {
        &self.outgoing[o.0]
    }

    /// Morphisms with codomain `o`.
    pub fn incoming(&self, o: Obj) -> &[Mor] {
        &self.incoming[o.0]
    }

    pub fn is_preorder(&self) -> bool {
        self.hom.iter().all(|h| h.len() <= 1)
    }

    /// Whether `m` has a two-sided inverse.
    pub fn is_iso(&self, m: Mor) -> bool {
        self.inverse(m).is_some()
    }

    pub fn inverse(&self, m: Mor) -> Option<Mor> {
        let (a, b) = (self.dom(m), self.cod(m));
        self.hom(b, a).iter().copied().find(|&n| {
            self.compose(n, m) == self.id(a) && self.compose(m, n) == self.id(b)
        })
    }

    /// Exhaustively checks identity laws and associativity.
    pub fn axiom_violations(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        for f in self.morphisms() {
            let (a, b) = (self.dom(f), self.cod(f));
            if self.compose(self.id(b), f) != f || self.compose(f, self.id(a)) != f {
                out.push(Violation::BrokenIdentity {
                    identity: self.mor_name(self.id(b)).to_string(),
                    morphism: self.mor_name(f).to_string(),
                });
            }
            for &g in self.outgoing(b) {
                let gf = self.compose(g, f);
                if self.dom(gf) != a || self.cod(gf) != self.cod(g) {
                    out.push(Violation::IllTypedComposite {
                        g: self.mor_name(g).into(),
                        f: self.mor_name(f).into(),
                        h: self.mor_name(gf).into(),
                    });
                    continue;
                }
                for &h in self.outgoing(self.cod(g)) {
                    if self.compose(h, gf) != self.compose(self.compose(h, g), f) {
                        out.push(Violation::BrokenAssociativity {
                            h: self.mor_name(h).into(),
                            g: self.mor_name(g).into(),
                            f: self.mor_name(f).into(),
                        });
                    }
                }
            }
        }
        out
    }

    /// Exports the full table in raw form.
    pub fn to_raw(&self) -> RawCategory {
        let mut compose = Vec::new();
        for f in self.morphisms() {
            for &g in self.outgoing(self.cod(f)) {
                compose.push((
                    self.mor_name(g).to_string(),
                    self.mor_name(f).to_string(),
                    self.mor_name(self.compose(g, f)).to_string(),
                ));
            }
        }
        RawCategory {
            objects: self.objects.clone(),
            morphisms: self
                .morphisms
                .iter()
                .map(|m| {
                    (
                        m.name.clone(),
                        self.objects[m.dom.0].clone(),
                        self.objects[m.cod.0].clone(),
                    )
                })
                .collect(),
            identities: self
                .objects()
                .map(|o| (self.obj_name(o).to_string(), self.mor_name(self.id(o)).to_string()))
                .collect(),
            compose,
        }
    }
}

/// Validates raw category data, reporting every violation found.
pub fn validate_category(raw: &RawCategory) -> std::result::Result<FinCategory, Vec<Violation>> {
    let mut violations = Vec::new();
    if raw.objects.is_empty() {
        violations.push(Violation::Empty);
    }
    let mut obj_index = HashMap::new();
    for (i, o) in raw.objects.iter().enumerate() {
        if obj_index.insert(o.as_str(), i).is_some() {
            violations.push(Violation::Duplicate(o.clone()));
        }
    }
    let mut mor_index = HashMap::new();
    let mut morphisms = Vec::new();
    for (name, dom, cod) in &raw.morphisms {
        let d = obj_index.get(dom.as_str()).copied();
        let c = obj_index.get(cod.as_str()).copied();
        for (end, resolved) in [(dom, d), (cod, c)] {
            if resolved.is_none() {
                violations.push(Violation::DanglingReference {
                    name: end.clone(),
                    context: format!("endpoint of morphism {name}"),
                });
            }
        }
        if mor_index.insert(name.as_str(), morphisms.len()).is_some() {
            violations.push(Violation::Duplicate(name.clone()));
        }
        morphisms.push((name.clone(), d.unwrap_or(0), c.unwrap_or(0)));
    }

    let mut identity: Vec<Option<usize>> = vec![None; raw.objects.len()];
    for (obj, m) in &raw.identities {
        let Some(&o) = obj_index.get(obj.as_str()) else {
            violations.push(Violation::DanglingReference {
                name: obj.clone(),
                context: "identity table".into(),
            });
            continue;
        };
        let Some(&mi) = mor_index.get(m.as_str()) else {
            violations.push(Violation::DanglingReference {
                name: m.clone(),
                context: format!("identity of {obj}"),
            });
            continue;
        };
        if morphisms[mi].1 != o || morphisms[mi].2 != o {
            violations.push(Violation::BrokenIdentity {
                identity: m.clone(),
                morphism: m.clone(),
            });
        }
        identity[o] = Some(mi);
    }
    for (o, id) in identity.iter().enumerate() {
        if id.is_none() && !raw.objects.is_empty() {
            violations.push(Violation::Other(format!("object {} has no identity", raw.objects[o])));
        }
    }

    let mut table: HashMap<(usize, usize), usize> = HashMap::new();
    for (g, f, h) in &raw.compose {
        let look = |n: &String| {
            mor_index.get(n.as_str()).copied().ok_or_else(|| Violation::DanglingReference {
                name: n.clone(),
                context: format!("composition entry {g}.{f} = {h}"),
            })
        };
        let (gi, fi, hi) = match (look(g), look(f), look(h)) {
            (Ok(a), Ok(b), Ok(c)) => (a, b, c),
            (a, b, c) => {
                violations.extend([a.err(), b.err(), c.err()].into_iter().flatten());
                continue;
            }
        };
        if morphisms[fi].2 != morphisms[gi].1
            || morphisms[hi].1 != morphisms[fi].1
            || morphisms[hi].2 != morphisms[gi].2
        {
            violations.push(Violation::IllTypedComposite {
                g: g.clone(),
                f: f.clone(),
                h: h.clone(),
            });
            continue;
        }
        if let Some(prev) = table.insert((gi, fi), hi) {
            if prev != hi {
                violations.push(Violation::Other(format!(
                    "composite {g}.{f} given twice with different values"
                )));
            }
        }
    }
    if !violations.is_empty() {
        return Err(violations);
    }

    for (fi, f) in morphisms.iter().enumerate() {
        for (gi, g) in morphisms.iter().enumerate() {
            if f.2 == g.1 && !table.contains_key(&(gi, fi)) {
                violations.push(Violation::MissingComposite {
                    g: g.0.clone(),
                    f: f.0.clone(),
                });
            }
        }
    }
    if !violations.is_empty() {
        return Err(violations);
    }
    let identity: Vec<usize> = identity.into_iter().map(|i| i.unwrap()).collect();
    let cat = FinCategory::from_parts(raw.objects.clone(), morphisms, identity, |g, f| table[&(g, f)]);
    let v = cat.axiom_violations();
    if v.is_empty() {
        Ok(cat)
    } else {
        Err(v)
    }
}

#[cfg(test)]
mod tests;
