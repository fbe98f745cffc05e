//! Name resolution and construction of core values from the syntax tree.

use std::collections::HashMap;
use std::sync::Arc;

use finitopos_core::fincat::{
    identity_name, saturate, validate_category, FinCategory, FinFunctor, Mor, Obj, Presentation,
    RawCategory, Reflection, DEFAULT_CLOSE_BOUND,
};
use finitopos_core::finset::{FinFn, FinSet};
use finitopos_core::fixtures;
use finitopos_core::presheaf::{Presheaf, PresheafMap};

use super::ast::*;
use super::{Diagnostic, DiagnosticKind, Span};

/// Saturation bounds above this are refused so that hostile input stays cheap.
pub const MAX_CLOSE_BOUND: u64 = 4096;

/// How a declaration refers to a category.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CatName {
    Declared(String),
    Fixture(String),
}

#[derive(Debug, Clone)]
pub enum Value {
    Category(Arc<FinCategory>),
    Functor {
        source: CatName,
        target: CatName,
        functor: FinFunctor,
    },
    Presheaf {
        base: CatName,
        presheaf: Presheaf,
    },
    Map {
        source: String,
        target: String,
        map: PresheafMap,
    },
    Reflection {
        left: String,
        right: String,
        reflection: Reflection,
    },
}

impl Value {
    pub fn kind(&self) -> &'static str {
        match self {
            Value::Category(_) => "category",
            Value::Functor { .. } => "functor",
            Value::Presheaf { .. } => "presheaf",
            Value::Map { .. } => "map",
            Value::Reflection { .. } => "reflection",
        }
    }
}

/// Named values in declaration order; later declarations may refer to
/// earlier ones only.
#[derive(Debug, Clone, Default)]
pub struct Document {
    entries: Vec<(String, Value)>,
    index: HashMap<String, usize>,
}

impl Document {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn entries(&self) -> &[(String, Value)] {
        &self.entries
    }

    pub fn get(&self, name: &str) -> Option<&Value> {
        self.index.get(name).map(|&i| &self.entries[i].1)
    }

    /// Appends a value; fails if the name is taken.
    pub fn insert(&mut self, name: impl Into<String>, value: Value) -> Result<(), String> {
        let name = name.into();
        if self.index.contains_key(&name) {
            return Err(format!("`{name}` is already defined"));
        }
        self.index.insert(name.clone(), self.entries.len());
        self.entries.push((name, value));
        Ok(())
    }

    pub fn resolve_category(&self, c: &CatName) -> Option<Arc<FinCategory>> {
        match c {
            CatName::Declared(n) => match self.get(n)? {
                Value::Category(c) => Some(c.clone()),
                _ => None,
            },
            CatName::Fixture(n) => fixtures::category(n).ok().map(Arc::new),
        }
    }

    pub fn category(&self, name: &str) -> Option<&Arc<FinCategory>> {
        match self.get(name)? {
            Value::Category(c) => Some(c),
            _ => None,
        }
    }

    pub fn functor(&self, name: &str) -> Option<&FinFunctor> {
        match self.get(name)? {
            Value::Functor { functor, .. } => Some(functor),
            _ => None,
        }
    }

    pub fn presheaf(&self, name: &str) -> Option<&Presheaf> {
        match self.get(name)? {
            Value::Presheaf { presheaf, .. } => Some(presheaf),
            _ => None,
        }
    }

    pub fn map(&self, name: &str) -> Option<&PresheafMap> {
        match self.get(name)? {
            Value::Map { map, .. } => Some(map),
            _ => None,
        }
    }

    pub fn reflection(&self, name: &str) -> Option<&Reflection> {
        match self.get(name)? {
            Value::Reflection { reflection, .. } => Some(reflection),
            _ => None,
        }
    }

    /// A reflection with its categories and functors, named `B`, `A`, `L`,
    /// `F` and `R`.
    pub fn from_reflection(r: &Reflection) -> Self {
        let mut d = Document::new();
        let (b, a) = (CatName::Declared("B".into()), CatName::Declared("A".into()));
        let entries = [
            ("B", Value::Category(r.big().clone())),
            ("A", Value::Category(r.small().clone())),
            ("L", Value::Functor { source: b.clone(), target: a.clone(), functor: r.left().clone() }),
            ("F", Value::Functor { source: a, target: b, functor: r.right().clone() }),
            ("R", Value::Reflection { left: "L".into(), right: "F".into(), reflection: r.clone() }),
        ];
        for (n, v) in entries {
            d.insert(n, v).expect("distinct names");
        }
        d
    }

    /// Names of all values of one kind, in declaration order.
    pub fn names_of(&self, kind: &str) -> Vec<&str> {
        self.entries
            .iter()
            .filter(|(_, v)| v.kind() == kind)
            .map(|(n, _)| n.as_str())
            .collect()
    }
}

type EResult<T> = Result<T, Diagnostic>;

fn diag(kind: DiagnosticKind, msg: impl Into<String>, span: Span) -> Diagnostic {
    Diagnostic::new(kind, msg, span)
}

fn invalid(msg: impl Into<String>, span: Span) -> Diagnostic {
    diag(DiagnosticKind::Invalid, msg, span)
}

fn unresolved(what: &str, n: &Name) -> Diagnostic {
    diag(
        DiagnosticKind::UnresolvedIdentifier,
        format!("unknown {what} `{}`", n.text),
        n.span,
    )
}

/// Elaborates every item, collecting one diagnostic per failing item.
pub fn elaborate(ast: &SpecAst) -> Result<Document, Vec<Diagnostic>> {
    let mut e = Elaborator {
        doc: Document::new(),
        fixtures: HashMap::new(),
    };
    let mut errors = Vec::new();
    for item in &ast.items {
        let name = item.name();
        if e.doc.get(&name.text).is_some() {
            errors.push(diag(
                DiagnosticKind::DuplicateDefinition,
                format!("`{}` is already defined", name.text),
                name.span,
            ));
            continue;
        }
        let value = match item {
            Item::Category(d) => e.category(d),
            Item::Functor(d) => e.functor(d),
            Item::Presheaf(d) => e.presheaf(d),
            Item::Map(d) => e.map(d),
            Item::Reflection(d) => e.reflection(d),
        };
        match value {
            Ok(v) => {
                e.doc.insert(name.text.clone(), v).expect("name checked above");
            }
            Err(d) => errors.push(d),
        }
    }
    if errors.is_empty() {
        Ok(e.doc)
    } else {
        Err(errors)
    }
}

struct Elaborator {
    doc: Document,
    fixtures: HashMap<String, Arc<FinCategory>>,
}

fn object(c: &FinCategory, n: &Name) -> EResult<Obj> {
    c.object(&n.text).ok_or_else(|| unresolved("object", n))
}

fn atom(c: &FinCategory, a: &Atom) -> EResult<Mor> {
    match a {
        Atom::Id(o) => Ok(c.id(object(c, o)?)),
        Atom::Mor(n) => c.morphism(&n.text).ok_or_else(|| unresolved("morphism", n)),
    }
}

/// The composite a path denotes; `g.f` applies `f` first.
fn path(c: &FinCategory, p: &Path) -> EResult<Mor> {
    let mut acc: Option<Mor> = None;
    for a in p.atoms.iter().rev() {
        let m = atom(c, a)?;
        acc = Some(match acc {
            None => m,
            Some(f) => c.try_compose(m, f).ok_or_else(|| {
                invalid(
                    format!("`{}` does not compose: {} does not start where the rest ends", show(p), c.mor_name(m)),
                    p.span,
                )
            })?,
        });
    }
    acc.ok_or_else(|| invalid("empty path", p.span))
}

fn show(p: &Path) -> String {
    p.atoms
        .iter()
        .map(|a| match a {
            Atom::Id(o) => identity_name(&o.text),
            Atom::Mor(n) => n.text.clone(),
        })
        .collect::<Vec<_>>()
        .join(".")
}

fn check_unique<'a>(names: impl IntoIterator<Item = &'a Name>) -> EResult<()> {
    let mut seen = HashMap::new();
    for n in names {
        if seen.insert(n.text.as_str(), ()).is_some() {
            return Err(diag(
                DiagnosticKind::DuplicateDefinition,
                format!("`{}` appears twice", n.text),
                n.span,
            ));
        }
    }
    Ok(())
}

impl Elaborator {
    fn cat_ref(&mut self, r: &CatRef) -> EResult<(CatName, Arc<FinCategory>)> {
        match r {
            CatRef::Named(n) => match self.doc.get(&n.text) {
                Some(Value::Category(c)) => Ok((CatName::Declared(n.text.clone()), c.clone())),
                Some(v) => Err(invalid(format!("`{}` is a {}, not a category", n.text, v.kind()), n.span)),
                None => Err(unresolved("category", n)),
            },
            CatRef::Fixture(n) => {
                if let Some(c) = self.fixtures.get(&n.text) {
                    return Ok((CatName::Fixture(n.text.clone()), c.clone()));
                }
                let c = Arc::new(fixtures::category(&n.text).map_err(|_| unresolved("fixture", n))?);
                self.fixtures.insert(n.text.clone(), c.clone());
                Ok((CatName::Fixture(n.text.clone()), c))
            }
        }
    }

    fn category(&mut self, d: &CategoryDecl) -> EResult<Value> {
        check_unique(&d.objects)?;
        check_unique(d.morphisms.iter().map(|(m, _, _)| m))?;
        let objs: HashMap<&str, usize> =
            d.objects.iter().enumerate().map(|(i, o)| (o.text.as_str(), i)).collect();
        let endpoint = |n: &Name| objs.get(n.text.as_str()).copied().ok_or_else(|| unresolved("object", n));
        let mut gens = Vec::new();
        for (m, a, b) in &d.morphisms {
            if d.objects.iter().any(|o| identity_name(&o.text) == m.text) {
                return Err(diag(
                    DiagnosticKind::DuplicateDefinition,
                    format!("`{}` is reserved for an identity", m.text),
                    m.span,
                ));
            }
            gens.push((m.text.clone(), endpoint(a)?, endpoint(b)?));
        }
        let cat = match &d.compose {
            Some(table) => {
                if let Some((l, _)) = d.relations.first() {
                    return Err(invalid("`relations` cannot be combined with a `compose` table", l.span));
                }
                if let Some((_, at)) = d.close {
                    return Err(invalid("`close` cannot be combined with a `compose` table", at));
                }
                self.table_category(d, table)?
            }
            None => {
                let bound = match d.close {
                    Some((n, at)) if n > MAX_CLOSE_BOUND || n == 0 => {
                        return Err(invalid(format!("`close` must be between 1 and {MAX_CLOSE_BOUND}"), at))
                    }
                    Some((n, _)) => n as usize,
                    None => DEFAULT_CLOSE_BOUND,
                };
                let mut relations = Vec::new();
                for (l, r) in &d.relations {
                    let (s1, t1, w1) = word(d, &objs, &gens, l)?;
                    let (s2, t2, w2) = word(d, &objs, &gens, r)?;
                    if (s1, t1) != (s2, t2) {
                        return Err(invalid("the two sides of a relation have different endpoints", join(l.span, r.span)));
                    }
                    relations.push((s1, w1, w2));
                }
                let p = Presentation {
                    objects: d.objects.iter().map(|o| o.text.clone()).collect(),
                    generators: gens,
                    relations,
                };
                saturate(&p, bound).map_err(|e| invalid(e.to_string(), d.name.span))?
            }
        };
        Ok(Value::Category(Arc::new(cat)))
    }

    fn table_category(&self, d: &CategoryDecl, table: &[(Path, Path)]) -> EResult<FinCategory> {
        let ends: HashMap<&str, (&str, &str)> = d
            .morphisms
            .iter()
            .map(|(m, a, b)| (m.text.as_str(), (a.text.as_str(), b.text.as_str())))
            .collect();
        let objs: HashMap<&str, ()> = d.objects.iter().map(|o| (o.text.as_str(), ())).collect();
        let resolve = |a: &Atom| -> EResult<String> {
            match a {
                Atom::Id(o) if objs.contains_key(o.text.as_str()) => Ok(identity_name(&o.text)),
                Atom::Id(o) => Err(unresolved("object", o)),
                Atom::Mor(n) if ends.contains_key(n.text.as_str()) => Ok(n.text.clone()),
                Atom::Mor(n) => Err(unresolved("morphism", n)),
            }
        };
        let mut raw = RawCategory {
            objects: d.objects.iter().map(|o| o.text.clone()).collect(),
            ..RawCategory::default()
        };
        for o in &d.objects {
            let id = identity_name(&o.text);
            raw.morphisms.push((id.clone(), o.text.clone(), o.text.clone()));
            raw.identities.push((o.text.clone(), id));
        }
        for (m, a, b) in &d.morphisms {
            raw.morphisms.push((m.text.clone(), a.text.clone(), b.text.clone()));
            let (ia, ib) = (identity_name(&a.text), identity_name(&b.text));
            raw.compose.push((ib, m.text.clone(), m.text.clone()));
            raw.compose.push((m.text.clone(), ia, m.text.clone()));
        }
        for o in &d.objects {
            let id = identity_name(&o.text);
            raw.compose.push((id.clone(), id.clone(), id));
        }
        for (l, r) in table {
            let [g, f] = &l.atoms[..] else {
                return Err(invalid("a table entry composes exactly two morphisms, as in `g.f = h`", l.span));
            };
            let [h] = &r.atoms[..] else {
                return Err(invalid("the right side of a table entry is a single morphism", r.span));
            };
            raw.compose.push((resolve(g)?, resolve(f)?, resolve(h)?));
        }
        // an entry may restate an identity law; keep the first of equal triples
        let mut seen = HashMap::new();
        let mut conflicts = Vec::new();
        raw.compose.retain(|(g, f, h)| match seen.get(&(g.clone(), f.clone())) {
            None => {
                seen.insert((g.clone(), f.clone()), h.clone());
                true
            }
            Some(prev) => {
                if prev != h {
                    conflicts.push(format!("{g}.{f} is given as both {prev} and {h}"));
                }
                false
            }
        });
        if let Some(c) = conflicts.first() {
            return Err(invalid(c.clone(), d.name.span));
        }
        validate_category(&raw).map_err(|vs| {
            invalid(
                vs.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "),
                d.name.span,
            )
        })
    }

    fn functor(&mut self, d: &FunctorDecl) -> EResult<Value> {
        let (sname, s) = self.cat_ref(&d.source)?;
        let (tname, t) = self.cat_ref(&d.target)?;
        check_unique(d.objects.iter().map(|(a, _)| a))?;
        let mut obj_map: Vec<Option<Obj>> = vec![None; s.num_objects()];
        for (a, b) in &d.objects {
            obj_map[object(&s, a)?.0] = Some(object(&t, b)?);
        }
        let obj_map: Vec<Obj> = match s.objects().find(|o| obj_map[o.0].is_none()) {
            Some(o) => {
                return Err(invalid(format!("object {} has no image", s.obj_name(o)), d.name.span))
            }
            None => obj_map.into_iter().flatten().collect(),
        };
        let mut given = HashMap::new();
        for (a, b) in &d.morphisms {
            let m = path(&s, a)?;
            let v = path(&t, b)?;
            if given.insert(m, v).is_some_and(|prev| prev != v) {
                return Err(invalid(format!("{} is given two different images", s.mor_name(m)), a.span));
            }
        }
        for m in s.morphisms() {
            if !given.contains_key(&m) && !s.is_identity(m) {
                if let [only] = t.hom(obj_map[s.dom(m).0], obj_map[s.cod(m).0]) {
                    given.insert(m, *only);
                }
            }
        }
        let f = FinFunctor::from_partial(s, t, obj_map, &given).map_err(|e| invalid(e.to_string(), d.name.span))?;
        Ok(Value::Functor {
            source: sname,
            target: tname,
            functor: f,
        })
    }

    fn presheaf(&mut self, d: &PresheafDecl) -> EResult<Value> {
        let (bname, c) = self.cat_ref(&d.base)?;
        check_unique(d.sets.iter().map(|(o, _)| o))?;
        let mut sets = vec![FinSet::empty(); c.num_objects()];
        for (o, labels) in &d.sets {
            check_unique(labels)?;
            let set = FinSet::new(labels.iter().map(|l| l.text.clone()).collect())
                .map_err(|e| invalid(e.to_string(), o.span))?;
            sets[object(&c, o)?.0] = set;
        }
        let mut given = HashMap::new();
        for (p, table) in &d.acts {
            let m = path(&c, p)?;
            // X(m) runs from the set at the codomain to the set at the domain
            let f = label_fn(&sets[c.cod(m).0], &sets[c.dom(m).0], table, p.span)?;
            if given.insert(m, f.clone()).is_some_and(|prev| prev != f) {
                return Err(invalid(format!("two different actions given for {}", c.mor_name(m)), p.span));
            }
        }
        let x = Presheaf::from_generators(c, sets, &given).map_err(|e| invalid(e.to_string(), d.name.span))?;
        Ok(Value::Presheaf { base: bname, presheaf: x })
    }

    fn map(&mut self, d: &MapDecl) -> EResult<Value> {
        let get = |n: &Name| match self.doc.get(&n.text) {
            Some(Value::Presheaf { presheaf, .. }) => Ok(presheaf.clone()),
            Some(v) => Err(invalid(format!("`{}` is a {}, not a presheaf", n.text, v.kind()), n.span)),
            None => Err(unresolved("presheaf", n)),
        };
        let (x, y) = (get(&d.source)?, get(&d.target)?);
        let c = x.base().clone();
        if *c != **y.base() {
            return Err(invalid("source and target live over different categories", d.name.span));
        }
        check_unique(d.components.iter().map(|(o, _)| o))?;
        let mut comps: Vec<Option<FinFn>> = vec![None; c.num_objects()];
        for (o, table) in &d.components {
            let ob = object(&c, o)?;
            comps[ob.0] = Some(label_fn(x.set(ob), y.set(ob), table, o.span)?);
        }
        let mut components = Vec::new();
        for o in c.objects() {
            match comps[o.0].take() {
                Some(f) => components.push(f),
                None if x.size(o) == 0 => components.push(FinFn::new(Vec::new(), y.size(o)).expect("empty map")),
                None => {
                    return Err(invalid(format!("no component given at {}", c.obj_name(o)), d.name.span))
                }
            }
        }
        let m = PresheafMap::new(x, y, components).map_err(|e| invalid(e.to_string(), d.name.span))?;
        Ok(Value::Map {
            source: d.source.text.clone(),
            target: d.target.text.clone(),
            map: m,
        })
    }

    fn reflection(&mut self, d: &ReflectionDecl) -> EResult<Value> {
        let get = |n: &Option<Name>, side: &str| -> EResult<(String, FinFunctor)> {
            let Some(n) = n else {
                return Err(invalid(format!("`{side}` is missing"), d.name.span));
            };
            match self.doc.get(&n.text) {
                Some(Value::Functor { functor, .. }) => Ok((n.text.clone(), functor.clone())),
                Some(v) => Err(invalid(format!("`{}` is a {}, not a functor", n.text, v.kind()), n.span)),
                None => Err(unresolved("functor", n)),
            }
        };
        let (lname, l) = get(&d.left, "left")?;
        let (rname, r) = get(&d.right, "right")?;
        if **l.target() != **r.source() || **r.target() != **l.source() {
            return Err(invalid("left and right adjoints do not form a round trip", d.name.span));
        }
        let b = l.source().clone();
        check_unique(d.unit.iter().map(|(o, _)| o))?;
        let mut unit: Vec<Option<Mor>> = vec![None; b.num_objects()];
        for (o, p) in &d.unit {
            unit[object(&b, o)?.0] = Some(path(&b, p)?);
        }
        let mut table = Vec::new();
        for o in b.objects() {
            match unit[o.0] {
                Some(m) => table.push(m),
                None => match b.hom(o, r.obj(l.obj(o))) {
                    [m] => table.push(*m),
                    h => {
                        return Err(invalid(
                            format!(
                                "unit at {} must be given: there are {} candidate morphisms",
                                b.obj_name(o),
                                h.len()
                            ),
                            d.name.span,
                        ))
                    }
                },
            }
        }
        let refl = Reflection::new(l, r, table).map_err(|e| invalid(e.to_string(), d.name.span))?;
        Ok(Value::Reflection {
            left: lname,
            right: rname,
            reflection: refl,
        })
    }
}

fn join(a: Span, b: Span) -> Span {
    Span { end: b.end, ..a }
}

/// Start object, end object and generator word of a path in a presentation.
fn word(
    d: &CategoryDecl,
    objs: &HashMap<&str, usize>,
    gens: &[(String, usize, usize)],
    p: &Path,
) -> EResult<(usize, usize, Vec<usize>)> {
    let mut start = None;
    let mut end = None;
    let mut w = Vec::new();
    for a in p.atoms.iter().rev() {
        let (s, t, g) = match a {
            Atom::Id(o) => {
                let i = *objs.get(o.text.as_str()).ok_or_else(|| unresolved("object", o))?;
                (i, i, None)
            }
            Atom::Mor(n) => {
                let g = d
                    .morphisms
                    .iter()
                    .position(|(m, _, _)| m.text == n.text)
                    .ok_or_else(|| unresolved("generator", n))?;
                (gens[g].1, gens[g].2, Some(g))
            }
        };
        if end.is_some_and(|e| e != s) {
            return Err(invalid(format!("`{}` does not compose", show(p)), p.span));
        }
        start.get_or_insert(s);
        end = Some(t);
        w.extend(g);
    }
    match (start, end) {
        (Some(s), Some(t)) => Ok((s, t, w)),
        _ => Err(invalid("empty path", p.span)),
    }
}

/// A total function between labelled sets given as `label -> label` pairs.
fn label_fn(dom: &FinSet, cod: &FinSet, table: &[(Name, Name)], span: Span) -> EResult<FinFn> {
    let mut map: Vec<Option<usize>> = vec![None; dom.len()];
    for (a, b) in table {
        let i = dom.position(&a.text).ok_or_else(|| unresolved("element", a))?;
        let j = cod.position(&b.text).ok_or_else(|| unresolved("element", b))?;
        if map[i].is_some() {
            return Err(diag(
                DiagnosticKind::DuplicateDefinition,
                format!("`{}` is mapped twice", a.text),
                a.span,
            ));
        }
        map[i] = Some(j);
    }
    if let Some(i) = map.iter().position(Option::is_none) {
        return Err(invalid(format!("`{}` has no image", dom.label(i)), span));
    }
    FinFn::new(map.into_iter().flatten().collect(), cod.len()).map_err(|e| invalid(e.to_string(), span))
}
