//! Checker outcomes and the self-contained data forms witnesses are stored in.
//!
//! Everything here serializes by name rather than by index so a witness can
//! be rebuilt and re-checked from its JSON alone.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fincat::{validate_category, AdjunctionFailure, FinCategory, FinFunctor, MediatorAnalysis, Obj, RawCategory, Reflection};
use crate::finset::{FinFn, FinSet};
use crate::presheaf::{Presheaf, PresheafMap};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING-KEBAB-CASE")]
pub enum Outcome {
    Pass,
    Fail,
    Inconclusive,
    /// A search exhausted its bounds without finding a witness.
    NotFound,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Outcome::Pass => "PASS",
            Outcome::Fail => "FAIL",
            Outcome::Inconclusive => "INCONCLUSIVE",
            Outcome::NotFound => "NOT-FOUND",
        })
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stats {
    /// Candidate instances decided.
    pub examined: u64,
    /// Candidate instances skipped for a missing limit or exhausted budget.
    pub inconclusive: u64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

/// The outcome of one property check. A `Fail` always carries a witness;
/// a `Pass` is only ever relative to the stored bounds.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub property: String,
    pub outcome: Outcome,
    pub bounds: BTreeMap<String, u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    pub stats: Stats,
}

impl Verdict {
    pub fn new(property: &str, bounds: &[(&str, u64)]) -> Self {
        Verdict {
            property: property.into(),
            outcome: Outcome::Pass,
            bounds: bounds.iter().map(|&(k, v)| (k.to_string(), v)).collect(),
            witness: None,
            stats: Stats::default(),
        }
    }

    pub fn fail(mut self, witness: Witness) -> Self {
        self.outcome = Outcome::Fail;
        self.witness = Some(witness);
        self
    }

    /// Marks the verdict inconclusive unless it already failed.
    pub fn inconclusive(mut self, note: impl Into<String>) -> Self {
        if self.outcome != Outcome::Fail {
            self.outcome = Outcome::Inconclusive;
        }
        self.stats.notes.push(note.into());
        self
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.stats.notes.push(note.into());
    }

    pub fn is_pass(&self) -> bool {
        self.outcome == Outcome::Pass
    }

    pub fn is_fail(&self) -> bool {
        self.outcome == Outcome::Fail
    }

    /// Joins sub-verdicts: any failure wins (first witness kept), then any
    /// inconclusive part; statistics add up.
    pub fn combine(property: &str, parts: Vec<Verdict>) -> Verdict {
        let mut out = Verdict::new(property, &[]);
        for p in parts {
            for (k, v) in p.bounds {
                out.bounds.entry(format!("{}.{k}", p.property)).or_insert(v);
            }
            out.stats.examined += p.stats.examined;
            out.stats.inconclusive += p.stats.inconclusive;
            out.stats
                .notes
                .extend(p.stats.notes.into_iter().map(|n| format!("{}: {n}", p.property)));
            match p.outcome {
                Outcome::Fail if out.outcome != Outcome::Fail => {
                    out.outcome = Outcome::Fail;
                    out.witness = p.witness;
                }
                Outcome::Inconclusive | Outcome::NotFound if out.outcome == Outcome::Pass => {
                    out.outcome = p.outcome;
                }
                _ => {}
            }
        }
        out
    }

    /// `PASS up to bound k` style summary line.
    pub fn summary(&self) -> String {
        let bounds: Vec<String> = self.bounds.iter().map(|(k, v)| format!("{k}={v}")).collect();
        let bounds = if bounds.is_empty() {
            String::new()
        } else {
            format!(" up to bound {}", bounds.join(", "))
        };
        match self.outcome {
            Outcome::Pass | Outcome::NotFound | Outcome::Inconclusive => {
                format!("{}: {}{bounds}", self.property, self.outcome)
            }
            Outcome::Fail => format!("{}: FAIL{bounds}", self.property),
        }
    }
}

/// Raw category data plus nothing else; identity names travel inside.
pub type CategoryData = RawCategory;

pub fn category_from_data(d: &CategoryData) -> Result<Arc<FinCategory>> {
    validate_category(d).map(Arc::new).map_err(Error::InvalidCategory)
}

/// A functor as object and morphism name pairs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunctorData {
    pub objects: Vec<(String, String)>,
    pub morphisms: Vec<(String, String)>,
}

impl FunctorData {
    pub fn from_functor(f: &FinFunctor) -> Self {
        let (s, t) = (f.source(), f.target());
        FunctorData {
            objects: s
                .objects()
                .map(|o| (s.obj_name(o).into(), t.obj_name(f.obj(o)).into()))
                .collect(),
            morphisms: s
                .morphisms()
                .map(|m| (s.mor_name(m).into(), t.mor_name(f.mor(m)).into()))
                .collect(),
        }
    }

    pub fn to_functor(&self, source: &Arc<FinCategory>, target: &Arc<FinCategory>) -> Result<FinFunctor> {
        let lookup = |pairs: &[(String, String)], key: &str| {
            pairs
                .iter()
                .find(|(k, _)| k == key)
                .map(|(_, v)| v.clone())
                .ok_or_else(|| Error::Witness(format!("functor data misses {key}")))
        };
        let obj_map = source
            .objects()
            .map(|o| {
                let v = lookup(&self.objects, source.obj_name(o))?;
                target
                    .object(&v)
                    .ok_or_else(|| Error::Witness(format!("unknown object {v}")))
            })
            .collect::<Result<Vec<_>>>()?;
        let mor_map = source
            .morphisms()
            .map(|m| {
                let v = lookup(&self.morphisms, source.mor_name(m))?;
                target
                    .morphism(&v)
                    .ok_or_else(|| Error::Witness(format!("unknown morphism {v}")))
            })
            .collect::<Result<Vec<_>>>()?;
        FinFunctor::new(source.clone(), target.clone(), obj_map, mor_map)
    }
}

/// A functor together with its source and target categories.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunctorSpec {
    pub source: CategoryData,
    pub target: CategoryData,
    pub map: FunctorData,
}

impl FunctorSpec {
    pub fn from_functor(f: &FinFunctor) -> Self {
        FunctorSpec {
            source: f.source().to_raw(),
            target: f.target().to_raw(),
            map: FunctorData::from_functor(f),
        }
    }

    pub fn build(&self) -> Result<FinFunctor> {
        let s = category_from_data(&self.source)?;
        let t = category_from_data(&self.target)?;
        self.map.to_functor(&s, &t)
    }
}

/// A reflection `L -| F` with its unit, by names.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReflectionData {
    pub big: CategoryData,
    pub small: CategoryData,
    pub left: FunctorData,
    pub right: FunctorData,
    pub unit: Vec<(String, String)>,
}

impl ReflectionData {
    pub fn from_reflection(r: &Reflection) -> Self {
        let b = r.big();
        ReflectionData {
            big: b.to_raw(),
            small: r.small().to_raw(),
            left: FunctorData::from_functor(r.left()),
            right: FunctorData::from_functor(r.right()),
            unit: b
                .objects()
                .map(|o| (b.obj_name(o).into(), b.mor_name(r.unit(o)).into()))
                .collect(),
        }
    }

    /// Rebuilds the reflection; shapes are validated, the adjunction is not.
    pub fn build(&self) -> Result<Reflection> {
        let big = category_from_data(&self.big)?;
        let small = category_from_data(&self.small)?;
        let left = self.left.to_functor(&big, &small)?;
        let right = self.right.to_functor(&small, &big)?;
        let unit = big
            .objects()
            .map(|o| {
                let name = self
                    .unit
                    .iter()
                    .find(|(k, _)| k == big.obj_name(o))
                    .map(|(_, v)| v)
                    .ok_or_else(|| Error::Witness(format!("no unit at {}", big.obj_name(o))))?;
                big.morphism(name)
                    .ok_or_else(|| Error::Witness(format!("unknown morphism {name}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Reflection::new(left, right, unit)
    }
}

/// A presheaf as carrier sizes per object and action tables per morphism.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PresheafData {
    pub sizes: Vec<(String, usize)>,
    pub actions: Vec<(String, Vec<usize>)>,
}

impl PresheafData {
    pub fn from_presheaf(x: &Presheaf) -> Self {
        let c = x.base();
        PresheafData {
            sizes: c.objects().map(|o| (c.obj_name(o).into(), x.size(o))).collect(),
            actions: c
                .morphisms()
                .filter(|&m| !c.is_identity(m))
                .map(|m| (c.mor_name(m).into(), x.act(m).table().to_vec()))
                .collect(),
        }
    }

    pub fn build(&self, base: &Arc<FinCategory>) -> Result<Presheaf> {
        let size = |o: Obj| {
            self.sizes
                .iter()
                .find(|(k, _)| k == base.obj_name(o))
                .map(|&(_, n)| n)
                .ok_or_else(|| Error::Witness(format!("no carrier at {}", base.obj_name(o))))
        };
        let sizes = base.objects().map(size).collect::<Result<Vec<_>>>()?;
        let act = base
            .morphisms()
            .map(|m| {
                let n = sizes[base.dom(m).0];
                if base.is_identity(m) {
                    return Ok(FinFn::identity(n));
                }
                let table = self
                    .actions
                    .iter()
                    .find(|(k, _)| k == base.mor_name(m))
                    .map(|(_, t)| t.clone())
                    .ok_or_else(|| Error::Witness(format!("no action for {}", base.mor_name(m))))?;
                if table.len() != sizes[base.cod(m).0] {
                    return Err(Error::Witness(format!("action of {} has the wrong length", base.mor_name(m))));
                }
                FinFn::new(table, n)
            })
            .collect::<Result<Vec<_>>>()?;
        let sets = sizes.iter().map(|&n| FinSet::numbered("e", n)).collect();
        Presheaf::new(base.clone(), sets, act)
    }
}

/// A natural transformation as component tables per object name.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapData {
    pub components: Vec<(String, Vec<usize>)>,
}

impl MapData {
    pub fn from_map(m: &PresheafMap) -> Self {
        let c = m.source().base();
        MapData {
            components: c
                .objects()
                .map(|o| (c.obj_name(o).into(), m.component(o).table().to_vec()))
                .collect(),
        }
    }

    pub fn build(&self, x: &Presheaf, y: &Presheaf) -> Result<PresheafMap> {
        let c = x.base();
        let comps = c
            .objects()
            .map(|o| {
                let t = self
                    .components
                    .iter()
                    .find(|(k, _)| k == c.obj_name(o))
                    .map(|(_, t)| t.clone())
                    .ok_or_else(|| Error::Witness(format!("no component at {}", c.obj_name(o))))?;
                FinFn::new(t, y.size(o))
            })
            .collect::<Result<Vec<_>>>()?;
        PresheafMap::new(x.clone(), y.clone(), comps)
    }
}

/// A reflexive graph as a vertex count plus its non-distinguished edges;
/// the distinguished loops are implicit.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct GraphData {
    pub vertices: usize,
    pub edges: Vec<(usize, usize)>,
}

/// A finite preorder as its size and the full list of related pairs.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PreorderData {
    pub size: usize,
    pub leq: Vec<(usize, usize)>,
}

/// A named finite partial order, for lattice witnesses.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosetData {
    pub elements: Vec<String>,
    pub leq: Vec<(String, String)>,
}

impl PosetData {
    pub fn from_category(c: &FinCategory) -> Self {
        let mut leq = Vec::new();
        for x in c.objects() {
            for y in c.objects() {
                if !c.hom(x, y).is_empty() {
                    leq.push((c.obj_name(x).to_string(), c.obj_name(y).to_string()));
                }
            }
        }
        PosetData {
            elements: c.objects().map(|o| c.obj_name(o).to_string()).collect(),
            leq,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SquareKind {
    /// One leg of the cospan is the image of a map under the right adjoint.
    SemiLeftExact,
    /// Both legs are arbitrary over an object in the image of the right adjoint.
    StableUnits,
}

/// Evidence for a `Fail`, complete enough to re-check without the search
/// that produced it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Witness {
    /// The unit does not have the universal property.
    Adjunction {
        reflection: ReflectionData,
        failure: AdjunctionFailure,
    },
    /// `L(F i x a) -> i x L a` is not invertible.
    Frobenius {
        reflection: ReflectionData,
        i: String,
        a: String,
    },
    /// A pullback square over `F` data whose `L`-image is not a pullback.
    Square {
        square: SquareKind,
        reflection: ReflectionData,
        f: String,
        g: String,
        p1: String,
        p2: String,
        image: MediatorAnalysis,
    },
    /// `L(x * y) -> L x * L y` is not invertible.
    Product {
        reflection: ReflectionData,
        x: String,
        y: String,
    },
    /// `L` sends the terminal object to a non-terminal one.
    Terminal { reflection: ReflectionData },
    /// The exponential `(F a)^b` is not isomorphic to any `F`-image.
    Exponential {
        reflection: ReflectionData,
        a: String,
        b: String,
        exponential: String,
    },
    /// A hom-count mismatch in the Kan chain for a pair of presheaves.
    HomCount {
        reflection: ReflectionData,
        clause: String,
        x: PresheafData,
        y: PresheafData,
        left: usize,
        right: usize,
    },
    /// A pullback of `a : X -> L* Z` along `L* u` whose left Kan extension
    /// is not a pullback.
    PresheafSquare {
        functor: FunctorSpec,
        x: PresheafData,
        z: PresheafData,
        w: PresheafData,
        a: MapData,
        u: MapData,
    },
    /// Restriction does not carry `Pi_f g` to `Pi_(L* f) (L* g)`.
    DependentProduct {
        functor: FunctorSpec,
        y: PresheafData,
        z: PresheafData,
        w: PresheafData,
        f: MapData,
        g: MapData,
    },
    /// Pulling back along `f : x -> y` has no right adjoint at `w`.
    Lcc {
        lattice: PosetData,
        x: String,
        y: String,
        w: String,
    },
    /// A graph pullback over an embedded preorder map whose preorder
    /// reflection is not a pullback: `lo <= hi` in the pullback of
    /// preorders but not in the reflection of the graph pullback.
    GraphSquare {
        graph: GraphData,
        p: PreorderData,
        q: PreorderData,
        f: Vec<usize>,
        u: Vec<usize>,
        lo: (usize, usize),
        hi: (usize, usize),
    },
    /// `Pi_f g` between embedded preorders is not an embedded preorder.
    DependentProductGraph {
        x: PreorderData,
        y: PreorderData,
        z: PreorderData,
        f: Vec<usize>,
        g: Vec<usize>,
        violation: String,
    },
    /// The preorder reflection of `g * h` differs from the product of the
    /// reflections.
    GraphProduct { g: GraphData, h: GraphData },
    /// `(F p)^g` is not an embedded preorder.
    GraphExponential {
        p: PreorderData,
        g: GraphData,
        violation: String,
    },
    /// `u : B0 -> F A0` generates a sieve that misses `F L u`.
    Sieve {
        a0: PreorderData,
        b0: GraphData,
        u: Vec<usize>,
    },
}

impl Witness {
    pub fn kind(&self) -> &'static str {
        match self {
            Witness::Adjunction { .. } => "adjunction",
            Witness::Frobenius { .. } => "frobenius",
            Witness::Square { .. } => "square",
            Witness::Product { .. } => "product",
            Witness::Terminal { .. } => "terminal",
            Witness::Exponential { .. } => "exponential",
            Witness::HomCount { .. } => "hom-count",
            Witness::PresheafSquare { .. } => "presheaf-square",
            Witness::DependentProduct { .. } => "dependent-product",
            Witness::Lcc { .. } => "lcc",
            Witness::GraphSquare { .. } => "graph-square",
            Witness::DependentProductGraph { .. } => "dependent-product-graph",
            Witness::GraphProduct { .. } => "graph-product",
            Witness::GraphExponential { .. } => "graph-exponential",
            Witness::Sieve { .. } => "sieve",
        }
    }
}
