//! Restriction `L^*` along `L : B -> A` and its two adjoints: the left Kan
//! extension `L_!` (colimits over `a / L`) and the right Kan extension
//! `L_*` (limits over `L / a`).

use std::collections::HashMap;
use std::sync::Arc;

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::fincat::{comma_over, comma_under, opposite, Assembled, FinCategory, FinFunctor, Mor, Obj};
use crate::finset::{colimit, limit, Colimit, FinFn, Limit, SetDiagram};
use crate::fincat::{check_adjunction, Reflection};
use crate::presheaf::{
    count_nat_transformations, nat_transformations, presheaf_corpus, same_base, CorpusOptions, Presheaf,
    PresheafMap,
};
use crate::verdict::{PresheafData, ReflectionData, Verdict, Witness};

/// `(L^* Y)(b) = Y(L b)`.
pub fn restrict(l: &FinFunctor, y: &Presheaf) -> Result<Presheaf> {
    if !same_base(l.target(), y.base()) {
        return Err(Error::ShapeMismatch("presheaf does not live on the functor's target".into()));
    }
    let b = l.source();
    let sets = b.objects().map(|o| y.set(l.obj(o)).clone()).collect();
    let act = b.morphisms().map(|f| y.act(l.mor(f)).clone()).collect();
    Ok(Presheaf::new_unchecked(b.clone(), sets, act))
}

/// `L^*` on maps.
pub fn restrict_map(l: &FinFunctor, m: &PresheafMap) -> Result<PresheafMap> {
    let s = restrict(l, m.source())?;
    let t = restrict(l, m.target())?;
    let comps = l
        .source()
        .objects()
        .map(|o| m.component(l.obj(o)).clone())
        .collect();
    Ok(PresheafMap::new_unchecked(s, t, comps))
}

type Comma = Assembled<(Obj, Mor), (Mor, usize)>;

#[derive(Debug, Clone)]
enum Cones {
    Left(Vec<Colimit>),
    Right(Vec<Limit>),
}

/// A Kan extension together with the comma categories and the
/// colimit/limit data computed at every object of the target.
#[derive(Debug, Clone)]
pub struct KanResult {
    pub functor: FinFunctor,
    pub input: Presheaf,
    pub output: Presheaf,
    /// `a / L` for left extensions, `L / a` for right ones.
    pub commas: Vec<Comma>,
    comma_index: Vec<HashMap<(Obj, Mor), Obj>>,
    cones: Cones,
}

// SetDiagram on comma^op sending (b, _) to X(b) and beta to X(beta)
fn comma_diagram(comma: &Comma, x: &Presheaf) -> SetDiagram {
    let op = Arc::new(opposite(&comma.cat));
    debug_assert!(op.objects().all(|o| op.obj_name(o) == comma.cat.obj_name(o)));
    debug_assert!(op.morphisms().all(|m| op.mor_name(m) == comma.cat.mor_name(m)));
    let sets = comma.objects.iter().map(|&(b, _)| x.set(b).clone()).collect();
    let maps = comma.morphisms.iter().map(|&(beta, _)| x.act(beta).clone()).collect();
    SetDiagram::new_unchecked(op, sets, maps)
}

fn index_of(comma: &Comma) -> HashMap<(Obj, Mor), Obj> {
    comma.objects.iter().enumerate().map(|(i, &k)| (k, Obj(i))).collect()
}

fn check_shapes(l: &FinFunctor, x: &Presheaf) -> Result<()> {
    if !same_base(l.source(), x.base()) {
        return Err(Error::ShapeMismatch("presheaf does not live on the functor's source".into()));
    }
    Ok(())
}

/// `(L_! X)(a)` is the colimit of `X(b)` over pairs `(b, phi : a -> L b)`;
/// the class of `(x, phi)` is written `[x, phi]`.
pub fn lan(l: &FinFunctor, x: &Presheaf, budget: &Budget) -> Result<KanResult> {
    check_shapes(l, x)?;
    let aa = l.target().clone();
    let mut meter = budget.meter();
    let mut commas = Vec::new();
    let mut colims = Vec::new();
    for a in aa.objects() {
        let comma = comma_under(l, a);
        for _ in 0..comma.objects.len() {
            meter.tick()?;
        }
        colims.push(colimit(&comma_diagram(&comma, x)));
        commas.push(comma);
    }
    let comma_index: Vec<_> = commas.iter().map(index_of).collect();
    // alpha : a' -> a sends [x, phi] to [x, phi . alpha]
    let act = aa
        .morphisms()
        .map(|alpha| {
            let (a1, a) = (aa.dom(alpha), aa.cod(alpha));
            let map = colims[a.0]
                .representatives
                .iter()
                .map(|&(k, xi)| {
                    let (b, phi) = commas[a.0].objects[k.0];
                    let k1 = comma_index[a1.0][&(b, aa.compose(phi, alpha))];
                    colims[a1.0].injections[k1.0].apply(xi)
                })
                .collect();
            FinFn::from_vec(map, colims[a1.0].set.len())
        })
        .collect();
    let sets = colims.iter().map(|c| c.set.clone()).collect();
    let output = Presheaf::new(aa.clone(), sets, act)?;
    Ok(KanResult {
        functor: l.clone(),
        input: x.clone(),
        output,
        commas,
        comma_index,
        cones: Cones::Left(colims),
    })
}

/// `(L_* X)(a)` is the set of compatible families `x_(b, psi)` in `X(b)`
/// indexed by `psi : L b -> a`, i.e. `Nat(L^* y_a, X)`.
pub fn ran(l: &FinFunctor, x: &Presheaf, budget: &Budget) -> Result<KanResult> {
    check_shapes(l, x)?;
    let aa = l.target().clone();
    let mut commas = Vec::new();
    let mut lims = Vec::new();
    for a in aa.objects() {
        let comma = comma_over(l, a);
        lims.push(limit(&comma_diagram(&comma, x), budget)?);
        commas.push(comma);
    }
    let comma_index: Vec<_> = commas.iter().map(index_of).collect();
    // alpha : a' -> a sends a family x to x' with x'_(b, psi) = x_(b, alpha . psi)
    let act = aa
        .morphisms()
        .map(|alpha| {
            let (a1, a) = (aa.dom(alpha), aa.cod(alpha));
            let map = lims[a.0]
                .families
                .iter()
                .map(|fam| {
                    let restricted: Vec<usize> = commas[a1.0]
                        .objects
                        .iter()
                        .map(|&(b, psi)| fam[comma_index[a.0][&(b, aa.compose(alpha, psi))].0])
                        .collect();
                    lims[a1.0].position(&restricted).expect("restricted family is compatible")
                })
                .collect();
            FinFn::from_vec(map, lims[a1.0].set.len())
        })
        .collect();
    let sets = lims.iter().map(|c| c.set.clone()).collect();
    let output = Presheaf::new(aa.clone(), sets, act)?;
    Ok(KanResult {
        functor: l.clone(),
        input: x.clone(),
        output,
        commas,
        comma_index,
        cones: Cones::Right(lims),
    })
}

impl KanResult {
    pub fn is_left(&self) -> bool {
        matches!(self.cones, Cones::Left(_))
    }

    /// Left extensions: the class `[x, phi]` in `(L_! X)(a)` for `x` in `X(b)`.
    pub fn class_of(&self, a: Obj, b: Obj, phi: Mor, x: usize) -> usize {
        let Cones::Left(c) = &self.cones else {
            panic!("class_of on a right Kan extension")
        };
        c[a.0].injections[self.comma_index[a.0][&(b, phi)].0].apply(x)
    }

    /// Left extensions: a representative `(b, phi, x)` of an element.
    pub fn representative(&self, a: Obj, e: usize) -> (Obj, Mor, usize) {
        let Cones::Left(c) = &self.cones else {
            panic!("representative on a right Kan extension")
        };
        let (k, x) = c[a.0].representatives[e];
        let (b, phi) = self.commas[a.0].objects[k.0];
        (b, phi, x)
    }

    /// Right extensions: the entry at `(b, psi)` of element `e` of `(L_* X)(a)`.
    pub fn entry(&self, a: Obj, e: usize, b: Obj, psi: Mor) -> usize {
        let Cones::Right(l) = &self.cones else {
            panic!("entry on a left Kan extension")
        };
        l[a.0].families[e][self.comma_index[a.0][&(b, psi)].0]
    }

    /// Right extensions: the element with the family `f(b, psi)`.
    pub fn family_position(&self, a: Obj, f: impl Fn(Obj, Mor) -> usize) -> Option<usize> {
        let Cones::Right(l) = &self.cones else {
            panic!("family_position on a left Kan extension")
        };
        let fam: Vec<usize> = self.commas[a.0].objects.iter().map(|&(b, psi)| f(b, psi)).collect();
        l[a.0].position(&fam)
    }
}

/// `L_! m : L_! X -> L_! Y`, `[x, phi] |-> [m x, phi]`, for the extensions
/// `kx` of `X` and `ky` of `Y`.
pub fn lan_map(kx: &KanResult, ky: &KanResult, m: &PresheafMap) -> Result<PresheafMap> {
    if !kx.is_left() || !ky.is_left() || kx.input != *m.source() || ky.input != *m.target() {
        return Err(Error::ShapeMismatch("extensions do not match the map".into()));
    }
    let aa = kx.functor.target();
    let tables = aa
        .objects()
        .map(|a| {
            (0..kx.output.size(a))
                .map(|e| {
                    let (b, phi, x) = kx.representative(a, e);
                    ky.class_of(a, b, phi, m.component(b).apply(x))
                })
                .collect()
        })
        .collect();
    let out = PresheafMap::from_tables(&kx.output, &ky.output, tables);
    out.validate()?;
    Ok(out)
}

/// `L_* m : L_* X -> L_* Y`, applying `m` entrywise to families.
pub fn ran_map(kx: &KanResult, ky: &KanResult, m: &PresheafMap) -> Result<PresheafMap> {
    if kx.is_left() || ky.is_left() || kx.input != *m.source() || ky.input != *m.target() {
        return Err(Error::ShapeMismatch("extensions do not match the map".into()));
    }
    let aa = kx.functor.target();
    let tables = aa
        .objects()
        .map(|a| {
            (0..kx.output.size(a))
                .map(|e| {
                    ky.family_position(a, |b, psi| m.component(b).apply(kx.entry(a, e, b, psi)))
                        .expect("image family is compatible")
                })
                .collect()
        })
        .collect();
    let out = PresheafMap::from_tables(&kx.output, &ky.output, tables);
    out.validate()?;
    Ok(out)
}

/// Unit `X -> L^* L_! X` of `L_! -| L^*`: `x |-> [x, id_(L b)]`.
pub fn lan_unit(k: &KanResult) -> Result<PresheafMap> {
    let l = &k.functor;
    let target = restrict(l, &k.output)?;
    let b = l.source();
    let tables = b
        .objects()
        .map(|o| {
            let lb = l.obj(o);
            (0..k.input.size(o))
                .map(|x| k.class_of(lb, o, l.target().id(lb), x))
                .collect()
        })
        .collect();
    let m = PresheafMap::from_tables(&k.input, &target, tables);
    m.validate()?;
    Ok(m)
}

/// Counit `L_! L^* Y -> Y` of `L_! -| L^*`: `[y, phi] |-> Y(phi) y`. `k`
/// must be the left extension of `L^* Y`.
pub fn lan_counit(k: &KanResult, y: &Presheaf) -> Result<PresheafMap> {
    if k.input != restrict(&k.functor, y)? {
        return Err(Error::ShapeMismatch("extension is not of the restriction of Y".into()));
    }
    let aa = k.functor.target();
    let tables = aa
        .objects()
        .map(|a| {
            (0..k.output.size(a))
                .map(|e| {
                    let (_, phi, x) = k.representative(a, e);
                    y.act(phi).apply(x)
                })
                .collect()
        })
        .collect();
    let m = PresheafMap::from_tables(&k.output, y, tables);
    m.validate()?;
    Ok(m)
}

/// Unit `Y -> L_* L^* Y` of `L^* -| L_*`: `y |-> (Y(psi) y)_(b, psi)`. `k`
/// must be the right extension of `L^* Y`.
pub fn ran_unit(k: &KanResult, y: &Presheaf) -> Result<PresheafMap> {
    if k.input != restrict(&k.functor, y)? {
        return Err(Error::ShapeMismatch("extension is not of the restriction of Y".into()));
    }
    let aa = k.functor.target();
    let tables = aa
        .objects()
        .map(|a| {
            (0..y.size(a))
                .map(|v| {
                    k.family_position(a, |_, psi| y.act(psi).apply(v))
                        .expect("restricted element is a compatible family")
                })
                .collect()
        })
        .collect();
    let m = PresheafMap::from_tables(y, &k.output, tables);
    m.validate()?;
    Ok(m)
}

/// Counit `L^* L_* X -> X` of `L^* -| L_*`: the entry at `(b, id_(L b))`.
pub fn ran_counit(k: &KanResult) -> Result<PresheafMap> {
    let l = &k.functor;
    let source = restrict(l, &k.output)?;
    let tables = l
        .source()
        .objects()
        .map(|b| {
            let lb = l.obj(b);
            (0..source.size(b))
                .map(|e| k.entry(lb, e, b, l.target().id(lb)))
                .collect()
        })
        .collect();
    let m = PresheafMap::from_tables(&source, &k.input, tables);
    m.validate()?;
    Ok(m)
}

/// `theta_X : L_* X -> L_! X` together with per-object surjectivity.
#[derive(Debug, Clone)]
pub struct Theta {
    pub map: PresheafMap,
    /// The first `(object, element)` of `L_! X` missed by `theta`, if any.
    pub missed: Option<(Obj, usize)>,
}

impl Theta {
    pub fn is_epi(&self) -> bool {
        self.missed.is_none()
    }
}

/// The unique `theta : L_* X -> L_! X` whose restriction along `L` is the
/// composite `L^* L_* X -> X -> L^* L_! X` of the counit of `L^* -| L_*`
/// and the unit of `L_! -| L^*`. Found by enumerating all maps and
/// filtering, which relies on `L^*` being fully faithful.
pub fn theta(l: &FinFunctor, x: &Presheaf, budget: &Budget) -> Result<Theta> {
    let right = ran(l, x, budget)?;
    let left = lan(l, x, budget)?;
    let target = ran_counit(&right)?.then(&lan_unit(&left)?)?;
    let candidates: Vec<PresheafMap> = nat_transformations(&right.output, &left.output, budget)?
        .into_iter()
        .filter(|m| restrict_map(l, m).map(|r| r == target).unwrap_or(false))
        .collect();
    if candidates.len() != 1 {
        return Err(Error::NonUnique {
            context: "theta".into(),
            count: candidates.len(),
        });
    }
    let map = candidates.into_iter().next().unwrap();
    let aa: &FinCategory = l.target();
    let missed = aa.objects().find_map(|a| {
        let mut hit = vec![false; left.output.size(a)];
        for &v in map.component(a).table() {
            hit[v] = true;
        }
        hit.iter().position(|h| !h).map(|e| (a, e))
    });
    Ok(Theta { map, missed })
}

/// Hom-count certificates that `L^* -| L_*` is essential and local for a
/// reflection `L -| F`, over the presheaf corpus with the given carrier
/// bound on both sides:
///
/// - `lan-adjunction`: `|Nat(L_! X, Y)| = |Nat(X, L^* Y)|`;
/// - `ran-adjunction`: `|Nat(L^* Y, X)| = |Nat(Y, L_* X)|`;
/// - `restriction-fully-faithful`: `|Nat(L^* Y, L^* Y')| = |Nat(Y, Y')|`;
/// - `local-adjunction`: `|Nat(L_* X, Y)| = |Nat(X, F_* Y)|`;
/// - `local-fully-faithful`: `|Nat(F_* Y, F_* Y')| = |Nat(Y, Y')|`.
///
/// The reflection itself is checked first; a broken unit fails with the
/// adjunction witness.
pub fn verify_essential_local(r: &Reflection, bound: usize, budget: &Budget) -> Result<Verdict> {
    let mut v = Verdict::new("essential-local", &[("carrier", bound as u64)]);
    if let Err(failure) = check_adjunction(r) {
        return Ok(v.fail(Witness::Adjunction {
            reflection: ReflectionData::from_reflection(r),
            failure,
        }));
    }
    let (l, f) = (r.left(), r.right());
    let opts = CorpusOptions {
        bound,
        representables: true,
    };
    let xs = presheaf_corpus(r.big(), opts, budget)?;
    let ys = presheaf_corpus(r.small(), opts, budget)?;
    let data = ReflectionData::from_reflection(r);
    let count = |a: &Presheaf, b: &Presheaf| count_nat_transformations(a, b, budget);
    let mismatch = |clause: &str, x: &Presheaf, y: &Presheaf, left, right| Witness::HomCount {
        reflection: data.clone(),
        clause: clause.into(),
        x: PresheafData::from_presheaf(x),
        y: PresheafData::from_presheaf(y),
        left,
        right,
    };
    let restricted: Vec<Presheaf> = ys.iter().map(|y| restrict(l, y)).collect::<Result<_>>()?;
    let coinduced: Vec<Presheaf> = ys
        .iter()
        .map(|y| ran(f, y, budget).map(|k| k.output))
        .collect::<Result<_>>()?;
    for x in &xs {
        let lx = lan(l, x, budget)?.output;
        let rx = ran(l, x, budget)?.output;
        for (j, y) in ys.iter().enumerate() {
            let ly = &restricted[j];
            let checks = [
                ("lan-adjunction", count(&lx, y)?, count(x, ly)?),
                ("ran-adjunction", count(ly, x)?, count(y, &rx)?),
                ("local-adjunction", count(&rx, y)?, count(x, &coinduced[j])?),
            ];
            for (clause, left, right) in checks {
                if left != right {
                    return Ok(v.fail(mismatch(clause, x, y, left, right)));
                }
                v.stats.examined += 1;
            }
        }
    }
    for (i, y) in ys.iter().enumerate() {
        for (j, y2) in ys.iter().enumerate() {
            let direct = count(y, y2)?;
            let checks = [
                ("restriction-fully-faithful", count(&restricted[i], &restricted[j])?),
                ("local-fully-faithful", count(&coinduced[i], &coinduced[j])?),
            ];
            for (clause, image) in checks {
                if image != direct {
                    return Ok(v.fail(mismatch(clause, y, y2, image, direct)));
                }
                v.stats.examined += 1;
            }
        }
    }
    Ok(v)
}

#[cfg(test)]
mod tests;
