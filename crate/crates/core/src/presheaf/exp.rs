//! Exponentials `Y^X` with `(Y^X)(c) = Nat(y_c x X, Y)`.

use std::collections::HashMap;

use super::{hom_position, nat_transformations, product, yoneda, Presheaf, PresheafMap, ProductCone};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::fincat::Obj;
use crate::finset::{FinFn, FinSet};

/// `Y^X` together with its evaluation map and the natural families that
/// its elements stand for.
#[derive(Debug, Clone)]
pub struct Exponential {
    pub object: Presheaf,
    /// `Y^X x X` with its projections.
    pub product: ProductCone,
    /// `ev : Y^X x X -> Y`, `ev_c(alpha, x) = alpha_c(id_c, x)`.
    pub eval: PresheafMap,
    base: Presheaf,
    value: Presheaf,
    /// `families[c][i]` are the component tables of the `i`-th element of
    /// `(Y^X)(c)` as a map `y_c x X => Y`.
    families: Vec<Vec<Vec<Vec<usize>>>>,
    index: Vec<HashMap<Vec<Vec<usize>>, usize>>,
}

fn family_label(t: &[Vec<usize>]) -> String {
    let parts: Vec<String> = t
        .iter()
        .map(|c| c.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(","))
        .collect();
    format!("<{}>", parts.join("|"))
}

/// Builds `Y^X` and `ev`; the result is re-validated as a presheaf.
pub fn exponential(x: &Presheaf, y: &Presheaf, budget: &Budget) -> Result<Exponential> {
    if !super::same_base(x.base(), y.base()) {
        return Err(Error::ShapeMismatch("presheaves live on different bases".into()));
    }
    let base = x.base().clone();
    let cat = &*base;
    let mut families = Vec::with_capacity(cat.num_objects());
    for c in cat.objects() {
        let yc = product(&yoneda(&base, c), x)?.object;
        let fams: Vec<Vec<Vec<usize>>> = nat_transformations(&yc, y, budget)?
            .into_iter()
            .map(|m| m.components().iter().map(|f| f.table().to_vec()).collect())
            .collect();
        families.push(fams);
    }
    let index: Vec<HashMap<Vec<Vec<usize>>, usize>> = families
        .iter()
        .map(|fs| fs.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect())
        .collect();
    let sets = families
        .iter()
        .map(|fs| FinSet::from_labels(fs.iter().map(|t| family_label(t)).collect()))
        .collect();
    let mut act = Vec::with_capacity(cat.num_morphisms());
    for f in cat.morphisms() {
        let (c, d) = (cat.dom(f), cat.cod(f));
        let map = families[d.0]
            .iter()
            .map(|alpha| {
                let beta: Vec<Vec<usize>> = cat
                    .objects()
                    .map(|e| {
                        let nx = x.size(e);
                        let hd = cat.hom(e, d);
                        cat.hom(e, c)
                            .iter()
                            .flat_map(|&u| {
                                let p = hom_position(hd, cat.compose(f, u));
                                (0..nx).map(move |xi| (p, xi))
                            })
                            .map(|(p, xi)| alpha[e.0][p * nx + xi])
                            .collect()
                    })
                    .collect();
                index[c.0][&beta]
            })
            .collect();
        act.push(FinFn::from_vec(map, families[c.0].len()));
    }
    let object = Presheaf::new(base.clone(), sets, act)?;
    let prod = product(&object, x)?;
    let eval_tables = cat
        .objects()
        .map(|c| {
            let nx = x.size(c);
            let idp = hom_position(cat.hom(c, c), cat.id(c));
            (0..object.size(c) * nx)
                .map(|i| families[c.0][i / nx][c.0][idp * nx + i % nx])
                .collect()
        })
        .collect();
    let eval = PresheafMap::from_tables(&prod.object, y, eval_tables);
    eval.validate()?;
    Ok(Exponential {
        object,
        product: prod,
        eval,
        base: x.clone(),
        value: y.clone(),
        families,
        index,
    })
}

impl Exponential {
    /// The exponent `X`.
    pub fn exponent(&self) -> &Presheaf {
        &self.base
    }

    /// The value object `Y`.
    pub fn value(&self) -> &Presheaf {
        &self.value
    }

    /// Component tables of the element `i` of `(Y^X)(c)`.
    pub fn family(&self, c: Obj, i: usize) -> &[Vec<usize>] {
        &self.families[c.0][i]
    }
}

/// The transpose `W -> Y^X` of `h : W x X -> Y`, where `h` has as source
/// the canonical product of `W` and `X`.
pub fn curry(exp: &Exponential, w: &Presheaf, h: &PresheafMap) -> Result<PresheafMap> {
    let x = exp.exponent();
    let wx = product(w, x)?.object;
    if *h.source() != wx || h.target() != exp.value() {
        return Err(Error::ShapeMismatch("map is not out of W x X into Y".into()));
    }
    let cat = &**x.base();
    let tables = cat
        .objects()
        .map(|c| {
            (0..w.size(c))
                .map(|wi| {
                    let alpha: Vec<Vec<usize>> = cat
                        .objects()
                        .map(|e| {
                            let nx = x.size(e);
                            cat.hom(e, c)
                                .iter()
                                .flat_map(|&u| {
                                    let we = w.act(u).apply(wi);
                                    (0..nx).map(move |xi| we * nx + xi)
                                })
                                .map(|i| h.component(e).apply(i))
                                .collect()
                        })
                        .collect();
                    exp.index[c.0][&alpha]
                })
                .collect()
        })
        .collect();
    let k = PresheafMap::from_tables(w, &exp.object, tables);
    k.validate()?;
    Ok(k)
}

/// The transpose `W x X -> Y` of `k : W -> Y^X`, namely `ev . (k x X)`.
pub fn uncurry(exp: &Exponential, k: &PresheafMap) -> Result<PresheafMap> {
    if *k.target() != exp.object {
        return Err(Error::ShapeMismatch("map does not land in the exponential".into()));
    }
    let x = exp.exponent();
    let w = k.source();
    let wx = product(w, x)?.object;
    let cat = &**x.base();
    let tables = cat
        .objects()
        .map(|c| {
            let nx = x.size(c);
            let idp = hom_position(cat.hom(c, c), cat.id(c));
            (0..w.size(c) * nx)
                .map(|i| exp.families[c.0][k.component(c).apply(i / nx)][c.0][idp * nx + i % nx])
                .collect()
        })
        .collect();
    let h = PresheafMap::from_tables(&wx, exp.value(), tables);
    h.validate()?;
    Ok(h)
}
