//! Local connectedness of `L^* -| L_*` for a functor `L : B -> A`, tested on
//! the presheaf corpus: `L_!` must send pullbacks along `L^*`-images to
//! pullbacks, and `L^*` must carry dependent products to dependent products.

use std::ops::ControlFlow;

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::fincat::FinFunctor;
use crate::kan::{lan, lan_counit, lan_map, restrict, restrict_map, KanResult};
use crate::presheaf::{
    dependent_product, for_each_nat, nat_transformations, presheaf_corpus, pullback, pullback_comparison,
    CorpusOptions, NatOptions, Presheaf, PresheafMap,
};
use crate::verdict::{FunctorSpec, MapData, PresheafData, Verdict, Witness};

/// Default number of dependent-product instances spot-checked.
pub const DEFAULT_PI_INSTANCES: usize = 200;

#[derive(Debug, Clone)]
pub struct LocallyConnected {
    /// Pullbacks along `L^*`-images are preserved by `L_!`.
    pub squares: Verdict,
    /// `L^*` preserves dependent products, on the instances examined.
    pub dependent_products: Verdict,
}

impl LocallyConnected {
    pub fn combined(&self) -> Verdict {
        Verdict::combine(
            "locally-connected",
            vec![self.squares.clone(), self.dependent_products.clone()],
        )
    }
}

/// Whether some isomorphism `h` of sources has `m1 = m2 . h`.
pub fn isomorphic_over(m1: &PresheafMap, m2: &PresheafMap, budget: &Budget) -> Result<bool> {
    let (s1, s2) = (m1.source(), m2.source());
    if s1.sizes() != s2.sizes() || m1.target().sizes() != m2.target().sizes() {
        return Ok(false);
    }
    let base = s1.base();
    let mut found = false;
    for_each_nat(s1, s2, NatOptions { injective: true }, budget, |t| {
        let commutes = base.objects().all(|o| {
            (0..s1.size(o)).all(|i| m2.component(o).apply(t[o.0][i]) == m1.component(o).apply(i))
        });
        if commutes {
            found = true;
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    })?;
    Ok(found)
}

/// Left extensions of `L^* Z` with their counits, computed once per `Z`.
struct Restricted {
    kan: KanResult,
    counit: PresheafMap,
}

/// Decides whether the `L_!`-image of the pullback of `a : X -> L^* Z`
/// along `L^* u` is a pullback; the vertical legs are transposed through
/// the counit, as in the defining square.
fn square_preserved(
    l: &FinFunctor,
    kx: &KanResult,
    rz: &Restricted,
    rw: &Restricted,
    a: &PresheafMap,
    u: &PresheafMap,
    budget: &Budget,
) -> Result<bool> {
    let lu = restrict_map(l, u)?;
    let pb = pullback(a, &lu)?;
    let kp = lan(l, &pb.object, budget)?;
    let top = lan_map(&kp, kx, &pb.p1)?;
    let left = lan_map(&kp, &rw.kan, &pb.p2)?.then(&rw.counit)?;
    let right = lan_map(kx, &rz.kan, a)?.then(&rz.counit)?;
    let (_, cmp) = pullback_comparison(&top, &left, &right, u)?;
    Ok(cmp.is_iso())
}

pub fn check_locally_connected(
    l: &FinFunctor,
    bound: usize,
    pi_instances: usize,
    budget: &Budget,
) -> Result<LocallyConnected> {
    let opts = CorpusOptions {
        bound,
        representables: true,
    };
    let xs = presheaf_corpus(l.source(), opts, budget)?;
    let zs = presheaf_corpus(l.target(), opts, budget)?;
    let spec = FunctorSpec::from_functor(l);

    let mut squares = Verdict::new("locally-connected.squares", &[("carrier", bound as u64)]);
    let restricted: Vec<Restricted> = zs
        .iter()
        .map(|z| {
            let kan = lan(l, &restrict(l, z)?, budget)?;
            let counit = lan_counit(&kan, z)?;
            Ok(Restricted { kan, counit })
        })
        .collect::<Result<_>>()?;
    'outer: for x in &xs {
        let kx = lan(l, x, budget)?;
        for (zi, z) in zs.iter().enumerate() {
            let lz = &restricted[zi].kan.input;
            let maps_a = nat_transformations(x, lz, budget)?;
            if maps_a.is_empty() {
                continue;
            }
            for (wi, w) in zs.iter().enumerate() {
                for u in nat_transformations(w, z, budget)? {
                    for a in &maps_a {
                        match square_preserved(l, &kx, &restricted[zi], &restricted[wi], a, &u, budget) {
                            Ok(true) => squares.stats.examined += 1,
                            Ok(false) => {
                                squares = squares.fail(Witness::PresheafSquare {
                                    functor: spec.clone(),
                                    x: PresheafData::from_presheaf(x),
                                    z: PresheafData::from_presheaf(z),
                                    w: PresheafData::from_presheaf(w),
                                    a: MapData::from_map(a),
                                    u: MapData::from_map(&u),
                                });
                                break 'outer;
                            }
                            Err(Error::BudgetExceeded { .. }) => squares.stats.inconclusive += 1,
                            Err(e) => return Err(e),
                        }
                    }
                }
            }
        }
    }
    if squares.stats.inconclusive > 0 && !squares.is_fail() {
        let n = squares.stats.inconclusive;
        squares = squares.inconclusive(format!("{n} squares exceeded the budget"));
    }

    let mut pis = Verdict::new(
        "locally-connected.dependent-products",
        &[("carrier", bound as u64), ("instances", pi_instances as u64)],
    );
    'pi: for y in &zs {
        for z in &zs {
            for f in nat_transformations(y, z, budget)? {
                for w in &zs {
                    for g in nat_transformations(w, y, budget)? {
                        if pis.stats.examined + pis.stats.inconclusive >= pi_instances as u64 {
                            break 'pi;
                        }
                        let outcome = (|| -> Result<bool> {
                            let up = dependent_product(&f, &g, budget)?;
                            let up = restrict_map(l, &up.map)?;
                            let down = dependent_product(&restrict_map(l, &f)?, &restrict_map(l, &g)?, budget)?;
                            isomorphic_over(&up, &down.map, budget)
                        })();
                        match outcome {
                            Ok(true) => pis.stats.examined += 1,
                            Ok(false) => {
                                pis = pis.fail(Witness::DependentProduct {
                                    functor: spec.clone(),
                                    y: PresheafData::from_presheaf(y),
                                    z: PresheafData::from_presheaf(z),
                                    w: PresheafData::from_presheaf(w),
                                    f: MapData::from_map(&f),
                                    g: MapData::from_map(&g),
                                });
                                break 'pi;
                            }
                            Err(Error::BudgetExceeded { .. }) => pis.stats.inconclusive += 1,
                            Err(e) => return Err(e),
                        }
                    }
                }
            }
        }
    }
    if pis.stats.inconclusive > 0 && !pis.is_fail() {
        let n = pis.stats.inconclusive;
        pis = pis.inconclusive(format!("{n} instances exceeded the budget"));
    }
    Ok(LocallyConnected {
        squares,
        dependent_products: pis,
    })
}

/// Rebuilds a presheaf-square witness and decides it again.
pub(crate) fn replay_presheaf_square(
    functor: &FunctorSpec,
    x: &PresheafData,
    z: &PresheafData,
    w: &PresheafData,
    a: &MapData,
    u: &MapData,
    budget: &Budget,
) -> Result<bool> {
    let l = functor.build()?;
    let x = x.build(l.source())?;
    let z = z.build(l.target())?;
    let w = w.build(l.target())?;
    let rz = {
        let kan = lan(&l, &restrict(&l, &z)?, budget)?;
        let counit = lan_counit(&kan, &z)?;
        Restricted { kan, counit }
    };
    let rw = {
        let kan = lan(&l, &restrict(&l, &w)?, budget)?;
        let counit = lan_counit(&kan, &w)?;
        Restricted { kan, counit }
    };
    let a = a.build(&x, &rz.kan.input)?;
    let u = u.build(&w, &z)?;
    let kx = lan(&l, &x, budget)?;
    square_preserved(&l, &kx, &rz, &rw, &a, &u, budget)
}

/// Rebuilds a dependent-product witness and decides it again.
pub(crate) fn replay_dependent_product(
    functor: &FunctorSpec,
    y: &PresheafData,
    z: &PresheafData,
    w: &PresheafData,
    f: &MapData,
    g: &MapData,
    budget: &Budget,
) -> Result<bool> {
    let l = functor.build()?;
    let (y, z, w): (Presheaf, Presheaf, Presheaf) =
        (y.build(l.target())?, z.build(l.target())?, w.build(l.target())?);
    let f = f.build(&y, &z)?;
    let g = g.build(&w, &y)?;
    let up = restrict_map(&l, &dependent_product(&f, &g, budget)?.map)?;
    let down = dependent_product(&restrict_map(&l, &f)?, &restrict_map(&l, &g)?, budget)?;
    isomorphic_over(&up, &down.map, budget)
}
