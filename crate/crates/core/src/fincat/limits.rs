//! Universal constructions inside a finite category, found by exhaustive
//! search over candidate cones.

use serde::{Deserialize, Serialize};

use super::{FinCategory, Mor, Obj};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Product {
    pub object: Obj,
    pub p1: Mor,
    pub p2: Mor,
}

/// A pullback `P` of the cospan `X -f-> Z <-g- Y` with legs `p1 : P -> X`,
/// `p2 : P -> Y`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Pullback {
    pub object: Obj,
    pub p1: Mor,
    pub p2: Mor,
}

/// An exponential `E = T^B` with evaluation `E x B -> T`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Exponential {
    pub object: Obj,
    pub product: Product,
    pub eval: Mor,
}

/// Whether every compatible pair into a cospan factors uniquely through a
/// candidate pullback square.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MediatorAnalysis {
    Unique,
    /// The square itself does not commute.
    NotCommuting,
    /// The compatible pair `(left, right)` out of `probe` has no mediator.
    Missing {
        probe: String,
        left: String,
        right: String,
    },
    /// The compatible pair out of `probe` has `count >= 2` mediators.
    Many {
        probe: String,
        left: String,
        right: String,
        count: usize,
    },
}

impl MediatorAnalysis {
    pub fn is_unique(&self) -> bool {
        matches!(self, MediatorAnalysis::Unique)
    }
}

pub fn is_iso(c: &FinCategory, m: Mor) -> bool {
    c.is_iso(m)
}

/// The least terminal object in canonical order.
pub fn terminal_object(c: &FinCategory) -> Option<Obj> {
    c.objects().find(|&t| c.objects().all(|x| c.hom(x, t).len() == 1))
}

fn is_product(c: &FinCategory, x: Obj, y: Obj, p: Obj, p1: Mor, p2: Mor) -> bool {
    c.objects().all(|w| {
        c.hom(w, x).iter().all(|&a| {
            c.hom(w, y).iter().all(|&b| {
                c.hom(w, p)
                    .iter()
                    .filter(|&&m| c.compose(p1, m) == a && c.compose(p2, m) == b)
                    .count()
                    == 1
            })
        })
    })
}

/// The canonically least binary product of `x` and `y`, if one exists.
pub fn binary_product(c: &FinCategory, x: Obj, y: Obj) -> Option<Product> {
    for p in c.objects() {
        for &p1 in c.hom(p, x) {
            for &p2 in c.hom(p, y) {
                if is_product(c, x, y, p, p1, p2) {
                    return Some(Product { object: p, p1, p2 });
                }
            }
        }
    }
    None
}

/// Counts mediators for every compatible pair into the cospan `(f, g)`,
/// returning the first failure in canonical order.
pub fn square_mediators(c: &FinCategory, p1: Mor, p2: Mor, f: Mor, g: Mor) -> MediatorAnalysis {
    let p = c.dom(p1);
    if c.dom(p2) != p || c.cod(p1) != c.dom(f) || c.cod(p2) != c.dom(g) || c.cod(f) != c.cod(g) {
        return MediatorAnalysis::NotCommuting;
    }
    if c.compose(f, p1) != c.compose(g, p2) {
        return MediatorAnalysis::NotCommuting;
    }
    let (x, y) = (c.dom(f), c.dom(g));
    for w in c.objects() {
        for &a in c.hom(w, x) {
            for &b in c.hom(w, y) {
                if c.compose(f, a) != c.compose(g, b) {
                    continue;
                }
                let count = c
                    .hom(w, p)
                    .iter()
                    .filter(|&&m| c.compose(p1, m) == a && c.compose(p2, m) == b)
                    .count();
                let (probe, left, right) = (
                    c.obj_name(w).to_string(),
                    c.mor_name(a).to_string(),
                    c.mor_name(b).to_string(),
                );
                match count {
                    1 => {}
                    0 => return MediatorAnalysis::Missing { probe, left, right },
                    n => {
                        return MediatorAnalysis::Many {
                            probe,
                            left,
                            right,
                            count: n,
                        }
                    }
                }
            }
        }
    }
    MediatorAnalysis::Unique
}

/// The canonically least pullback of `x -f-> z <-g- y`.
pub fn pullback(c: &FinCategory, f: Mor, g: Mor) -> Option<Pullback> {
    if c.cod(f) != c.cod(g) {
        return None;
    }
    let (x, y) = (c.dom(f), c.dom(g));
    for p in c.objects() {
        for &p1 in c.hom(p, x) {
            for &p2 in c.hom(p, y) {
                if c.compose(f, p1) == c.compose(g, p2)
                    && square_mediators(c, p1, p2, f, g).is_unique()
                {
                    return Some(Pullback { object: p, p1, p2 });
                }
            }
        }
    }
    None
}

/// Terminal object plus all pullbacks.
pub fn has_finite_limits(c: &FinCategory) -> bool {
    terminal_object(c).is_some()
        && c.morphisms().all(|f| {
            c.incoming(c.cod(f))
                .iter()
                .all(|&g| pullback(c, f, g).is_some())
        })
}

/// `k x id_b : z x b -> e x b` between chosen products.
fn product_map(c: &FinCategory, from: &Product, to: &Product, k: Mor) -> Option<Mor> {
    c.hom(from.object, to.object).iter().copied().find(|&m| {
        c.compose(to.p1, m) == c.compose(k, from.p1) && c.compose(to.p2, m) == from.p2
    })
}

/// Searches for the exponential `t^b`: an object `e` with `ev : e x b -> t`
/// such that every `h : z x b -> t` is `ev . (k x b)` for a unique `k`.
/// Requires all products with `b`; returns `None` if they are missing or
/// no candidate is universal.
pub fn exponential(c: &FinCategory, b: Obj, t: Obj) -> Option<Exponential> {
    let products: Vec<Product> = c
        .objects()
        .map(|z| binary_product(c, z, b))
        .collect::<Option<_>>()?;
    for e in c.objects() {
        let pe = products[e.0];
        'ev: for &ev in c.hom(pe.object, t) {
            for z in c.objects() {
                let pz = products[z.0];
                for &h in c.hom(pz.object, t) {
                    let mut count = 0;
                    for &k in c.hom(z, e) {
                        let Some(kb) = product_map(c, &pz, &pe, k) else {
                            continue 'ev;
                        };
                        if c.compose(ev, kb) == h {
                            count += 1;
                        }
                    }
                    if count != 1 {
                        continue 'ev;
                    }
                }
            }
            return Some(Exponential {
                object: e,
                product: pe,
                eval: ev,
            });
        }
    }
    None
}
