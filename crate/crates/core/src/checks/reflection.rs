//! Properties of a reflection `L -| F : A -> B` decided inside the finite
//! categories themselves.

use crate::error::Result;
use crate::fincat::{binary_product, exponential, pullback, square_mediators, terminal_object, FinCategory, Mor, Obj, Reflection};
use crate::verdict::{ReflectionData, SquareKind, Verdict, Witness};

use super::ensure_reflection;

/// Objects of `B` the category-level checks range over.
fn objects_within(c: &FinCategory, bound: usize) -> impl Iterator<Item = Obj> + '_ {
    c.objects().take(bound)
}

fn object_bound(c: &FinCategory, bound: usize) -> u64 {
    bound.min(c.num_objects()) as u64
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PairOutcome {
    Holds,
    Fails,
    /// A product needed for the comparison does not exist.
    Missing(String),
}

/// Whether `<counit_i . L p1, L p2> : L(F i x a) -> i x L a` is invertible.
pub fn frobenius_pair(r: &Reflection, i: Obj, a: Obj) -> PairOutcome {
    let (big, small) = (r.big(), r.small());
    let l = r.left();
    let fi = r.right().obj(i);
    let Some(p) = binary_product(big, fi, a) else {
        return PairOutcome::Missing(format!("{} x {}", big.obj_name(fi), big.obj_name(a)));
    };
    let la = l.obj(a);
    let Some(q) = binary_product(small, i, la) else {
        return PairOutcome::Missing(format!("{} x {}", small.obj_name(i), small.obj_name(la)));
    };
    let Some(eps) = r.counit(i) else {
        return PairOutcome::Missing(format!("counit at {}", small.obj_name(i)));
    };
    let first = small.compose(eps, l.mor(p.p1));
    let second = l.mor(p.p2);
    let m = small
        .hom(l.obj(p.object), q.object)
        .iter()
        .copied()
        .find(|&m| small.compose(q.p1, m) == first && small.compose(q.p2, m) == second);
    match m {
        Some(m) if small.is_iso(m) => PairOutcome::Holds,
        _ => PairOutcome::Fails,
    }
}

/// Frobenius reciprocity at a single pair.
pub fn check_frobenius(r: &Reflection, i: Obj, a: Obj) -> Result<Verdict> {
    ensure_reflection(r)?;
    let mut v = Verdict::new("frobenius", &[("pairs", 1)]);
    Ok(match frobenius_pair(r, i, a) {
        PairOutcome::Holds => {
            v.stats.examined = 1;
            v
        }
        PairOutcome::Fails => v.fail(frobenius_witness(r, i, a)),
        PairOutcome::Missing(what) => {
            v.stats.inconclusive = 1;
            v.inconclusive(format!("missing {what}"))
        }
    })
}

fn frobenius_witness(r: &Reflection, i: Obj, a: Obj) -> Witness {
    Witness::Frobenius {
        reflection: ReflectionData::from_reflection(r),
        i: r.small().obj_name(i).into(),
        a: r.big().obj_name(a).into(),
    }
}

/// Frobenius reciprocity over every pair `(i, a)` with `a` within the bound.
pub fn check_frobenius_all(r: &Reflection, bound: usize) -> Result<Verdict> {
    ensure_reflection(r)?;
    let mut v = Verdict::new("frobenius", &[("objects", object_bound(r.big(), bound))]);
    for a in objects_within(r.big(), bound) {
        for i in r.small().objects() {
            match frobenius_pair(r, i, a) {
                PairOutcome::Holds => v.stats.examined += 1,
                PairOutcome::Fails => return Ok(v.fail(frobenius_witness(r, i, a))),
                PairOutcome::Missing(what) => {
                    v.stats.inconclusive += 1;
                    v = v.inconclusive(format!("missing {what}"));
                }
            }
        }
    }
    Ok(v)
}

/// What happened to one cospan `f, g` under `L`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SquareOutcome {
    Preserved,
    Broken(Witness),
    MissingPullback,
}

/// Builds the canonical pullback of `f, g` in `B` and asks whether its
/// `L`-image is a pullback in `A`.
pub fn square_at(r: &Reflection, kind: SquareKind, f: Mor, g: Mor) -> SquareOutcome {
    let (big, small, l) = (r.big(), r.small(), r.left());
    let Some(pb) = pullback(big, f, g) else {
        return SquareOutcome::MissingPullback;
    };
    let image = square_mediators(small, l.mor(pb.p1), l.mor(pb.p2), l.mor(f), l.mor(g));
    if image.is_unique() {
        return SquareOutcome::Preserved;
    }
    SquareOutcome::Broken(Witness::Square {
        square: kind,
        reflection: ReflectionData::from_reflection(r),
        f: big.mor_name(f).into(),
        g: big.mor_name(g).into(),
        p1: big.mor_name(pb.p1).into(),
        p2: big.mor_name(pb.p2).into(),
        image,
    })
}

fn run_squares(r: &Reflection, bound: usize, kind: SquareKind, property: &str) -> Result<Verdict> {
    ensure_reflection(r)?;
    let big = r.big();
    let mut v = Verdict::new(property, &[("objects", object_bound(big, bound))]);
    let within = |m: Mor| big.dom(m).0 < bound;
    for a in r.small().objects() {
        let fa = r.right().obj(a);
        let mut cospans = Vec::new();
        match kind {
            SquareKind::SemiLeftExact => {
                for &u in r.small().incoming(a) {
                    let g = r.right().mor(u);
                    for &f in big.incoming(fa) {
                        cospans.push((f, g));
                    }
                }
            }
            SquareKind::StableUnits => {
                for &f in big.incoming(fa) {
                    for &g in big.incoming(fa) {
                        if f <= g {
                            cospans.push((f, g));
                        }
                    }
                }
            }
        }
        cospans.sort();
        for (f, g) in cospans {
            if !within(f) || !within(g) {
                continue;
            }
            match square_at(r, kind, f, g) {
                SquareOutcome::Preserved => v.stats.examined += 1,
                SquareOutcome::Broken(w) => return Ok(v.fail(w)),
                SquareOutcome::MissingPullback => {
                    v.stats.inconclusive += 1;
                    let note = format!("no pullback of {}, {}", big.mor_name(f), big.mor_name(g));
                    v = v.inconclusive(note);
                }
            }
        }
    }
    Ok(v)
}

/// `L` preserves pullbacks along maps `F u`, over every such cospan whose
/// legs start at objects within the bound.
pub fn check_semi_left_exact(r: &Reflection, bound: usize) -> Result<Verdict> {
    run_squares(r, bound, SquareKind::SemiLeftExact, "semi-left-exact")
}

/// `L` preserves every pullback over an object `F a`.
pub fn check_stable_units(r: &Reflection, bound: usize) -> Result<Verdict> {
    run_squares(r, bound, SquareKind::StableUnits, "stable-units")
}

/// The two halves of the exponential-ideal check.
#[derive(Debug, Clone)]
pub struct ExponentialIdeal {
    /// `L` preserves the terminal object and binary products.
    pub products: Verdict,
    /// Exponentials `(F a)^b` that exist land in the image of `F`.
    pub exponentials: Verdict,
}

impl ExponentialIdeal {
    pub fn combined(&self) -> Verdict {
        Verdict::combine("exp-ideal", vec![self.products.clone(), self.exponentials.clone()])
    }
}

/// Whether `L` preserves finite products among objects within the bound.
pub fn check_product_preservation(r: &Reflection, bound: usize) -> Result<Verdict> {
    ensure_reflection(r)?;
    let (big, small, l) = (r.big(), r.small(), r.left());
    let mut v = Verdict::new("exp-ideal.products", &[("objects", object_bound(big, bound))]);
    match terminal_object(big) {
        None => {
            v.stats.inconclusive += 1;
            v = v.inconclusive("no terminal object in the ambient category");
        }
        Some(t) => {
            let lt = l.obj(t);
            if small.objects().any(|x| small.hom(x, lt).len() != 1) {
                return Ok(v.fail(Witness::Terminal {
                    reflection: ReflectionData::from_reflection(r),
                }));
            }
            v.stats.examined += 1;
        }
    }
    for x in objects_within(big, bound) {
        for y in objects_within(big, bound) {
            let Some(p) = binary_product(big, x, y) else {
                v.stats.inconclusive += 1;
                let note = format!("no product {} x {}", big.obj_name(x), big.obj_name(y));
                v = v.inconclusive(note);
                continue;
            };
            let Some(q) = binary_product(small, l.obj(x), l.obj(y)) else {
                v.stats.inconclusive += 1;
                let note = format!("no product of the images of {}, {}", big.obj_name(x), big.obj_name(y));
                v = v.inconclusive(note);
                continue;
            };
            let (a, b) = (l.mor(p.p1), l.mor(p.p2));
            let m = small
                .hom(l.obj(p.object), q.object)
                .iter()
                .copied()
                .find(|&m| small.compose(q.p1, m) == a && small.compose(q.p2, m) == b);
            if !m.is_some_and(|m| small.is_iso(m)) {
                return Ok(v.fail(Witness::Product {
                    reflection: ReflectionData::from_reflection(r),
                    x: big.obj_name(x).into(),
                    y: big.obj_name(y).into(),
                }));
            }
            v.stats.examined += 1;
        }
    }
    Ok(v)
}

pub fn check_exponential_ideal(r: &Reflection, bound: usize) -> Result<ExponentialIdeal> {
    let products = check_product_preservation(r, bound)?;
    let (big, small) = (r.big(), r.small());
    let mut v = Verdict::new("exp-ideal.exponentials", &[("objects", object_bound(big, bound))]);
    'outer: for a in small.objects() {
        let fa = r.right().obj(a);
        for b in objects_within(big, bound) {
            let Some(e) = exponential(big, b, fa) else {
                v.stats.inconclusive += 1;
                let note = format!("no exponential {}^{}", big.obj_name(fa), big.obj_name(b));
                v = v.inconclusive(note);
                continue;
            };
            let in_image = small.objects().any(|a2| {
                big.hom(e.object, r.right().obj(a2))
                    .iter()
                    .any(|&m| big.is_iso(m))
            });
            if !in_image {
                v = v.fail(Witness::Exponential {
                    reflection: ReflectionData::from_reflection(r),
                    a: small.obj_name(a).into(),
                    b: big.obj_name(b).into(),
                    exponential: big.obj_name(e.object).into(),
                });
                break 'outer;
            }
            v.stats.examined += 1;
        }
    }
    Ok(ExponentialIdeal {
        products,
        exponentials: v,
    })
}
