//! Local cartesian closure of a finite lattice, decided by searching for
//! right adjoints to every pullback functor between slices.

use crate::error::{Error, Result};
use crate::fincat::{has_finite_limits, pullback, FinCategory, Obj};
use crate::verdict::{PosetData, Verdict, Witness};

/// Objects of the slice over `y`, i.e. the elements below `y`.
fn below(c: &FinCategory, y: Obj) -> Vec<Obj> {
    c.objects().filter(|&z| !c.hom(z, y).is_empty()).collect()
}

fn leq(c: &FinCategory, a: Obj, b: Obj) -> bool {
    !c.hom(a, b).is_empty()
}

/// For `f : x -> y`, the pullback functor sends `z -> y` to `z x_y x -> x`.
/// Returns the first `w` over `x` at which no right adjoint value exists.
fn missing_adjoint(c: &FinCategory, x: Obj, y: Obj) -> Option<Obj> {
    let f = c.hom(x, y)[0];
    let pull = |z: Obj| pullback(c, c.hom(z, y)[0], f).map(|p| p.object);
    let over_y = below(c, y);
    for w in below(c, x) {
        // a value `z` must satisfy: z' <= z iff f*(z') <= w, for every z' over y
        let found = over_y.iter().any(|&z| {
            over_y.iter().all(|&z2| {
                let lhs = leq(c, z2, z);
                let rhs = pull(z2).is_some_and(|p| leq(c, p, w));
                lhs == rhs
            })
        });
        if !found {
            return Some(w);
        }
    }
    None
}

/// PASS iff every pullback functor between slices has a right adjoint.
pub fn check_lcc(c: &FinCategory, bound: usize) -> Result<Verdict> {
    if !c.is_preorder() {
        return Err(Error::ShapeMismatch("the lattice check needs a thin category".into()));
    }
    let mut v = Verdict::new("lcc", &[("objects", bound.min(c.num_objects()) as u64)]);
    if !has_finite_limits(c) {
        return Ok(v.inconclusive("category lacks finite limits"));
    }
    for x in c.objects().take(bound) {
        for y in c.objects().take(bound) {
            if !leq(c, x, y) {
                continue;
            }
            if let Some(w) = missing_adjoint(c, x, y) {
                return Ok(v.fail(Witness::Lcc {
                    lattice: PosetData::from_category(c),
                    x: c.obj_name(x).into(),
                    y: c.obj_name(y).into(),
                    w: c.obj_name(w).into(),
                }));
            }
            v.stats.examined += 1;
        }
    }
    Ok(v)
}
