//! Executable versions of the adjunction properties: Frobenius reciprocity,
//! semi-left-exactness, stable units, exponential ideals, local
//! connectedness, and local cartesian closure of lattices.

mod connected;
mod lcc;
mod reflection;
mod replay;

pub use connected::{check_locally_connected, isomorphic_over, LocallyConnected, DEFAULT_PI_INSTANCES};
pub use lcc::check_lcc;
pub use reflection::{
    check_exponential_ideal, check_frobenius, check_frobenius_all, check_product_preservation,
    check_semi_left_exact, check_stable_units, frobenius_pair, square_at, ExponentialIdeal, PairOutcome,
    SquareOutcome,
};
pub use replay::replay;
pub(crate) use replay::preorder_defects;
pub use replay::defect_kind;

pub use crate::verdict::{Outcome, Stats, Verdict, Witness};

use crate::error::{Error, Result};
use crate::fincat::{check_adjunction, Reflection};
use crate::verdict::ReflectionData;

/// Checkers on a reflection refuse data that is not one.
pub(crate) fn ensure_reflection(r: &Reflection) -> Result<()> {
    check_adjunction(r)
        .map(|_| ())
        .map_err(|e| Error::ShapeMismatch(format!("not a reflection: {e:?}")))
}

/// The universal property of the unit, as a verdict.
pub fn check_adjunction_verdict(r: &Reflection) -> Verdict {
    let v = Verdict::new("adjunction", &[("objects", r.big().num_objects() as u64)]);
    match check_adjunction(r) {
        Ok(n) => {
            let mut v = v;
            v.stats.examined = n as u64;
            v
        }
        Err(failure) => v.fail(Witness::Adjunction {
            reflection: ReflectionData::from_reflection(r),
            failure,
        }),
    }
}
