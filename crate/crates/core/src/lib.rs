//! Exact computations with finite categories and finite presheaves:
//! Kan extensions, exponentials, dependent products, and checkers for
//! properties of reflections, with the reflexive-graph/preorder instance.
//!
//! Composition is written `g.f` and means `g` after `f`.

pub mod budget;
pub mod checks;
pub mod error;
pub mod fincat;
pub mod finset;
pub mod fixtures;
pub mod graphpre;
pub mod kan;
pub mod presheaf;
pub mod verdict;

pub use budget::Budget;
pub use error::{Error, Result};
