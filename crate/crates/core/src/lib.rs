//! Exact computations in chiral de Rham complexes, their twisted and exotic
//! variants over circle bundles, and the chiral T-duality maps between them.

pub mod cdr;
pub mod coeffring;
pub mod error;
pub mod parse;
pub mod sample;
pub mod exotic;
pub mod tduality;
pub mod twisted;
mod util;
pub mod vertex;

pub use error::{Error, Result};

/// Exact rational scalars.
pub type Q = num_rational::Ratio<i128>;

/// Book chapters, compiled as doctests.
#[cfg(doctest)]
pub mod guide {
    #[doc = include_str!("../../../book/src/index.md")]
    pub mod index {}
    #[doc = include_str!("../../../book/src/vertex.md")]
    pub mod vertex {}
    #[doc = include_str!("../../../book/src/complexes.md")]
    pub mod complexes {}
    #[doc = include_str!("../../../book/src/duality.md")]
    pub mod duality {}
}
