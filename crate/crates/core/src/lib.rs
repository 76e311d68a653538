//! Balanced weightings on multiset complexes, minimal-complex search, and
//! the associated divisor classes on `M̄_{0,n}`.

pub mod balancing;
pub mod canonical;
pub mod complex;
pub mod divisor;
pub mod error;
pub mod generators;
pub mod io;
pub mod linalg;
#[macro_use]
pub mod multiset;
pub mod poly;
pub mod search;
pub mod verify;

pub use error::{Error, Result};
