//! Finite, checkable presentations of computable topology on spaces of ideals.
//!
//! The crate models spaces of ideals of transitive relations, the category
//! `CntSets` of partial equivalence relations, computable étale spaces with
//! category actions, and the two translations between functors `C -> CntSets`
//! and `C`-sets. Everything is finite ("desk scale") except the [`kernel`]
//! enumerations, which also drive fuelled stream-scale evaluation.

pub mod categories;
pub mod cntsets;
pub mod corpus;
pub mod equivalence;
mod error;
pub mod etale;
pub mod fixtures;
pub mod ideals;
pub mod kernel;
mod report;

pub use error::{Error, Result};
pub use report::{Finding, Report};
