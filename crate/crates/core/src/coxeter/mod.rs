//! Coxeter diagrams, finite-type classification, root-system realizations
//! and explicit reflection groups.

mod diagram;
mod group;
mod roots;
mod types;

pub use diagram::{CanonicalDiagram, CoxeterDiagram};
pub use group::{generate_group, generate_group_bounded, molien_degrees, molien_series, DEFAULT_GROUP_LIMIT};
pub use roots::{ExactRoots, RootSystemData};
pub use types::{classify, CoxeterFactor, GroupType};
