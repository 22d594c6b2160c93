pub mod algebra;
pub mod arrangement;
pub mod coxeter;
pub mod error;
pub mod finite_field;
pub mod invariants;
pub mod macdonald;
pub mod monodromy;
pub mod recursion;

pub use error::{Error, Result};
