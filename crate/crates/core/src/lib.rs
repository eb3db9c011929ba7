pub mod atoms;
pub mod builder;
pub mod cli;
pub mod error;
pub mod eval;
pub mod graph;
pub mod pipeline;
pub mod syntax;
pub mod value;
pub mod xmir;

pub use error::*;
pub use value::{DataKind, Value};
