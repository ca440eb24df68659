pub mod cli;
pub mod error;
pub mod formal_group;
pub mod graded;
pub mod kring;
pub mod loops;
pub mod parse;
pub mod scalar;
pub mod series;
pub mod verify;

pub use error::{Error, Result};
