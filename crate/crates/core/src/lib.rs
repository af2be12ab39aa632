pub mod bispan;
pub mod burnside;
pub mod cli;
pub mod dsl;
pub mod error;
pub mod group;
pub mod gset;
pub mod poly;
pub mod report;
pub mod tamcheck;
pub mod witt;
pub mod words;

pub use error::{Error, Result};
