pub mod chsh;
pub mod cli;
pub mod correlation;
pub mod elliptope;
pub mod error;
pub mod polyhedron;
pub mod raffle;
pub mod sim;
pub mod spin;
pub mod stats;

pub use error::{Error, Result};
