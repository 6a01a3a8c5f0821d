pub mod cli;
pub mod duality;
pub mod error;
pub mod homalg;
pub mod homology;
pub mod integer;
pub mod primes;
pub mod ring;
pub mod sequence;

pub use error::{Error, Result};
