pub mod arith;
pub mod chowring;
pub mod cli;
pub mod document;
pub mod error;
pub mod fan;
pub mod inertia;
pub mod lattice;
pub mod resolution;
pub mod stacky;

pub use error::{Error, Result};
