#![allow(clippy::needless_range_loop)]

pub mod chain_locus;
pub mod chain_tracer;
pub mod cli;
pub mod error;
pub mod lie_jets;
pub mod linalg;
pub mod normalize;
pub mod series;
pub mod sphere_isotropy;
pub mod tables;
pub mod uniqueness;

pub use error::{Error, Result};
