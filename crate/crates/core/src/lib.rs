//! Exact computation on the rational circle Q/Z, its circular-order
//! automorphism group, and the compactification obtained by tripling every
//! rational point.

pub mod error;
pub mod kernel;
pub mod pl;

pub use error::{Error, Result};
pub mod completion;
pub mod factors;
pub mod lab;
