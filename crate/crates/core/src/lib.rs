//! Exact computations with root systems, folded Weyl groups, normalizer
//! quotients of parabolic subgroups and the chamber geometry they act on.

pub mod error;
pub mod linalg;
pub mod coxeter;
pub mod rootsys;
pub mod weyl;
pub mod folding;
pub mod levi;
pub mod chambers;
pub mod galois;

pub use error::{Error, Result};
