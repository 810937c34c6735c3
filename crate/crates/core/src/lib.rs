//! Exact evaluation of the uniform matrix product state map together with
//! the algebra needed to study its image: scalar rings, necklace
//! coordinates on cyclic tensors, linear algebra and Gröbner bases.

pub mod arith;
pub mod error;
pub mod linalg;
pub mod necklace;
pub mod poly;
pub mod sample;
pub mod umps;

pub use error::{Error, Result};
