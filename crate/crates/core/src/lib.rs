//! Vertex functions of type D Nakajima quiver varieties with minuscule
//! framing, computed exactly by localization and compared with a product of
//! q-binomial series over roots.

pub mod coeffs;
pub mod macdonald;
pub mod error;
pub mod series;
pub mod vertex;

pub use error::{Error, Result};
pub mod posets;
pub mod roots;
pub mod selftest;
