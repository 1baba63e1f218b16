//! Spherical tensor gradient operator toolkit.
//!
//! Solid harmonics, Gaunt coefficients, reduced Bessel and B functions,
//! Hobson-theorem differentiation and two-range addition theorems, each
//! paired with a brute-force oracle in [`oracles`].

pub mod addition;
pub mod bench;
pub mod bfun;
pub mod core_math;
pub mod harmonics;
pub mod oracles;
pub mod stgo;
pub mod wigner;
pub mod error;

pub use error::{Error, Result};
pub use harmonics::{LMIndex, Vec3};
