//! Exact construction and certification of the explicit parabolic PU(2,1) Higgs
//! data on the punctured sphere, with the supporting complex hyperbolic geometry
//! and a finite-difference harness for the cusp-strip estimates.

pub mod ch2;
pub mod cusp;
pub mod error;
pub mod exactnum;

pub use error::{Error, Result};
pub mod nnoid;
pub mod sphere;
pub mod stability;
