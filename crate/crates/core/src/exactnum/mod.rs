//! Exact arithmetic over Q(i): scalars, polynomials, binary forms, rational forms.

mod form;
mod gaussian;
pub mod linalg;
mod oneform;
mod poly;

pub use form::{eval_form, gcd_forms, resultant, sylvester_matrix, BinaryForm, ProjPoint};
pub use gaussian::{parse_rational, GaussianRational};
pub use linalg::{CVec3, Mat3, Scalar};
pub use oneform::{QuadraticDifferential, RationalOneForm};
pub use poly::{RationalFunction, UniPoly};
