//! Exact optimal polynomial approximants in the Hardy space of the bidisk.
//!
//! The crate computes the polynomial `p` of χ-degree at most `n` minimizing
//! `‖p·f − 1‖` for a bivariate polynomial `f`, entirely in exact Gaussian
//! rational arithmetic, and provides the surrounding machinery: zero location
//! relative to the bidisk, weak innerness, determinantal representations and a
//! seeded search harness over polynomial families.

pub mod detrep;
pub mod error;
pub mod gaussian;
pub mod innerness;
pub mod linalg;
pub mod opa;
pub mod poly2;
pub mod scan;
pub mod univariate;
pub mod zeros;

pub use error::{OpaError, Result};
pub use gaussian::{GaussianRational, Rational};
pub use poly2::{chi_exponents, chi_index, inner_product, BiPoly, ExponentPair};
