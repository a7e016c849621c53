//! Exact arithmetic for symmetric functions on the polydisc.
//!
//! The crate provides truncated multivariate power series with exact
//! complex-rational coefficients and a certified Wiener l1 tail bound,
//! the S_d action and symmetrization projector, conversion between the
//! monomial and elementary-symmetric bases, corona/Bezout verification,
//! orbit-space geometry of the closed polydisc, matrices over the series
//! algebra with SL_n dilation homotopies, and an expression parser plus
//! CLI on top of it all.
//!
//! Coefficients stay rational throughout; floating point enters only at
//! point evaluation, grid scans, and the constant-matrix factorization.

pub mod corona;
pub mod elementary;
pub mod error;
pub mod matrix;
pub mod parser;
pub mod scalar;
pub mod series;
pub mod symmetry;
pub mod witness;

pub use error::{Error, Result};
pub use scalar::{CRat, Rat};
pub use series::{Monomial, NormEnclosure, TruncatedSeries};
