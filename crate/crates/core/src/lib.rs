//! The hyperdimensional transform.
//!
//! Points of an interval are encoded as high-dimensional random vectors whose
//! scaled inner products approximate a compactly supported kernel. Functions
//! are transformed into single vectors by integrating them against the
//! encoding, and recovered (as kernel-smoothed approximations) by taking inner
//! products with the encoding again. Integrals, derivatives, marginals and
//! linear differential or integral equations all become inner-product
//! constraints on that vector.

// `!(x > 0.0)` style checks are meant to reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod calculus;
pub mod encodings;
pub mod error;
pub mod fuzzy;
pub mod multivariate;
pub mod normalization;
pub mod output;
pub mod presets;
pub mod quadrature;
pub mod solvers;
pub mod transform;
pub mod vector;

pub use encodings::{Domain1D, Encoder, EncoderConfig};
pub use error::{HdError, Result};
pub use normalization::{NormalizationFn, NormalizationSettings, NormalizedEncoder};
pub use quadrature::Quadrature;
pub use transform::SampledFunction;
pub use vector::HyperVector;
