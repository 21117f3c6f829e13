#![cfg_attr(not(test), no_std)]
//! Weighted variable-exponent Lebesgue spaces on the unit ball of ℂⁿ.
//!
//! The crate is `no_std` with `alloc`. It covers the pseudo-metric geometry,
//! quadrature against μ_α, variable exponents, Luxemburg norms, weight-class
//! constants and the maximal, regularization, Bergman and iteration operators.

extern crate alloc;

pub mod error;
pub mod exponent;
pub mod geometry;
pub mod measure;
pub mod norms;
pub mod numeric;
pub mod operators;
pub mod weights;

pub use error::{Error, Result};
