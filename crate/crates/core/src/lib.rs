//! Numerical kernels for short parts of the Hardy–Littlewood integral
//! ∫Z²(t)dt: the Riemann–Siegel theta and Hardy Z-functions, the segment
//! sum S(T, U), oscillation-aware quadrature, zero location, the chord
//! solvers for τ = S(T, U)/ln T, and the nonlinear integral equation that
//! defines the ladder φ(T).
//!
//! The crate is `no_std` (with `alloc`) when built without the default
//! `std` feature; file formats, caching and the command line live in the
//! `zeta-chords` crate.

#![cfg_attr(not(feature = "std"), no_std)]
// Range checks are written as `!(x > 0.0)` so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod aas;
pub mod complex;
pub mod dd;
mod error;
pub mod hl_core;
pub mod ladder;
pub mod math;
pub mod params;
pub mod quad;
pub mod special_fn;
pub mod verifier;
pub mod zeros;

pub use error::{Error, Result};
