//! Numerical harmonic analysis on two-step stratified Lie groups.
//!
//! The crate represents a group by the structure constants of its Lie
//! algebra, decomposes the skew forms `J_mu` spectrally, evaluates the
//! Laguerre-expansion convolution kernels of `F(L) chi(2^l U)`, and verifies
//! the weighted Plancherel scaling laws together with the exact dimension
//! numerology (Radon-Hurwitz numbers, threshold exponents).

pub mod error;
pub mod exec;
pub mod group;
pub mod jacobi;
pub mod kernel;
pub mod laguerre;
pub mod multiplier;
pub mod numerology;
pub mod oracle;
pub mod plancherel;
pub mod quad;
pub mod spectral;

pub use error::{Error, Result};
