//! Arithmetic of S-arithmetic numbers and unimodular S-lattices.
//!
//! The crate provides exact S-integers and finite-precision p-adic values,
//! primitivity and orbit machinery for pairs of primitive vectors, totient
//! and zeta densities, exact lattice-point enumeration over product regions
//! of `R^d x prod_p Q_p^d`, and reproducible Haar-style samplers. Everything
//! is deterministic: random draws are pure functions of `(seed, stream)`.

pub mod analytic;
pub mod haar;
pub mod primvec;
pub mod sarith;
pub mod slattice;

mod error;

pub use error::{Error, Result};
