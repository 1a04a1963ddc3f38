//! Helmholtz diffraction by thin Dirichlet scatterers, continued off the real
//! plane.
//!
//! The crate builds the branched surface of a scatterer, solves the real-plane
//! problem on it, continues the field into a complex neighbourhood of the real
//! plane by contour integrals of Green's identity, and measures how a basis of
//! continued fields transforms under loops around the branch set.

pub mod continuation;
pub mod error;
pub mod field;
pub mod green;
pub mod monodromy;
pub mod quadrature;
pub mod special;
pub mod surface;

pub use error::{Error, Result};
