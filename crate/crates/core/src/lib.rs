//! Exact linear algebra for the prolongation of Killing-type operators.
//!
//! Everything here is pure computation over the rationals: sparse exact
//! matrices and chain complexes, symmetry-constrained tensor spaces, the
//! algebraic prolongation complex `(Λ^•⊗𝕋^ℓ, ∂)`, the Koszul complex of
//! the abelian nilradical of `sl(n+1)`, and polynomial tensor calculus on
//! flat and constant-curvature model spaces.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod error;
pub mod flat;
pub mod kostant;
pub mod linalg;
pub mod prolong;
pub mod tensor;
pub mod young;

pub use error::{Error, Result};
pub use linalg::{ChainComplex, ExactMatrix, Rational};
pub use tensor::{GroupKind, IndexGroup, Tensor};
pub use young::{DynkinLabel, SubspaceBasis, YoungDiagram};
