//! Exact and floating-point evaluation of SU(3) scalar products.
//!
//! Kernels, the domain-wall partition function, highest coefficients and the
//! block-determinant representation are generic over [`scalar::Scalar`], so
//! the same code runs on exact rationals and on complex doubles.

pub mod dwpf;
pub mod error;
pub mod identities;
pub mod kernel;
pub mod laurent;
pub mod partitions;
pub mod sampling;
pub mod scalar;
pub mod scalar_product;
pub mod sum;
pub mod varset;

pub use error::{Error, Result};
pub use kernel::{KernelKind, Kernels};
pub use scalar::{Complex64, FieldElement, Rational, Scalar};
pub use varset::VarSet;
