//! Scalar product of a twisted on-shell and an on-shell Bethe vector.

pub mod chain;
pub mod data;
pub mod gen;
pub mod matrix;
pub mod norm;
pub mod omega;
pub mod oracle;
pub mod spurious;

pub use data::BetheData;
pub use matrix::{build_block_matrix, scalar_product_det, scalar_product_det_with, BlockMatrix, Construction};
pub use norm::norm_det;
pub use omega::{omega_vector, scalar_product_kappa_derivative};
pub use oracle::scalar_product_oracle;
pub use spurious::spurious_pole_check;
