//! The SU(3)-invariant XXX chain as a concrete instance of the generalized
//! model: r₁(w) = f(w,0)^N, r₃(w) = 1.

pub mod error;
pub mod form_factor;
pub mod model;
pub mod roots;
pub mod seeds;
pub mod solver;
pub mod tau;

pub use error::{ChainError, Result};
pub use form_factor::{
    bethe_norm, form_factors_e22, normalized_form_factors, normalized_moduli, qq2_numeric, Derivative, FormFactors, KappaFamily,
};
pub use model::ChainModel;
pub use num_complex::Complex64;
pub use roots::{bank_from_json, bank_to_json, BankEntry, BetheRoots};
pub use seeds::{enumerate_states, sector_states};
pub use solver::{bethe_defect, continue_in_kappa, solve_bethe};
pub use tau::{rescaled_transfer_eigenvalue, transfer_eigenvalue};
