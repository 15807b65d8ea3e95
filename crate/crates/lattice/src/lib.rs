//! Dense exact-diagonalization model of the SU(3)-invariant fundamental chain
//! on N ≤ 6 sites, with R(x,y) = I + c/(x−y)·P.

pub mod basis;
pub mod error;
pub mod local;
pub mod monodromy;
pub mod rmatrix;
pub mod spectrum;

pub use basis::{WeightSector, MAX_SITES};
pub use error::{LatticeError, Result};
pub use local::{embedded_unit, gen_sol_t_defect, inverse_scattering_unit, local_element};
pub use monodromy::{Lattice, Monodromy, ShiftCheck, ShiftOrientation};
pub use num_complex::Complex64;
pub use rmatrix::{build_r, yang_baxter_defect, Dense, Normalization};
pub use spectrum::{sector_spectrum, SectorSpectrum, Vector};
