//! Small dense complex linear algebra, the Gell-Mann basis and the Bloch
//! parametrization of states.

mod basis;
mod eigen;
mod matrix;

pub use basis::{
    bloch_to_density, density_to_bloch, gell_mann_basis, BlochOperator, BlochVector, DensityMatrix,
    OperatorBasis, STATE_TOL,
};
pub use eigen::{hermitian_eig, HermitianEigen};
pub use matrix::{hs_distance, partial_trace, tensor_product, ComplexMatrix, Keep, I, ONE, ZERO};
