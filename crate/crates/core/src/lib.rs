//! Precision-guaranteed quantum state and process tomography.
//!
//! State tomography reconstructs a density matrix from POVM counts by
//! linear inversion followed by projection onto the physical states, and
//! certifies a Hilbert–Schmidt radius `δ` that holds with a stated
//! confidence level. Process tomography sends probe states through a
//! channel, reconstructs each output, assembles the Choi state, projects it
//! onto the CPTP set, and propagates `δ` to a process radius `Δ`.
//!
//! ```
//! use pgtomo::gates::{calibrated_povms, tetrahedron_probes, choi_of_depolarizing};
//! use pgtomo::process::{run_process_tomography, ProcessData, ProcessTomographyConfig};
//! use pgtomo::state::{EnmMode, PrecisionSpec};
//!
//! let truth = choi_of_depolarizing(0.2).unwrap();
//! let config = ProcessTomographyConfig {
//!     shots: vec![8192; 3],
//!     precision: PrecisionSpec::Cl(0.87),
//!     enm_mode: EnmMode::HsProjection,
//!     target: Some(truth.clone()),
//! };
//! let data = ProcessData::Simulate { truth, seed: 1 };
//! let result = run_process_tomography(&data, &tetrahedron_probes(), &calibrated_povms(), &config).unwrap();
//! assert!(result.certificate.delta > 0.0);
//! ```

pub mod batch;
pub mod error;
pub mod fixtures;
pub mod gates;
pub mod measurement;
pub mod operator;
pub mod parallel;
pub mod process;
pub mod state;

pub use error::{Result, TomoError};
pub use operator::{hs_distance, ComplexMatrix, DensityMatrix};
pub use parallel::Execution;
