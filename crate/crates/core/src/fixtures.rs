//! Published data of the teleportation-channel experiment: reconstructed
//! output states, the reconstructed Choi matrix, and the settings they were
//! obtained with. Values are data, copied verbatim.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::gates::{calibrated_povms, choi_of_unitary, tetrahedron_probes};
use crate::measurement::PovmSet;
use crate::operator::{ComplexMatrix, DensityMatrix};
use crate::process::ChoiState;

pub const SHOTS_PER_SETTING: u64 = 8192;
pub const PUBLISHED_CL: f64 = 0.87;
pub const PUBLISHED_DELTA: f64 = 0.03;
/// Published distance column of the output-state table.
pub const PUBLISHED_STATE_DISTANCES: [f64; 4] = [0.06, 0.15, 0.11, 0.20];
pub const PUBLISHED_PROCESS_DELTA: f64 = 0.03;
pub const PUBLISHED_PROCESS_DELTA_TILDE: f64 = 0.18;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn qubit(a: f64, off: Complex64, b: f64) -> ComplexMatrix {
    ComplexMatrix::from_rows(&[vec![c(a, 0.0), off], vec![off.conj(), c(b, 0.0)]]).expect("finite")
}

/// Reconstructed output states for the four tetrahedron probes.
pub fn table1_states() -> Vec<DensityMatrix> {
    [
        qubit(0.969, c(-0.038, -0.027), 0.031),
        qubit(0.420, c(0.009, 0.348), 0.580),
        qubit(0.430, c(-0.380, -0.193), 0.570),
        qubit(0.419, c(0.235, -0.288), 0.581),
    ]
    .into_iter()
    .map(|m| DensityMatrix::new(m).expect("published states are physical"))
    .collect()
}

/// Reconstructed Choi matrix exactly as printed (not Hermitian: the corner
/// entries read 0.372+0.058i and 0.397+0.058i).
pub fn table2_published() -> ComplexMatrix {
    ComplexMatrix::from_rows(&[
        vec![
            c(0.484, 0.0),
            c(-0.019, -0.013),
            c(-0.004, 0.0),
            c(0.372, 0.058),
        ],
        vec![
            c(-0.019, 0.013),
            c(0.016, 0.0),
            c(-0.020, 0.0),
            c(0.003, -0.002),
        ],
        vec![
            c(-0.003, -0.002),
            c(-0.002, 0.0),
            c(0.075, 0.0),
            c(-0.024, -0.027),
        ],
        vec![
            c(0.397, 0.058),
            c(0.003, 0.002),
            c(-0.024, 0.027),
            c(0.425, 0.0),
        ],
    ])
    .expect("finite")
}

/// `(M + M†)/2` of [`table2_published`].
pub fn table2_symmetrized() -> ComplexMatrix {
    table2_published().hermitian_part()
}

/// Hermitian matrix built from the lower triangle of [`table2_published`].
pub fn table2_lower_completion() -> ComplexMatrix {
    let m = table2_published();
    let mut out = m.clone();
    for i in 0..4 {
        out[(i, i)] = c(m[(i, i)].re, 0.0);
        for j in 0..i {
            out[(j, i)] = m[(i, j)].conj();
        }
    }
    out
}

/// `|Φ+⟩⟨Φ+|`, the Choi state of the identity channel.
pub fn bell_choi() -> ChoiState {
    choi_of_unitary(&ComplexMatrix::identity(2)).expect("identity is unitary")
}

#[derive(Debug, Clone, PartialEq)]
pub struct PaperFixtures {
    pub probes: Vec<DensityMatrix>,
    pub povms: PovmSet,
    pub table1_states: Vec<DensityMatrix>,
    pub table1_delta: f64,
    pub table1_distances: [f64; 4],
    pub table2_published: ComplexMatrix,
    pub table2_symmetrized: ComplexMatrix,
    pub table2_delta: f64,
    pub table2_delta_tilde: f64,
    pub bell_choi: ChoiState,
    pub shots: u64,
    pub cl: f64,
}

pub fn paper_fixtures() -> PaperFixtures {
    PaperFixtures {
        probes: tetrahedron_probes(),
        povms: calibrated_povms(),
        table1_states: table1_states(),
        table1_delta: PUBLISHED_DELTA,
        table1_distances: PUBLISHED_STATE_DISTANCES,
        table2_published: table2_published(),
        table2_symmetrized: table2_symmetrized(),
        table2_delta: PUBLISHED_PROCESS_DELTA,
        table2_delta_tilde: PUBLISHED_PROCESS_DELTA_TILDE,
        bell_choi: bell_choi(),
        shots: SHOTS_PER_SETTING,
        cl: PUBLISHED_CL,
    }
}

/// `fixtures/table1.json`
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table1File {
    pub states: Vec<ComplexMatrix>,
    pub delta: f64,
    pub distances: Vec<f64>,
    pub cl: f64,
    pub shots: u64,
}

/// `fixtures/table2.json`
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table2File {
    pub choi_published: ComplexMatrix,
    pub choi_symmetrized: ComplexMatrix,
    #[serde(rename = "Delta")]
    pub delta: f64,
    #[serde(rename = "Delta_tilde")]
    pub delta_tilde: f64,
    pub cl: f64,
}

/// `fixtures/probes.json`
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbesFile {
    pub probes: Vec<ComplexMatrix>,
}

impl ProbesFile {
    pub fn into_states(self) -> crate::error::Result<Vec<DensityMatrix>> {
        self.probes.into_iter().map(DensityMatrix::new).collect()
    }
}

impl PaperFixtures {
    pub fn table1_file(&self) -> Table1File {
        Table1File {
            states: self
                .table1_states
                .iter()
                .map(|s| s.matrix().clone())
                .collect(),
            delta: self.table1_delta,
            distances: self.table1_distances.to_vec(),
            cl: self.cl,
            shots: self.shots,
        }
    }

    pub fn table2_file(&self) -> Table2File {
        Table2File {
            choi_published: self.table2_published.clone(),
            choi_symmetrized: self.table2_symmetrized.clone(),
            delta: self.table2_delta,
            delta_tilde: self.table2_delta_tilde,
            cl: self.cl,
        }
    }

    pub fn probes_file(&self) -> ProbesFile {
        ProbesFile {
            probes: self.probes.iter().map(|s| s.matrix().clone()).collect(),
        }
    }
}
