//! Gates, test channels, and the probe and measurement sets of the
//! two-qubit-gate characterization experiment.
//!
//! Rotation convention: `R_a(θ) = cos(θ/2) I − i sin(θ/2) σ_a`.

use std::f64::consts::FRAC_PI_2;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Result, TomoError};
use crate::measurement::{Povm, PovmSet};
use crate::operator::{gell_mann_basis, BlochVector, ComplexMatrix, DensityMatrix, I, ONE, ZERO};
use crate::process::{choi_from_map, ChoiState};

pub const UNITARY_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl FromStr for Axis {
    type Err = TomoError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "x" => Ok(Axis::X),
            "y" => Ok(Axis::Y),
            "z" => Ok(Axis::Z),
            other => Err(TomoError::InvalidArgument(format!(
                "invalid rotation axis '{other}'"
            ))),
        }
    }
}

pub fn pauli(axis: Axis) -> ComplexMatrix {
    let rows = match axis {
        Axis::X => [[ZERO, ONE], [ONE, ZERO]],
        Axis::Y => [[ZERO, -I], [I, ZERO]],
        Axis::Z => [[ONE, ZERO], [ZERO, -ONE]],
    };
    ComplexMatrix::from_rows(&rows.map(|r| r.to_vec())).expect("finite 2x2")
}

pub fn rotation_gate(axis: Axis, angle: f64) -> ComplexMatrix {
    let (s, c) = (angle / 2.0).sin_cos();
    &ComplexMatrix::identity(2).scale_real(c) + &pauli(axis).scale(Complex64::new(0.0, -s))
}

pub fn cnot() -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(4, 4);
    m[(0, 0)] = ONE;
    m[(1, 1)] = ONE;
    m[(2, 3)] = ONE;
    m[(3, 2)] = ONE;
    m
}

#[derive(Debug, Clone, PartialEq)]
pub enum GateSpec {
    Rotation {
        axis: Axis,
        angle: f64,
    },
    Identity {
        dim: usize,
    },
    Cnot,
    /// Applied in list order (first element acts first).
    Composed(Vec<GateSpec>),
}

impl GateSpec {
    pub fn matrix(&self) -> Result<ComplexMatrix> {
        let m = match self {
            GateSpec::Rotation { axis, angle } => rotation_gate(*axis, *angle),
            GateSpec::Identity { dim } => ComplexMatrix::identity(*dim),
            GateSpec::Cnot => cnot(),
            GateSpec::Composed(gates) => {
                let mut iter = gates.iter();
                let mut acc = iter
                    .next()
                    .ok_or_else(|| TomoError::InvalidArgument("empty gate composition".into()))?
                    .matrix()?;
                for g in iter {
                    let next = g.matrix()?;
                    if next.rows() != acc.rows() {
                        return Err(TomoError::DimensionMismatch {
                            context: "gate composition",
                            expected: acc.rows(),
                            found: next.rows(),
                        });
                    }
                    acc = next.matmul(&acc);
                }
                acc
            }
        };
        check_unitary(&m)?;
        Ok(m)
    }
}

/// Max-entry deviation of `U†U` from the identity.
pub fn unitarity_residual(u: &ComplexMatrix) -> Result<f64> {
    let d = u.dim()?;
    Ok(u.adjoint()
        .matmul(u)
        .max_abs_diff(&ComplexMatrix::identity(d)))
}

fn check_unitary(u: &ComplexMatrix) -> Result<()> {
    let residual = unitarity_residual(u)?;
    if residual > UNITARY_TOL {
        return Err(TomoError::NotUnitary { residual });
    }
    Ok(())
}

/// Choi state of `ρ ↦ UρU†`.
pub fn choi_of_unitary(u: &ComplexMatrix) -> Result<ChoiState> {
    check_unitary(u)?;
    let d = u.rows();
    choi_from_map(d, d, |m| m.conjugate_by(u))
}

/// `(1 − p)|Φ+⟩⟨Φ+| + p I/d²`
pub fn depolarizing_choi(dim: usize, p: f64) -> Result<ChoiState> {
    if !(0.0..=1.0).contains(&p) {
        return Err(TomoError::InvalidArgument(format!(
            "depolarizing probability must lie in [0, 1], got {p}"
        )));
    }
    let mixed = ComplexMatrix::identity(dim).scale_real(1.0 / dim as f64);
    choi_from_map(dim, dim, |m| {
        &m.scale_real(1.0 - p) + &mixed.scale(m.trace() * p)
    })
}

/// Qubit depolarizing channel.
pub fn choi_of_depolarizing(p: f64) -> Result<ChoiState> {
    depolarizing_choi(2, p)
}

#[derive(Debug, Clone, PartialEq)]
pub enum ChannelSpec {
    Unitary(GateSpec),
    Depolarizing { dim: usize, p: f64 },
    Choi(ChoiState),
}

impl ChannelSpec {
    pub fn choi(&self) -> Result<ChoiState> {
        match self {
            ChannelSpec::Unitary(g) => choi_of_unitary(&g.matrix()?),
            ChannelSpec::Depolarizing { dim, p } => depolarizing_choi(*dim, *p),
            ChannelSpec::Choi(c) => Ok(c.clone()),
        }
    }
}

/// Polar angle of the lower tetrahedron vertices, `arccos(−1/3)`.
pub fn tetrahedron_angle() -> f64 {
    (-1.0f64 / 3.0).acos()
}

/// Bloch vectors `(0,0,1)` and `(sin θ0 cos φ, sin θ0 sin φ, −1/3)` for
/// azimuths `φ ∈ {−90°, 150°, 30°}`.
pub fn tetrahedron_bloch_vectors() -> [[f64; 3]; 4] {
    let theta = tetrahedron_angle();
    let mut out = [[0.0, 0.0, 1.0]; 4];
    for (slot, phi) in out[1..].iter_mut().zip([-90.0f64, 150.0, 30.0]) {
        let phi = phi.to_radians();
        *slot = [
            theta.sin() * phi.cos(),
            theta.sin() * phi.sin(),
            theta.cos(),
        ];
    }
    out
}

/// Four pure qubit states forming a regular tetrahedron on the Bloch sphere.
pub fn tetrahedron_probes() -> Vec<DensityMatrix> {
    let basis = gell_mann_basis(2);
    tetrahedron_bloch_vectors()
        .iter()
        .map(|s| {
            let v = BlochVector::new(2, s.to_vec()).expect("length 3");
            crate::operator::bloch_to_density(&v, &basis)
                .and_then(|op| op.into_density())
                .expect("unit Bloch vectors are pure states")
        })
        .collect()
}

/// Calibrated computational-basis POVM of the readout.
pub fn calibrated_z_povm() -> Povm {
    Povm::new(vec![
        ComplexMatrix::from_real_diagonal(&[0.972, 0.093]),
        ComplexMatrix::from_real_diagonal(&[0.028, 0.907]),
    ])
    .expect("published effects form a POVM")
}

/// `Π^(i)_j = U_i† Π^(3)_j U_i` with `U_1 = R_y(π/2)`, `U_2 = R_x(π/2)`,
/// `U_3 = I`.
pub fn calibrated_povms() -> PovmSet {
    let z = calibrated_z_povm();
    let rotations = [
        rotation_gate(Axis::Y, FRAC_PI_2),
        rotation_gate(Axis::X, FRAC_PI_2),
        ComplexMatrix::identity(2),
    ];
    PovmSet::new(
        rotations
            .iter()
            .map(|u| z.rotated(u).expect("unitary rotation preserves the POVM"))
            .collect(),
    )
    .expect("three qubit POVMs")
}
