//! Traceless Hermitian operator basis and the Bloch parametrization
//! `ρ(s) = I/d + (s·λ)/2`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::eigen::hermitian_eig;
use super::matrix::{ComplexMatrix, I, ONE};
use crate::error::{Result, TomoError};

/// Hermitian, traceless elements `λ_i` with `tr(λ_i λ_j) = 2δ_ij`.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorBasis {
    dim: usize,
    elements: Vec<ComplexMatrix>,
}

impl OperatorBasis {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of elements, `d² − 1`.
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[ComplexMatrix] {
        &self.elements
    }

    /// Real coefficients `tr(m λ_i)` (real parts) for every element.
    pub fn coordinates(&self, m: &ComplexMatrix) -> Vec<f64> {
        self.elements
            .iter()
            .map(|l| m.trace_product(l).re)
            .collect()
    }

    /// `Σ_i c_i λ_i`
    pub fn combine(&self, coeffs: &[f64]) -> ComplexMatrix {
        assert_eq!(coeffs.len(), self.len());
        let mut out = ComplexMatrix::zeros(self.dim, self.dim);
        for (l, &c) in self.elements.iter().zip(coeffs) {
            if c != 0.0 {
                out += &l.scale_real(c);
            }
        }
        out
    }
}

/// Generalized Gell-Mann matrices in canonical order: all symmetric
/// `E_jk + E_kj`, then all antisymmetric `−i E_jk + i E_kj` (both over
/// `j < k` lexicographically), then the diagonal ladder `l = 1..d−1`.
///
/// For `d = 2` this is `(X, Y, Z)`.
pub fn gell_mann_basis(d: usize) -> OperatorBasis {
    assert!(d >= 1, "dimension must be positive");
    let mut elements = Vec::with_capacity(d * d - 1);
    let pairs: Vec<(usize, usize)> = (0..d)
        .flat_map(|j| (j + 1..d).map(move |k| (j, k)))
        .collect();
    for &(j, k) in &pairs {
        let mut m = ComplexMatrix::zeros(d, d);
        m[(j, k)] = ONE;
        m[(k, j)] = ONE;
        elements.push(m);
    }
    for &(j, k) in &pairs {
        let mut m = ComplexMatrix::zeros(d, d);
        m[(j, k)] = -I;
        m[(k, j)] = I;
        elements.push(m);
    }
    for l in 1..d {
        let norm = (2.0 / (l * (l + 1)) as f64).sqrt();
        let mut diag = vec![0.0; d];
        for v in diag.iter_mut().take(l) {
            *v = norm;
        }
        diag[l] = -(l as f64) * norm;
        elements.push(ComplexMatrix::from_real_diagonal(&diag));
    }
    OperatorBasis { dim: d, elements }
}

/// Real coordinates of a state in an [`OperatorBasis`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlochVector {
    dim: usize,
    s: Vec<f64>,
}

impl BlochVector {
    pub fn new(dim: usize, s: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(TomoError::InvalidArgument(
                "dimension must be positive".into(),
            ));
        }
        if s.len() != dim * dim - 1 {
            return Err(TomoError::DimensionMismatch {
                context: "Bloch vector length",
                expected: dim * dim - 1,
                found: s.len(),
            });
        }
        if s.iter().any(|v| !v.is_finite()) {
            return Err(TomoError::NonFinite);
        }
        Ok(Self { dim, s })
    }

    pub fn zero(dim: usize) -> Self {
        Self {
            dim,
            s: vec![0.0; dim * dim - 1],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.s
    }

    pub fn norm(&self) -> f64 {
        self.s.iter().map(|v| v * v).sum::<f64>().sqrt()
    }
}

/// Tolerance used for the Hermitian / unit-trace / PSD invariants of a state.
pub const STATE_TOL: f64 = 1e-10;

/// A physical quantum state: Hermitian, unit trace, positive semi-definite.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    /// Validates the state invariants at [`STATE_TOL`].
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        Self::with_tolerance(matrix, STATE_TOL)
    }

    pub fn with_tolerance(matrix: ComplexMatrix, tol: f64) -> Result<Self> {
        matrix.dim()?;
        let deviation = matrix.hermiticity_error();
        if deviation > tol {
            return Err(TomoError::NotHermitian { deviation });
        }
        let trace = matrix.trace().re;
        if (trace - 1.0).abs() > tol {
            return Err(TomoError::NotUnitTrace { trace });
        }
        let min_eigenvalue = hermitian_eig(&matrix)?.min_value();
        if min_eigenvalue < -tol {
            return Err(TomoError::NotPositive { min_eigenvalue });
        }
        Ok(Self { matrix })
    }

    /// `|ψ⟩⟨ψ|` for a (not necessarily normalized) vector.
    pub fn pure(psi: &[Complex64]) -> Result<Self> {
        let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if psi.is_empty() || norm == 0.0 || !norm.is_finite() {
            return Err(TomoError::InvalidArgument(
                "state vector must be nonzero".into(),
            ));
        }
        let v: Vec<Complex64> = psi.iter().map(|z| z / norm).collect();
        Ok(Self {
            matrix: ComplexMatrix::outer(&v, &v),
        })
    }

    /// Computational basis state `|k⟩⟨k|`.
    pub fn basis_state(dim: usize, k: usize) -> Self {
        Self {
            matrix: ComplexMatrix::unit(dim, k, k),
        }
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            matrix: ComplexMatrix::identity(dim).scale_real(1.0 / dim as f64),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }
}

impl AsRef<ComplexMatrix> for DensityMatrix {
    fn as_ref(&self) -> &ComplexMatrix {
        &self.matrix
    }
}

impl<'de> Deserialize<'de> for DensityMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        let m = ComplexMatrix::deserialize(deserializer)?;
        DensityMatrix::new(m).map_err(serde::de::Error::custom)
    }
}

/// Hermitian unit-trace operator `ρ(s)` together with a PSD flag.
///
/// Linear estimators can land outside the state space, so the matrix is kept
/// even when it is not a valid [`DensityMatrix`].
#[derive(Debug, Clone, PartialEq)]
pub struct BlochOperator {
    pub matrix: ComplexMatrix,
    pub is_physical: bool,
    pub min_eigenvalue: f64,
}

impl BlochOperator {
    pub fn into_density(self) -> Result<DensityMatrix> {
        DensityMatrix::new(self.matrix)
    }
}

/// `ρ(s) = I/d + (s·λ)/2`
pub fn bloch_to_density(s: &BlochVector, basis: &OperatorBasis) -> Result<BlochOperator> {
    if s.dim != basis.dim {
        return Err(TomoError::DimensionMismatch {
            context: "Bloch vector vs basis",
            expected: basis.dim,
            found: s.dim,
        });
    }
    let d = basis.dim;
    let mut matrix = basis.combine(&s.s).scale_real(0.5);
    matrix += &ComplexMatrix::identity(d).scale_real(1.0 / d as f64);
    let min_eigenvalue = hermitian_eig(&matrix)?.min_value();
    Ok(BlochOperator {
        is_physical: min_eigenvalue >= -STATE_TOL,
        min_eigenvalue,
        matrix,
    })
}

/// `s_i = tr(ρ λ_i)`
pub fn density_to_bloch(rho: &ComplexMatrix, basis: &OperatorBasis) -> Result<BlochVector> {
    let d = rho.dim()?;
    if d != basis.dim {
        return Err(TomoError::DimensionMismatch {
            context: "state vs basis",
            expected: basis.dim,
            found: d,
        });
    }
    BlochVector::new(d, basis.coordinates(rho))
}
