use nalgebra::DMatrix;
use num_complex::Complex64;

use super::matrix::{ComplexMatrix, ZERO};
use crate::error::{Result, TomoError};

/// Spectral decomposition of a Hermitian matrix.
///
/// Eigenvalues are sorted in descending order. Each eigenvector is scaled by
/// a unit phase so that its largest-magnitude component (first one on ties)
/// is real and positive.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    /// Column `i` is the eigenvector for `values[i]`.
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn vector(&self, i: usize) -> Vec<Complex64> {
        (0..self.dim()).map(|r| self.vectors[(r, i)]).collect()
    }

    pub fn min_value(&self) -> f64 {
        self.values.last().copied().unwrap_or(0.0)
    }

    /// `Σ_i w_i v_i v_i†` for replacement eigenvalues `w`.
    pub fn reconstruct_with(&self, values: &[f64]) -> ComplexMatrix {
        let n = self.dim();
        assert_eq!(values.len(), n);
        let mut out = ComplexMatrix::zeros(n, n);
        for (k, &w) in values.iter().enumerate() {
            if w == 0.0 {
                continue;
            }
            for i in 0..n {
                let vi = self.vectors[(i, k)] * w;
                for j in 0..n {
                    out[(i, j)] += vi * self.vectors[(j, k)].conj();
                }
            }
        }
        out
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.reconstruct_with(&self.values)
    }
}

/// Eigendecomposition of `(m + m†)/2`.
pub fn hermitian_eig(m: &ComplexMatrix) -> Result<HermitianEigen> {
    let n = m.dim()?;
    let h = m.hermitian_part();
    let dm = DMatrix::from_fn(n, n, |i, j| h[(i, j)]);
    let eig = dm.symmetric_eigen();

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        eig.eigenvalues[b]
            .partial_cmp(&eig.eigenvalues[a])
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.cmp(&b))
    });

    let mut values = Vec::with_capacity(n);
    let mut vectors = ComplexMatrix::zeros(n, n);
    for (col, &src) in order.iter().enumerate() {
        values.push(eig.eigenvalues[src]);
        let v: Vec<Complex64> = (0..n).map(|r| eig.eigenvectors[(r, src)]).collect();
        let phase = canonical_phase(&v);
        for (r, z) in v.into_iter().enumerate() {
            vectors[(r, col)] = z * phase;
        }
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(TomoError::NonFinite);
    }
    Ok(HermitianEigen { values, vectors })
}

/// Unit phase that makes the dominant component real positive.
fn canonical_phase(v: &[Complex64]) -> Complex64 {
    let mut best = ZERO;
    let mut best_norm = -1.0;
    for &z in v {
        // Components within 1e-12 of the running maximum keep the earlier index.
        if z.norm() > best_norm + 1e-12 {
            best = z;
            best_norm = z.norm();
        }
    }
    if best_norm <= 0.0 {
        Complex64::new(1.0, 0.0)
    } else {
        best.conj() / best_norm
    }
}
