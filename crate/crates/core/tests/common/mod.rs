#![allow(dead_code)]

use num_complex::Complex64;
use pgtomo::operator::{
    hermitian_eig, partial_trace, tensor_product, ComplexMatrix, DensityMatrix, Keep,
};
use pgtomo::process::ChoiState;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn ginibre(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
    let data = (0..rows * cols)
        .map(|_| Complex64::new(StandardNormal.sample(rng), StandardNormal.sample(rng)))
        .collect();
    ComplexMatrix::from_vec(rows, cols, data).unwrap()
}

pub fn random_hermitian(d: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
    ginibre(d, d, rng).hermitian_part()
}

/// `GG†/tr(GG†)` with `rank` columns.
pub fn random_state(d: usize, rank: usize, rng: &mut ChaCha8Rng) -> DensityMatrix {
    let g = ginibre(d, rank, rng);
    let m = g.matmul(&g.adjoint());
    let t = m.trace().re;
    DensityMatrix::new(m.scale_real(1.0 / t).hermitian_part()).unwrap()
}

/// `exp(iH)` for a random Hermitian `H`.
pub fn random_unitary(d: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
    let eig = hermitian_eig(&random_hermitian(d, rng).scale_real(3.0)).unwrap();
    let mut u = ComplexMatrix::zeros(d, d);
    for k in 0..d {
        let v = eig.vector(k);
        u = &u + &ComplexMatrix::outer(&v, &v).scale(Complex64::from_polar(1.0, eig.values[k]));
    }
    u
}

/// `f(M) = V f(Λ) V†` for Hermitian `M`.
pub fn spectral_map(m: &ComplexMatrix, f: impl Fn(f64) -> f64) -> ComplexMatrix {
    let eig = hermitian_eig(m).unwrap();
    let values: Vec<f64> = eig.values.iter().map(|&v| f(v)).collect();
    eig.reconstruct_with(&values)
}

/// Random CPTP Choi state: a full-rank positive operator rescaled so the
/// output partial trace equals `I/d_in`.
pub fn random_choi(d_in: usize, d_out: usize, rng: &mut ChaCha8Rng) -> ChoiState {
    let n = d_in * d_out;
    let g = ginibre(n, n, rng);
    let x = g.matmul(&g.adjoint()).hermitian_part();
    let a = partial_trace(&x, d_in, d_out, Keep::First).unwrap();
    let a_inv_sqrt = spectral_map(&a, |v| 1.0 / v.sqrt());
    let k = tensor_product(&a_inv_sqrt, &ComplexMatrix::identity(d_out));
    let choi = k
        .matmul(&x)
        .matmul(&k)
        .scale_real(1.0 / d_in as f64)
        .hermitian_part();
    ChoiState::physical(choi, d_in, d_out).unwrap()
}

/// Nearest unit-trace PSD matrix by bisection on the eigenvalue shift `τ`
/// with `Σ max(λ_i − τ, 0) = 1`.
pub fn simplex_projection_oracle(m: &ComplexMatrix) -> ComplexMatrix {
    let eig = hermitian_eig(&m.hermitian_part()).unwrap();
    let mass = |tau: f64| eig.values.iter().map(|&v| (v - tau).max(0.0)).sum::<f64>();
    let mut lo = eig.values.iter().cloned().fold(f64::INFINITY, f64::min) - 1.0;
    let mut hi = eig.values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mass(mid) > 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let tau = 0.5 * (lo + hi);
    let values: Vec<f64> = eig.values.iter().map(|&v| (v - tau).max(0.0)).collect();
    eig.reconstruct_with(&values)
}

/// Random POVM with `outcomes` effects `S^{-1/2} G_m G_m† S^{-1/2}`.
pub fn random_povm_effects(d: usize, outcomes: usize, rng: &mut ChaCha8Rng) -> Vec<ComplexMatrix> {
    let raw: Vec<ComplexMatrix> = (0..outcomes)
        .map(|_| {
            let g = ginibre(d, d, rng);
            g.matmul(&g.adjoint())
        })
        .collect();
    let mut s = ComplexMatrix::zeros(d, d);
    for r in &raw {
        s = &s + r;
    }
    let s_inv_sqrt = spectral_map(&s.hermitian_part(), |v| 1.0 / v.sqrt());
    raw.iter()
        .map(|r| s_inv_sqrt.matmul(r).matmul(&s_inv_sqrt).hermitian_part())
        .collect()
}

/// `I/d + scale·H₀` with `H₀` a random traceless Hermitian matrix.
pub fn random_unit_trace_hermitian(d: usize, scale: f64, rng: &mut ChaCha8Rng) -> ComplexMatrix {
    let h = random_hermitian(d, rng);
    let t = h.trace().re / d as f64;
    let traceless = &h - &ComplexMatrix::identity(d).scale_real(t);
    &ComplexMatrix::identity(d).scale_real(1.0 / d as f64) + &traceless.scale_real(scale)
}
