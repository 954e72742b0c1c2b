//! Precision-guaranteed process tomography through the Choi state.
//!
//! Each probe `ρ_in,k` is sent through the channel and its output is
//! reconstructed by state tomography. Writing `|n⟩⟨m| = Σ_k C^k_{n,m} ρ_in,k`,
//! the Choi state is assembled as
//!
//! ```text
//! ρ_E = (1/d_in) Σ_{n,m} |n⟩⟨m| ⊗ Σ_k C^k_{n,m} ρ_out,k
//! ```
//!
//! (input factor first), projected onto physical Choi states, and certified
//! with the radius `Δ = (δ/d_in) √(Σ_{k,k'} |Σ_{n,m} C^k_{n,m} (C^{k'}_{n,m})*|)`.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Result, TomoError};
use crate::measurement::{
    build_design, exact_frequencies, simulate_counts, MeasurementRecord, PovmSet,
};
use crate::operator::{
    gell_mann_basis, hermitian_eig, hs_distance, partial_trace, tensor_product, ComplexMatrix,
    DensityMatrix, Keep, ZERO,
};
use crate::parallel::{derive_seed, map_indexed, Execution};
use crate::state::{
    enm_project, estimate_with_design, EnmMode, PrecisionCertificate, PrecisionSpec, StateData,
    StateEstimate, StateTomographyConfig,
};

/// Tolerance on Choi-state invariants.
pub const CHOI_TOL: f64 = 1e-8;

/// Condition-number threshold for the probe frame operator.
pub const MAX_PROBE_CONDITION: f64 = 1e12;

/// Stopping tolerance (HS norm of successive iterates) for [`project_physical`].
pub const PROJECTION_TOL: f64 = 1e-8;

pub const PROJECTION_MAX_ITER: usize = 10_000;

/// Choi matrix on `H_in ⊗ H_out`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChoiState {
    matrix: ComplexMatrix,
    d_in: usize,
    d_out: usize,
}

impl ChoiState {
    /// Hermitian, unit-trace operator of size `d_in·d_out`; positivity and
    /// trace preservation are not required (see [`ChoiState::physical`]).
    pub fn new(matrix: ComplexMatrix, d_in: usize, d_out: usize) -> Result<Self> {
        let n = matrix.dim()?;
        if n != d_in * d_out || d_in == 0 {
            return Err(TomoError::DimensionMismatch {
                context: "Choi matrix",
                expected: d_in * d_out,
                found: n,
            });
        }
        let deviation = matrix.hermiticity_error();
        if deviation > CHOI_TOL {
            return Err(TomoError::NotHermitian { deviation });
        }
        let trace = matrix.trace().re;
        if (trace - 1.0).abs() > CHOI_TOL {
            return Err(TomoError::NotUnitTrace { trace });
        }
        Ok(Self {
            matrix,
            d_in,
            d_out,
        })
    }

    /// Like [`ChoiState::new`] and additionally PSD with `tr_out = I/d_in`.
    pub fn physical(matrix: ComplexMatrix, d_in: usize, d_out: usize) -> Result<Self> {
        let choi = Self::new(matrix, d_in, d_out)?;
        let min_eigenvalue = choi.min_eigenvalue();
        if min_eigenvalue < -CHOI_TOL {
            return Err(TomoError::NotPositive { min_eigenvalue });
        }
        let deviation = choi.tp_deviation();
        if deviation > CHOI_TOL {
            return Err(TomoError::NotTracePreserving { deviation });
        }
        Ok(choi)
    }

    /// Square matrix with equal input and output dimensions.
    pub fn square(matrix: ComplexMatrix) -> Result<Self> {
        let n = matrix.dim()?;
        let d = (n as f64).sqrt().round() as usize;
        if d * d != n {
            return Err(TomoError::InvalidArgument(format!(
                "Choi matrix of size {n} is not d²×d²"
            )));
        }
        Self::new(matrix, d, d)
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn d_in(&self) -> usize {
        self.d_in
    }

    pub fn d_out(&self) -> usize {
        self.d_out
    }

    pub fn min_eigenvalue(&self) -> f64 {
        hermitian_eig(&self.matrix)
            .map(|e| e.min_value())
            .unwrap_or(f64::NAN)
    }

    /// `‖tr_out ρ − I/d_in‖_max`
    pub fn tp_deviation(&self) -> f64 {
        let reduced = partial_trace(&self.matrix, self.d_in, self.d_out, Keep::First)
            .expect("dimensions checked at construction");
        reduced.max_abs_diff(&ComplexMatrix::identity(self.d_in).scale_real(1.0 / self.d_in as f64))
    }

    pub fn is_physical(&self, tol: f64) -> bool {
        self.min_eigenvalue() >= -tol && self.tp_deviation() <= tol
    }
}

impl AsRef<ComplexMatrix> for ChoiState {
    fn as_ref(&self) -> &ComplexMatrix {
        &self.matrix
    }
}

/// `(1/d_in) Σ_{n,m} |n⟩⟨m| ⊗ E(|n⟩⟨m|)` for a linear map `E`.
pub fn choi_from_map(
    d_in: usize,
    d_out: usize,
    map: impl Fn(&ComplexMatrix) -> ComplexMatrix,
) -> Result<ChoiState> {
    let mut out = ComplexMatrix::zeros(d_in * d_out, d_in * d_out);
    for n in 0..d_in {
        for m in 0..d_in {
            let image = map(&ComplexMatrix::unit(d_in, n, m));
            if image.rows() != d_out || image.cols() != d_out {
                return Err(TomoError::DimensionMismatch {
                    context: "channel output",
                    expected: d_out,
                    found: image.rows(),
                });
            }
            out += &tensor_product(&ComplexMatrix::unit(d_in, n, m), &image);
        }
    }
    ChoiState::new(out.scale_real(1.0 / d_in as f64), d_in, d_out)
}

/// Coefficients `C^k_{n,m}` with `|n⟩⟨m| = Σ_k C^k_{n,m} ρ_in,k`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientTensor {
    d_in: usize,
    num_probes: usize,
    /// Index `((n·d_in + m)·M + k)`.
    entries: Vec<Complex64>,
}

impl CoefficientTensor {
    pub fn d_in(&self) -> usize {
        self.d_in
    }

    pub fn num_probes(&self) -> usize {
        self.num_probes
    }

    pub fn get(&self, n: usize, m: usize, k: usize) -> Complex64 {
        self.entries[(n * self.d_in + m) * self.num_probes + k]
    }

    /// `C^k_{n,m}` for all `k`.
    pub fn coefficients(&self, n: usize, m: usize) -> &[Complex64] {
        let start = (n * self.d_in + m) * self.num_probes;
        &self.entries[start..start + self.num_probes]
    }

    /// `G_{k,k'} = Σ_{n,m} C^k_{n,m} (C^{k'}_{n,m})*`
    pub fn gram(&self) -> ComplexMatrix {
        let mut g = ComplexMatrix::zeros(self.num_probes, self.num_probes);
        for nm in 0..self.d_in * self.d_in {
            let c = &self.entries[nm * self.num_probes..(nm + 1) * self.num_probes];
            for k in 0..self.num_probes {
                for kp in 0..self.num_probes {
                    g[(k, kp)] += c[k] * c[kp].conj();
                }
            }
        }
        g
    }
}

/// Solves `|n⟩⟨m| = Σ_k C^k_{n,m} ρ_in,k` for every matrix unit.
///
/// With `P` the `d²×M` matrix of vectorized probes, the solution is the
/// minimum-norm `c = P†(PP†)⁻¹ vec(|n⟩⟨m|)`, which is the unique solution
/// when `M = d²`.
pub fn decompose_coefficients(probes: &[DensityMatrix]) -> Result<CoefficientTensor> {
    let first = probes
        .first()
        .ok_or_else(|| TomoError::InvalidArgument("no probe states".into()))?;
    let d = first.dim();
    if let Some(p) = probes.iter().find(|p| p.dim() != d) {
        return Err(TomoError::DimensionMismatch {
            context: "probe state",
            expected: d,
            found: p.dim(),
        });
    }
    let num_probes = probes.len();
    let d2 = d * d;
    if num_probes < d2 {
        return Err(TomoError::ProbesDoNotSpan {
            condition: f64::INFINITY,
        });
    }
    let mut p = ComplexMatrix::zeros(d2, num_probes);
    for (k, probe) in probes.iter().enumerate() {
        for (r, &z) in probe.matrix().as_slice().iter().enumerate() {
            p[(r, k)] = z;
        }
    }
    let p_adj = p.adjoint();
    let frame = p.matmul(&p_adj);
    let eig = hermitian_eig(&frame)?;
    let max = eig.values[0];
    let min = eig.min_value();
    let condition = if min > 0.0 { max / min } else { f64::INFINITY };
    if condition.is_nan() || condition > MAX_PROBE_CONDITION {
        return Err(TomoError::ProbesDoNotSpan { condition });
    }
    let inv: Vec<f64> = eig.values.iter().map(|w| 1.0 / w).collect();
    // P†(PP†)⁻¹ ; column r gives the coefficients of the r-th matrix unit
    let solver = p_adj.matmul(&eig.reconstruct_with(&inv));
    let mut entries = Vec::with_capacity(d2 * num_probes);
    for r in 0..d2 {
        for k in 0..num_probes {
            entries.push(solver[(k, r)]);
        }
    }
    Ok(CoefficientTensor {
        d_in: d,
        num_probes,
        entries,
    })
}

/// `(1/d_in) Σ_{n,m} |n⟩⟨m| ⊗ Σ_k C^k_{n,m} out_k` (pre-projection Choi).
pub fn assemble_choi<M: AsRef<ComplexMatrix>>(
    coeffs: &CoefficientTensor,
    outputs: &[M],
) -> Result<ComplexMatrix> {
    if outputs.len() != coeffs.num_probes {
        return Err(TomoError::DimensionMismatch {
            context: "number of output states",
            expected: coeffs.num_probes,
            found: outputs.len(),
        });
    }
    let d_out = outputs[0].as_ref().dim()?;
    for o in outputs {
        if o.as_ref().dim()? != d_out {
            return Err(TomoError::DimensionMismatch {
                context: "output state",
                expected: d_out,
                found: o.as_ref().rows(),
            });
        }
    }
    let d_in = coeffs.d_in;
    let scale = 1.0 / d_in as f64;
    let mut choi = ComplexMatrix::zeros(d_in * d_out, d_in * d_out);
    for n in 0..d_in {
        for m in 0..d_in {
            for (&c, out) in coeffs.coefficients(n, m).iter().zip(outputs) {
                if c == ZERO {
                    continue;
                }
                let w = c * scale;
                let out = out.as_ref();
                for i in 0..d_out {
                    for j in 0..d_out {
                        choi[(n * d_out + i, m * d_out + j)] += w * out[(i, j)];
                    }
                }
            }
        }
    }
    Ok(choi)
}

/// Projected Choi state with Dykstra diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct Projection {
    pub choi: ChoiState,
    pub iterations: usize,
    /// HS norm of the last iterate update.
    pub residual: f64,
}

/// Nearest (Frobenius) physical Choi state, by Dykstra's alternating
/// projections between the PSD cone and the affine set `tr_out X = I/d_in`.
pub fn project_physical(raw: &ComplexMatrix, d_in: usize, d_out: usize) -> Result<Projection> {
    let n = raw.dim()?;
    if n != d_in * d_out {
        return Err(TomoError::DimensionMismatch {
            context: "Choi matrix",
            expected: d_in * d_out,
            found: n,
        });
    }
    let deviation = raw.hermiticity_error();
    if deviation > CHOI_TOL {
        return Err(TomoError::NotHermitian { deviation });
    }
    let mut x = raw.hermitian_part();
    let mut p = ComplexMatrix::zeros(n, n);
    let mut q = ComplexMatrix::zeros(n, n);
    let mut residual = f64::INFINITY;
    for iteration in 1..=PROJECTION_MAX_ITER {
        let y = project_psd(&(&x + &p))?;
        p = &(&x + &p) - &y;
        let next = project_trace_preserving(&(&y + &q), d_in, d_out);
        q = &(&y + &q) - &next;
        residual = hs_distance(&next, &x)?;
        x = next;
        if residual < PROJECTION_TOL && hermitian_eig(&x)?.min_value() >= -CHOI_TOL {
            let choi = ChoiState::physical(x.hermitian_part(), d_in, d_out)?;
            return Ok(Projection {
                choi,
                iterations: iteration,
                residual,
            });
        }
    }
    Err(TomoError::ProjectionNotConverged {
        iterations: PROJECTION_MAX_ITER,
        residual,
    })
}

fn project_psd(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let eig = hermitian_eig(m)?;
    if eig.min_value() >= 0.0 {
        return Ok(m.hermitian_part());
    }
    let clipped: Vec<f64> = eig.values.iter().map(|&w| w.max(0.0)).collect();
    Ok(eig.reconstruct_with(&clipped))
}

/// `X + ((I/d_in − tr_out X)/d_out) ⊗ I`
fn project_trace_preserving(m: &ComplexMatrix, d_in: usize, d_out: usize) -> ComplexMatrix {
    let reduced = partial_trace(m, d_in, d_out, Keep::First).expect("square by construction");
    let gap = &ComplexMatrix::identity(d_in).scale_real(1.0 / d_in as f64) - &reduced;
    m + &tensor_product(
        &gap.scale_real(1.0 / d_out as f64),
        &ComplexMatrix::identity(d_out),
    )
}

/// `√(Σ_{k,k'} |G_{k,k'}|)`, the factor converting state-level `δ` into
/// process-level `Δ` (before division by `d_in`).
pub fn score_factor(coeffs: &CoefficientTensor) -> f64 {
    coeffs
        .gram()
        .as_slice()
        .iter()
        .map(|z| z.norm())
        .sum::<f64>()
        .sqrt()
}

/// `(Δ, score_factor)` with `Δ = δ · score_factor / d_in`.
pub fn delta_bound(coeffs: &CoefficientTensor, delta_state: f64) -> (f64, f64) {
    let score = score_factor(coeffs);
    (delta_state * score / coeffs.d_in as f64, score)
}

/// `Δ̃ = Δ + Δ_HS(ρ_rec, ρ_target)`
pub fn process_target_bound(
    choi_rec: &ChoiState,
    choi_target: &ChoiState,
    delta: f64,
) -> Result<f64> {
    if (choi_rec.d_in, choi_rec.d_out) != (choi_target.d_in, choi_target.d_out) {
        return Err(TomoError::DimensionMismatch {
            context: "Choi target",
            expected: choi_rec.matrix.rows(),
            found: choi_target.matrix.rows(),
        });
    }
    Ok(delta + hs_distance(&choi_rec.matrix, &choi_target.matrix)?)
}

/// `d_in · tr_in[(ρᵀ ⊗ I) ρ_E]` without validation.
pub fn apply_choi_raw(choi: &ChoiState, rho_in: &ComplexMatrix) -> Result<ComplexMatrix> {
    let d_in = rho_in.dim()?;
    if d_in != choi.d_in {
        return Err(TomoError::DimensionMismatch {
            context: "channel input",
            expected: choi.d_in,
            found: d_in,
        });
    }
    let d_out = choi.d_out;
    let mut out = ComplexMatrix::zeros(d_out, d_out);
    for k in 0..d_in {
        for i in 0..d_in {
            let r = rho_in[(k, i)] * d_in as f64;
            if r == ZERO {
                continue;
            }
            for j in 0..d_out {
                for l in 0..d_out {
                    out[(j, l)] += r * choi.matrix[(k * d_out + j, i * d_out + l)];
                }
            }
        }
    }
    Ok(out)
}

/// Channel output for a physical Choi state. Roundoff-level violations
/// (up to [`CHOI_TOL`]) are removed by the state projection.
pub fn apply_choi(choi: &ChoiState, rho_in: &DensityMatrix) -> Result<DensityMatrix> {
    let raw = apply_choi_raw(choi, rho_in.matrix())?.hermitian_part();
    match DensityMatrix::new(raw.clone()) {
        Ok(state) => Ok(state),
        Err(_) => {
            let relaxed = DensityMatrix::with_tolerance(raw.clone(), CHOI_TOL)?;
            let trace = relaxed.matrix().trace().re;
            enm_project(
                &relaxed.into_matrix().scale_real(1.0 / trace),
                EnmMode::HsProjection,
            )
        }
    }
}

/// Process radius `Δ` and the state-level quantities it derives from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProcessCertificate {
    pub delta_state: f64,
    pub cl: f64,
    pub cl_raw: f64,
    #[serde(rename = "Delta")]
    pub delta: f64,
    #[serde(rename = "Delta_tilde", skip_serializing_if = "Option::is_none")]
    pub delta_tilde: Option<f64>,
    pub score_factor: f64,
    pub d_in: usize,
}

impl ProcessCertificate {
    pub fn check_consistency(&self, tol: f64) -> bool {
        (self.delta - self.delta_state * self.score_factor / self.d_in as f64).abs() <= tol
    }
}

/// Where output-state data comes from.
#[derive(Debug, Clone, PartialEq)]
pub enum ProcessData {
    /// Sample counts from the outputs of a known channel.
    Simulate { truth: ChoiState, seed: u64 },
    /// Exact output probabilities of a known channel (infinite-shot limit).
    Exact { truth: ChoiState },
    /// Measured counts, one record per probe.
    Counts(Vec<MeasurementRecord>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProcessTomographyConfig {
    /// Shots per measurement setting; ignored for [`ProcessData::Counts`],
    /// whose records carry their own totals.
    pub shots: Vec<u64>,
    pub precision: PrecisionSpec,
    pub enm_mode: EnmMode,
    pub target: Option<ChoiState>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProcessResult {
    pub choi_rec: ChoiState,
    pub choi_raw: ComplexMatrix,
    pub outputs: Vec<StateEstimate>,
    pub state_certificate: PrecisionCertificate,
    pub certificate: ProcessCertificate,
    pub projection_iterations: usize,
    pub projection_residual: f64,
}

/// Probe outputs → state tomography → Choi assembly → projection → `Δ`, `Δ̃`.
pub fn run_process_tomography(
    data: &ProcessData,
    probes: &[DensityMatrix],
    povms: &PovmSet,
    config: &ProcessTomographyConfig,
) -> Result<ProcessResult> {
    let coeffs = decompose_coefficients(probes)?;
    let d_out = povms.dim();
    let basis = gell_mann_basis(d_out);
    let design = build_design(povms, &basis)?;
    let state_config = StateTomographyConfig {
        precision: config.precision,
        enm_mode: config.enm_mode,
        target: None,
    };

    let per_probe: Vec<StateData> = match data {
        ProcessData::Simulate { truth, seed } => {
            check_truth(truth, probes, d_out)?;
            probes
                .iter()
                .enumerate()
                .map(|(k, probe)| {
                    let out = apply_choi(truth, probe)?;
                    let rec =
                        simulate_counts(&out, povms, &config.shots, derive_seed(*seed, k as u64))?;
                    Ok(StateData::Counts(rec))
                })
                .collect::<Result<_>>()?
        }
        ProcessData::Exact { truth } => {
            check_truth(truth, probes, d_out)?;
            probes
                .iter()
                .map(|probe| {
                    let out = apply_choi(truth, probe)?;
                    Ok(StateData::Frequencies {
                        freqs: exact_frequencies(&out, povms)?,
                        shots: config.shots.clone(),
                    })
                })
                .collect::<Result<_>>()?
        }
        ProcessData::Counts(records) => {
            if records.len() != probes.len() {
                return Err(TomoError::DimensionMismatch {
                    context: "count records per probe",
                    expected: probes.len(),
                    found: records.len(),
                });
            }
            if records.windows(2).any(|w| w[0].shots() != w[1].shots()) {
                return Err(TomoError::MixedSetups);
            }
            records.iter().cloned().map(StateData::Counts).collect()
        }
    };

    let mut outputs = Vec::with_capacity(per_probe.len());
    let mut state_certificate = None;
    for d in &per_probe {
        let (est, cert) = estimate_with_design(d, &design, &basis, &state_config)?;
        outputs.push(est);
        state_certificate.get_or_insert(cert);
    }
    let state_certificate = state_certificate.expect("at least one probe");

    let rho_enm: Vec<&DensityMatrix> = outputs.iter().map(|o| &o.rho_enm).collect();
    let choi_raw = assemble_choi(&coeffs, &rho_enm)?;
    let projection = project_physical(&choi_raw, coeffs.d_in, d_out)?;
    let (delta, score) = delta_bound(&coeffs, state_certificate.delta);
    let delta_tilde = config
        .target
        .as_ref()
        .map(|t| process_target_bound(&projection.choi, t, delta))
        .transpose()?;

    Ok(ProcessResult {
        certificate: ProcessCertificate {
            delta_state: state_certificate.delta,
            cl: state_certificate.cl,
            cl_raw: state_certificate.cl_raw,
            delta,
            delta_tilde,
            score_factor: score,
            d_in: coeffs.d_in,
        },
        choi_rec: projection.choi,
        choi_raw,
        outputs,
        state_certificate,
        projection_iterations: projection.iterations,
        projection_residual: projection.residual,
    })
}

fn check_truth(truth: &ChoiState, probes: &[DensityMatrix], d_out: usize) -> Result<()> {
    if truth.d_out != d_out {
        return Err(TomoError::DimensionMismatch {
            context: "channel output vs POVM",
            expected: d_out,
            found: truth.d_out,
        });
    }
    if truth.d_in != probes[0].dim() {
        return Err(TomoError::DimensionMismatch {
            context: "channel input vs probes",
            expected: probes[0].dim(),
            found: truth.d_in,
        });
    }
    Ok(())
}

/// JSON report of one process tomography.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProcessReport {
    pub choi_rec: ComplexMatrix,
    pub choi_enm_raw: ComplexMatrix,
    #[serde(rename = "Delta")]
    pub delta: f64,
    #[serde(rename = "Delta_tilde", skip_serializing_if = "Option::is_none")]
    pub delta_tilde: Option<f64>,
    pub cl: f64,
    pub cl_raw: f64,
    pub score_factor: f64,
    pub delta_state: f64,
    pub projection_iterations: usize,
    pub projection_residual: f64,
}

impl From<&ProcessResult> for ProcessReport {
    fn from(r: &ProcessResult) -> Self {
        Self {
            choi_rec: r.choi_rec.matrix().clone(),
            choi_enm_raw: r.choi_raw.clone(),
            delta: r.certificate.delta,
            delta_tilde: r.certificate.delta_tilde,
            cl: r.certificate.cl,
            cl_raw: r.certificate.cl_raw,
            score_factor: r.certificate.score_factor,
            delta_state: r.certificate.delta_state,
            projection_iterations: r.projection_iterations,
            projection_residual: r.projection_residual,
        }
    }
}

/// Haar-random pure state from a normalized complex Gaussian vector.
pub fn random_pure_state(dim: usize, rng: &mut impl rand::Rng) -> DensityMatrix {
    loop {
        let v: Vec<Complex64> = (0..dim)
            .map(|_| Complex64::new(StandardNormal.sample(rng), StandardNormal.sample(rng)))
            .collect();
        if let Ok(state) = DensityMatrix::pure(&v) {
            return state;
        }
    }
}

/// Score factor of a probe set.
pub fn probe_score(probes: &[DensityMatrix]) -> Result<f64> {
    Ok(score_factor(&decompose_coefficients(probes)?))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbeSearchResult {
    pub d_in: usize,
    pub num_probes: usize,
    pub trials: usize,
    pub seed: u64,
    pub best_trial: usize,
    pub score_factor: f64,
    pub probes: Vec<DensityMatrix>,
}

/// Random search over pure-state probe sets for the smallest score factor.
///
/// Trial `t` draws its states from ChaCha8 seeded with
/// `derive_seed(seed, t)`; the minimum (ties to the lower trial index) is
/// independent of the execution mode.
pub fn probe_search(
    d_in: usize,
    num_probes: usize,
    trials: usize,
    seed: u64,
    exec: Execution,
) -> Result<ProbeSearchResult> {
    if trials == 0 {
        return Err(TomoError::InvalidArgument(
            "probe search needs at least one trial".into(),
        ));
    }
    if d_in == 0 || num_probes < d_in * d_in {
        return Err(TomoError::InvalidArgument(format!(
            "need at least {} probes for input dimension {d_in}",
            d_in * d_in
        )));
    }
    let draw = |t: usize| {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, t as u64));
        (0..num_probes)
            .map(|_| random_pure_state(d_in, &mut rng))
            .collect::<Vec<_>>()
    };
    let scores = map_indexed(exec, trials, |t| probe_score(&draw(t)).ok());
    let (best_trial, score) = scores
        .iter()
        .enumerate()
        .filter_map(|(t, s)| s.map(|s| (t, s)))
        .min_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)))
        .ok_or(TomoError::ProbesDoNotSpan {
            condition: f64::INFINITY,
        })?;
    Ok(ProbeSearchResult {
        d_in,
        num_probes,
        trials,
        seed,
        best_trial,
        score_factor: score,
        probes: draw(best_trial),
    })
}
