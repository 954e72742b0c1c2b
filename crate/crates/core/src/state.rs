//! Precision-guaranteed state tomography.
//!
//! Frequencies are inverted linearly through the design matrix (LLS), the
//! result is projected onto the state space (ENM), and a Hoeffding-type
//! bound turns a Hilbert–Schmidt radius `δ` into a confidence level:
//!
//! ```text
//! CL = 1 − 2 Σ_α exp(−8 δ² N / ((d² − 1) c_α))
//! c_α = Σ_j (N / n_j) (max_m A_L[α,(j,m)] − min_m A_L[α,(j,m)])²
//! ```

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::error::{Result, TomoError};
use crate::measurement::{build_design, check_shape, DesignMatrix, MeasurementRecord, PovmSet};
use crate::operator::{
    bloch_to_density, hermitian_eig, hs_distance, BlochVector, ComplexMatrix, DensityMatrix,
    OperatorBasis,
};

/// Trace tolerance on inputs to [`enm_project`].
pub const ENM_TRACE_TOL: f64 = 1e-8;

/// Upper end of the initial bisection bracket in [`delta_for_cl`].
pub const DELTA_BRACKET: f64 = 10.0;

/// Absolute tolerance of the bisection in [`delta_for_cl`].
pub const DELTA_TOL: f64 = 1e-9;

/// How the LLS estimate is mapped back to a physical state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EnmMode {
    /// Exact Hilbert–Schmidt minimizer: eigenvalues projected onto the
    /// probability simplex.
    #[default]
    HsProjection,
    /// Drop negative eigenvalues, then rescale to unit trace.
    TruncateRenormalize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LlsEstimate {
    pub s_lls: BlochVector,
    /// Hermitian with unit trace; may have negative eigenvalues.
    pub rho_lls: ComplexMatrix,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateEstimate {
    pub s_lls: BlochVector,
    pub rho_lls: ComplexMatrix,
    pub rho_enm: DensityMatrix,
}

/// `s = A_L (f − a0)` and `ρ(s)`.
pub fn lls_estimate(
    record: &MeasurementRecord,
    design: &DesignMatrix,
    basis: &OperatorBasis,
) -> Result<LlsEstimate> {
    record.check_aligned(design)?;
    lls_from_frequencies(&record.frequencies(), design, basis)
}

/// LLS estimate from per-setting outcome frequencies.
pub fn lls_from_frequencies(
    freqs: &[Vec<f64>],
    design: &DesignMatrix,
    basis: &OperatorBasis,
) -> Result<LlsEstimate> {
    check_shape(freqs, design)?;
    if basis.dim() != design.dim() {
        return Err(TomoError::DimensionMismatch {
            context: "basis vs design",
            expected: design.dim(),
            found: basis.dim(),
        });
    }
    if freqs.iter().flatten().any(|f| !f.is_finite()) {
        return Err(TomoError::NonFinite);
    }
    let centered = DVector::from_iterator(
        design.a0().len(),
        freqs
            .iter()
            .flatten()
            .zip(design.a0())
            .map(|(f, a0)| f - a0),
    );
    let s = design.left_inverse() * centered;
    let s_lls = BlochVector::new(design.dim(), s.iter().copied().collect())?;
    let rho_lls = bloch_to_density(&s_lls, basis)?.matrix;
    Ok(LlsEstimate { s_lls, rho_lls })
}

/// Projects a Hermitian unit-trace operator onto the state space.
pub fn enm_project(rho_lls: &ComplexMatrix, mode: EnmMode) -> Result<DensityMatrix> {
    let trace = rho_lls.trace().re;
    if (trace - 1.0).abs() > ENM_TRACE_TOL {
        return Err(TomoError::NotUnitTrace { trace });
    }
    let eig = hermitian_eig(rho_lls)?;
    if eig.min_value() >= 0.0 {
        return DensityMatrix::new(rho_lls.hermitian_part().scale_real(1.0 / trace));
    }
    let values = match mode {
        EnmMode::HsProjection => project_to_simplex(&eig.values),
        EnmMode::TruncateRenormalize => {
            let kept: Vec<f64> = eig.values.iter().map(|&w| w.max(0.0)).collect();
            let total: f64 = kept.iter().sum();
            kept.into_iter().map(|w| w / total).collect()
        }
    };
    DensityMatrix::new(eig.reconstruct_with(&values))
}

/// Euclidean projection of a descending-sorted vector onto the probability
/// simplex (water-filling shift).
pub(crate) fn project_to_simplex(sorted_desc: &[f64]) -> Vec<f64> {
    let mut cumulative = 0.0;
    let mut shift = 0.0;
    for (k, &w) in sorted_desc.iter().enumerate() {
        cumulative += w;
        let candidate = (cumulative - 1.0) / (k + 1) as f64;
        if w - candidate > 0.0 {
            shift = candidate;
        }
    }
    sorted_desc.iter().map(|&w| (w - shift).max(0.0)).collect()
}

/// Hoeffding range coefficients `c_α`, one per basis direction.
pub fn compute_c_alphas(design: &DesignMatrix, shots: &[u64]) -> Result<Vec<f64>> {
    if shots.len() != design.num_settings() {
        return Err(TomoError::MisalignedRecord(format!(
            "{} shot totals for {} settings",
            shots.len(),
            design.num_settings()
        )));
    }
    if let Some(j) = shots.iter().position(|&n| n == 0) {
        return Err(TomoError::ZeroShots { setting: j });
    }
    let total: f64 = shots.iter().map(|&n| n as f64).sum();
    let al = design.left_inverse();
    Ok((0..al.nrows())
        .map(|alpha| {
            shots
                .iter()
                .enumerate()
                .map(|(j, &n)| {
                    let (lo, hi) = design
                        .setting_rows(j)
                        .map(|r| al[(alpha, r)])
                        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
                            (lo.min(v), hi.max(v))
                        });
                    (total / n as f64) * (hi - lo).powi(2)
                })
                .sum()
        })
        .collect())
}

/// Unclamped `1 − 2 Σ_α exp(−8δ²N/((d²−1)c_α))`; negative for small `δ·√N`.
pub fn confidence_level_raw(delta: f64, n_total: u64, c_alphas: &[f64], d: usize) -> f64 {
    let params = (d * d - 1) as f64;
    let scale = 8.0 * delta * delta * n_total as f64 / params;
    1.0 - 2.0
        * c_alphas
            .iter()
            .map(|&c| {
                if c > 0.0 {
                    (-scale / c).exp()
                } else if scale > 0.0 {
                    0.0
                } else {
                    1.0
                }
            })
            .sum::<f64>()
}

/// Confidence level clamped to `[0, 1]`.
pub fn confidence_level(delta: f64, n_total: u64, c_alphas: &[f64], d: usize) -> f64 {
    confidence_level_raw(delta, n_total, c_alphas, d).clamp(0.0, 1.0)
}

/// Smallest `δ` (to [`DELTA_TOL`]) whose confidence level reaches `target_cl`.
pub fn delta_for_cl(target_cl: f64, n_total: u64, c_alphas: &[f64], d: usize) -> Result<f64> {
    if !target_cl.is_finite() || target_cl >= 1.0 {
        return Err(TomoError::InvalidArgument(format!(
            "confidence level must be below 1, got {target_cl}"
        )));
    }
    if n_total == 0 {
        return Err(TomoError::ZeroShots { setting: 0 });
    }
    let cl = |delta: f64| confidence_level_raw(delta, n_total, c_alphas, d);
    if target_cl <= 0.0 || cl(0.0) >= target_cl {
        return Ok(0.0);
    }
    let mut lo = 0.0;
    let mut hi = DELTA_BRACKET;
    while cl(hi) < target_cl {
        lo = hi;
        hi *= 2.0;
        if !hi.is_finite() {
            return Err(TomoError::InvalidArgument(format!(
                "confidence level {target_cl} is unreachable"
            )));
        }
    }
    while hi - lo > DELTA_TOL {
        let mid = 0.5 * (lo + hi);
        if cl(mid) >= target_cl {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// `(δ0, δ̃) = (Δ_HS(ρ_enm, ρ_target), δ + δ0)`
pub fn state_target_bound(
    rho_enm: &DensityMatrix,
    rho_target: &DensityMatrix,
    delta: f64,
) -> Result<(f64, f64)> {
    let delta0 = hs_distance(rho_enm.matrix(), rho_target.matrix())?;
    Ok((delta0, delta + delta0))
}

/// Either a confidence level to reach or a radius to certify.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PrecisionSpec {
    Cl(f64),
    Delta(f64),
}

/// Hilbert–Schmidt radius and the confidence it holds with.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrecisionCertificate {
    pub delta: f64,
    pub cl: f64,
    pub cl_raw: f64,
    pub n_total: u64,
    pub c_alphas: Vec<f64>,
    pub dim: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta0: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta_tilde: Option<f64>,
}

impl PrecisionCertificate {
    /// Computes `δ` and `CL` from the measurement setup.
    pub fn for_setup(
        design: &DesignMatrix,
        shots: &[u64],
        precision: PrecisionSpec,
    ) -> Result<Self> {
        let c_alphas = compute_c_alphas(design, shots)?;
        let n_total: u64 = shots.iter().sum();
        let d = design.dim();
        let delta = match precision {
            PrecisionSpec::Cl(cl) => delta_for_cl(cl, n_total, &c_alphas, d)?,
            PrecisionSpec::Delta(delta) if delta >= 0.0 && delta.is_finite() => delta,
            PrecisionSpec::Delta(delta) => {
                return Err(TomoError::InvalidArgument(format!(
                    "delta must be nonnegative, got {delta}"
                )))
            }
        };
        let cl_raw = confidence_level_raw(delta, n_total, &c_alphas, d);
        Ok(Self {
            delta,
            cl: cl_raw.clamp(0.0, 1.0),
            cl_raw,
            n_total,
            c_alphas,
            dim: d,
            delta0: None,
            delta_tilde: None,
        })
    }

    /// Recomputes the confidence level from the stored fields.
    pub fn check_consistency(&self, tol: f64) -> bool {
        let cl = confidence_level(self.delta, self.n_total, &self.c_alphas, self.dim);
        let tilde_ok = match (self.delta0, self.delta_tilde) {
            (Some(d0), Some(dt)) => (dt - (self.delta + d0)).abs() <= tol,
            (None, None) => true,
            _ => false,
        };
        (cl - self.cl).abs() <= tol && tilde_ok
    }
}

/// Measured data fed to [`run_state_tomography`].
#[derive(Debug, Clone, PartialEq)]
pub enum StateData {
    Counts(MeasurementRecord),
    /// Pre-computed frequencies with the shot totals they came from.
    Frequencies {
        freqs: Vec<Vec<f64>>,
        shots: Vec<u64>,
    },
}

impl StateData {
    pub fn shots(&self) -> &[u64] {
        match self {
            StateData::Counts(r) => r.shots(),
            StateData::Frequencies { shots, .. } => shots,
        }
    }

    pub fn frequencies(&self) -> Vec<Vec<f64>> {
        match self {
            StateData::Counts(r) => r.frequencies(),
            StateData::Frequencies { freqs, .. } => freqs.clone(),
        }
    }
}

/// Options for [`run_state_tomography`].
#[derive(Debug, Clone, PartialEq)]
pub struct StateTomographyConfig {
    pub precision: PrecisionSpec,
    pub enm_mode: EnmMode,
    pub target: Option<DensityMatrix>,
}

impl StateTomographyConfig {
    pub fn with_cl(cl: f64) -> Self {
        Self {
            precision: PrecisionSpec::Cl(cl),
            enm_mode: EnmMode::default(),
            target: None,
        }
    }
}

/// Design → LLS → ENM → c_α → (δ, CL) → target bound.
pub fn run_state_tomography(
    data: &StateData,
    povms: &PovmSet,
    basis: &OperatorBasis,
    config: &StateTomographyConfig,
) -> Result<(StateEstimate, PrecisionCertificate)> {
    let design = build_design(povms, basis)?;
    estimate_with_design(data, &design, basis, config)
}

/// [`run_state_tomography`] with a prebuilt design (batch runs reuse it).
pub fn estimate_with_design(
    data: &StateData,
    design: &DesignMatrix,
    basis: &OperatorBasis,
    config: &StateTomographyConfig,
) -> Result<(StateEstimate, PrecisionCertificate)> {
    let lls = match data {
        StateData::Counts(record) => lls_estimate(record, design, basis)?,
        StateData::Frequencies { freqs, .. } => lls_from_frequencies(freqs, design, basis)?,
    };
    let rho_enm = enm_project(&lls.rho_lls, config.enm_mode)?;
    let mut cert = PrecisionCertificate::for_setup(design, data.shots(), config.precision)?;
    if let Some(target) = &config.target {
        let (delta0, delta_tilde) = state_target_bound(&rho_enm, target, cert.delta)?;
        cert.delta0 = Some(delta0);
        cert.delta_tilde = Some(delta_tilde);
    }
    Ok((
        StateEstimate {
            s_lls: lls.s_lls,
            rho_lls: lls.rho_lls,
            rho_enm,
        },
        cert,
    ))
}

/// JSON report of one state tomography.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateReport {
    pub rho_enm: ComplexMatrix,
    pub delta: f64,
    pub cl: f64,
    pub cl_raw: f64,
    pub c_alphas: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta0: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta_tilde: Option<f64>,
    pub n_total: u64,
    pub enm_mode: EnmMode,
}

impl StateReport {
    pub fn new(estimate: &StateEstimate, cert: &PrecisionCertificate, enm_mode: EnmMode) -> Self {
        Self {
            rho_enm: estimate.rho_enm.matrix().clone(),
            delta: cert.delta,
            cl: cert.cl,
            cl_raw: cert.cl_raw,
            c_alphas: cert.c_alphas.clone(),
            delta0: cert.delta0,
            delta_tilde: cert.delta_tilde,
            n_total: cert.n_total,
            enm_mode,
        }
    }
}
