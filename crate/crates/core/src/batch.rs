//! Repeated simulated runs: coverage estimates and confidence-level curves.
//!
//! Run `i` draws its data with `derive_seed(seed, i)`, so summaries are the
//! same under sequential and parallel execution.

use std::io::Write;

use serde::Serialize;

use crate::error::{Result, TomoError};
use crate::measurement::{build_design, simulate_counts, DesignMatrix, PovmSet};
use crate::operator::{gell_mann_basis, hs_distance, DensityMatrix};
use crate::parallel::{derive_seed, map_indexed, Execution};
use crate::process::{run_process_tomography, ChoiState, ProcessData, ProcessTomographyConfig};
use crate::state::{
    compute_c_alphas, confidence_level_raw, estimate_with_design, EnmMode, PrecisionSpec,
    StateData, StateTomographyConfig,
};

/// Fraction of runs whose estimate landed within the certified radius.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoverageSummary {
    pub runs: usize,
    pub hits: usize,
    pub fraction: f64,
    /// Certified radius (`δ` for states, `Δ` for processes).
    pub radius: f64,
    pub cl: f64,
    /// Distance to the truth for each run, in run order.
    pub distances: Vec<f64>,
}

impl CoverageSummary {
    fn from_runs(runs: Vec<(f64, f64)>, cl: f64) -> Result<Self> {
        let radius = runs
            .first()
            .map(|r| r.1)
            .ok_or_else(|| TomoError::InvalidArgument("coverage needs at least one run".into()))?;
        let hits = runs.iter().filter(|(d, r)| d <= r).count();
        Ok(Self {
            runs: runs.len(),
            hits,
            fraction: hits as f64 / runs.len() as f64,
            radius,
            cl,
            distances: runs.into_iter().map(|r| r.0).collect(),
        })
    }
}

/// Simulates `runs` state tomographies of `truth` at confidence `cl`.
#[allow(clippy::too_many_arguments)]
pub fn state_coverage(
    truth: &DensityMatrix,
    povms: &PovmSet,
    shots: &[u64],
    cl: f64,
    enm_mode: EnmMode,
    runs: usize,
    seed: u64,
    exec: Execution,
) -> Result<CoverageSummary> {
    if runs == 0 {
        return Err(TomoError::InvalidArgument(
            "coverage needs at least one run".into(),
        ));
    }
    let basis = gell_mann_basis(povms.dim());
    let design = build_design(povms, &basis)?;
    let config = StateTomographyConfig {
        precision: PrecisionSpec::Cl(cl),
        enm_mode,
        target: None,
    };
    let results = map_indexed(exec, runs, |i| -> Result<(f64, f64)> {
        let rec = simulate_counts(truth, povms, shots, derive_seed(seed, i as u64))?;
        let (est, cert) = estimate_with_design(&StateData::Counts(rec), &design, &basis, &config)?;
        Ok((
            hs_distance(est.rho_enm.matrix(), truth.matrix())?,
            cert.delta,
        ))
    });
    CoverageSummary::from_runs(results.into_iter().collect::<Result<_>>()?, cl)
}

/// Simulates `runs` process tomographies of `truth` at confidence `cl`.
#[allow(clippy::too_many_arguments)]
pub fn process_coverage(
    truth: &ChoiState,
    probes: &[DensityMatrix],
    povms: &PovmSet,
    shots: &[u64],
    cl: f64,
    enm_mode: EnmMode,
    runs: usize,
    seed: u64,
    exec: Execution,
) -> Result<CoverageSummary> {
    if runs == 0 {
        return Err(TomoError::InvalidArgument(
            "coverage needs at least one run".into(),
        ));
    }
    let config = ProcessTomographyConfig {
        shots: shots.to_vec(),
        precision: PrecisionSpec::Cl(cl),
        enm_mode,
        target: None,
    };
    let results = map_indexed(exec, runs, |i| -> Result<(f64, f64)> {
        let data = ProcessData::Simulate {
            truth: truth.clone(),
            seed: derive_seed(seed, i as u64),
        };
        let res = run_process_tomography(&data, probes, povms, &config)?;
        Ok((
            hs_distance(res.choi_rec.matrix(), truth.matrix())?,
            res.certificate.delta,
        ))
    });
    CoverageSummary::from_runs(results.into_iter().collect::<Result<_>>()?, cl)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClPoint {
    pub delta: f64,
    pub cl_raw: f64,
    pub cl_clamped: f64,
}

/// `steps` evenly spaced points from `min` to `max` inclusive.
pub fn delta_grid(min: f64, max: f64, steps: usize) -> Result<Vec<f64>> {
    if !(min.is_finite() && max.is_finite()) || min < 0.0 || min >= max || steps < 2 {
        return Err(TomoError::InvalidArgument(format!(
            "invalid delta grid: min {min}, max {max}, steps {steps} (need 0 <= min < max, steps >= 2)"
        )));
    }
    let h = (max - min) / (steps - 1) as f64;
    Ok((0..steps)
        .map(|i| {
            if i + 1 == steps {
                max
            } else {
                min + h * i as f64
            }
        })
        .collect())
}

/// Confidence level at each grid radius for a fixed setup.
pub fn cl_curve(
    design: &DesignMatrix,
    shots: &[u64],
    deltas: &[f64],
    exec: Execution,
) -> Result<Vec<ClPoint>> {
    let c_alphas = compute_c_alphas(design, shots)?;
    let n_total: u64 = shots.iter().sum();
    let d = design.dim();
    Ok(map_indexed(exec, deltas.len(), |i| {
        let delta = deltas[i];
        let cl_raw = confidence_level_raw(delta, n_total, &c_alphas, d);
        ClPoint {
            delta,
            cl_raw,
            cl_clamped: cl_raw.max(0.0),
        }
    }))
}

/// Writes `delta,cl_raw,cl_clamped` rows with a header line.
pub fn write_cl_csv<W: Write>(points: &[ClPoint], mut out: W) -> std::io::Result<()> {
    writeln!(out, "delta,cl_raw,cl_clamped")?;
    for p in points {
        writeln!(out, "{},{},{}", p.delta, p.cl_raw, p.cl_clamped)?;
    }
    Ok(())
}
