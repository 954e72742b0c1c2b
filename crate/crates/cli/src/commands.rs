use std::path::Path;

use pgtomo::batch::{cl_curve, delta_grid, write_cl_csv};
use pgtomo::fixtures::{paper_fixtures, ProbesFile};
use pgtomo::gates::{calibrated_povms, choi_of_unitary, depolarizing_choi, tetrahedron_probes};
use pgtomo::measurement::{build_design, simulate_counts, MeasurementRecord, PovmSet};
use pgtomo::operator::{gell_mann_basis, ComplexMatrix, DensityMatrix};
use pgtomo::process::{
    probe_score, probe_search, run_process_tomography, ChoiState, ProcessData, ProcessReport,
    ProcessTomographyConfig,
};
use pgtomo::state::{run_state_tomography, StateData, StateReport, StateTomographyConfig};
use serde::Serialize;

use crate::args::{
    execution, ClCurveArgs, ProbeScoreArgs, ProbeSearchArgs, ProcessTomoArgs, StateTomoArgs,
};
use crate::io::{read_json, to_json, write_output, CliError, CliResult};

fn load_povms(path: Option<&Path>) -> CliResult<PovmSet> {
    match path {
        Some(p) => read_json(p),
        None => Ok(calibrated_povms()),
    }
}

fn load_state(path: &Path) -> CliResult<DensityMatrix> {
    Ok(DensityMatrix::new(read_json::<ComplexMatrix>(path)?)?)
}

fn load_probes(spec: &str) -> CliResult<Vec<DensityMatrix>> {
    if spec == "tetrahedron" {
        return Ok(tetrahedron_probes());
    }
    Ok(read_json::<ProbesFile>(Path::new(spec))?.into_states()?)
}

/// `identity`, `depolarizing:<p>` or `unitary:<file>` on dimension `dim`.
fn parse_channel(spec: &str, dim: usize) -> CliResult<ChoiState> {
    let (kind, arg) = spec.split_once(':').unwrap_or((spec, ""));
    match (kind, arg) {
        ("identity", "") => Ok(depolarizing_choi(dim, 0.0)?),
        ("depolarizing", p) => {
            let p: f64 = p
                .parse()
                .map_err(|_| CliError::Input(format!("invalid depolarizing probability '{p}'")))?;
            Ok(depolarizing_choi(dim, p)?)
        }
        ("unitary", file) if !file.is_empty() => Ok(choi_of_unitary(&read_json::<ComplexMatrix>(
            Path::new(file),
        )?)?),
        _ => Err(CliError::Input(format!(
            "invalid channel spec '{spec}' (expected identity, depolarizing:<p>, unitary:<file>)"
        ))),
    }
}

pub fn state_tomo(args: &StateTomoArgs) -> CliResult<()> {
    let povms = load_povms(args.povms.as_deref())?;
    let basis = gell_mann_basis(povms.dim());
    let record = match (&args.counts, &args.simulate) {
        (Some(counts), _) => read_json::<MeasurementRecord>(counts)?,
        (None, Some(state)) => {
            let rho = load_state(state)?;
            simulate_counts(&rho, &povms, &vec![args.shots; povms.len()], args.seed)?
        }
        (None, None) => {
            return Err(CliError::Input(
                "either --counts or --simulate is required".into(),
            ))
        }
    };
    let config = StateTomographyConfig {
        precision: args.precision.spec(),
        enm_mode: args.enm_mode.into(),
        target: args.target.as_deref().map(load_state).transpose()?,
    };
    let (estimate, cert) =
        run_state_tomography(&StateData::Counts(record), &povms, &basis, &config)?;
    let report = StateReport::new(&estimate, &cert, config.enm_mode);
    write_output(args.out.as_deref(), &to_json(&report)?)
}

pub fn process_tomo(args: &ProcessTomoArgs) -> CliResult<()> {
    let probes = load_probes(&args.probes)?;
    let povms = load_povms(args.povms.as_deref())?;
    let d_in = probes
        .first()
        .map(DensityMatrix::dim)
        .ok_or_else(|| CliError::Input("probe set is empty".into()))?;
    let data = match &args.simulate {
        Some(spec) => {
            if d_in != povms.dim() {
                return Err(CliError::Input(format!(
                    "simulated channels map dimension {d_in} to itself but the POVMs act on dimension {}",
                    povms.dim()
                )));
            }
            ProcessData::Simulate {
                truth: parse_channel(spec, d_in)?,
                seed: args.seed,
            }
        }
        None => ProcessData::Counts(
            args.counts
                .iter()
                .map(|p| read_json::<MeasurementRecord>(p))
                .collect::<CliResult<_>>()?,
        ),
    };
    let target = match args.target.as_deref() {
        None => None,
        Some("bell") => Some(depolarizing_choi(d_in, 0.0)?),
        Some(path) => Some(ChoiState::new(
            read_json::<ComplexMatrix>(Path::new(path))?,
            d_in,
            povms.dim(),
        )?),
    };
    let config = ProcessTomographyConfig {
        shots: vec![args.shots; povms.len()],
        precision: args.precision.spec(),
        enm_mode: args.enm_mode.into(),
        target,
    };
    let result = run_process_tomography(&data, &probes, &povms, &config)?;
    write_output(
        args.out.as_deref(),
        &to_json(&ProcessReport::from(&result))?,
    )
}

pub fn cl_curve_cmd(args: &ClCurveArgs) -> CliResult<()> {
    let povms = load_povms(args.povms.as_deref())?;
    let design = build_design(&povms, &gell_mann_basis(povms.dim()))?;
    let grid = delta_grid(args.delta_min, args.delta_max, args.steps)?;
    let points = cl_curve(
        &design,
        &vec![args.shots; povms.len()],
        &grid,
        execution(args.sequential),
    )?;
    let mut csv = Vec::new();
    write_cl_csv(&points, &mut csv).map_err(|e| CliError::Input(e.to_string()))?;
    write_output(args.out.as_deref(), &csv)
}

#[derive(Serialize)]
struct ProbeScoreReport {
    d_in: usize,
    num_probes: usize,
    score_factor: f64,
    /// `Δ/δ = score_factor / d_in`.
    delta_ratio: f64,
}

pub fn probe_score_cmd(args: &ProbeScoreArgs) -> CliResult<()> {
    let probes = load_probes(&args.probes)?;
    let score = probe_score(&probes)?;
    let d_in = probes[0].dim();
    let report = ProbeScoreReport {
        d_in,
        num_probes: probes.len(),
        score_factor: score,
        delta_ratio: score / d_in as f64,
    };
    write_output(args.out.as_deref(), &to_json(&report)?)
}

pub fn probe_search_cmd(args: &ProbeSearchArgs) -> CliResult<()> {
    let result = probe_search(
        args.dim,
        args.num_probes,
        args.trials as usize,
        args.seed,
        execution(args.sequential),
    )?;
    write_output(args.out.as_deref(), &to_json(&result)?)
}

pub fn write_fixtures(dir: &Path) -> CliResult<()> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::Input(format!("{}: {e}", dir.display())))?;
    let fx = paper_fixtures();
    write_output(Some(&dir.join("table1.json")), &to_json(&fx.table1_file())?)?;
    write_output(Some(&dir.join("table2.json")), &to_json(&fx.table2_file())?)?;
    write_output(Some(&dir.join("povms.json")), &to_json(&fx.povms)?)?;
    write_output(Some(&dir.join("probes.json")), &to_json(&fx.probes_file())?)
}
