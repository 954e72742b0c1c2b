use pgtomo::fixtures::{paper_fixtures, table2_lower_completion};
use pgtomo::measurement::build_design;
use pgtomo::operator::{gell_mann_basis, hs_distance};
use pgtomo::process::{assemble_choi, decompose_coefficients, project_physical, score_factor};
use pgtomo::state::{compute_c_alphas, confidence_level, delta_for_cl};

use crate::io::{CliError, CliResult};

const CL_EXPECTED: f64 = 0.866;
const CL_TOL: f64 = 0.010;
const DELTA0_TOL: f64 = 0.010;
const SCORE_EXPECTED: f64 = 2.0;
const SCORE_TOL: f64 = 1e-9;
const CHOI_TOL: f64 = 0.05;
const DELTA_TILDE_RANGE: (f64, f64) = (0.17, 0.20);

struct Report {
    checks: usize,
    failed: Vec<String>,
}

impl Report {
    fn check(&mut self, label: &str, line: String, pass: bool) {
        self.checks += 1;
        println!("{label:<26} {line}  {}", if pass { "PASS" } else { "FAIL" });
        if !pass {
            self.failed.push(label.to_string());
        }
    }

    fn info(&self, label: &str, line: String) {
        println!("{label:<26} {line}  info");
    }
}

pub fn reproduce_paper() -> CliResult<()> {
    let fx = paper_fixtures();
    let mut r = Report {
        checks: 0,
        failed: Vec::new(),
    };

    let design = build_design(&fx.povms, &gell_mann_basis(2))?;
    let shots = vec![fx.shots; fx.povms.len()];
    let n_total: u64 = shots.iter().sum();
    let c_alphas = compute_c_alphas(&design, &shots)?;
    let cl = confidence_level(fx.table1_delta, n_total, &c_alphas, 2);
    r.check(
        "CL at delta 0.03",
        format!("computed {cl:.4}, paper {}", fx.cl),
        (cl - CL_EXPECTED).abs() <= CL_TOL,
    );
    let delta = delta_for_cl(fx.cl, n_total, &c_alphas, 2)?;
    r.info(
        "delta at CL 0.87",
        format!("computed {delta:.4}, paper {}", fx.table1_delta),
    );

    for (i, ((state, probe), published)) in fx
        .table1_states
        .iter()
        .zip(&fx.probes)
        .zip(fx.table1_distances)
        .enumerate()
    {
        let delta0 = hs_distance(state.matrix(), probe.matrix())?;
        r.check(
            &format!("state {} delta0", i + 1),
            format!(
                "computed {delta0:.3}, paper {published:.2} (delta + delta0 = {:.3})",
                fx.table1_delta + delta0
            ),
            (delta0 - published).abs() <= DELTA0_TOL,
        );
    }

    let coeffs = decompose_coefficients(&fx.probes)?;
    let score = score_factor(&coeffs);
    let big_delta = fx.table1_delta * score / 2.0;
    r.check(
        "Delta",
        format!(
            "computed {big_delta:.4}, paper {} (score factor {score:.6}, expected {SCORE_EXPECTED})",
            fx.table2_delta
        ),
        (score - SCORE_EXPECTED).abs() <= SCORE_TOL,
    );

    let raw = assemble_choi(&coeffs, &fx.table1_states)?;
    let projection = project_physical(&raw, 2, 2)?;
    let rec = projection.choi.matrix();
    let deviation = rec.max_abs_diff(&fx.table2_symmetrized);
    r.check(
        "Choi vs table",
        format!(
            "max entry deviation {deviation:.3} from the symmetrized table (tolerance {CHOI_TOL}, {} projection iterations)",
            projection.iterations
        ),
        deviation <= CHOI_TOL,
    );
    r.info(
        "Choi vs lower completion",
        format!(
            "max entry deviation {:.3} from the Hermitian completion of the lower triangle",
            rec.max_abs_diff(&table2_lower_completion())
        ),
    );

    let distance = hs_distance(rec, fx.bell_choi.matrix())?;
    let delta_tilde = big_delta + distance;
    r.check(
        "Delta_tilde",
        format!(
            "computed {delta_tilde:.3}, paper {} (Delta {big_delta:.4} + distance to Bell {distance:.4})",
            fx.table2_delta_tilde
        ),
        (DELTA_TILDE_RANGE.0..=DELTA_TILDE_RANGE.1).contains(&delta_tilde),
    );

    println!(
        "{} of {} checks passed",
        r.checks - r.failed.len(),
        r.checks
    );
    if r.failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Comparison(format!(
            "failed: {}",
            r.failed.join(", ")
        )))
    }
}
