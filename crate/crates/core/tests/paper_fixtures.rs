use std::path::PathBuf;

use approx::assert_abs_diff_eq;
use pgtomo::fixtures::{paper_fixtures, ProbesFile, Table1File, Table2File};
use pgtomo::measurement::{build_design, PovmSet};
use pgtomo::operator::{gell_mann_basis, hs_distance};
use pgtomo::state::{compute_c_alphas, confidence_level, delta_for_cl};

fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

fn read<T: serde::de::DeserializeOwned>(name: &str) -> T {
    let text = std::fs::read_to_string(fixture_path(name)).unwrap();
    serde_json::from_str(&text).unwrap()
}

#[test]
fn shipped_fixture_files_match_embedded_data() {
    let fx = paper_fixtures();
    assert_eq!(read::<Table1File>("table1.json"), fx.table1_file());
    assert_eq!(read::<Table2File>("table2.json"), fx.table2_file());
    assert_eq!(read::<PovmSet>("povms.json"), fx.povms);
    let probes = read::<ProbesFile>("probes.json").into_states().unwrap();
    assert_eq!(probes, fx.probes);
}

#[test]
fn output_state_distances_to_probes() {
    let fx = paper_fixtures();
    // Rounded to three places: 0.0560, 0.1511, 0.1094, 0.2002.
    let expected = [0.056, 0.151, 0.109, 0.200];
    for ((state, probe), want) in fx.table1_states.iter().zip(&fx.probes).zip(expected) {
        let d = hs_distance(state.matrix(), probe.matrix()).unwrap();
        assert_abs_diff_eq!(d, want, epsilon = 0.001);
    }
}

#[test]
fn calibrated_setup_confidence() {
    let fx = paper_fixtures();
    let design = build_design(&fx.povms, &gell_mann_basis(2)).unwrap();
    let shots = [fx.shots; 3];
    let c = compute_c_alphas(&design, &shots).unwrap();
    // c_α = 3·(1/0.4395)² for every α.
    for v in &c {
        assert_abs_diff_eq!(*v, 3.0 / (0.4395f64 * 0.4395), epsilon = 1e-9);
    }
    let cl = confidence_level(fx.table1_delta, 3 * fx.shots, &c, 2);
    assert_abs_diff_eq!(cl, 0.866, epsilon = 0.001);
    let delta = delta_for_cl(fx.cl, 3 * fx.shots, &c, 2).unwrap();
    assert_abs_diff_eq!(delta, 0.0301, epsilon = 0.0002);
}
