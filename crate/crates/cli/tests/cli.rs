//! Binary-level checks: exit codes, error messages, output determinism.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn smfret(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_smfret"))
        .args(args)
        .current_dir(cwd)
        .output()
        .expect("binary runs")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn write(dir: &Path, name: &str, body: &str) {
    fs::write(dir.join(name), body).unwrap();
}

const BASE_CFG: &str = "auto_donor = 0.3\nauto_acceptor = 0.2\nt_donor = 15\nt_acceptor = 15\n\
cross_DtoA = 0.05\ncross_AtoD = 0.01\ngamma = 1.0\noutput_dir = out\n";

#[test]
fn missing_input_file_exits_3_and_names_the_path() {
    let dir = tempfile::tempdir().unwrap();
    write(
        dir.path(),
        "run.cfg",
        &format!("{BASE_CFG}input_files = absent.csv\n"),
    );
    let out = smfret(&["analyze", "--config", "run.cfg"], dir.path());
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("absent.csv"));
}

#[test]
fn config_domain_error_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    write(
        dir.path(),
        "run.cfg",
        &format!("{BASE_CFG}input_files = a.csv\ncross_DtoA = 1.5\n"),
    );
    let out = smfret(&["analyze", "--config", "run.cfg"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("cross_DtoA"));
}

#[test]
fn unknown_key_exits_2_with_line() {
    let dir = tempfile::tempdir().unwrap();
    write(
        dir.path(),
        "run.cfg",
        &format!("{BASE_CFG}input_files = a.csv\nmystery = 1\n"),
    );
    let out = smfret(&["analyze", "--config", "run.cfg"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("mystery"));
    assert!(stderr(&out).contains(":10:"));
}

#[test]
fn two_column_file_under_alex_mode_exits_3_as_mixed_mode() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "data.csv", "1,2\n3,4\n");
    write(
        dir.path(),
        "run.cfg",
        &format!("mode = alex\n{BASE_CFG}input_files = data.csv\n"),
    );
    let out = smfret(&["analyze-alex", "--config", "run.cfg"], dir.path());
    assert_eq!(out.status.code(), Some(3));
    let msg = stderr(&out);
    assert!(msg.contains("data.csv:1"), "line-numbered: {msg}");
    assert!(msg.contains("expects 4"), "mode mismatch: {msg}");
}

#[test]
fn analyze_rejects_alex_config_as_config_error() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "data.csv", "1,2,3,4\n");
    write(
        dir.path(),
        "run.cfg",
        &format!("mode = alex\n{BASE_CFG}input_files = data.csv\n"),
    );
    let out = smfret(&["analyze", "--config", "run.cfg"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("mode"));
}

#[test]
fn empty_selection_is_a_clean_run() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "data.csv", "1,1\n2,2\n0,0\n");
    write(
        dir.path(),
        "run.cfg",
        &format!("{BASE_CFG}input_files = data.csv\n"),
    );
    let out = smfret(&["analyze", "--config", "run.cfg"], dir.path());
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let summary = fs::read_to_string(dir.path().join("out/summary.txt")).unwrap();
    assert!(summary.contains("bursts_selected = 0"));
    assert!(summary.contains("gaussian fit\n------------\n(none)"));
    assert!(summary.contains("no bursts selected; gaussian fit not attempted"));
}

#[test]
fn simulate_is_seed_deterministic_and_sized() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = format!(
        "{BASE_CFG}input_files = trace.csv\nn_bins = 1000\nburst_rate = 0.05\n\
         burst_intensity_mean = 60\ntrue_E = 0.75\nbackground_d = 0.3\nbackground_a = 0.2\nseed = 42\n"
    );
    write(dir.path(), "run.cfg", &cfg);
    let out = smfret(&["simulate", "--config", "run.cfg"], dir.path());
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let first = fs::read(dir.path().join("trace.csv")).unwrap();
    let first_truth = fs::read(dir.path().join("trace.truth.csv")).unwrap();
    assert_eq!(
        String::from_utf8_lossy(&first).lines().count(),
        1000,
        "one row per bin"
    );
    smfret(&["simulate", "--config", "run.cfg"], dir.path());
    assert_eq!(fs::read(dir.path().join("trace.csv")).unwrap(), first);
    assert_eq!(
        fs::read(dir.path().join("trace.truth.csv")).unwrap(),
        first_truth
    );
    // a different seed changes the byte stream
    smfret(
        &["simulate", "--config", "run.cfg", "--seed", "43"],
        dir.path(),
    );
    assert_ne!(fs::read(dir.path().join("trace.csv")).unwrap(), first);
}

#[test]
fn simulate_alex_writes_four_columns() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = format!(
        "mode = alex\n{BASE_CFG}input_files = trace.csv\nn_bins = 200\nburst_rate = 0.1\n\
         burst_intensity_mean = 60\ntrue_E = 0.75\nacceptor_brightness = 40\nseed = 7\n"
    );
    write(dir.path(), "run.cfg", &cfg);
    let out = smfret(&["simulate", "--config", "run.cfg"], dir.path());
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let body = fs::read_to_string(dir.path().join("trace.csv")).unwrap();
    assert!(body.lines().all(|l| l.split(',').count() == 4));
}

#[test]
fn analyze_outputs_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = format!(
        "{BASE_CFG}input_files = trace.csv\nn_bins = 5000\nburst_rate = 0.05\n\
         burst_intensity_mean = 60\ntrue_E = 0.75\nbackground_d = 0.3\nbackground_a = 0.2\nseed = 11\n"
    );
    write(dir.path(), "run.cfg", &cfg);
    smfret(&["simulate", "--config", "run.cfg"], dir.path());
    let out = smfret(&["analyze", "--config", "run.cfg"], dir.path());
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let names = ["histogram.csv", "histogram.svg", "grid.csv", "summary.txt"];
    let snapshot: Vec<Vec<u8>> = names
        .iter()
        .map(|n| fs::read(dir.path().join("out").join(n)).unwrap())
        .collect();
    smfret(&["analyze", "--config", "run.cfg"], dir.path());
    for (name, bytes) in names.iter().zip(&snapshot) {
        let again = fs::read(dir.path().join("out").join(name)).unwrap();
        assert_eq!(&again, bytes, "{name} changed between identical runs");
    }
}

#[test]
fn forster_single_midpoint_row() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "points.csv", "5.0,0.5\n");
    let out = smfret(&["forster", "points.csv"], dir.path());
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    assert!(stdout(&out).contains("R0 = 5.000000"), "{}", stdout(&out));
    assert!(dir.path().join("forster_fit.csv").exists());
}

#[test]
fn forster_rejects_boundary_efficiency() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "points.csv", "5.0,0.5\n6.0,1.0\n");
    let out = smfret(&["forster", "points.csv"], dir.path());
    assert_eq!(out.status.code(), Some(4));
    assert!(stderr(&out).contains("outside the open interval"));
}

#[test]
fn scatter_row_count_matches_selected_minus_skipped() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = format!(
        "mode = alex\n{BASE_CFG}input_files = trace.csv\nn_bins = 20000\nburst_rate = 0.05\n\
         burst_intensity_mean = 60\ntrue_E = 0.75\nbackground_d = 0.3\nbackground_a = 0.2\n\
         acceptor_brightness = 40\nseed = 3\n"
    );
    write(dir.path(), "run.cfg", &cfg);
    smfret(&["simulate", "--config", "run.cfg"], dir.path());
    let out = smfret(&["analyze-alex", "--config", "run.cfg"], dir.path());
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let summary = fs::read_to_string(dir.path().join("out/summary.txt")).unwrap();
    let grab = |key: &str| -> usize {
        summary
            .lines()
            .find(|l| l.starts_with(key))
            .and_then(|l| l.rsplit(' ').next())
            .and_then(|v| v.parse().ok())
            .unwrap_or_else(|| panic!("{key} not in summary"))
    };
    let selected = grab("bursts_selected = ");
    let skipped = grab("bursts_skipped_zero_total = ");
    let scatter_rows = fs::read_to_string(dir.path().join("out/scatter.csv"))
        .unwrap()
        .lines()
        .count()
        - 1;
    assert!(selected > 100);
    assert_eq!(scatter_rows, selected - skipped);
}

#[test]
fn summary_records_pipeline_steps_in_canonical_order() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = format!(
        "{BASE_CFG}input_files = trace.csv\nn_bins = 5000\nburst_rate = 0.05\n\
         burst_intensity_mean = 60\ntrue_E = 0.75\nbackground_d = 0.3\nbackground_a = 0.2\nseed = 4\n"
    );
    write(dir.path(), "run.cfg", &cfg);
    smfret(&["simulate", "--config", "run.cfg"], dir.path());
    let out = smfret(&["analyze", "--config", "run.cfg"], dir.path());
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let summary = fs::read_to_string(dir.path().join("out/summary.txt")).unwrap();
    let position = |needle: &str| summary.find(needle).unwrap_or_else(|| panic!("{needle}"));
    let order = [
        "1. parse_csv",
        "2. subtract_background",
        "3. threshold_and",
        "4. subtract_crosstalk",
        "5. fret_efficiency",
        "6. build_histogram",
        "7. fit_gaussian",
    ];
    let mut last = 0;
    for step in order {
        let at = position(step);
        assert!(at > last, "{step} out of order");
        last = at;
    }
}

#[test]
fn scatter_separates_species_and_donor_only_clusters() {
    let dir = tempfile::tempdir().unwrap();
    // dual-labelled species plus donor-only molecules; a permissive a_a
    // gate (t_acceptor = 0 with uncorrected acceptor background) lets both
    // species into the scatter so their stoichiometry clusters are visible
    let sim = |file: &str, true_e: f64, brightness: f64, n_bins: usize, seed: u64| {
        format!(
            "mode = alex\nauto_donor = 0\nauto_acceptor = 0\nt_donor = 20\nt_acceptor = 0\n\
             cross_DtoA = 0.05\ncross_AtoD = 0.01\ngamma = 1.0\ninput_files = {file}\n\
             output_dir = out\nn_bins = {n_bins}\nburst_rate = 0.05\nburst_intensity_mean = 60\n\
             true_E = {true_e}\nbackground_d = 0.3\nbackground_a = 2.0\n\
             acceptor_brightness = {brightness}\nseed = {seed}\n"
        )
    };
    write(
        dir.path(),
        "species.cfg",
        &sim("species.csv", 0.75, 40.0, 7000, 61),
    );
    write(
        dir.path(),
        "donly.cfg",
        &sim("donly.csv", 0.0, 0.0, 3000, 62),
    );
    write(
        dir.path(),
        "mix.cfg",
        "mode = alex\nauto_donor = 0\nauto_acceptor = 0\nt_donor = 20\nt_acceptor = 0\n\
         cross_DtoA = 0.05\ncross_AtoD = 0.01\ngamma = 1.0\n\
         input_files = species.csv, donly.csv\noutput_dir = out\n",
    );
    smfret(&["simulate", "--config", "species.cfg"], dir.path());
    smfret(&["simulate", "--config", "donly.cfg"], dir.path());
    let out = smfret(&["analyze-alex", "--config", "mix.cfg"], dir.path());
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));

    // classify rows by ground truth: bins below 7000 came from the
    // dual-labelled file, the rest from the donor-only file
    let scatter = fs::read_to_string(dir.path().join("out/scatter.csv")).unwrap();
    let mut dual = Vec::new();
    let mut donor_only = Vec::new();
    for line in scatter.lines().skip(1) {
        let mut fields = line.split(',');
        let index: usize = fields.next().unwrap().parse().unwrap();
        let e: f64 = fields.next().unwrap().parse().unwrap();
        let s: f64 = fields.next().unwrap().parse().unwrap();
        if index < 7000 {
            dual.push((e, s));
        } else {
            donor_only.push((e, s));
        }
    }
    let median = |values: &mut Vec<f64>| -> f64 {
        values.sort_by(f64::total_cmp);
        values[values.len() / 2]
    };
    assert!(dual.len() > 150, "dual-labelled events: {}", dual.len());
    assert!(
        donor_only.len() > 40,
        "donor-only events: {}",
        donor_only.len()
    );
    let dual_s = median(&mut dual.iter().map(|p| p.1).collect());
    let donly_s = median(&mut donor_only.iter().map(|p| p.1).collect());
    let dual_e = median(&mut dual.iter().map(|p| p.0).collect());
    let donly_e = median(&mut donor_only.iter().map(|p| p.0).collect());
    assert!(
        (0.45..0.75).contains(&dual_s),
        "dual-labelled stoichiometry cluster at {dual_s}"
    );
    assert!(
        donly_s > 0.9,
        "donor-only stoichiometry cluster at {donly_s}"
    );
    assert!(donor_only.iter().all(|&(_, s)| s > 0.8));
    assert!((0.7..0.82).contains(&dual_e), "dual-labelled E at {dual_e}");
    assert!(donly_e < 0.15, "donor-only E at {donly_e}");
}

#[test]
fn simulate_requires_exactly_one_input_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = format!(
        "{BASE_CFG}input_files = a.csv, b.csv\nn_bins = 100\nburst_rate = 0.1\n\
         burst_intensity_mean = 60\ntrue_E = 0.5\nseed = 1\n"
    );
    write(dir.path(), "run.cfg", &cfg);
    let out = smfret(&["simulate", "--config", "run.cfg"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("exactly one"));
}
