use std::path::Path;
use std::process::{Command, Output};

fn hyperepp(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hyperepp"))
        .args(args)
        .current_dir(dir)
        .env("HYPEREPP_OUTPUT_DIR", dir.join("out"))
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn last_row(csv: &str) -> Vec<f64> {
    csv.lines()
        .last()
        .unwrap()
        .split(',')
        .map(|v| v.parse().unwrap())
        .collect()
}

#[test]
fn reflection_preset_summary() {
    let dir = tempfile::tempdir().unwrap();
    let o = hyperepp(&["reflection", "--preset", "barclay"], dir.path());
    assert!(o.status.success());
    let line = stdout(&o);
    assert!(line.starts_with("reflection: r = 0.94"), "{line}");
    assert!(line.contains("r0 = -1.000000"));
    assert!(dir.path().join("out/reflection.csv").exists());
}

#[test]
fn three_rounds_from_point_eight() {
    let dir = tempfile::tempdir().unwrap();
    let o = hyperepp(
        &[
            "epp", "--F", "0.8", "0.8", "0.8", "--rounds", "3", "-o", "epp.csv",
        ],
        dir.path(),
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(dir.path().join("epp.csv")).unwrap();
    assert!(csv.starts_with("round,F1,F2,F3,F,Y1,Y2,P_case1"));
    assert_eq!(csv.lines().count(), 5);
    let f = last_row(&csv)[4];
    assert!((f - 0.99996).abs() < 1e-5, "{f}");
}

#[test]
fn figure_schemas() {
    let dir = tempfile::tempdir().unwrap();
    for (name, header) in [
        ("fig8b", "F,Y1,Y2"),
        ("fig10", "g_over_sqrt_kappa_gamma,F_P1,F_P2"),
    ] {
        let o = hyperepp(&["figure", name, "--points", "5", "-o", "-"], dir.path());
        assert!(o.status.success());
        let csv = stdout(&o);
        assert_eq!(csv.lines().next().unwrap(), header);
        assert_eq!(csv.lines().count(), 6);
        assert!(!csv.contains('\r'));
    }
}

#[test]
fn identical_runs_give_identical_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "figure", "fig11", "--start", "0.1", "--stop", "4", "--points", "40", "-o", "-",
    ];
    let a = hyperepp(&args, dir.path());
    let b = hyperepp(&args, dir.path());
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("run.toml"),
        "F = [0.9, 0.9, 0.9]\nrounds = 2\noutput = \"from_config.csv\"\n",
    )
    .unwrap();
    let o = hyperepp(
        &["epp", "--config", "run.toml", "--rounds", "1"],
        dir.path(),
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(dir.path().join("from_config.csv")).unwrap();
    assert_eq!(csv.lines().count(), 3);
    let per_dof = 0.81 / (0.81 + 0.01);
    assert!((last_row(&csv)[1] - per_dof).abs() < 1e-12);
}

#[test]
fn plot_is_written_next_to_csv() {
    let dir = tempfile::tempdir().unwrap();
    let o = hyperepp(
        &["figure", "fig8a", "--points", "11", "--plot", "fig8a.svg"],
        dir.path(),
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let svg = std::fs::read_to_string(dir.path().join("fig8a.svg")).unwrap();
    assert!(svg.starts_with("<svg"));
    assert!(dir.path().join("out/fig8a.csv").exists());
}

#[test]
fn usage_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        vec!["epp", "--rounds", "many"],
        vec!["teleport"],
        vec!["epp", "--F", "1.5", "0.8", "0.8"],
        vec!["figure", "fig99"],
        vec!["figure", "fig8a", "--points", "1"],
        vec!["reflection", "--preset", "ideal", "--kappa", "3"],
    ] {
        let o = hyperepp(&args, dir.path());
        assert_eq!(o.status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn runtime_failures_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("blocker"), "").unwrap();
    let o = hyperepp(&["reflection", "-o", "blocker/r.csv"], dir.path());
    assert_eq!(
        o.status.code(),
        Some(1),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
}

#[test]
fn qnd_and_swap_at_the_preset() {
    let dir = tempfile::tempdir().unwrap();
    let o = hyperepp(&["qnd", "-o", "-"], dir.path());
    assert!(o.status.success());
    let row = last_row(&stdout(&o));
    assert!((row[4] - 0.9976).abs() < 1e-3);
    let o = hyperepp(&["swap", "--circuit", "-o", "-"], dir.path());
    assert!(o.status.success());
    let row = last_row(&stdout(&o));
    assert!((row[4] - 0.9946).abs() < 1e-3 && (row[5] - 0.9008).abs() < 1e-3);
}

#[test]
fn validate_passes() {
    let dir = tempfile::tempdir().unwrap();
    let o = hyperepp(&["validate"], dir.path());
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    assert!(stdout(&o).starts_with("validate: 7/7 checks passed"));
    assert!(String::from_utf8_lossy(&o.stderr).contains("FLAG"));
    let csv = std::fs::read_to_string(dir.path().join("out/validate.csv")).unwrap();
    assert!(csv.starts_with("check,max_error,tolerance,passed\nP-QND circuit vs closed form,"));
}
