use std::path::Path;
use std::process::{Command, Output};

fn vxsim(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vxsim"))
        .args(args)
        .current_dir(cwd)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn list_presets_names_every_figure() {
    let tmp = tempfile::tempdir().unwrap();
    let o = vxsim(&["list-presets"], tmp.path());
    assert!(o.status.success());
    for name in vxsim::scenario::FIGURE_PRESETS {
        assert!(stdout(&o).contains(name), "{name}");
    }
}

#[test]
fn run_preset_then_report_and_render() {
    let tmp = tempfile::tempdir().unwrap();
    let o = vxsim(&["run", "fig6_generator_ideal", "--out", "gen", "--grid", "512"], tmp.path());
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("PASS winding +1"), "{out}");
    assert!(out.contains("grid_n = 512"));
    for f in ["report.txt", "field.vxf", "intensity.pgm", "phase.png", "winding.csv"] {
        assert!(tmp.path().join("gen").join(f).is_file(), "{f}");
    }

    let o = vxsim(&["report", "gen"], tmp.path());
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("0 checksum mismatches, 0 failed expectations"));

    let o = vxsim(&["--quiet", "render", "gen/field.vxf", "--out", "img", "--format", "pgm", "--format", "png"], tmp.path());
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).is_empty());
    for f in ["field.pgm", "field.pgm.txt", "field.png", "field_phase.png"] {
        assert!(tmp.path().join("img").join(f).is_file(), "{f}");
    }

    std::fs::write(tmp.path().join("gen/winding.csv"), "x").unwrap();
    let o = vxsim(&["report", "gen"], tmp.path());
    assert!(!o.status.success());
    assert!(stderr(&o).contains("checksum mismatch: winding.csv"));
}

#[test]
fn coarse_grid_fails_expectations_with_exit_code_2() {
    let tmp = tempfile::tempdir().unwrap();
    let o = vxsim(&["--quiet", "run", "fig6_generator_ideal", "--out", "c", "--grid", "256"], tmp.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("expectation failed: winding +1"), "{}", stderr(&o));
    let o = vxsim(&["--quiet", "report", "c"], tmp.path());
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn format_flag_limits_outputs() {
    let tmp = tempfile::tempdir().unwrap();
    let o = vxsim(&["--quiet", "run", "fig3_m_plus1", "--out", "r", "--grid", "256", "--format", "csv"], tmp.path());
    assert!(o.status.success(), "{}", stderr(&o));
    let mut files: Vec<String> = std::fs::read_dir(tmp.path().join("r"))
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    files.sort();
    assert_eq!(files, ["overlaps.csv", "report.txt"]);
}

#[test]
fn scenario_file_with_parse_error_reports_line() {
    let tmp = tempfile::tempdir().unwrap();
    std::fs::write(tmp.path().join("bad.cfg"), "name = x\nvoltage_kv = 200\n").unwrap();
    let o = vxsim(&["run", "bad.cfg"], tmp.path());
    assert!(!o.status.success());
    assert!(stderr(&o).contains("line 2"), "{}", stderr(&o));
}

#[test]
fn scenario_file_runs_and_errors_name_the_scenario() {
    let tmp = tempfile::tempdir().unwrap();
    let text = vxsim::scenario::preset("fig3_df0").unwrap().text.replace("grid_n = 1024", "grid_n = 256");
    std::fs::write(tmp.path().join("df0.cfg"), text).unwrap();
    let o = vxsim(&["--quiet", "run", "df0.cfg", "--out", "a"], tmp.path());
    assert!(o.status.success(), "{}", stderr(&o));
    // the preset with a grid too small for its aperture fails with scenario context
    let o = vxsim(&["run", "fig3_df0", "--grid", "16", "--out", "b"], tmp.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("scenario `fig3_df0`"), "{}", stderr(&o));
}

#[test]
fn unknown_target_and_bad_grid() {
    let tmp = tempfile::tempdir().unwrap();
    let o = vxsim(&["run", "fig99"], tmp.path());
    assert!(!o.status.success());
    assert!(stderr(&o).contains("neither a scenario file nor a preset"));
    let o = vxsim(&["run", "fig3_df0", "--grid", "1000"], tmp.path());
    assert!(stderr(&o).contains("power of two"));
}
