//! End-to-end runs of the `lpaudit` binary: exit codes, bundle contents,
//! and rerun determinism.

use std::path::Path;
use std::process::Output;

fn lpaudit(args: &[&str]) -> Output {
    std::process::Command::new(env!("CARGO_BIN_EXE_lpaudit"))
        .args(args)
        .env("NO_COLOR", "1")
        .env("SOURCE_DATE_EPOCH", "1700000000")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("stdout is UTF-8")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("stderr is UTF-8")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

fn read(dir: &Path, name: &str) -> String {
    std::fs::read_to_string(dir.join(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

/// Writes the BSC(0.25) channel and a matching binary joint, returning
/// their file paths.
fn bsc_fixture(root: &Path) -> (String, String) {
    let jdir = root.join("joint");
    let cdir = root.join("channel");
    let out = lpaudit(&[
        "--seed",
        "11",
        "--out",
        jdir.to_str().unwrap(),
        "synth",
        "--positive-posterior",
        "--x-size",
        "2",
        "--y-size",
        "2",
    ]);
    assert_eq!(code(&out), 0, "synth joint: {}", stderr(&out));
    let out = lpaudit(&["--out", cdir.to_str().unwrap(), "synth", "--bsc", "0.25"]);
    assert_eq!(code(&out), 0, "synth channel: {}", stderr(&out));
    (
        jdir.join("joint.json").to_str().unwrap().to_string(),
        cdir.join("channel.json").to_str().unwrap().to_string(),
    )
}

#[test]
fn certify_exit_code_tracks_the_budget() {
    let tmp = tempfile::tempdir().unwrap();
    let (joint, channel) = bsc_fixture(tmp.path());

    // BSC(0.25) leaks 0.584963 bits whatever the positive prior.
    let rdir = tmp.path().join("pass");
    let out = lpaudit(&[
        "--out",
        rdir.to_str().unwrap(),
        "certify",
        "--joint",
        &joint,
        "--channel",
        &channel,
        "--gamma",
        "0.6",
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("gamma_lpp = 0.584963"), "stdout: {text}");
    assert!(text.contains("epsilon_ldp = 1.584963"), "stdout: {text}");
    assert!(
        text.contains("certification vs budget 0.600000: PASS"),
        "stdout: {text}"
    );
    let report: serde_json::Value =
        serde_json::from_str(&read(&rdir, "report.json")).expect("report parses");
    assert_eq!(report["certification"]["pass"], serde_json::json!(true));

    let out = lpaudit(&[
        "--out",
        tmp.path().join("fail").to_str().unwrap(),
        "certify",
        "--joint",
        &joint,
        "--channel",
        &channel,
        "--gamma",
        "0.5",
    ]);
    assert_eq!(code(&out), 1, "budget below the leakage must fail");
    assert!(stdout(&out).contains("FAIL"), "stdout: {}", stdout(&out));
}

#[test]
fn bad_inputs_exit_two() {
    let tmp = tempfile::tempdir().unwrap();
    let (_joint, channel) = bsc_fixture(tmp.path());

    let mangled = tmp.path().join("mangled.json");
    std::fs::write(&mangled, "{ not json").unwrap();
    let out = lpaudit(&[
        "--out",
        tmp.path().join("a").to_str().unwrap(),
        "certify",
        "--joint",
        mangled.to_str().unwrap(),
        "--channel",
        &channel,
    ]);
    assert_eq!(code(&out), 2);
    assert!(
        stderr(&out).starts_with("lpaudit:"),
        "stderr: {}",
        stderr(&out)
    );

    // A 3-symbol joint cannot feed a binary channel.
    let wide = tmp.path().join("wide");
    let out = lpaudit(&[
        "--seed",
        "4",
        "--out",
        wide.to_str().unwrap(),
        "synth",
        "--positive-posterior",
        "--x-size",
        "3",
        "--y-size",
        "2",
    ]);
    assert_eq!(code(&out), 0);
    let out = lpaudit(&[
        "--out",
        tmp.path().join("b").to_str().unwrap(),
        "certify",
        "--joint",
        wide.join("joint.json").to_str().unwrap(),
        "--channel",
        &channel,
    ]);
    assert_eq!(code(&out), 2, "axis mismatch should be an input error");

    // Missing file, same exit path.
    let out = lpaudit(&[
        "--out",
        tmp.path().join("c").to_str().unwrap(),
        "certify",
        "--joint",
        "/nonexistent/joint.json",
        "--channel",
        &channel,
    ]);
    assert_eq!(code(&out), 2);
}

#[test]
fn synth_reruns_are_identical() {
    let tmp = tempfile::tempdir().unwrap();
    let dirs: Vec<_> = (0..2).map(|i| tmp.path().join(format!("run{i}"))).collect();
    for dir in &dirs {
        let out = lpaudit(&[
            "--seed",
            "9",
            "--out",
            dir.to_str().unwrap(),
            "synth",
            "--battery",
            "--sample",
            "400",
        ]);
        assert_eq!(code(&out), 0, "{}", stderr(&out));
    }
    assert_eq!(read(&dirs[0], "data.csv"), read(&dirs[1], "data.csv"));
    assert_eq!(
        read(&dirs[0], "manifest.json"),
        read(&dirs[1], "manifest.json")
    );

    let other = tmp.path().join("other");
    let out = lpaudit(&[
        "--seed",
        "10",
        "--out",
        other.to_str().unwrap(),
        "synth",
        "--battery",
        "--sample",
        "400",
    ]);
    assert_eq!(code(&out), 0);
    assert_ne!(
        read(&dirs[0], "data.csv"),
        read(&other, "data.csv"),
        "a different seed must draw different rows"
    );
}

#[test]
fn audit_writes_a_full_bundle() {
    let tmp = tempfile::tempdir().unwrap();
    let ddir = tmp.path().join("data");
    let out = lpaudit(&[
        "--seed",
        "1",
        "--out",
        ddir.to_str().unwrap(),
        "synth",
        "--battery",
        "--sample",
        "1500",
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));

    let adir = tmp.path().join("audit");
    let out = lpaudit(&[
        "--seed",
        "2",
        "--out",
        adir.to_str().unwrap(),
        "audit",
        ddir.join("data.csv").to_str().unwrap(),
        "--task",
        "y",
        "--sensitive",
        "s_near,s_and,s_far",
        "--repr",
        "columns",
        "--repr-columns",
        "f_b,f_c",
        "--repeats",
        "2",
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(
        stdout(&out).contains("task y: max delta_adv attribute is"),
        "stdout: {}",
        stdout(&out)
    );

    let matrix: serde_json::Value =
        serde_json::from_str(&read(&adir, "matrix.json")).expect("matrix parses");
    assert_eq!(matrix["tasks"], serde_json::json!(["y"]));
    assert_eq!(matrix["cells"].as_array().map(Vec::len), Some(3));

    let csv = read(&adir, "matrix.csv");
    assert!(
        csv.starts_with("task,sensitive,fundamental,adv_gain,utility,delta_adv\n"),
        "csv header: {}",
        csv.lines().next().unwrap_or("")
    );
    assert_eq!(csv.lines().count(), 4);

    assert!(read(&adir, "heatmap.svg").starts_with("<svg"));
    let manifest: serde_json::Value =
        serde_json::from_str(&read(&adir, "manifest.json")).expect("manifest parses");
    assert_eq!(manifest["command"], serde_json::json!("audit"));
}

#[test]
fn flag_misuse_exits_two() {
    let tmp = tempfile::tempdir().unwrap();

    // report requires at least one source file.
    let out = lpaudit(&["--out", tmp.path().join("r").to_str().unwrap(), "report"]);
    assert_eq!(code(&out), 2);

    // synth requires exactly one generator.
    let out = lpaudit(&["--out", tmp.path().join("s").to_str().unwrap(), "synth"]);
    assert_eq!(code(&out), 2);

    // A censoring weight without a target is a contradiction.
    let ddir = tmp.path().join("data");
    let out = lpaudit(&[
        "--seed",
        "1",
        "--out",
        ddir.to_str().unwrap(),
        "synth",
        "--battery",
        "--sample",
        "300",
    ]);
    assert_eq!(code(&out), 0);
    let out = lpaudit(&[
        "--out",
        tmp.path().join("t").to_str().unwrap(),
        "replab",
        ddir.join("data.csv").to_str().unwrap(),
        "--task",
        "y",
        "--lambda",
        "2.0",
    ]);
    assert_eq!(code(&out), 2);
    assert!(
        stderr(&out).contains("--censor-target"),
        "stderr: {}",
        stderr(&out)
    );
}
