use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn betadrift(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_betadrift"))
        .args(args)
        .current_dir(cwd)
        .env_remove("BETADRIFT_ELEC2_PATH")
        .output()
        .expect("binary runs")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn repeated_runs_write_identical_traces() {
    let dir = tempfile::tempdir().unwrap();
    let mut traces = Vec::new();
    for out in ["a", "b"] {
        let o = betadrift(
            &[
                "run",
                "--dataset",
                "sea",
                "--noise",
                "0.1",
                "--runs",
                "1",
                "--seed",
                "7",
                "--out",
                out,
            ],
            dir.path(),
        );
        assert!(o.status.success(), "{}", stderr(&o));
        traces.push(fs::read(dir.path().join(out).join("trace_7.csv")).unwrap());
    }
    assert_eq!(traces[0], traces[1]);
    let text = String::from_utf8(traces[0].clone()).unwrap();
    assert!(text.starts_with("batch_index,n,k,accuracy,signal,alpha,beta,t\n"));
    assert_eq!(text.lines().count(), 201);
}

#[test]
fn campaign_artifacts_describe_themselves() {
    let dir = tempfile::tempdir().unwrap();
    let o = betadrift(
        &[
            "run",
            "--magnitude",
            "0.5",
            "0.7",
            "--detector",
            "bd3",
            "--runs",
            "3",
            "--seed",
            "4",
            "--out",
            "out",
        ],
        dir.path(),
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let out = dir.path().join("out");
    for f in [
        "trace_4.csv",
        "trace_5.csv",
        "trace_6.csv",
        "summary.csv",
        "config.echo",
    ] {
        assert!(out.join(f).is_file(), "{f}");
    }
    let echo = fs::read_to_string(out.join("config.echo")).unwrap();
    assert!(echo.contains("magnitude = 0.5 0.7"));
    assert!(echo.contains("runs = 3"));

    // the echo replays as a settings file
    let o = betadrift(
        &["run", "--config", "out/config.echo", "--out", "replay"],
        dir.path(),
    );
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(
        fs::read(out.join("summary.csv")).unwrap(),
        fs::read(dir.path().join("replay/summary.csv")).unwrap()
    );
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("c.cfg"),
        "dataset = sea\nnoise = 0.2\nruns = 5\ndetector = ddm\n",
    )
    .unwrap();
    let o = betadrift(
        &["run", "--config", "c.cfg", "--runs", "1", "--out", "o"],
        dir.path(),
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let echo = fs::read_to_string(dir.path().join("o/config.echo")).unwrap();
    assert!(
        echo.contains("runs = 1")
            && echo.contains("noise = 0.2")
            && echo.contains("detector = ddm")
    );
}

#[test]
fn unknown_detector_lists_valid_names() {
    let dir = tempfile::tempdir().unwrap();
    let o = betadrift(&["run", "--detector", "adwin", "--out", "o"], dir.path());
    assert!(!o.status.success());
    assert!(
        stderr(&o).contains("none, ddm, eddm, bd3"),
        "{}",
        stderr(&o)
    );
    assert!(!dir.path().join("o").exists());
}

#[test]
fn table_three_needs_elec2() {
    let dir = tempfile::tempdir().unwrap();
    let o = betadrift(&["table", "3", "--elec2", "missing/elec.csv"], dir.path());
    assert!(!o.status.success());
    assert!(stderr(&o).contains("missing/elec.csv"), "{}", stderr(&o));
}

#[test]
fn density_writes_curve_and_bounds() {
    let dir = tempfile::tempdir().unwrap();
    let o = betadrift(
        &[
            "density", "--alpha", "1", "--beta", "1", "--mass", "0.997", "--out", "d",
        ],
        dir.path(),
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let curve = fs::read_to_string(dir.path().join("d/density.csv")).unwrap();
    assert_eq!(curve.lines().count(), 1001);
    assert_eq!(curve.lines().nth(1), Some("0.0005,1"));
    let bounds = fs::read_to_string(dir.path().join("d/bounds.csv")).unwrap();
    assert_eq!(
        bounds,
        "alpha,beta,mass,lower,upper\n1,1,0.997,0.0015,0.9985\n"
    );

    let o = betadrift(&["density", "--alpha", "-1", "--beta", "1"], dir.path());
    assert!(!o.status.success());
}

#[test]
fn gen_dumps_stream_and_changes() {
    let dir = tempfile::tempdir().unwrap();
    let o = betadrift(
        &["gen", "--dataset", "sea", "--seed", "2", "--out", "g"],
        dir.path(),
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let changes = fs::read_to_string(dir.path().join("g/changes.txt")).unwrap();
    assert_eq!(changes, "10000\n15000\n30000\n");
    let stream = fs::read_to_string(dir.path().join("g/stream.csv")).unwrap();
    assert_eq!(stream.lines().count(), 40_001);
}
