use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use ssl_predict::{predict_pursuit, BallState, PursuitConfig, RobotState, Vec2};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ssl-predict"))
        .args(args)
        .output()
        .unwrap()
}

fn json_stdout(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_owned()
}

#[test]
fn pursue_matches_library() {
    let out = run(&[
        "pursue",
        "--ball-pos",
        "0,0",
        "--ball-vel",
        "0,0",
        "--robot-pos",
        "1,0",
        "--robot-vel",
        "0,0",
    ]);
    let v = json_stdout(&out);
    let lib = predict_pursuit(
        &BallState::new(Vec2::ZERO, Vec2::ZERO),
        &RobotState::at_rest(Vec2::new(1.0, 0.0)),
        &PursuitConfig::default(),
    )
    .unwrap();
    assert_eq!(v["termination"], "BallStopped");
    assert!((v["time_s"].as_f64().unwrap() - lib.time).abs() < 1e-5);
    assert_eq!(v["point"]["x"].as_f64().unwrap(), 0.0);
}

#[test]
fn pursue_accepts_negative_pairs() {
    let v = json_stdout(&run(&[
        "pursue",
        "--ball-pos",
        "-1,0",
        "--ball-vel",
        "1,0.5",
        "--robot-pos",
        "-2,-1",
    ]));
    assert_eq!(v["termination"], "Converged");
}

#[test]
fn bad_flags_exit_2() {
    let bad_pair = run(&[
        "pursue",
        "--ball-pos",
        "1,,2",
        "--ball-vel",
        "0,0",
        "--robot-pos",
        "1,0",
    ]);
    assert_eq!(bad_pair.status.code(), Some(2));
    let missing = run(&["pursue", "--ball-pos", "0,0"]);
    assert_eq!(missing.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&missing.stderr).contains("Usage"));
}

#[test]
fn help_exits_0_for_every_subcommand() {
    for sub in ["pursue", "heatmap", "possess", "dribbler", "imu-offset", "schedule"] {
        let out = run(&[sub, "--help"]);
        assert_eq!(out.status.code(), Some(0), "{sub}");
        assert!(String::from_utf8_lossy(&out.stdout).contains("--"), "{sub}");
    }
}

#[test]
fn config_overrides_and_rejects_unknown_keys() {
    let dir = tempfile::tempdir().unwrap();
    let slow = write(dir.path(), "slow.json", r#"{"robot": {"v_max": 1.0, "a_max": 1.0}}"#);
    let args = ["pursue", "--ball-pos", "0,0", "--ball-vel", "0,0", "--robot-pos", "1,0"];
    let base = json_stdout(&run(&args))["time_s"].as_f64().unwrap();
    let mut with_cfg = args.to_vec();
    with_cfg.extend(["--config", &slow]);
    let slower = json_stdout(&run(&with_cfg))["time_s"].as_f64().unwrap();
    assert!(slower > base);

    let unknown = write(dir.path(), "bad.json", r#"{"pursuit": {"delta": 1}}"#);
    let mut bad = args.to_vec();
    bad.extend(["--config", &unknown]);
    assert_eq!(run(&bad).status.code(), Some(2));

    let mut missing = args.to_vec();
    missing.extend(["--config", "/nonexistent/cfg.json"]);
    assert_eq!(run(&missing).status.code(), Some(3));
}

fn read_heatmap_csv(path: &Path) -> Vec<(f64, f64, f64)> {
    let text = std::fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("x,y,time_s"));
    lines
        .map(|l| {
            let f: Vec<f64> = l.split(',').map(|s| s.parse().unwrap()).collect();
            (f[0], f[1], f[2])
        })
        .collect()
}

#[test]
fn heatmap_csv_behind_is_faster_and_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for p in [&a, &b] {
        let out = run(&[
            "heatmap",
            "--ball-vel",
            "0,0.5",
            "--grid",
            "21,21",
            "--cell",
            "0.2",
            "--out",
            p.to_str().unwrap(),
        ]);
        assert!(out.status.success());
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let rows = read_heatmap_csv(&a);
    assert_eq!(rows.len(), 441);
    let mean = |f: &dyn Fn(f64) -> bool| {
        let v: Vec<f64> = rows.iter().filter(|r| f(r.1)).map(|r| r.2).collect();
        v.iter().sum::<f64>() / v.len() as f64
    };
    assert!(mean(&|y| y < -1e-9) < mean(&|y| y > 1e-9));
}

#[test]
fn heatmap_single_cell_and_pgm() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("one.csv");
    assert!(run(&[
        "heatmap",
        "--ball-vel",
        "0,0.5",
        "--grid",
        "1,1",
        "--out",
        csv.to_str().unwrap()
    ])
    .status
    .success());
    assert_eq!(read_heatmap_csv(&csv).len(), 1);

    let pgm = dir.path().join("map.pgm");
    assert!(run(&[
        "heatmap",
        "--ball-vel",
        "0,1.5",
        "--grid",
        "7,5",
        "--out",
        pgm.to_str().unwrap()
    ])
    .status
    .success());
    let bytes = std::fs::read(&pgm).unwrap();
    let header = b"P5\n7 5\n255\n";
    assert_eq!(&bytes[..header.len()], header);
    assert_eq!(bytes.len(), header.len() + 35);
    let legend = std::fs::read_to_string(dir.path().join("map.pgm.txt")).unwrap();
    assert!(legend.contains("min_s") && legend.contains("max_s"));
}

#[test]
fn heatmap_errors() {
    let bad_ext = run(&["heatmap", "--ball-vel", "0,1", "--out", "/tmp/x.png"]);
    assert_eq!(bad_ext.status.code(), Some(2));
    let unwritable = run(&[
        "heatmap",
        "--ball-vel",
        "0,1",
        "--grid",
        "3,3",
        "--out",
        "/nonexistent/dir/h.csv",
    ]);
    assert_eq!(unwritable.status.code(), Some(3));
}

const DOMINANT: &str = r#"{"robots": [{"id": 1, "position": {"x": 0.2, "y": 0.0}, "velocity": {"x": 0.0, "y": 0.0}}]}"#;
const FAR: &str = r#"{"robots": [{"id": 7, "position": {"x": 4.0, "y": 3.0}, "velocity": {"x": 0.0, "y": 0.0}},
    {"id": 8, "position": {"x": 0.1, "y": 0.0}, "velocity": {"x": 0.0, "y": 0.0}, "is_goalie": true}]}"#;

#[test]
fn possess_verdicts() {
    let dir = tempfile::tempdir().unwrap();
    let ours = write(dir.path(), "ours.json", DOMINANT);
    let theirs = write(dir.path(), "theirs.json", FAR);
    let v = json_stdout(&run(&[
        "possess",
        "--ours",
        &ours,
        "--theirs",
        &theirs,
        "--ball-pos",
        "0,0",
    ]));
    assert_eq!(v["verdict"], "Ours");
    assert_eq!(v["our_best_id"], 1);
    assert_eq!(v["their_best_id"], 7);
    assert!(v["margin_s"].as_f64().unwrap() > 0.0);

    let swapped = json_stdout(&run(&[
        "possess",
        "--ours",
        &theirs,
        "--theirs",
        &ours,
        "--ball-pos",
        "0,0",
    ]));
    assert_eq!(swapped["verdict"], "Theirs");
    assert_eq!(swapped["margin_s"].as_f64().unwrap(), -v["margin_s"].as_f64().unwrap());

    let mirror = write(
        dir.path(),
        "mirror.json",
        r#"{"robots": [{"id": 2, "position": {"x": -0.2, "y": 0.0}, "velocity": {"x": 0.0, "y": 0.0}}]}"#,
    );
    let tie = json_stdout(&run(&[
        "possess",
        "--ours",
        &ours,
        "--theirs",
        &mirror,
        "--ball-pos",
        "0,0",
        "--ball-vel",
        "0,1",
    ]));
    assert_eq!(tie["verdict"], "Contested");
}

#[test]
fn possess_errors() {
    let dir = tempfile::tempdir().unwrap();
    let ours = write(dir.path(), "ours.json", DOMINANT);
    let empty = write(dir.path(), "empty.json", r#"{"robots": []}"#);
    let out = run(&["possess", "--ours", &ours, "--theirs", &empty, "--ball-pos", "0,0"]);
    assert_eq!(out.status.code(), Some(2));
    let est = run(&[
        "possess",
        "--ours",
        &ours,
        "--theirs",
        &ours,
        "--ball-pos",
        "0,0",
        "--our-estimator",
        "nope",
    ]);
    assert_eq!(est.status.code(), Some(2));
    let missing = run(&[
        "possess",
        "--ours",
        "/nonexistent.json",
        "--theirs",
        &ours,
        "--ball-pos",
        "0,0",
    ]);
    assert_eq!(missing.status.code(), Some(3));
}

#[test]
fn dribbler_sweep_and_trace() {
    let dir = tempfile::tempdir().unwrap();
    let sweep = dir.path().join("sweep.csv");
    assert!(run(&[
        "dribbler",
        "--sweep",
        "0.05,0.15,0.25",
        "--out",
        sweep.to_str().unwrap()
    ])
    .status
    .success());
    let text = std::fs::read_to_string(&sweep).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("M,peak_m,settling_s,separations"));
    let peaks: Vec<f64> = lines.map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect();
    assert_eq!(peaks.len(), 3);
    assert!(peaks.windows(2).all(|w| w[0] < w[1]));

    let trace = dir.path().join("trace.csv");
    assert!(run(&["dribbler", "--M", "0.15", "--out", trace.to_str().unwrap()])
        .status
        .success());
    let text = std::fs::read_to_string(&trace).unwrap();
    assert!(text.starts_with("t,x1,x2,v1,v2,contact\n0,0,0,2,0,1\n"));
    assert_eq!(text.lines().count(), 10_002);
}

#[test]
fn dribbler_bad_dt_and_divergence() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("t.csv");
    let zero_dt = write(dir.path(), "dt.json", r#"{"dribbler": {"dt": 0}}"#);
    let r = run(&[
        "dribbler",
        "--M",
        "0.15",
        "--out",
        out.to_str().unwrap(),
        "--config",
        &zero_dt,
    ]);
    assert_eq!(r.status.code(), Some(2));
    let huge = write(dir.path(), "f.json", r#"{"dribbler": {"f": 1e308}}"#);
    let r = run(&[
        "dribbler",
        "--M",
        "0.15",
        "--out",
        out.to_str().unwrap(),
        "--config",
        &huge,
    ]);
    assert_eq!(r.status.code(), Some(4));
}

#[test]
fn imu_offset_examples() {
    let v = json_stdout(&run(&[
        "imu-offset",
        "--imu-yaw",
        "0.5",
        "--ssl-yaw",
        "0.2",
        "--target",
        "1.0",
    ]));
    assert_eq!(v["delta_theta"].as_f64().unwrap(), 0.3);
    assert_eq!(v["theta_t_imu"].as_f64().unwrap(), 1.3);
    let v = json_stdout(&run(&["imu-offset", "--imu-yaw", "3.0", "--ssl-yaw", "-3.0"]));
    assert!((v["delta_theta"].as_f64().unwrap() + 0.28319).abs() < 1e-5);
    assert!(v.get("theta_t_imu").is_none());
}

#[test]
fn schedule_replays_timeline() {
    let dir = tempfile::tempdir().unwrap();
    let timeline = write(
        dir.path(),
        "timeline.json",
        r#"{"ticks": [
            {"t": 0.0, "candidate": {"decision_id": 1, "payload": {"x": 1.0, "y": 0.0}}},
            {"t": 2.0, "candidate": {"decision_id": 1, "payload": {"x": 1.0, "y": 0.0}},
             "direct": {"kind": "Shot", "target": {"x": 6.0, "y": 0.0}}},
            {"t": 3.0, "candidate": {"decision_id": 2, "payload": {"x": 2.0, "y": 0.0}}},
            {"t": 5.1, "candidate": {"decision_id": 2, "payload": {"x": 2.0, "y": 0.0}}}
        ]}"#,
    );
    let out = run(&["schedule", "--timeline", &timeline]);
    assert!(out.status.success());
    let lines: Vec<Value> = String::from_utf8(out.stdout)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(lines.len(), 4);
    assert_eq!(lines[0]["decision_id"], 1);
    assert_eq!(lines[1]["output"], "direct");
    assert_eq!(lines[1]["held_id"], 1);
    assert_eq!(lines[2]["decision_id"], 1);
    assert_eq!(lines[3]["decision_id"], 2);

    let backwards = write(dir.path(), "back.json", r#"{"ticks": [{"t": 1.0}, {"t": 0.5}]}"#);
    assert_eq!(run(&["schedule", "--timeline", &backwards]).status.code(), Some(2));
}
