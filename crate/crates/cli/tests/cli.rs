use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn pplane(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pplane"))
        .args(args)
        .env_remove("PPLANE_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = pplane(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn field(csv: &str, row: usize, col: usize) -> f64 {
    csv.lines().nth(row).unwrap().split(',').nth(col).unwrap().parse().unwrap()
}

#[test]
fn headers() {
    let cases: [(&[&str], &str); 8] = [
        (&["contour"], "series,kind,x,y"),
        (&["lr-contour"], "series,kind,x,y"),
        (&["regions", "--p0", "0.01", "--p1", "0.5"], "p0,p1,cls,region"),
        (&["outcomes"], "outcome,prob_h0,prob_h1"),
        (&["misleading"], "separation,k,p_misleading_h1_under_h0,p_misleading_h0_under_h1"),
        (&["lil", "--n", "100"], "n,alpha_lil,degenerate,p0,p1"),
        (&["jl", "--discovery"], "mu0,mu1,n,p0,z0,p1,z1,lambda01"),
        (&["limits"], "family,observation,gamma,freq_ul,cls_ul,bayes_ul,max_abs_diff"),
    ];
    for (args, header) in cases {
        let out = stdout(args);
        assert_eq!(out.lines().next(), Some(header), "{args:?}");
        assert!(out.lines().count() > 1, "{args:?} has no rows");
    }
}

#[test]
fn walk_trace_runs_to_horizon() {
    let out = stdout(&["walk", "--seed", "3", "--truth", "h0", "--nmax", "100"]);
    assert_eq!(out.lines().next(), Some("n,Z,p0,p1,lambda01,stopped"));
    assert_eq!(out.lines().count(), 101);
    assert!(out.lines().filter(|l| l.ends_with(",true")).count() <= 1);
    let halted = stdout(&["walk", "--seed", "3", "--truth", "h0", "--nmax", "100", "--halt"]);
    if let Some(i) = out.lines().position(|l| l.ends_with(",true")) {
        assert_eq!(halted.lines().count(), i + 1);
    }
}

#[test]
fn same_flags_same_bytes() {
    for args in [
        &["walk", "--seed", "9", "--walks", "200", "--nmax", "300", "--schedule", "constant:0.05,sqrt_n:0.05"][..],
        &["walk", "--figure", "fig12b", "--seed", "1"],
        &["lil", "--figure", "fig13", "--seed", "5"],
        &["jl", "--figure", "fig15"],
    ] {
        assert_eq!(stdout(args), stdout(args), "{args:?}");
    }
}

#[test]
fn thread_count_does_not_change_batches() {
    let args = ["walk", "--seed", "4", "--walks", "300", "--nmax", "200"];
    let one = stdout(&[&args[..], &["--threads", "1"]].concat());
    let four = stdout(&[&args[..], &["--threads", "4"]].concat());
    assert_eq!(one, four);
}

#[test]
fn seeds_change_walks() {
    let a = stdout(&["walk", "--seed", "1", "--nmax", "50"]);
    let b = stdout(&["walk", "--seed", "2", "--nmax", "50"]);
    assert_ne!(a, b);
}

#[test]
fn reference_numbers() {
    let t = stdout(&["jl", "--discovery"]);
    assert!((field(&t, 1, 3) - 1.1142547833872082e-7).abs() < 1e-20);
    assert!((field(&t, 2, 6) - 8.139).abs() < 1e-3);

    let lim = stdout(&["limits", "--family", "gauss", "--x", "0"]);
    assert!((field(&lim, 1, 3) - 1.6448536269514722).abs() < 1e-9);
    assert!((field(&lim, 1, 4) - 1.959963984540054).abs() < 1e-9);

    let lim = stdout(&["limits", "--family", "poisson", "--n", "0"]);
    assert!((field(&lim, 1, 4) - 2.995732273553991).abs() < 1e-9);

    let lil = stdout(&["lil", "--n", "100"]);
    assert!((field(&lil, 1, 1) - 0.040_260_374_569_613).abs() < 1e-12);
}

#[test]
fn json_keeps_column_order() {
    let out = stdout(&["outcomes", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let first = v.as_array().unwrap()[0].as_object().unwrap();
    let keys: Vec<&str> = first.keys().map(String::as_str).collect();
    assert_eq!(keys, ["outcome", "prob_h0", "prob_h1"]);
}

#[test]
fn svg_for_curves_only() {
    let svg = stdout(&["contour", "--figure", "fig3a", "--format", "svg"]);
    assert!(svg.starts_with("<svg") && svg.contains("<polyline"));
    assert_eq!(pplane(&["outcomes", "--format", "svg"]).status.code(), Some(2));
}

#[test]
fn exit_codes() {
    assert_eq!(pplane(&["contour", "--figure", "fig99"]).status.code(), Some(2));
    assert_eq!(pplane(&["walk"]).status.code(), Some(2));
    assert_eq!(pplane(&["limits", "--gamma", "1.5"]).status.code(), Some(2));
    assert_eq!(pplane(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(pplane(&["contour", "--threads", "0"]).status.code(), Some(2));
    assert_eq!(pplane(&["contour", "--out", "/nonexistent/dir/x.csv"]).status.code(), Some(4));
    assert_eq!(pplane(&["contour", "--config", "/nonexistent.toml"]).status.code(), Some(4));
    assert_eq!(pplane(&["--help"]).status.code(), Some(0));
}

#[test]
fn manifest_records_output() {
    let dir = scratch("manifest");
    let out = dir.join("walk.csv");
    let status = pplane(&["walk", "--seed", "11", "--nmax", "20", "--out", out.to_str().unwrap()]);
    assert!(status.status.success());
    assert!(status.stdout.is_empty());
    let body = fs::read(&out).unwrap();
    let m: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.join("walk.csv.manifest.json")).unwrap()).unwrap();
    assert_eq!(m["command"], "walk");
    assert_eq!(m["seeds"], serde_json::json!([11]));
    assert_eq!(m["parameters"]["nmax"], 20);
    assert_eq!(m["outputs"][0]["file"], "walk.csv");
    assert_eq!(m["outputs"][0]["bytes"], body.len());
    let digest = m["outputs"][0]["sha256"].as_str().unwrap();
    assert_eq!(digest.len(), 64);
    assert_eq!(digest, pplane_cli::output::sha256_hex(&body));
}

#[test]
fn config_layers_under_flags() {
    let dir = scratch("config");
    let cfg = dir.join("run.toml");
    fs::write(&cfg, "seed = 5\n\n[walk]\nnmax = 12\ntruth = \"h1\"\n").unwrap();
    let from_file = stdout(&["walk", "--config", cfg.to_str().unwrap()]);
    assert_eq!(from_file.lines().count(), 13);
    let flagged = stdout(&["walk", "--config", cfg.to_str().unwrap(), "--nmax", "7"]);
    assert_eq!(flagged.lines().count(), 8);
    assert_eq!(flagged, stdout(&["walk", "--seed", "5", "--truth", "h1", "--nmax", "7"]));

    fs::write(&cfg, "[walk]\nnmaxx = 3\n").unwrap();
    assert_eq!(pplane(&["walk", "--seed", "1", "--config", cfg.to_str().unwrap()]).status.code(), Some(2));
}
