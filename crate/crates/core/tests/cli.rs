use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn stepup(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stepup")).args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn json(bytes: &[u8]) -> Value {
    serde_json::from_slice(bytes).unwrap()
}

fn export(builtin: &str, dir: &Path, extra: &[&str]) -> String {
    let path = dir.join(format!("{builtin}.coloring"));
    let p = path.to_str().unwrap();
    let mut args = vec!["color", "export", "--builtin", builtin, "--to", p];
    args.extend_from_slice(extra);
    assert_eq!(code(&stepup(&args)), 0);
    p.to_string()
}

#[test]
fn bound_tower_examples() {
    for (i, x, want) in [("0", "7", "7"), ("1", "3", "8"), ("2", "2", "16"), ("3", "2", "65536")] {
        let o = stepup(&["bound", "tower", "--i", i, "--x", x]);
        assert_eq!(code(&o), 0);
        assert_eq!(String::from_utf8(o.stdout).unwrap().trim(), want);
    }
    let o = stepup(&["bound", "tower", "--i", "5", "--x", "2"]);
    assert_eq!(String::from_utf8(o.stdout).unwrap().trim(), "t_5(2)");
}

#[test]
fn verify_clique_on_all_zero() {
    let dir = tempfile::tempdir().unwrap();
    let file = export("zero", dir.path(), &["--n", "5"]);
    let out = dir.path().join("run");
    let o = stepup(&["color", "verify-clique", "--file", &file, "--t", "3", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    let r = json(&o.stdout);
    assert_eq!(r["check"]["clique"], serde_json::json!([1, 2, 3]));
    assert_eq!(r["check"]["color"], 0);
    assert!(out.join("witnesses/clique.json").exists());

    let c4 = export("c4", dir.path(), &[]);
    assert_eq!(code(&stepup(&["color", "verify-clique", "--file", &c4, "--t", "3"])), 0);
}

#[test]
fn stepup_verify_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let c4 = export("c4", dir.path(), &[]);
    let o = stepup(&["stepup", "verify", "--base", &c4, "--k", "3", "--n", "4", "--I", "1,2"]);
    assert_eq!(code(&o), 0);
    let r = json(&o.stdout);
    assert_eq!(r["verdict"], "clean");
    assert_eq!(r["slots"].as_array().unwrap().len(), 4);

    let zero = export("zero", dir.path(), &["--n", "4"]);
    let o = stepup(&["stepup", "verify", "--base", &zero, "--k", "3", "--n", "4", "--I", "1,2"]);
    assert_eq!(code(&o), 1);
    assert_eq!(json(&o.stdout)["slots"][0]["result"]["status"], "witness");

    let o = stepup(&[
        "stepup", "verify", "--base", &c4, "--k", "3", "--n", "4", "--I", "1,2", "--node-budget", "3",
    ]);
    assert_eq!(code(&o), 3);
    assert_eq!(json(&o.stdout)["verdict"], "indeterminate");

    // k >= 4 requires a separated index set
    let o = stepup(&["stepup", "verify", "--base", &c4, "--k", "4", "--n", "5", "--I", "1,3,4"]);
    assert_eq!(code(&o), 2);
    assert!(json(&o.stderr)["message"].as_str().unwrap().contains("separated"));
    // and the k=4 ground 2^16 is over an explicit cap
    let o = stepup(&["stepup", "verify", "--base", &c4, "--k", "4", "--n", "5", "--cap", "1024"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn tower_descriptor_input() {
    let dir = tempfile::tempdir().unwrap();
    export("c4", dir.path(), &[]);
    let desc = dir.path().join("tower.json");
    std::fs::write(
        &desc,
        r#"{"schema":"ramsey-stepup/tower/v1","base":{"path":"c4.coloring"},"target_k":3}"#,
    )
    .unwrap();
    let d = desc.to_str().unwrap();
    assert_eq!(code(&stepup(&["stepup", "verify", "--tower", d, "--k", "3", "--n", "4"])), 0);
    // target_k disagrees with --k
    assert_eq!(code(&stepup(&["stepup", "verify", "--tower", d, "--k", "4", "--n", "8"])), 2);
}

#[test]
fn usage_errors_are_json_on_stderr() {
    for args in [
        &["frobnicate"][..],
        &["bound", "tower", "--i", "2"],
        &["bound", "tower", "--i", "2", "--x", "0"],
        &["tree", "classify", "--depth", "3", "--leaves", "1,x"],
        &["--workers", "0", "bound", "tower", "--i", "1", "--x", "1"],
    ] {
        let o = stepup(args);
        assert_eq!(code(&o), 2, "{args:?}");
        assert!(o.stdout.is_empty());
        let e = json(&o.stderr);
        assert_eq!(e["schema"], "ramsey-stepup/error/v1");
        assert_eq!(e["kind"], "usage");
    }
    let o = stepup(&["color", "import", "--file", "/nonexistent/x.coloring"]);
    assert_eq!(code(&o), 2);
    assert_eq!(json(&o.stderr)["kind"], "error");
    assert_eq!(code(&stepup(&["--help"])), 0);
    assert_eq!(code(&stepup(&["--version"])), 0);
}

#[test]
fn input_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.coloring");
    std::fs::write(&bad, "coloring 2 2 z4\n1 2 4\n").unwrap();
    let o = stepup(&["color", "import", "--file", bad.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(json(&o.stderr)["message"].as_str().unwrap().contains("palette"));
    assert_eq!(code(&stepup(&["tree", "classify", "--depth", "2", "--leaves", "1,9"])), 2);
    assert_eq!(code(&stepup(&["steiner", "plane", "--p", "4"])), 2);
}

#[test]
fn manifest_replays_to_identical_report() {
    let dir = tempfile::tempdir().unwrap();
    let c4 = export("c4", dir.path(), &[]);
    let a = dir.path().join("a");
    let o = stepup(&[
        "stepup", "verify", "--base", &c4, "--k", "3", "--n", "4", "--I", "1,2", "--out", a.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    let manifest = json(&std::fs::read(a.join("manifest.json")).unwrap());
    assert_eq!(manifest["schema"], "ramsey-stepup/manifest/v1");
    assert_eq!(manifest["command"], "stepup verify");
    assert!(manifest["elapsed_ms"].is_u64());

    // replay the recorded argv into a second directory, with more workers
    let b = dir.path().join("b");
    let mut argv: Vec<String> = manifest["argv"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_str().unwrap().to_string())
        .collect();
    let pos = argv.iter().position(|a| a == "--out").unwrap();
    argv[pos + 1] = b.to_str().unwrap().to_string();
    argv.extend(["--workers".into(), "4".into()]);
    let args: Vec<&str> = argv.iter().map(String::as_str).collect();
    assert_eq!(code(&stepup(&args)), 0);
    assert_eq!(
        std::fs::read(a.join("report.json")).unwrap(),
        std::fs::read(b.join("report.json")).unwrap()
    );
}

#[test]
fn witness_reports_independent_of_workers() {
    let dir = tempfile::tempdir().unwrap();
    let zero = export("zero", dir.path(), &["--n", "4"]);
    let run = |w: &str| {
        let out = dir.path().join(format!("w{w}"));
        let o = stepup(&[
            "stepup", "verify", "--base", &zero, "--k", "3", "--n", "4", "--I", "1,2", "--workers", w,
            "--out", out.to_str().unwrap(),
        ]);
        assert_eq!(code(&o), 1);
        let names: Vec<_> = std::fs::read_dir(out.join("witnesses")).unwrap().map(|e| e.unwrap().file_name()).collect();
        assert!(!names.is_empty());
        std::fs::read(out.join("report.json")).unwrap()
    };
    assert_eq!(run("1"), run("3"));
}

#[test]
fn mc_run_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let run = |w: &str| {
        let out = dir.path().join(format!("mc{w}"));
        let o = stepup(&[
            "mc", "run", "--n", "3", "--k", "3", "--I", "1,2", "--m", "2", "--trials", "20", "--seed", "5",
            "--workers", w, "--out", out.to_str().unwrap(),
        ]);
        assert_eq!(code(&o), 0);
        let manifest = json(&std::fs::read(out.join("manifest.json")).unwrap());
        assert_eq!(manifest["timings"]["trial_micros"].as_array().unwrap().len(), 20);
        std::fs::read(out.join("report.json")).unwrap()
    };
    let a = run("1");
    assert_eq!(a, run("4"));
    let r = json(&a);
    assert_eq!(r["trials"], 20);
    assert_eq!(r["steiner_ok"], 20);
    assert!(r.get("trial_micros").is_none());
}

#[test]
fn family_gen_and_check() {
    let dir = tempfile::tempdir().unwrap();
    for flavor in ["F", "revF", "G", "revG"] {
        let path = dir.path().join(format!("{flavor}.json"));
        let p = path.to_str().unwrap();
        let o = stepup(&["family", "gen", "--k", "3", "--n", "4", "--flavor", flavor, "--to", p]);
        assert_eq!(code(&o), 0);
        let r = json(&o.stdout);
        assert_eq!((r["v"].as_u64(), r["e"].as_u64()), (Some(8), Some(4)));
        let o = stepup(&["family", "check", "--file", p, "--k", "3", "--n", "4", "--flavor", flavor]);
        assert_eq!(code(&o), 0, "{flavor}");
    }
    let f = dir.path().join("F.json");
    let o = stepup(&["family", "check", "--file", f.to_str().unwrap(), "--k", "3", "--n", "4", "--flavor", "revF"]);
    assert_eq!(code(&o), 1);
    assert_eq!(code(&stepup(&["family", "gen", "--k", "3", "--n", "4", "--flavor", "Fstar"])), 2);
    assert_eq!(code(&stepup(&["family", "gen", "--k", "5", "--n", "5", "--I", "2,3,4,5", "--flavor", "G"])), 2);
}

#[test]
fn steiner_commands() {
    let dir = tempfile::tempdir().unwrap();
    let o = stepup(&["steiner", "blowup", "--n", "3", "--k", "3", "--I", "1,2", "--m", "2"]);
    assert_eq!(code(&o), 0);
    let r = json(&o.stdout);
    assert_eq!((r["vertices"].as_u64(), r["edges"].as_u64()), (Some(14), Some(8)));
    assert_eq!(r["partial_steiner"]["result"], "ok");

    for p in ["2", "3", "5", "7"] {
        assert_eq!(code(&stepup(&["steiner", "plane", "--p", p])), 0);
    }

    let sys = dir.path().join("h.json");
    let s = sys.to_str().unwrap();
    let o = stepup(&["steiner", "assemble", "--n", "3", "--k", "3", "--I", "1,2", "--m", "2", "--seed", "9", "--to", s]);
    assert_eq!(code(&o), 0);
    let r = json(&o.stdout);
    assert_eq!((r["order"].as_u64(), r["v"].as_u64()), (Some(17), Some(307)));
    assert_eq!(code(&stepup(&["steiner", "check", "--file", s])), 0);

    // two edges sharing a pair break linearity
    let bad = dir.path().join("bad.json");
    std::fs::write(
        &bad,
        r#"{"schema":"ramsey-stepup/system/v1","v":4,"k":3,"edges":[[1,2,3],[1,2,4]]}"#,
    )
    .unwrap();
    let out = dir.path().join("bad-run");
    let o = stepup(&["steiner", "check", "--file", bad.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    assert_eq!(json(&o.stdout)["check"]["shared"], serde_json::json!([1, 2]));
    assert!(out.join("witnesses/steiner.json").exists());
}

#[test]
fn tree_and_color_commands() {
    let o = stepup(&["tree", "classify", "--depth", "3", "--leaves", "8,1,3,4"]);
    assert_eq!(code(&o), 0);
    let r = json(&o.stdout);
    assert_eq!(r["shape"]["kind"], "split");
    assert_eq!((r["shape"]["left"].as_u64(), r["shape"]["right"].as_u64()), (Some(3), Some(1)));
    assert_eq!(r["deltas"], serde_json::json!([2, 3, 1]));

    let dir = tempfile::tempdir().unwrap();
    let to = dir.path().join("k4free.coloring");
    let o = stepup(&["color", "build-base", "--n", "5", "--t", "4", "--seed", "3", "--to", to.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert_eq!(code(&stepup(&["color", "verify-clique", "--file", to.to_str().unwrap(), "--t", "4"])), 0);
    let o = stepup(&["color", "import", "--file", to.to_str().unwrap()]);
    assert_eq!(json(&o.stdout)["subsets"], 10);

    let o = stepup(&["color", "build-base", "--n", "6", "--t", "3", "--budget", "32768"]);
    assert_eq!(code(&o), 1);
    assert_eq!(json(&o.stdout)["exhaustive"], true);
}
