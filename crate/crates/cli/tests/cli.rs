use std::path::Path;
use std::process::{Command, Output};

use lforge_cli::chart::Chart;
use serde_json::Value;

/// Runs the binary in `dir` with no inherited `LFORGE_*` settings.
fn lforge_in(dir: &Path, args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_lforge"));
    cmd.current_dir(dir).args(args);
    for (k, _) in std::env::vars() {
        if k.starts_with("LFORGE_") {
            cmd.env_remove(k);
        }
    }
    cmd.envs(env.iter().copied());
    cmd.output().expect("binary runs")
}

fn lforge(args: &[&str]) -> Output {
    let dir = tempfile::tempdir().unwrap();
    let mut full = vec!["--no-cache"];
    full.extend_from_slice(args);
    lforge_in(dir.path(), &full, &[])
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn ok(args: &[&str]) -> String {
    let o = lforge(args);
    assert_eq!(o.status.code(), Some(0), "{args:?}: {}", stderr(&o));
    stdout(&o)
}

#[test]
fn element_commands() {
    assert_eq!(ok(&["diff", "(2)"]).trim(), "(1,0)");
    assert_eq!(ok(&["normalize", "(0,3)"]).trim(), "(2,1)");
    assert_eq!(ok(&["mul", "(0)", "1"]).trim(), "(0)");
    assert_eq!(ok(&["diff", "(2,2,1)"]).trim(), "(1,1,1,1)");
    assert_eq!(ok(&["diff", "--complex", "lambda-prime", "(2,2,1)"]).trim(), "0");
    assert_eq!(ok(&["normalize", " ( 0 , 3 ) + (2,1) "]).trim(), "0");
}

#[test]
fn cohomology_examples() {
    let v: Value = serde_json::from_str(&ok(&["cohomology", "--complex", "lambda-prime", "--s", "3", "--t", "8", "--format", "json"])).unwrap();
    assert_eq!(v["dim"], 1);
    assert_eq!(v["labels"][0], "221");
    let text = ok(&["cohomology", "--complex", "lambda", "--s", "1", "--t", "2"]);
    assert!(text.starts_with("(1,2) stem 1 dim 1: 1"), "{text}");
    let v: Value = serde_json::from_str(&ok(&["cohomology", "--complex", "lambda-prime", "--s", "3", "--t", "12", "--format", "json"])).unwrap();
    assert_eq!(v["dim"], 0);
    let csv = ok(&["cohomology", "--complex", "lambda-prime", "--stem-range", "0..3", "--max-filt", "3", "--format", "csv"]);
    assert!(csv.lines().next().unwrap().contains("dim"));
}

#[test]
fn figure1_cells() {
    let chart: Chart = serde_json::from_str(&ok(&["figure1", "--format", "json"])).unwrap();
    let cell = |stem, filt| chart.cells.iter().find(|c| c.stem == stem && c.filtration == filt).expect("cell present");
    assert_eq!(cell(9, 5).classes[0].label, "24111");
    // Its bidegree is (7, 18), so stem 11.
    assert_eq!(cell(11, 7).classes[0].label, "1124111");
    let c = cell(5, 3);
    assert_eq!(c.classes[0].label, "221");
    assert!(c.classes[0].underlined);
    assert_eq!(c.flags, ["d1-source"]);
    let text = ok(&["figure1"]);
    assert!(text.contains("221*"));
    assert_eq!(lforge(&["figure1", "--check"]).status.code(), Some(0));
}

#[test]
fn bockstein_and_sq0() {
    let sq0 = ok(&["sq0", "--s", "4", "--max-internal", "30", "--format", "csv"]);
    let kernels: Vec<&str> = sq0.lines().skip(1).filter(|l| !l.ends_with(',')).collect();
    assert_eq!(kernels, ["4,4,1,0,0,0000"]);
    let bss: Value = serde_json::from_str(&ok(&["bss", "--line", "3", "--max-internal", "40", "--format", "json"])).unwrap();
    let ds: Vec<&Value> = bss["report"]["slots"].as_array().unwrap().iter().flat_map(|s| s["differentials"].as_array().unwrap()).collect();
    assert_eq!(ds.len(), 1);
    assert_eq!(ds[0]["u"], 8);
    let text = ok(&["bss", "--line", "3", "--max-internal", "40", "--check"]);
    assert!(text.contains("d1 at u=8: 221 -> 0000"), "{text}");
}

#[test]
fn cocomplete_commands() {
    assert_eq!(ok(&["cocomplete", "normalize", "(-1/4,3/4)"]).trim(), "(0,1/2)");
    assert_eq!(ok(&["cocomplete", "normalize", "--direct", "(-1/4,3/4)"]).trim(), "(0,1/2)");
    assert_eq!(ok(&["cocomplete", "diff", "(1/2)"]).trim(), "(0,-1/2)");
    assert_eq!(ok(&["cocomplete", "diff", "--method", "naive", "(1/2)"]).trim(), "0");
    assert_eq!(ok(&["cocomplete", "orbit", "3/4"]).trim(), "6");
    let v: Value = serde_json::from_str(&ok(&["cocomplete", "locext", "--s", "1", "--u", "3/2", "--format", "json"])).unwrap();
    let ts: Vec<u64> = v["levels"].as_array().unwrap().iter().map(|l| l["t"].as_u64().unwrap()).collect();
    assert_eq!(ts, [3, 6, 12, 24]);
}

#[test]
fn exit_codes() {
    let o = lforge(&["normalize", "(0,3"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("byte 4"), "{}", stderr(&o));
    assert_eq!(lforge(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(lforge(&["cohomology", "--s", "1"]).status.code(), Some(1));
    assert_eq!(lforge(&["cocomplete", "orbit", "-2"]).status.code(), Some(1));
    assert_eq!(lforge(&["--help"]).status.code(), Some(0));
    assert_eq!(lforge(&["--step-budget", "1", "normalize", "(0,4,10,22)"]).status.code(), Some(3));
}

#[test]
fn configuration_precedence() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("lforge.json"), r#"{"format": "json", "no_cache": true}"#).unwrap();
    let args = ["cohomology", "--s", "1", "--t", "1"];
    let from_file = stdout(&lforge_in(dir.path(), &args, &[]));
    assert!(from_file.trim_start().starts_with('{'), "{from_file}");
    let from_env = stdout(&lforge_in(dir.path(), &args, &[("LFORGE_FORMAT", "csv")]));
    assert!(from_env.starts_with("complex,"), "{from_env}");
    let mut flagged = vec!["--format", "text"];
    flagged.extend_from_slice(&args);
    let from_flag = stdout(&lforge_in(dir.path(), &flagged, &[("LFORGE_FORMAT", "csv")]));
    assert!(from_flag.starts_with("(1,1)"), "{from_flag}");
    assert!(!dir.path().join(".lforge-cache").exists());

    std::fs::write(dir.path().join("lforge.json"), r#"{"colour": "blue"}"#).unwrap();
    assert_eq!(lforge_in(dir.path(), &args, &[]).status.code(), Some(1));
}

#[test]
fn cache_is_deterministic_and_self_healing() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["cohomology", "--complex", "lambda-prime", "--stem-range", "0..8", "--max-filt", "6", "--format", "json"];
    let cold = lforge_in(dir.path(), &args, &[]);
    let warm = lforge_in(dir.path(), &args, &[]);
    assert_eq!(cold.status.code(), Some(0));
    assert_eq!(cold.stdout, warm.stdout);
    let fresh = lforge_in(dir.path(), &[&["--no-cache"][..], &args].concat(), &[]);
    assert_eq!(cold.stdout, fresh.stdout);

    let records: Vec<_> = std::fs::read_dir(dir.path().join(".lforge-cache/v1")).unwrap().map(|e| e.unwrap().path()).collect();
    assert!(!records.is_empty());
    let verify = lforge_in(dir.path(), &["cache", "verify", "--recompute"], &[]);
    assert_eq!(verify.status.code(), Some(0), "{}", stdout(&verify));

    // Flip the payload of one record: verify fails, the next run rebuilds it.
    let victim = records.iter().find(|p| std::fs::read_to_string(p).unwrap().contains("221")).expect("a record with 221");
    let text = std::fs::read_to_string(victim).unwrap().replacen("221", "222", 1);
    std::fs::write(victim, text).unwrap();
    assert_eq!(lforge_in(dir.path(), &["cache", "verify"], &[]).status.code(), Some(2));
    let healed = lforge_in(dir.path(), &args, &[]);
    assert!(stderr(&healed).contains("corrupt"), "{}", stderr(&healed));
    assert_eq!(healed.stdout, cold.stdout);
    assert_eq!(lforge_in(dir.path(), &["cache", "verify"], &[]).status.code(), Some(0));

    let cleared = lforge_in(dir.path(), &["cache", "clear"], &[]);
    assert_eq!(cleared.status.code(), Some(0));
    assert!(!dir.path().join(".lforge-cache/v1").exists());
}

#[test]
fn concurrent_runs_share_a_cache() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["bss", "--line", "3", "--max-internal", "24", "--format", "json"];
    let outputs: Vec<Output> = std::thread::scope(|s| {
        let handles: Vec<_> = (0..4).map(|_| s.spawn(|| lforge_in(dir.path(), &args, &[]))).collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    });
    assert!(outputs.iter().all(|o| o.status.code() == Some(0) && o.stdout == outputs[0].stdout));
    assert_eq!(lforge_in(dir.path(), &["cache", "verify"], &[]).status.code(), Some(0));
}
