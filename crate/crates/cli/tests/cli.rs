use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_buslab"))
        .args(args)
        .output()
        .expect("spawn buslab")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn usage_error(args: &[&str], parameter: &str) {
    let out = run(args);
    assert_eq!(out.status.code(), Some(2), "{args:?}");
    let err = String::from_utf8(out.stderr).unwrap();
    assert_eq!(err.trim_end().lines().count(), 1, "{err}");
    assert!(err.contains(parameter), "{args:?}: {err}");
}

#[test]
fn sweep_is_byte_stable_with_lf_endings() {
    let a = stdout(&["sweep", "--k", "11"]);
    let b = stdout(&["sweep", "--k", "11"]);
    assert_eq!(a, b);
    assert!(!a.contains('\r'));
    let lines: Vec<&str> = a.lines().collect();
    assert_eq!(lines[0], "b,d_max,d_opt,saving");
    assert_eq!(lines.len(), 1 + 2037 + 1);
    assert_eq!(lines[2], "1,6,2379/512,0.155184659");
    assert_eq!(lines[13], "12,3,2921/1024,0.481356534");
    assert_eq!(*lines.last().unwrap(), "ppm_bound,1,2047/2048,0.818270597");
}

#[test]
fn sweep_writes_to_file() {
    let path = std::env::temp_dir().join(format!("buslab-sweep-{}.csv", std::process::id()));
    stdout(&["sweep", "--k", "4", "--b", "3", "--out", path.to_str().unwrap()]);
    let csv = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).unwrap();
    assert_eq!(csv, stdout(&["sweep", "--k", "4", "--b", "3"]));
    assert_eq!(csv.lines().count(), 6);
}

#[test]
fn codebook_lines() {
    let csv = stdout(&["codebook", "--k", "4", "--b", "11"]);
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "u,differential,weight");
    assert_eq!(lines[1], "0,000000000000000,0");
    assert_eq!(lines[8], "7,000000001000000,1");
    assert_eq!(lines.len(), 17);

    let csv = stdout(&["codebook", "--k", "11", "--b", "12"]);
    assert_eq!(csv.lines().last().unwrap(), "2047,11100000000000000000000,3");

    let golay = stdout(&["codebook", "--family", "golay", "--k", "11"]);
    assert_eq!(golay.lines().count(), 1 + 2048);
}

#[test]
fn analyze_reports_exact_values() {
    let text = stdout(&["analyze", "--k", "11", "--b", "12"]);
    assert!(text.contains("d_opt          2921/1024 = 2.85253906"));
    assert!(text.contains("ratio          2921/5632 = 0.518643466"));
    let csv = stdout(&["analyze", "--k", "1", "--b", "1", "--csv"]);
    let row: Vec<&str> = csv.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(row[11], "4");
}

#[test]
fn simulate_totals_ignore_job_count() {
    let args = ["simulate", "--k", "8", "--b", "4", "--length", "300000", "--seed", "9", "--json"];
    let one: serde_json::Value = serde_json::from_str(&stdout(&args)).unwrap();
    let mut more = args.to_vec();
    more.extend(["--jobs", "3"]);
    let three: serde_json::Value = serde_json::from_str(&stdout(&more)).unwrap();
    assert_eq!(one, three);
    assert_eq!(one["words"], 300000);
}

#[test]
fn verify_scopes_pass() {
    for scope in ["rank", "coset", "optimal"] {
        let out = stdout(&["verify", scope]);
        assert!(out.starts_with("[PASS]"), "{out}");
    }
    assert!(stdout(&["verify", "coset"]).contains("1/23/253/1771"));
}

#[test]
fn errors_exit_two_and_name_the_parameter() {
    usage_error(&["analyze", "--k", "0"], "k");
    usage_error(&["analyze", "--k", "11", "--b", "2000000"], "b");
    usage_error(&["simulate", "--k", "11"], "--b");
    usage_error(&["simulate", "--family", "dbi", "--k", "4", "--b", "3"], "--b");
    usage_error(&["simulate", "--family", "golay", "--k", "5"], "--k");
    usage_error(&["simulate", "--family", "uncoded", "--k", "4", "--length", "0"], "--length");
    usage_error(&["codebook", "--k", "13", "--b", "2"], "--k");
    usage_error(&["codebook", "--family", "dbi", "--k", "3"], "--family");
    usage_error(&["sweep", "--k", "4", "--out", "/nonexistent-dir/x.csv"], "--out");
    let out = run(&["simulate", "--family", "nonsense", "--k", "4"]);
    assert_eq!(out.status.code(), Some(2));
}
