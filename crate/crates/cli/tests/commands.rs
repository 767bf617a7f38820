use std::path::PathBuf;
use std::process::Command;

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn run(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let mut full = vec!["symdyn"];
    full.extend_from_slice(args);
    let code = symdyn_cli::run(full, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn gamma_csv_for_the_golden_mean() {
    let (code, out, _) = run(&["gamma", "--sft", &data("golden.json"), "--n-max", "4"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "N,m_n,gamma_log_lambda,gamma_decimal,product_log_lambda,product_decimal");
    assert_eq!(lines[2], "2,1,-1,0.5,0.0,1.0");
    assert_eq!(lines.len(), 5);
}

#[test]
fn forbidden_words_and_graph_inputs_agree() {
    let a = run(&["gamma", "--sft", &data("golden.json"), "--n-max", "8", "--oracle-check"]);
    let b = run(&["gamma", "--sft", &data("golden.txt"), "--n-max", "8", "--oracle-check"]);
    assert_eq!(a.0, 0);
    assert_eq!(a.1, b.1);
}

#[test]
fn gamma_json_with_witnesses() {
    let (code, out, _) = run(&["gamma", "--sft", &data("full2.txt"), "--n-max", "3", "--format", "json", "--witness"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["rows"].as_array().unwrap().len(), 3);
    assert_eq!(v["witnesses"][2]["N"], 3);
    assert_eq!(v["verdict"]["verdict"], "decaying");
}

#[test]
fn output_and_plot_files() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("report.csv");
    let plot = dir.path().join("plot.csv");
    let (code, out, _) = run(&[
        "gamma",
        "--sft",
        &data("golden.json"),
        "--n-max",
        "3",
        "--output",
        report.to_str().unwrap(),
        "--emit-plot-data",
        plot.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert!(out.is_empty());
    assert_eq!(std::fs::read_to_string(&report).unwrap().lines().count(), 4);
    assert_eq!(
        std::fs::read_to_string(&plot).unwrap(),
        "N,product_log_lambda\n1,0.5\n2,0.0\n3,0.5\n"
    );
    let leftovers = std::fs::read_dir(dir.path()).unwrap().count();
    assert_eq!(leftovers, 2);
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "# defaults\nn-max = 5\nlambda = 4\nformat = json\n").unwrap();
    let cfg = cfg.to_str().unwrap();
    let (_, out, _) = run(&["--config", cfg, "gamma", "--sft", &data("golden.json")]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["rows"].as_array().unwrap().len(), 5);
    assert_eq!(v["lambda"], 4.0);
    assert_eq!(v["rows"][1]["gamma_decimal"], 0.25);

    let (_, out, _) = run(&["--config", cfg, "gamma", "--sft", &data("golden.json"), "--n-max", "2", "--format", "csv"]);
    assert_eq!(out.lines().count(), 3);

    std::fs::write(dir.path().join("bad.cfg"), "colour = red\n").unwrap();
    let bad = dir.path().join("bad.cfg");
    let (code, _, err) = run(&["--config", bad.to_str().unwrap(), "gamma", "--sft", &data("golden.json")]);
    assert_eq!(code, 1);
    assert!(err.contains("unknown key"));
}

#[test]
fn homoclinic_witness_or_none() {
    let (code, out, _) = run(&["homoclinic", "--sft", &data("golden.json")]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["kind"], "homoclinic");
    assert_eq!(v["disagreement_lo"], v["disagreement_hi"]);
    let (code, out, _) = run(&["homoclinic", "--sft", &data("twopoint.json")]);
    assert_eq!((code, out.as_str()), (0, "none\n"));
    let (code, out, _) = run(&["homoclinic", "--sft", &data("loop.json")]);
    assert_eq!((code, out.as_str()), (0, "none\n"));
}

#[test]
fn gamma_on_a_finite_system_is_degenerate() {
    let (code, out, err) = run(&["gamma", "--sft", &data("twopoint.json")]);
    assert_eq!(code, 2);
    assert!(out.is_empty());
    assert!(err.contains("twopoint.json"));
}

#[test]
fn mt_check_outcomes() {
    let (code, out, _) = run(&["mt-check", "--sft", &data("golden.json")]);
    assert_eq!(code, 0);
    assert_eq!(out, "homoclinic: yes (W=1); products ≤ λ^1: yes\n");

    let (code, out, err) = run(&["mt-check", "--sft", &data("twopoint.json")]);
    assert_eq!(code, 2);
    assert!(out.is_empty());
    assert!(err.contains("skipped"));

    let (code, out, _) = run(&["mt-check", "--random-corpus", "15", "--seed", "11", "--n-max", "16"]);
    assert_eq!(code, 0);
    assert!(out.contains("violations: 0"));
}

#[test]
fn input_errors_exit_with_one() {
    assert_eq!(run(&["gamma", "--sft", "/nonexistent/graph.json"]).0, 1);
    assert_eq!(run(&["gamma", "--sft", &data("golden.json"), "--lambda", "1"]).0, 1);
    assert_eq!(run(&["gamma", "--sft", &data("golden.json"), "--n-max", "0"]).0, 1);
    assert_eq!(run(&["iet-explore", "--a", "sqrt5"]).0, 1);
    assert_eq!(run(&["iet-explore", "--n-max", "4", "--horizon", "2"]).0, 1);
    assert_eq!(run(&["no-such-command"]).0, 1);
    let dir = tempfile::tempdir().unwrap();
    let broken = dir.path().join("broken.json");
    std::fs::write(&broken, "{\"vertices\": [\"A\"], \"edges\": [{\"id\": \"a\", \"from\": \"A\", \"to\": \"B\"}]}").unwrap();
    let (code, _, err) = run(&["homoclinic", "--sft", broken.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(err.contains("broken.json"));
}

#[test]
fn iet_explore_refuses_rational_parameters() {
    let (code, out, err) = run(&["iet-explore", "--a", "1/3", "--b", "2/3"]);
    assert_eq!(code, 3);
    assert!(out.is_empty());
    assert!(err.contains("rationally dependent"));
}

#[test]
fn iet_explore_uses_the_cache_directory() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("words");
    let args = ["iet-explore", "--n-max", "3", "--horizon", "20", "--cache-dir", cache.to_str().unwrap()];
    let (code, cold, _) = run(&args);
    assert_eq!(code, 0);
    let stored: Vec<_> = std::fs::read_dir(&cache).unwrap().collect();
    assert_eq!(stored.len(), 1);
    let (_, warm, _) = run(&args);
    assert_eq!(cold, warm);
    let header = cold.lines().next().unwrap();
    assert!(header.starts_with("N,m_lower,m_upper"));
    assert!(cold.lines().skip(1).all(|l| l.ends_with(",20,iet-derived")));
}

#[test]
fn iet_explore_json_evidence() {
    let dir = tempfile::tempdir().unwrap();
    let (code, out, _) = run(&[
        "iet-explore",
        "--n-max",
        "2",
        "--horizon",
        "10",
        "--format",
        "json",
        "--witness",
        "--cache-dir",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["a"], "-1+1*sqrt2");
    assert_eq!(v["evidence"].as_array().unwrap().len(), 2);
    assert_eq!(v["evidence"][0]["witness"]["certification"], "horizon-limited");
}

#[test]
fn binary_propagates_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_symdyn");
    let ok = Command::new(bin).args(["homoclinic", "--sft", &data("golden.json")]).output().unwrap();
    assert!(ok.status.success());
    let refused = Command::new(bin).args(["iet-explore", "--a", "1/4", "--b", "1/2"]).output().unwrap();
    assert_eq!(refused.status.code(), Some(3));
    let degenerate = Command::new(bin).args(["mt-check", "--sft", &data("twopoint.json")]).output().unwrap();
    assert_eq!(degenerate.status.code(), Some(2));
}
