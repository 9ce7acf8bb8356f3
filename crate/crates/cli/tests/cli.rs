use std::fs;
use std::path::Path;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_bsrec");

const TWO_EDGE: &str = r#"{"version":1,"m":2,"n":1,"edges":[[1,1,5.0],[2,1,3.0]],"degree_bounds":{"buyers":[2,2],"sellers":[2]},"conflicts":[[1,2]],"conflict_thresholds":[0]}"#;

fn run(args: &[&str]) -> Output {
    Command::new(BIN)
        .args(args)
        .env_remove("BSREC_OUT_DIR")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_owned()
}

fn json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn greedy_on_two_edge_example() {
    let dir = tempfile::tempdir().unwrap();
    let inst = write(dir.path(), "two.json", TWO_EDGE);
    let out = dir.path().join("out");
    let o = run(&["solve", &inst, "--method", "greedy", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("objective     5"));
    let sol = json(&out.join("greedy.solution.json"));
    assert_eq!(sol["objective"], 5.0);
    assert_eq!(sol["selected"], serde_json::json!([[1, 1]]));
    assert!(sol.get("elapsed_s").is_none());

    let sol_path = out.join("greedy.solution.json");
    let v = run(&["validate", &inst, "--solution", sol_path.to_str().unwrap()]);
    assert_eq!(v.status.code(), Some(0), "{}", stderr(&v));
}

#[test]
fn validate_reports_named_violations() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(
        dir.path(),
        "bad.json",
        r#"{"version":1,"m":1,"n":1,"edges":[[3,1,1.0],[1,1,-2.0]],"degree_bounds":{"buyers":[1],"sellers":[1]},"conflicts":[[1,1]],"conflict_thresholds":[0]}"#,
    );
    let o = run(&["validate", &bad]);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    assert!(text.contains("buyer index out of range"), "{text}");
    assert!(text.contains("violation:"));
    assert!(text.lines().filter(|l| l.starts_with("violation:")).count() >= 2);

    let garbage = write(dir.path(), "garbage.json", "{not json");
    let o = run(&["validate", &garbage]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("malformed"));

    let future = write(dir.path(), "v2.json", r#"{"version":2}"#);
    let o = run(&["validate", &future]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("version"));
}

#[test]
fn usage_errors_exit_one() {
    let o = run(&["solve", "missing.json", "--method", "greedy", "--bogus"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("Usage"));
    let o = run(&["solve", "missing.json", "--method", "greedy"]);
    assert_eq!(o.status.code(), Some(1));
    let o = run(&["solve", "missing.json", "--method", "simplex"]);
    assert_eq!(o.status.code(), Some(1));
    let o = run(&["--help"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn stochastic_paths_need_a_seed() {
    let dir = tempfile::tempdir().unwrap();
    let inst = write(dir.path(), "two.json", TWO_EDGE);
    let o = run(&["solve", &inst, "--method", "sdp"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("seed"));
    let o = run(&["generate", "--buyers", "10", "--sellers", "2", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("--seed"));
    let o = run(&["bench", "greedy-scaling", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn compare_agrees_with_oracle() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g");
    let o = run(&[
        "generate", "--buyers", "12", "--sellers", "3", "--window", "5", "--degree-ratio", "0.6",
        "--conflict-ratio", "0.3", "--threshold", "0", "--seed", "4", "--out", g.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let inst = g.join("instance.json");
    let report = json(&g.join("generation.json"));
    assert!(report["edges"].as_u64().unwrap() <= 20);

    let o = run(&["compare", inst.to_str().unwrap(), "--seed", "2", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let mut reader = csv::Reader::from_path(dir.path().join("compare.csv")).unwrap();
    let rows: Vec<csv::StringRecord> = reader.records().map(|r| r.unwrap()).collect();
    let obj = |name: &str| -> f64 {
        rows.iter().find(|r| &r[0] == name).unwrap()[1].parse().unwrap()
    };
    let oracle = obj("oracle");
    assert_eq!(obj("ilp"), oracle);
    for m in ["lp-round", "greedy", "sdp"] {
        assert!(obj(m) <= oracle + 1e-9, "{m}");
    }
    assert!(rows.iter().all(|r| &r[4] == "true"));
}

#[test]
fn node_limit_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g");
    let o = run(&[
        "generate", "--buyers", "26", "--sellers", "5", "--window", "10", "--degree-ratio", "0.6",
        "--conflict-ratio", "0.2", "--threshold", "1", "--seed", "3", "--out", g.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let inst = g.join("instance.json");
    let out = dir.path().join("s");
    let o = run(&[
        "solve", inst.to_str().unwrap(), "--method", "ilp", "--node-limit", "1", "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(2), "{}", stdout(&o));
    let sol = json(&out.join("ilp.solution.json"));
    assert!(sol["upper_bound"].as_f64().unwrap() >= sol["objective"].as_f64().unwrap());
    let o = run(&["solve", inst.to_str().unwrap(), "--method", "ilp"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn solve_is_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g");
    let o = run(&[
        "generate", "--buyers", "26", "--sellers", "5", "--window", "10", "--degree-ratio", "0.4",
        "--conflict-ratio", "0.1", "--threshold", "1", "--weights", "rank", "--seed", "9", "--out",
        g.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let inst = g.join("instance.json");
    for method in ["crec-flow", "crec-lp", "greedy", "lp-round", "ilp", "sdp"] {
        let mut files = Vec::new();
        for rep in 0..2 {
            let out = dir.path().join(format!("{method}-{rep}"));
            let o = run(&[
                "solve", inst.to_str().unwrap(), "--method", method, "--seed", "5", "--restarts", "4",
                "--out", out.to_str().unwrap(),
            ]);
            assert_eq!(o.status.code(), Some(0), "{method}: {}", stderr(&o));
            files.push((
                fs::read(out.join(format!("{method}.solution.json"))).unwrap(),
                fs::read(out.join(format!("{method}.report.json"))).unwrap(),
            ));
        }
        assert_eq!(files[0], files[1], "{method}");
    }
    let g2 = dir.path().join("g2");
    run(&[
        "generate", "--buyers", "26", "--sellers", "5", "--window", "10", "--degree-ratio", "0.4",
        "--conflict-ratio", "0.1", "--threshold", "1", "--weights", "rank", "--seed", "9", "--out",
        g2.to_str().unwrap(),
    ]);
    assert_eq!(fs::read(&inst).unwrap(), fs::read(g2.join("instance.json")).unwrap());
}

#[test]
fn record_elapsed_adds_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let inst = write(dir.path(), "two.json", TWO_EDGE);
    let out = dir.path().join("o");
    let o = run(&[
        "solve", &inst, "--method", "crec-flow", "--record-elapsed", "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let sol = json(&out.join("crec-flow.solution.json"));
    assert_eq!(sol["objective"], 8.0);
    assert!(sol["elapsed_s"].as_f64().is_some());
}

#[test]
fn out_dir_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(BIN)
        .args(["generate", "--buyers", "8", "--sellers", "2", "--window", "3", "--seed", "1"])
        .env("BSREC_OUT_DIR", dir.path())
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(dir.path().join("instance.json").exists());
}

#[test]
fn reduce_rmis_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let rmis = write(
        dir.path(),
        "r.json",
        r#"{"version":1,"machines":2,"jobs":[{"interval":[0,2],"eligible":[[1,3.0],[2,1.0]]},{"interval":[1,3],"eligible":[[1,2.0]]},{"interval":[2,4],"eligible":[[1,4.0],[2,2.5]]}]}"#,
    );
    let out = dir.path().join("inst.json");
    let o = run(&["reduce", "rmis", "--in", &rmis, "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let o = run(&["solve", out.to_str().unwrap(), "--method", "oracle"]);
    assert_eq!(o.status.code(), Some(0));
    // Jobs 1 and 3 on machine 1.
    assert!(stdout(&o).contains("objective     7"), "{}", stdout(&o));
}

#[test]
fn import_csv_files() {
    let dir = tempfile::tempdir().unwrap();
    let edges = write(dir.path(), "e.csv", "buyer,seller,weight\n1,1,5\n2,1,3\n");
    let conflicts = write(dir.path(), "c.csv", "1,2\n");
    let out = dir.path().join("inst.json");
    let o = run(&[
        "import", "--edges", &edges, "--conflicts", &conflicts, "--buyer-bound", "2",
        "--seller-bound", "2", "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let o = run(&["solve", out.to_str().unwrap(), "--method", "ilp"]);
    assert!(stdout(&o).contains("objective     5"));
}

#[test]
fn bench_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let o = run(&[
        "bench", "crec-scaling", "--seed", "1", "--out", d, "--buyers", "80", "--sellers", "8",
        "--densities", "0.1,0.2", "--ratios", "0.3", "--fractions", "0.5,1", "--runs", "1",
        "--jobs", "2",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = fs::read_to_string(dir.path().join("crec_scaling.csv")).unwrap();
    assert_eq!(text.lines().count(), 5);

    let o = run(&[
        "bench", "cacrec-quality", "--seed", "1", "--out", d, "--conflict-ratios", "0.1",
        "--degree-ratios", "0.5", "--weights", "rank", "--restarts", "2", "--ilp-buyers", "20",
        "--ilp-sellers", "3", "--ilp-window", "6",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(dir.path().join("cacrec_quality_sdp.csv").exists());
    assert!(dir.path().join("cacrec_quality_ilp.csv").exists());

    let o = run(&[
        "bench", "greedy-scaling", "--seed", "1", "--out", d, "--buyers", "300", "--sellers", "30",
        "--window", "30", "--fractions", "0.5,1", "--runs", "1",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("log-log slope"));
}
