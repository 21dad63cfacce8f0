use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_gsing"));
    cmd.env_remove("GSING_SEED");
    cmd
}

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures")
}

fn fixture(name: &str) -> PathBuf {
    fixtures().join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn run_path(sub: &str, path: &Path) -> Output {
    bin().arg(sub).arg(path).output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_str(stdout(out).trim()).unwrap()
}

fn json_lines(out: &Output) -> Vec<Value> {
    stdout(out).lines().map(|l| serde_json::from_str(l).unwrap()).collect()
}

#[test]
fn check_fig1_is_nonsingular() {
    let out = run_path("check", &fixture("fig1.txt"));
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let report = json(&out);
    assert_eq!(report["verdict"], "nonsingular");
    assert!(report.get("reason").is_none());
    assert_eq!(report["n"], 12);
    assert_eq!(report["m"], 21);
    assert_eq!(report["num_blocks"], 4);
    assert!(report["elapsed_ns"].as_u64().unwrap() > 0);
    assert!(report.get("trace").is_none());
}

#[test]
fn check_fig3_is_singular() {
    let out = run_path("check", &fixture("fig3.txt"));
    assert_eq!(code(&out), 1);
    let report = json(&out);
    assert_eq!(report["verdict"], "singular");
    assert_eq!(report["reason"], "final_component");
}

#[test]
fn check_rejects_cycle() {
    let out = run_path("check", &fixture("c4_invalid.txt"));
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("block 1 is not complete"), "{}", stderr(&out));
    assert!(stdout(&out).is_empty());
}

#[test]
fn parse_errors_exit_2_with_line_number() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.txt");
    std::fs::write(&path, "3 2\n1 2\n2 2\n").unwrap();
    let out = run_path("check", &path);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("line 3"), "{}", stderr(&out));

    let out = run_path("check", &dir.path().join("missing.txt"));
    assert_eq!(code(&out), 2);
}

#[test]
fn check_with_trace_embeds_steps() {
    let out = bin().args(["check", "--trace"]).arg(fixture("fig1.txt")).output().unwrap();
    assert_eq!(code(&out), 0);
    let trace = json(&out)["trace"].as_array().unwrap().clone();
    assert_eq!(trace.len(), 4);
    assert_eq!(trace[3]["S"], "30/13");
}

#[test]
fn trace_fig1_lines() {
    let out = run_path("trace", &fixture("fig1.txt"));
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let first = text.lines().next().unwrap();
    assert_eq!(
        first,
        r#"{"step":1,"block":[3,5,6,7],"cut_vertex":3,"case":"sum_neq_one","S":"3","gamma":"-3/2","new_weight":"-3/2"}"#
    );
    let steps = json_lines(&out);
    assert_eq!(steps.len(), 4);
    let keys: Vec<&str> = steps[0].as_object().unwrap().keys().map(String::as_str).collect();
    let mut expected = vec!["step", "block", "cut_vertex", "case", "S", "gamma", "new_weight"];
    expected.sort_unstable();
    let mut keys = keys;
    keys.sort_unstable();
    assert_eq!(keys, expected);
}

#[test]
fn trace_fig2_ends_on_unit_sum() {
    let out = run_path("trace", &fixture("fig2.txt"));
    assert_eq!(code(&out), 1);
    let steps = json_lines(&out);
    let last = steps.last().unwrap();
    assert_eq!(last["case"], "final_component");
    assert_eq!(last["block"], serde_json::json!([1, 2, 3]));
    assert_eq!(last["S"], "1");
    for v in 1..=3 {
        let w = steps.iter().filter(|s| s["cut_vertex"] == v).filter_map(|s| s["new_weight"].as_str()).next_back();
        assert_eq!(w, Some("-2"), "vertex {v}");
    }
}

#[test]
fn trace_k4_is_one_final_step() {
    let steps = json_lines(&run_path("trace", &fixture("k4.txt")));
    assert_eq!(steps.len(), 1);
    assert_eq!(steps[0]["case"], "final_component");
    assert_eq!(steps[0]["cut_vertex"], Value::Null);
}

#[test]
fn oracle_fig2() {
    let out = run_path("oracle", &fixture("fig2.txt"));
    assert_eq!(code(&out), 0);
    let report = json(&out);
    assert_eq!(report["det"], "0");
    assert!(report["nullity"].as_u64().unwrap() >= 1);
    assert_eq!(report["rank"].as_u64().unwrap() + report["nullity"].as_u64().unwrap(), 9);
}

#[test]
fn gen_star_matches_fig3() {
    let star = stdout(&run(&["gen", "star", "9"]));
    let fig3 = stdout(&run(&["gen", "fig3"]));
    assert_eq!(star, fig3);
    let on_disk = std::fs::read_to_string(fixture("fig3.txt")).unwrap();
    let stripped: String = on_disk.lines().filter(|l| !l.starts_with('#')).map(|l| format!("{l}\n")).collect();
    assert_eq!(star, stripped);
}

#[test]
fn gen_is_deterministic_and_validates_arguments() {
    let a = stdout(&run(&["gen", "random-block", "15", "2", "6", "99"]));
    let b = stdout(&run(&["gen", "random-block", "15", "2", "6", "99"]));
    assert_eq!(a, b);
    assert_eq!(code(&run(&["gen", "cycle", "5"])), 2);
    assert_eq!(code(&run(&["gen", "path"])), 2);
    assert_eq!(code(&run(&["gen", "path", "x"])), 2);
    assert_eq!(code(&run(&["gen", "random-block", "3", "1", "4", "5"])), 2);
}

#[test]
fn decompose_fig1() {
    let out = run_path("decompose", &fixture("fig1.txt"));
    assert_eq!(code(&out), 0);
    let d = json(&out);
    assert_eq!(d["block_graph"], true);
    assert_eq!(d["f"], serde_json::json!({"1": 2, "2": 2, "3": 2}));
    assert_eq!(d["bv"].as_array().unwrap().len(), 4);
    assert_eq!(d["cv"][0], serde_json::json!([1, 2, 3]));

    let d = json(&run_path("decompose", &fixture("c4_invalid.txt")));
    assert_eq!(d["block_graph"], false);
}

#[test]
fn corpus_exit_codes_match_oracle() {
    let mut seen = 0;
    for entry in std::fs::read_dir(fixtures()).unwrap() {
        let path = entry.unwrap().path();
        let check = run_path("check", &path);
        let name = path.file_name().unwrap().to_string_lossy().to_string();
        if name.contains("invalid") {
            assert_eq!(code(&check), 2, "{name}");
            continue;
        }
        let oracle = json(&run_path("oracle", &path));
        let expected = if oracle["det"] == "0" { 1 } else { 0 };
        assert_eq!(code(&check), expected, "{name}");
        assert_eq!(json(&check)["verdict"], if expected == 1 { "singular" } else { "nonsingular" });
        seen += 1;
    }
    assert!(seen >= 8);
}

#[test]
fn check_directory_reports_every_file() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["fig1.txt", "fig3.txt", "k4.txt"] {
        std::fs::copy(fixture(name), dir.path().join(name)).unwrap();
    }
    let out = run_path("check", dir.path());
    assert_eq!(code(&out), 1);
    let reports = json_lines(&out);
    assert_eq!(reports.len(), 3);
    assert!(reports[0]["file"].as_str().unwrap().ends_with("fig1.txt"));
    assert_eq!(reports[1]["verdict"], "singular");

    std::fs::copy(fixture("c4_invalid.txt"), dir.path().join("c4.txt")).unwrap();
    let out = run_path("check", dir.path());
    assert_eq!(code(&out), 2);
    assert_eq!(json_lines(&out).len(), 3);
    assert!(stderr(&out).contains("not complete"));
}

#[test]
fn output_is_deterministic_apart_from_timing() {
    let strip = |out: &Output| {
        let mut v = json(out);
        v.as_object_mut().unwrap().remove("elapsed_ns");
        v
    };
    let path = fixture("random_block_12.txt");
    let a = bin().args(["check", "--trace"]).arg(&path).output().unwrap();
    let b = bin().args(["check", "--trace"]).arg(&path).output().unwrap();
    assert_eq!(strip(&a), strip(&b));
}

#[test]
fn seeded_orders_agree_on_the_verdict() {
    let dir = tempfile::tempdir().unwrap();
    let mut reordered = false;
    for seed in 0..6u64 {
        let path = dir.path().join(format!("g{seed}.txt"));
        let text = stdout(&run(&["gen", "random-block", "12", "2", "5", &seed.to_string()]));
        std::fs::write(&path, text).unwrap();
        let base = code(&run_path("check", &path));
        let base_trace = stdout(&run_path("trace", &path));
        let mut traces = std::collections::BTreeSet::new();
        for order in 0..10 {
            let out = bin().env("GSING_SEED", order.to_string()).arg("check").arg(&path).output().unwrap();
            assert_eq!(code(&out), base, "graph {seed}, GSING_SEED={order}");
            let t = bin().env("GSING_SEED", order.to_string()).arg("trace").arg(&path).output().unwrap();
            traces.insert(stdout(&t));
        }
        // the deterministic order is unaffected by the variable being absent
        assert_eq!(stdout(&run_path("trace", &path)), base_trace);
        reordered |= traces.len() > 1;
    }
    assert!(reordered, "GSING_SEED never changed the elimination order");
}

#[test]
fn invalid_seed_is_rejected() {
    let out = bin().env("GSING_SEED", "abc").arg("check").arg(fixture("k4.txt")).output().unwrap();
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("GSING_SEED"));
}

#[test]
fn bench_prints_csv() {
    let out = run(&["bench", "--family", "path", "--sizes", "50,100,400", "--repeats", "3", "--oracle"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "size,median_ns,max_rational_bits,singular,oracle_median_ns");
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 3);
    assert_eq!(rows[0][0], "50");
    assert_eq!(rows[0][3], "false");
    assert!(!rows[1][4].is_empty());
    // no oracle timing above 200 vertices
    assert!(rows[2][4].is_empty());

    assert_eq!(code(&run(&["bench", "--family", "cycle", "--sizes", "10"])), 2);
}
