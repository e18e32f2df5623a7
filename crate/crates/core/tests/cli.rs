use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn apasp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_apasp"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn path(name: &str) -> String {
    data(name).to_str().unwrap().to_string()
}

#[test]
fn update_with_verify_reaches_golden_state() {
    let (g, t) = (path("fixture_g.txt"), path("fixture_update.trace"));
    let o = apasp(&["update", "-g", &g, "-t", &t, "--verify"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).starts_with("update 1 v verified\n"));

    let o = apasp(&["dump", "-g", &g, "-t", &t]);
    let golden = std::fs::read_to_string(data("fixture_g_prime.dump")).unwrap();
    assert_eq!(stdout(&o), golden);
}

#[test]
fn query_after_trace() {
    let (g, t) = (path("fixture_g.txt"), path("fixture_update.trace"));
    let o = apasp(&["query", "-g", &g, "-t", &t, "--pair", "x,y"]);
    assert_eq!(stdout(&o), "4 2\n");
    let o = apasp(&["query", "-g", &g, "--pair", "x,y"]);
    assert_eq!(stdout(&o), "4 4\n");
    let o = apasp(&["query", "-g", &g, "--pair", "y,x"]);
    assert_eq!(stdout(&o), "inf 0\n");
    let o = apasp(&["query", "-g", &g, "--pair", "x,nowhere"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn weight_decrease_is_rejected() {
    let o = apasp(&["update", "-g", &path("fixture_g.txt"), "-t", &path("decrease.trace")]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("WeightDecrease"), "{}", stderr(&o));
}

#[test]
fn bad_inputs_exit_one() {
    let o = apasp(&["dump", "-g", &path("missing.txt")]);
    assert_eq!(o.status.code(), Some(1));
    let o = apasp(&["frobnicate"]);
    assert_eq!(o.status.code(), Some(1));
    let o = apasp(&["query", "-g", &path("fixture_g.txt")]);
    assert_eq!(o.status.code(), Some(1));
    let o = apasp(&["dump", "-g", &path("fixture_update.trace")]);
    assert_eq!(o.status.code(), Some(1));
    let o = apasp(&["bench", "--random", "3,4"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn build_summary() {
    let o = apasp(&["build", "-g", &path("fixture_g.txt")]);
    let text = stdout(&o);
    let keys: Vec<&str> = text.lines().map(|l| l.split(' ').next().unwrap()).collect();
    assert_eq!(keys, ["n", "m", "triples", "shortest_triples", "m_star", "nu_star"]);
    assert!(text.starts_with("n 12\nm 16\n"));
}

#[test]
fn bc_scores_sorted_by_label() {
    let o = apasp(&["bc", "-g", &path("fixture_g.txt")]);
    let text = stdout(&o);
    let labels: Vec<&str> = text.lines().map(|l| l.split(' ').next().unwrap()).collect();
    let mut sorted = labels.clone();
    sorted.sort();
    assert_eq!(labels, sorted);
    assert!(text.lines().any(|l| l == "v 13"));
}

#[test]
fn verify_passes_on_fixture() {
    let o = apasp(&["verify", "-g", &path("fixture_g.txt"), "-t", &path("fixture_update.trace")]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(stdout(&o), "ok 1 updates\n");
}

#[test]
fn bench_emits_stable_json_lines() {
    let args = ["bench", "--random", "12,40,4", "--seed", "9"];
    let first = apasp(&args);
    assert_eq!(first.status.code(), Some(0), "{}", stderr(&first));
    let text = stdout(&first);
    assert_eq!(text.lines().count(), 4);
    for line in text.lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        let mut keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
        keys.sort();
        assert_eq!(
            keys,
            ["heap_ops", "new_triples_created", "triples_touched_cleanup", "triples_touched_fixup"]
        );
    }
    assert_eq!(stdout(&apasp(&args)), text);
}

#[test]
fn bench_on_files() {
    let o = apasp(&["bench", "-g", &path("fixture_g.txt"), "-t", &path("fixture_update.trace")]);
    assert_eq!(o.status.code(), Some(0));
    let stats: apasp::UpdateStats = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert!(stats.heap_ops > 0);
}

#[test]
fn in_process_run_matches_binary() {
    let g = path("fixture_g.txt");
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = apasp::cli::run(["apasp", "query", "-g", g.as_str(), "--pair", "x,b1"], &mut out, &mut err);
    assert_eq!(code, 0);
    assert_eq!(String::from_utf8(out).unwrap(), "3 2\n");
}
