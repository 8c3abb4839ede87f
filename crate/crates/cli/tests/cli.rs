use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn tl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tl")).args(args).output().expect("binary runs")
}

fn tl_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_tl"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap().trim().to_string()
}

#[test]
fn mul_prints_normal_form() {
    let o = tl(&["mul", "--n", "3", "--words", "1 2 1"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "λ^-2 · e1");
    let o = tl(&["mul", "--n", "4", "--words", "1;3;1"]);
    assert_eq!(stdout(&o), "e1e3");
}

#[test]
fn trace_at_index_four() {
    let o = tl(&["trace", "--domain", "index=4", "--n", "3", "--word", "1"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "1/4");
}

#[test]
fn lemma_names_and_aliases() {
    for lemma in ["5.7", "p-exchange"] {
        let o = tl(&["verify", "--lemma", lemma, "--max", "4", "--domain", "symbolic"]);
        assert_eq!(o.status.code(), Some(0));
        let cert: Value = serde_json::from_str(&stdout(&o)).unwrap();
        assert_eq!(cert["suite"], "p-exchange");
        assert_eq!(cert["pass"], true);
        assert!(cert["cases"].as_array().unwrap().iter().all(|c| c["equal"] == true));
    }
    let o = tl(&["verify", "--lemma", "5.6", "--max", "5"]);
    assert_eq!(o.status.code(), Some(0));
    let o = tl(&["verify", "--lemma", "pair-reduction", "--max", "4"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn usage_errors_exit_two_and_name_the_flag() {
    let o = tl(&["verify", "--lemma", "5.8"]);
    assert_eq!(o.status.code(), Some(2));
    let o = tl(&["trace", "--domain", "nonsense", "--n", "2", "--word", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("--domain"));
    let o = tl(&["mul", "--n", "2", "--words", "3"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("--words"));
}

#[test]
fn failing_sweep_exits_one() {
    // traciality needs d = Tr(F*F) to match the index; I3 at index 2 does not
    let o = tl(&["verify", "--suite", "traciality", "--domain", "index=2", "--F", "I3", "--max", "1"]);
    assert_eq!(o.status.code(), Some(1));
    let cert: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(cert["pass"], false);
}

#[test]
fn verify_suites() {
    for args in [
        vec!["verify", "--conjugate-eq", "--max-level", "5"],
        vec!["verify", "--suite", "relations", "--max", "5"],
        vec!["verify", "--suite", "markov", "--max", "4"],
        vec!["verify", "--suite", "traciality", "--domain", "index=2", "--F", "I2", "--max", "2"],
        vec!["verify", "--suite", "quasitensor", "--domain", "index=17/4", "--F", "t=2", "--max", "2"],
    ] {
        let o = tl(&args);
        assert_eq!(o.status.code(), Some(0), "{args:?}");
    }
}

#[test]
fn certificates_are_stable_apart_from_timing() {
    let run = || {
        let o = tl(&["verify", "--lemma", "5.7", "--max", "3"]);
        let mut v: Value = serde_json::from_str(&stdout(&o)).unwrap();
        v.as_object_mut().unwrap().remove("wall_time_ms");
        v
    };
    assert_eq!(run(), run());
}

#[test]
fn element_json_through_stdin() {
    let o = tl_stdin(&["nf", "--json"], r#"{"n":3,"terms":[{"coeff":"2","word":[1,2,1]}]}"#);
    assert!(o.status.success());
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["words"]["terms"][0]["word"], serde_json::json!([1]));
    let o = tl_stdin(&["insert", "--R", "1", "1"], r#"{"n":2,"terms":[{"word":[]}]}"#);
    assert_eq!(stdout(&o), "λ");
    let o = tl(&["expect", "--domain", "index=4", "--n", "2", "--word", "1"]);
    assert_eq!(stdout(&o), "1/4");
}

#[test]
fn spectral_state_and_star() {
    let dir = std::env::temp_dir().join(format!("tl-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let a = dir.join("a.json");
    std::fs::write(&a, r#"{"terms":[{"level":1,"vec":[{"idx":[1],"coeff":"1"}]}]}"#).unwrap();
    let a = a.to_str().unwrap();
    let alg = ["--domain", "index=2", "--F", "I2"];
    let star = tl(&[&["spectral", "star"][..], &alg, &[a]].concat());
    assert!(star.status.success());
    let astar = dir.join("astar.json");
    std::fs::write(&astar, stdout(&star)).unwrap();
    let prod = tl(&[&["spectral", "mul"][..], &alg, &[astar.to_str().unwrap(), a]].concat());
    assert!(prod.status.success());
    let state = tl_stdin(&[&["spectral", "state"][..], &alg].concat(), &stdout(&prod));
    // h(a*a) = 1/d with d = 2
    assert_eq!(stdout(&state), "1/2");
    let coact = tl(&[&["spectral", "coact"][..], &alg, &[a]].concat());
    let v: Value = serde_json::from_str(&stdout(&coact)).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 2);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn graph_commands() {
    let o = tl(&["dims", "--graph", "A4", "--levels", "5", "--csv"]);
    assert_eq!(stdout(&o), "r,d_r\n0,1\n1,1\n2,2\n3,5\n4,13\n5,34");
    let o = tl(&["dims", "--graph", r#"{"adjacency":[[0,1],[1,0]],"star":0}"#, "--levels", "3", "--json"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["d"], serde_json::json!(["1", "1", "1", "1"]));
    let o = tl(&["bratteli", "--graph", "A3", "--levels", "2", "--dot"]);
    assert!(stdout(&o).starts_with("digraph"));
    let o = tl(&["growth", "--graph", "A4", "--levels", "32", "--json"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!((v["estimate"].as_f64().unwrap() - 2.618).abs() < 0.27);
}

#[test]
fn aof_report() {
    let o = tl(&["aof", "--domain", "index=17/4", "--F", "t=2", "--levels", "4"]);
    assert!(o.status.success());
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["report"]["sigma"], 1);
    assert_eq!(v["report"]["d"], "17/4");
    assert_eq!(v["report"]["subfactor"], true);
    assert_eq!(v["invariants"][4]["invariant_vectors"], 2);
}
