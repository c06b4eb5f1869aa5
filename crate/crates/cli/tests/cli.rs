use std::path::PathBuf;
use std::process::{Command, Output};

use causal_core::sequent::parse_proof;
use causal_core::{check_proof, CausalTheory, Sequent};
use serde_json::Value;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
        .display()
        .to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_causal")).args(args).output().expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut args = args.to_vec();
    args.push("--json");
    serde_json::from_str(&stdout(&args)).unwrap()
}

#[test]
fn models_flags_the_explained_model() {
    let v = json(&["models", &fixture("theta1.txt")]);
    let models = v["result"]["models"].as_array().unwrap();
    assert_eq!(models.len(), 4);
    let explained: Vec<&Value> = models.iter().filter(|m| m["explained"] == true).collect();
    assert_eq!(explained.len(), 1);
    assert_eq!(explained[0]["model"], "p=1,q=1");
    assert_eq!(explained[0]["successors"], 1);
    assert_eq!(models[0]["successors"], 4);
}

#[test]
fn models_without_rules_explain_nothing() {
    let v = json(&["models", &fixture("no_rules.txt")]);
    assert_eq!(v["result"]["models"].as_array().unwrap().len(), 4);
    assert_eq!(v["result"]["explained_count"], 0);
}

#[test]
fn malformed_input_exits_with_position() {
    let out = run(&["models", &fixture("malformed.txt")]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("line 2, column 12"), "{err}");
    assert!(out.stdout.is_empty());
}

#[test]
fn capacity_and_undeclared_atoms_exit_2() {
    assert_eq!(run(&["models", &fixture("theta1.txt"), "--max-atoms", "1"]).status.code(), Some(2));
    assert_eq!(run(&["entail", &fixture("theta1.txt"), "p |- x"]).status.code(), Some(2));
    assert_eq!(run(&["solve", "/nonexistent/domain"]).status.code(), Some(2));
}

#[test]
fn entail_ships_a_checked_proof() {
    let dir = tempfile::tempdir().unwrap();
    let proof_path = dir.path().join("proof.txt");
    let v = json(&[
        "entail",
        &fixture("theta1.txt"),
        "p |- []q",
        "--proof-out",
        proof_path.to_str().unwrap(),
    ]);
    assert_eq!(v["result"]["verdict"], "PROVABLE");
    let written = std::fs::read_to_string(&proof_path).unwrap();
    assert_eq!(v["result"]["proof"], written.as_str());
    let proof = parse_proof(&written).unwrap();
    let theory = CausalTheory::from_strs(["p", "q"], ["p |> p", "p |> q"]).unwrap();
    assert_eq!(check_proof(&proof, &theory), Ok(()));
    assert_eq!(proof.conclusion, Sequent::parse("p |- []q").unwrap());
}

#[test]
fn entail_reports_countermodels() {
    let v = json(&["entail", &fixture("theta1.txt"), "q |- []q"]);
    assert_eq!(v["result"]["verdict"], "NOT PROVABLE");
    assert_eq!(v["result"]["countermodel"], "p=0,q=1");
    assert!(v["result"].get("proof").is_none());

    let v = json(&["entail", &fixture("no_rules.txt"), "|- true"]);
    assert_eq!(v["result"]["verdict"], "PROVABLE");
}

const YSP_TABLE: &str = "       0 1 2\nalive  ⊤ ⊤ ⊥\nloaded ⊤ ⊤ ⊥\nwait   ⊤ ⊥\nshoot  ⊥ ⊤\n";

#[test]
fn solve_finds_the_single_shooting_history() {
    let v = json(&["solve", &fixture("ysp.domain")]);
    assert_eq!(v["result"]["history_count"], 1);
    assert_eq!(v["result"]["non_occurrence_completion"], true);
    assert_eq!(v["result"]["histories"][0]["table"], YSP_TABLE);
    assert_eq!(v["result"]["histories"][0]["fluents"]["alive"], serde_json::json!([true, true, false]));

    let demo = json(&["demo-ysp"]);
    assert_eq!(demo["result"], v["result"]);
}

#[test]
fn solve_rejects_contradictory_init() {
    let out = run(&["solve", &fixture("contradictory.domain")]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn solve_without_actions_is_pure_persistence() {
    let v = json(&["solve", &fixture("inertia.domain")]);
    assert_eq!(v["result"]["history_count"], 1);
    assert_eq!(v["result"]["non_occurrence_completion"], false);
    let h = &v["result"]["histories"][0];
    assert_eq!(h["fluents"]["f"], serde_json::json!([true, true, true]));
    assert_eq!(h["fluents"]["g"], serde_json::json!([false, false, false]));
}

#[test]
fn pj_emits_an_argument_proof() {
    let v = json(&["pj", &fixture("scriven.args"), "--head", "p", "--grounds", "a"]);
    assert_eq!(v["result"]["verdict"], "PROVABLE");
    assert_eq!(v["result"]["sequent"], "a |- []p");
    assert!(v["result"]["argument_proof"].as_str().unwrap().contains("Axiom | (p, {a})"));

    let v = json(&["pj", &fixture("scriven.args"), "--head", "p", "--grounds", "d"]);
    assert_eq!(v["result"]["verdict"], "NOT PROVABLE");
}

#[test]
fn turner_consequence_is_nonmonotonic() {
    let v = json(&["turner", &fixture("t1.s5"), "--query", "p"]);
    assert_eq!(v["result"]["explained"], true);
    assert_eq!(v["result"]["explained_models"], serde_json::json!(["p=1"]));
    let v = json(&["turner", &fixture("t2.s5"), "--query", "p"]);
    assert_eq!(v["result"]["explained"], false);
    assert_eq!(v["result"]["explained_models"].as_array().unwrap().len(), 2);
    let v = json(&["turner", "--witness"]);
    assert_eq!(v["result"]["nonmonotonic"], true);
}

#[test]
fn output_is_byte_identical_across_runs() {
    let cases: Vec<Vec<String>> = vec![
        vec!["models".into(), fixture("theta1.txt")],
        vec!["entail".into(), fixture("theta1.txt"), "p |- []q".into()],
        vec!["solve".into(), fixture("ysp.domain")],
        vec!["pj".into(), fixture("scriven.args"), "--head".into(), "p".into(), "--grounds".into(), "a | b".into()],
        vec!["turner".into(), fixture("t2.s5"), "--witness".into()],
        vec!["demo-ysp".into()],
    ];
    for case in cases {
        for json in [false, true] {
            let mut args: Vec<&str> = case.iter().map(String::as_str).collect();
            if json {
                args.push("--json");
            }
            assert_eq!(stdout(&args), stdout(&args), "{args:?}");
        }
    }
}

#[test]
fn reports_echo_the_command_and_digest_inputs() {
    let text = stdout(&["models", &fixture("theta1.txt")]);
    let first = text.lines().next().unwrap();
    assert!(first.starts_with("command: causal models "), "{first}");
    assert!(text.contains("sha256=84f8dc71395316ab9bd26b092e5e0a5b8a785f853023a58ad981bbb8705baf24"));

    let raw = stdout(&["entail", &fixture("theta1.txt"), "p |- []q", "--json"]);
    let order: Vec<usize> = ["\"args\"", "\"command\"", "\"inputs\"", "\"result\""]
        .iter()
        .map(|k| raw.find(k).unwrap())
        .collect();
    assert!(order.windows(2).all(|w| w[0] < w[1]));
    assert!(!raw.contains("timing"));
}

#[test]
fn timing_is_opt_in() {
    let text = stdout(&["demo-ysp", "--timing"]);
    assert!(text.lines().last().unwrap().starts_with("timing: "));
    assert!(!text.contains("--timing"));
    let v = json(&["demo-ysp", "--timing"]);
    assert!(v["timing_ms"].as_f64().unwrap() >= 0.0);
}
