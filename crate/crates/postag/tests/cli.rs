//! End-to-end checks of the binary: exit codes, determinism, and
//! command contracts.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn workspace_path(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..").join(rel)
}

fn postag(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_postag"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no exit code")
}

#[test]
fn usage_error_is_code_1() {
    let out = postag(&["no-such-command"]);
    assert_eq!(code(&out), 1);
    let out = postag(&["train", "--bogus-flag"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn help_is_code_0() {
    assert_eq!(code(&postag(&["--help"])), 0);
    assert_eq!(code(&postag(&["tag", "--help"])), 0);
}

#[test]
fn missing_file_is_code_2() {
    let dir = tempfile::tempdir().unwrap();
    let model = dir.path().join("model.json");
    let out = postag(&[
        "train",
        "--corpus",
        "/no/such/file.slash",
        "--model",
        model.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 2);
    assert!(!model.exists());
}

#[test]
fn malformed_corpus_is_code_2() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("bad.slash");
    fs::write(&corpus, "word/NOTATAG\n").unwrap();
    let model = dir.path().join("model.json");
    let out = postag(&[
        "train",
        "--corpus",
        corpus.to_str().unwrap(),
        "--model",
        model.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 2);
}

#[test]
fn train_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = workspace_path("data/regression.slash");
    let run = |name: &str| {
        let model = dir.path().join(name);
        let out = postag(&[
            "train",
            "--corpus",
            corpus.to_str().unwrap(),
            "--model",
            model.to_str().unwrap(),
            "--seed",
            "3",
        ]);
        assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
        fs::read(model).unwrap()
    };
    assert_eq!(run("a.json"), run("b.json"));
}

#[test]
fn tag_with_and_without_rules() {
    let dir = tempfile::tempdir().unwrap();
    let model = dir.path().join("model.json");
    let out = postag(&[
        "train",
        "--corpus",
        workspace_path("data/regression.slash").to_str().unwrap(),
        "--model",
        model.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);

    let input = dir.path().join("input.txt");
    fs::write(&input, "the market rises sharply .\n").unwrap();
    let plain_out = dir.path().join("plain.slash");
    let out = postag(&[
        "tag",
        "--model",
        model.to_str().unwrap(),
        "--input",
        input.to_str().unwrap(),
        "--output",
        plain_out.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let tagged = fs::read_to_string(&plain_out).unwrap();
    assert_eq!(tagged, "the/DT market/NN rises/VBZ sharply/RB ./.\n");

    let ruled_out = dir.path().join("ruled.slash");
    let trace = dir.path().join("trace.txt");
    let out = postag(&[
        "tag",
        "--model",
        model.to_str().unwrap(),
        "--input",
        input.to_str().unwrap(),
        "--output",
        ruled_out.to_str().unwrap(),
        "--rules",
        workspace_path("resources/default.rules").to_str().unwrap(),
        "--lexicon",
        workspace_path("resources/lexicon.tsv").to_str().unwrap(),
        "--gazetteer",
        workspace_path("resources/gazetteer.txt").to_str().unwrap(),
        "--ontology",
        workspace_path("resources/ontology.txt").to_str().unwrap(),
        "--trace",
        trace.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert!(trace.exists());
    let trace_text = fs::read_to_string(&trace).unwrap();
    assert!(trace_text.contains("terminated_by="));
}

#[test]
fn correct_is_idempotent() {
    let dir = tempfile::tempdir().unwrap();
    let first = dir.path().join("first.slash");
    let second = dir.path().join("second.slash");
    let base: Vec<String> = [
        "--rules",
        workspace_path("resources/default.rules").to_str().unwrap(),
        "--lexicon",
        workspace_path("resources/lexicon.tsv").to_str().unwrap(),
        "--gazetteer",
        workspace_path("resources/gazetteer.txt").to_str().unwrap(),
        "--ontology",
        workspace_path("resources/ontology.txt").to_str().unwrap(),
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();

    let run = |input: &Path, output: &Path| {
        let mut args = vec!["correct".to_string()];
        args.extend(base.iter().cloned());
        args.extend([
            "--input".to_string(),
            input.display().to_string(),
            "--output".to_string(),
            output.display().to_string(),
        ]);
        let out = Command::new(env!("CARGO_BIN_EXE_postag"))
            .args(&args)
            .output()
            .unwrap();
        assert_eq!(out.status.code(), Some(0));
    };
    run(&workspace_path("data/fig1.slash"), &first);
    run(&first, &second);
    assert_eq!(fs::read(&first).unwrap(), fs::read(&second).unwrap());
}

#[test]
fn empty_rule_file_is_identity() {
    let dir = tempfile::tempdir().unwrap();
    let rules = dir.path().join("empty.rules");
    fs::write(&rules, "# nothing\n").unwrap();
    let output = dir.path().join("out.slash");
    let out = postag(&[
        "correct",
        "--rules",
        rules.to_str().unwrap(),
        "--input",
        workspace_path("data/fig1.slash").to_str().unwrap(),
        "--output",
        output.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(
        fs::read(&output).unwrap(),
        fs::read(workspace_path("data/fig1.slash")).unwrap()
    );
}

#[test]
fn eval_identical_files_and_shape_mismatch() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("report.json");
    let gold = workspace_path("data/regression.slash");
    let out = postag(&[
        "eval",
        "--gold",
        gold.to_str().unwrap(),
        "--pred",
        gold.to_str().unwrap(),
        "--report",
        report.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("token accuracy: 1.0000"));
    assert!(stdout.contains("sentence accuracy: 1.0000"));
    let json: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(json["token_accuracy"], 1.0);

    let short = dir.path().join("short.slash");
    fs::write(&short, "word/NN\n").unwrap();
    let out = postag(&[
        "eval",
        "--gold",
        gold.to_str().unwrap(),
        "--pred",
        short.to_str().unwrap(),
        "--report",
        report.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 2);
}

#[test]
fn confusions_on_perfect_predictions_is_empty() {
    let gold = workspace_path("data/regression.slash");
    let out = postag(&[
        "confusions",
        "--gold",
        gold.to_str().unwrap(),
        "--pred",
        gold.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty());
}

#[test]
fn kfold_bad_k_is_code_1() {
    let out = postag(&[
        "kfold",
        "--corpus",
        workspace_path("data/regression.slash").to_str().unwrap(),
        "--k",
        "1",
    ]);
    assert_eq!(code(&out), 1);
}

#[test]
fn kfold_reports_each_fold() {
    let out = postag(&[
        "kfold",
        "--corpus",
        workspace_path("data/regression.slash").to_str().unwrap(),
        "--k",
        "5",
        "--iterations",
        "2",
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8(out.stdout).unwrap();
    for i in 0..5 {
        assert!(stdout.contains(&format!("fold {i}:")));
    }
    assert!(stdout.contains("mean:"));
    assert!(stdout.contains("variance:"));
}

#[test]
fn bound_prints_the_paper_fraction() {
    let out = postag(&[
        "bound",
        "--tokens",
        "4500000",
        "--avg-len",
        "15",
        "--acc",
        "0.95",
        "--critical-frac",
        "0.5",
    ]);
    assert_eq!(code(&out), 0);
    let printed: f64 = String::from_utf8(out.stdout).unwrap().trim().parse().unwrap();
    assert!((printed - 0.375).abs() < 1e-12);

    let out = postag(&[
        "bound",
        "--tokens",
        "100",
        "--avg-len",
        "10",
        "--acc",
        "1.5",
        "--critical-frac",
        "0.5",
    ]);
    assert_eq!(code(&out), 1);
}

#[test]
fn corrupt_model_is_code_2() {
    let dir = tempfile::tempdir().unwrap();
    let model = dir.path().join("model.json");
    fs::write(&model, "{not json").unwrap();
    let input = dir.path().join("in.txt");
    fs::write(&input, "hello world\n").unwrap();
    let out = postag(&[
        "tag",
        "--model",
        model.to_str().unwrap(),
        "--input",
        input.to_str().unwrap(),
        "--output",
        dir.path().join("out.slash").to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 2);
}
