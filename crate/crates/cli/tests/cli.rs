use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn hmmfst(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hmmfst")).current_dir(dir).args(args).output().expect("binary runs")
}

fn ok(dir: &Path, args: &[&str]) -> String {
    let out = hmmfst(dir, args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

/// A generated training and test corpus with a model trained on the first.
fn workspace() -> TempDir {
    let tmp = TempDir::new().unwrap();
    let d = tmp.path();
    ok(d, &["gen", "--tags", "6", "--ambiguous", "8", "--sentences", "300", "--seed", "1", "--out", "train.txt"]);
    ok(d, &["gen", "--tags", "6", "--ambiguous", "8", "--sentences", "80", "--seed", "2", "--out", "test.txt"]);
    ok(d, &["train", "--corpus", "train.txt", "--out", "model"]);
    tmp
}

/// `(word, tag)` per token of `tag` output.
fn tagged(text: &str) -> Vec<(String, String)> {
    text.lines()
        .filter(|l| !l.is_empty())
        .map(|l| {
            let f: Vec<&str> = l.split('\t').collect();
            (f[0].to_string(), f.last().unwrap().to_string())
        })
        .collect()
}

#[test]
fn gen_is_reproducible() {
    let tmp = TempDir::new().unwrap();
    let d = tmp.path();
    ok(d, &["gen", "--sentences", "50", "--seed", "4", "--out", "a.txt"]);
    ok(d, &["gen", "--sentences", "50", "--seed", "4", "--out", "b.txt"]);
    ok(d, &["gen", "--sentences", "50", "--seed", "5", "--out", "c.txt"]);
    let a = fs::read(d.join("a.txt")).unwrap();
    assert_eq!(a, fs::read(d.join("b.txt")).unwrap());
    assert_ne!(a, fs::read(d.join("c.txt")).unwrap());
}

#[test]
fn train_writes_model_files() {
    let tmp = workspace();
    let model = tmp.path().join("model");
    for f in ["params.hmm", "lexicon.tsv", "guesser.tsv"] {
        assert!(model.join(f).exists(), "{f} missing");
    }
    let params = fs::read_to_string(model.join("params.hmm")).unwrap();
    assert!(params.contains("CLASS [UNKNOWN] = "));
    assert!(params.contains("SENT_END [SENT]"));
}

#[test]
fn s_type_on_its_own_corpus_matches_the_hmm() {
    let tmp = workspace();
    let d = tmp.path();
    ok(d, &["build", "--model", "model", "--type", "s+n1", "--corpus", "train.txt", "--out", "s.fst"]);
    let hmm = tagged(&ok(d, &["tag", "--model", "model", "--input", "train.txt"]));
    let fst = tagged(&ok(d, &["tag", "--model", "model", "--fst", "s.fst", "--input", "train.txt"]));
    let tokens = fs::read_to_string(d.join("train.txt")).unwrap().lines().filter(|l| !l.is_empty()).count();
    assert_eq!(hmm.len(), tokens);
    assert_eq!(fst, hmm);
}

#[test]
fn dumped_subsequences_rebuild_the_same_transducer() {
    let tmp = workspace();
    let d = tmp.path();
    let common = ["build", "--model", "model", "--type", "s+n1"];
    ok(d, &[&common[..], &["--corpus", "train.txt", "--min-freq", "2", "--dump-subsequences", "subs.txt", "--out", "a.fst"]].concat());
    ok(d, &[&common[..], &["--subsequences", "subs.txt", "--out", "b.fst"]].concat());
    ok(d, &[&common[..], &["--corpus", "train.txt", "--min-freq", "2", "--out", "c.fst"]].concat());
    let a = fs::read(d.join("a.fst")).unwrap();
    assert_eq!(a, fs::read(d.join("b.fst")).unwrap());
    assert_eq!(a, fs::read(d.join("c.fst")).unwrap());
    let subs = fs::read_to_string(d.join("subs.txt")).unwrap();
    assert!(subs.lines().all(|l| (l.starts_with("I ") || l.starts_with("M ")) && l.contains(" | ")));
}

#[test]
fn tag_shows_classes_and_handles_unknown_words() {
    let tmp = workspace();
    let d = tmp.path();
    ok(d, &["build", "--model", "model", "--type", "n1", "--out", "n1.fst"]);
    fs::write(d.join("in.txt"), "zzzunseen\n\n.\nqqq\n").unwrap();
    let out = ok(d, &["tag", "--model", "model", "--fst", "n1.fst", "--show-classes", "--input", "in.txt"]);
    let lines: Vec<&str> = out.lines().collect();
    // two sentences, the second closed at end of input
    assert_eq!(lines.len(), 5, "{out}");
    assert!(lines[0].starts_with("zzzunseen\t[UNKNOWN]\t"));
    assert_eq!(lines[1], ".\t[SENT]\tSENT");
    assert_eq!(lines[2], "");
    assert_eq!(lines[0].split('\t').count(), 3);
}

#[test]
fn eval_reports_every_tagger() {
    let tmp = workspace();
    let d = tmp.path();
    let out = ok(
        d,
        &["eval", "--model", "model", "--train", "train.txt", "--test", "test.txt", "--enumerate", "2", "--machine"],
    );
    for name in ["hmm", "n0", "n1", "s+n1(F=1)", "s+n1(<=2)"] {
        assert!(out.lines().any(|l| l.split_whitespace().next() == Some(name)), "{name} row missing:\n{out}");
        assert!(out.contains(&format!("agreement_with_hmm\t{name}\t")));
    }
    assert!(out.contains("states\tn0\t1\n"));
}

#[test]
fn bench_and_inspect() {
    let tmp = workspace();
    let d = tmp.path();
    ok(d, &["build", "--model", "model", "--type", "n0", "--out", "n0.fst"]);
    let out = ok(d, &["bench", "--model", "model", "--corpus", "test.txt", "--fst", "mine=n0.fst", "--runs", "3"]);
    assert!(out.lines().any(|l| l.starts_with("mine ")), "{out}");
    let out = ok(d, &["inspect", "--model", "model", "--fst", "n0.fst"]);
    assert!(out.contains("states\t1\n"));
    assert!(out.contains("input deterministic\ttrue"));
}

#[test]
fn exit_codes() {
    let tmp = workspace();
    let d = tmp.path();
    let code = |args: &[&str]| hmmfst(d, args).status.code();
    assert_eq!(code(&["build", "--model", "missing", "--type", "n0", "--out", "x.fst"]), Some(2));
    assert_eq!(code(&["tag", "--model", "model", "--fst", "missing.fst"]), Some(2));
    assert_eq!(code(&["build", "--model", "model", "--type", "s+n1", "--out", "x.fst"]), Some(1));
    assert_eq!(code(&["build", "--model", "model", "--type", "n2", "--out", "x.fst"]), Some(1));
    assert_eq!(code(&["no-such-verb"]), Some(1));
    fs::write(d.join("bad.txt"), "w\tNOSUCHTAG\n").unwrap();
    assert_eq!(code(&["eval", "--model", "model", "--train", "train.txt", "--test", "bad.txt"]), Some(1));
    assert_eq!(code(&["gen", "--sentences", "0", "--out", "g.txt"]), Some(1));
    assert_eq!(code(&["--help"]), Some(0));
}
