use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

use tempfile::TempDir;

const PUBLIC: &str =
    "(S (NP (DT The) (NN public)) (VP (VBZ is) (ADVP (RB still)) (ADJP (JJ cautious))) (. .))";
const PUBLIC_TAGGED: &str = "The_DT public_NN is_VBZ still_RB cautious_JJ ._.";
const PUBLIC_NB: &str =
    "SHIFT SHIFT REDUCE-NP#2 SHIFT SHIFT REDUCE-ADVP#1 SHIFT REDUCE-ADJP#1 REDUCE-VP#3 SHIFT REDUCE-S#3 FINISH";

fn nbparse(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_nbparse"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(stdin.as_bytes())
        .unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn trained(dir: &Path, extra: &[&str]) -> PathBuf {
    let bank = write(dir, "public.ptb", &format!("{PUBLIC}\n"));
    let model = dir.join("model.txt");
    let mut args = vec![
        "train",
        s(&bank),
        "-o",
        s(&model),
        "--epochs",
        "5",
        "--seed",
        "7",
    ];
    args.extend_from_slice(extra);
    let o = nbparse(&args, "");
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    model
}

#[test]
fn overfit_model_reproduces_the_golden_trace() {
    let dir = TempDir::new().unwrap();
    let model = trained(dir.path(), &[]);
    let o = nbparse(
        &["parse", "-m", s(&model), "--trace"],
        &format!("{PUBLIC_TAGGED}\n"),
    );
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), format!("{PUBLIC}\n{PUBLIC_NB}\n"));
}

#[test]
fn training_is_byte_reproducible() {
    let dir = TempDir::new().unwrap();
    let args = ["--oracle", "dynamic", "--explore", "aggr=1.0,reg=0.1"];
    let a = fs::read(trained(dir.path(), &args)).unwrap();
    let b = fs::read(trained(dir.path(), &args)).unwrap();
    assert_eq!(a, b);
}

#[test]
fn binary_with_dynamic_oracle_is_a_usage_error() {
    let dir = TempDir::new().unwrap();
    let bank = write(dir.path(), "t.ptb", PUBLIC);
    let model = dir.path().join("m");
    let o = nbparse(
        &[
            "train",
            s(&bank),
            "-o",
            s(&model),
            "--system",
            "binary",
            "--oracle",
            "dynamic",
        ],
        "",
    );
    assert_eq!(o.status.code(), Some(2));
    assert!(!model.exists());
}

#[test]
fn empty_input_gives_empty_output() {
    let dir = TempDir::new().unwrap();
    let model = trained(dir.path(), &[]);
    let o = nbparse(&["parse", "-m", s(&model)], "");
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
}

#[test]
fn missing_tag_names_the_line() {
    let dir = TempDir::new().unwrap();
    let model = trained(dir.path(), &[]);
    let o = nbparse(&["parse", "-m", s(&model)], "The public_NN\n");
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 1"), "{}", stderr(&o));
}

#[test]
fn threads_keep_input_order() {
    let dir = TempDir::new().unwrap();
    let model = trained(dir.path(), &[]);
    let input: String = ["a_DT b_NN", PUBLIC_TAGGED, "x_VBZ", "c_JJ d_RB e_."]
        .iter()
        .map(|l| format!("{l}\n"))
        .collect::<String>()
        .repeat(5);
    let one = nbparse(&["parse", "-m", s(&model)], &input);
    let four = nbparse(&["parse", "-m", s(&model), "--threads", "4"], &input);
    assert_eq!(stdout(&one).lines().count(), 20);
    assert_eq!(stdout(&one), stdout(&four));
}

#[test]
fn parse_writes_to_a_file() {
    let dir = TempDir::new().unwrap();
    let model = trained(dir.path(), &[]);
    let input = write(dir.path(), "in.txt", &format!("{PUBLIC_TAGGED}\n"));
    let out = dir.path().join("out.ptb");
    let o = nbparse(&["parse", "-m", s(&model), s(&input), "-o", s(&out)], "");
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(fs::read_to_string(out).unwrap(), format!("{PUBLIC}\n"));
}

#[test]
fn eval_reports_arity_buckets() {
    let dir = TempDir::new().unwrap();
    let gold = write(dir.path(), "g.ptb", PUBLIC);
    let pred = write(
        dir.path(),
        "p.ptb",
        "(S (NP (DT The) (NN public)) (VP (VBZ is) (RB still) (JJ cautious)) (. .))",
    );
    let o = nbparse(&["eval", s(&gold), s(&pred), "--by-arity", "--records"], "");
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("matched=3\n"), "{out}");
    assert!(out.contains("gold=5\n"));
    assert!(out.contains("predicted=3\n"));
    assert!(out.contains("arity=1 matched=0 gold=2 predicted=0"));
}

#[test]
fn eval_rejects_misaligned_files() {
    let dir = TempDir::new().unwrap();
    let gold = write(dir.path(), "g.ptb", &format!("{PUBLIC}\n{PUBLIC}"));
    let pred = write(dir.path(), "p.ptb", PUBLIC);
    let o = nbparse(&["eval", s(&gold), s(&pred)], "");
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn small_audit_passes() {
    let o = nbparse(&["oracle-audit", "--max-len", "1", "--samples", "0"], "");
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("0 mismatches"), "{}", stdout(&o));
}

#[test]
fn disabled_condition_fails_the_audit() {
    let o = nbparse(
        &[
            "oracle-audit",
            "--max-len",
            "2",
            "--samples",
            "0",
            "--disable-condition",
            "stack",
            "--records",
        ],
        "",
    );
    assert_eq!(o.status.code(), Some(3));
    let out = stdout(&o);
    assert!(
        out.lines()
            .any(|l| l.starts_with("counterexample=1\tgold=")),
        "{out}"
    );
}

#[test]
fn stats_compare_the_systems() {
    let dir = TempDir::new().unwrap();
    let bank = write(dir.path(), "t.ptb", PUBLIC);
    let o = nbparse(&["stats", s(&bank), "--records"], "");
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o),
        "sentences=1\nnonbinary_mean=12.0000\nbinary_mean=14.0000\n"
    );
}

#[test]
fn config_file_values_yield_to_flags() {
    let dir = TempDir::new().unwrap();
    let bank = write(dir.path(), "t.ptb", PUBLIC);
    let cfg = write(
        dir.path(),
        "run.cfg",
        "# run settings\nsystem = binary\noracle = dynamic\n",
    );
    let model = dir.path().join("m");
    let o = nbparse(
        &["train", s(&bank), "-o", s(&model), "--config", s(&cfg)],
        "",
    );
    assert_eq!(o.status.code(), Some(2), "file values apply");
    let o = nbparse(
        &[
            "train",
            s(&bank),
            "-o",
            s(&model),
            "--config",
            s(&cfg),
            "--system",
            "nonbinary",
            "--epochs",
            "1",
        ],
        "",
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(fs::read_to_string(&model)
        .unwrap()
        .contains("system nonbinary"));
}

#[test]
fn bad_config_file_is_a_usage_error() {
    let dir = TempDir::new().unwrap();
    let bank = write(dir.path(), "t.ptb", PUBLIC);
    let cfg = write(dir.path(), "run.cfg", "colour = blue\n");
    let o = nbparse(&["stats", s(&bank), "--config", s(&cfg)], "");
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("config line 1"));
}

#[test]
fn missing_files_are_io_errors() {
    let dir = TempDir::new().unwrap();
    let o = nbparse(&["stats", s(&dir.path().join("nope.ptb"))], "");
    assert_eq!(o.status.code(), Some(1));
    let o = nbparse(&["parse", "-m", s(&dir.path().join("nope"))], "");
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn unknown_flags_are_usage_errors() {
    let o = nbparse(&["train", "--frobnicate"], "");
    assert_eq!(o.status.code(), Some(2));
}
