use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use gpc_surrogate::persist::load_model;
use gpc_surrogate::FourierField;

const CONFIG: &str = r#"
[problem]
dim = 1
max_mode = 4
s0 = 2.0
t0 = 0.0

[cube]
r = 0.1
s = 3.0
n_act = 3

[surrogate]
pool = "apriori"
budgets = [1, 6]

[error]
n_samples = 20
"#;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_gpc-surrogate"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn write_config(dir: &Path, text: &str) -> PathBuf {
    let path = dir.join("study.toml");
    std::fs::write(&path, text).unwrap();
    path
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn build_writes_one_model_per_budget_deterministically() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), CONFIG);
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    for dir in [&a, &b] {
        let out = run(&["build", s(&cfg), "--out-dir", s(dir)]);
        assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    }
    for name in ["model_N1.txt", "model_N6.txt"] {
        assert_eq!(
            std::fs::read(a.join(name)).unwrap(),
            std::fs::read(b.join(name)).unwrap()
        );
    }
    let single = load_model(&a.join("model_N1.txt")).unwrap();
    assert_eq!(single.realized_cost(), 1);
    assert_eq!(single.observations(0).len(), 1);
}

#[test]
fn invalid_config_exits_with_code_two() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), &CONFIG.replace("t0 = 0.0", "t0 = 2.0"));
    let out = run(&["build", s(&cfg), "--out-dir", s(tmp.path())]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("problem.t0"));
    let cfg = write_config(tmp.path(), &CONFIG.replace("n_act = 3", "n_act = 3\nradius = 1"));
    assert_eq!(code(&run(&["study", s(&cfg)])), 2);
    assert_eq!(code(&run(&["build", s(&tmp.path().join("missing.toml"))])), 2);
}

#[test]
fn eval_returns_constant_term_at_zero_and_rejects_outside_fields() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), CONFIG);
    assert_eq!(code(&run(&["build", s(&cfg), "--out-dir", s(tmp.path())])), 0);
    let model_path = tmp.path().join("model_N6.txt");
    let model = load_model(&model_path).unwrap();

    let zero = tmp.path().join("zero.csv");
    std::fs::write(&zero, "j1,value\n0,0\n").unwrap();
    let out = run(&["eval", s(&model_path), s(&zero), "--out-dir", s(tmp.path())]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(tmp.path().join("eval.csv")).unwrap();
    let got = FourierField::from_csv(&text, None).unwrap();
    assert_eq!(got, model.evaluate(&FourierField::zeros(1, 4)).unwrap());

    let far = tmp.path().join("far.csv");
    std::fs::write(&far, "j1,value\n1,5.0\n").unwrap();
    assert_eq!(
        code(&run(&["eval", s(&model_path), s(&far), "--out-dir", s(tmp.path())])),
        4
    );
}

#[test]
fn leja_export() {
    let tmp = tempfile::tempdir().unwrap();
    let out = run(&["leja", "--n", "5", "--out-dir", s(tmp.path())]);
    assert_eq!(code(&out), 0);
    let text = std::fs::read_to_string(tmp.path().join("leja_5.csv")).unwrap();
    assert_eq!(text.lines().count(), 6);
}

#[test]
fn study_reruns_are_byte_identical() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), CONFIG);
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    for dir in [&a, &b] {
        let out = run(&["study", s(&cfg), "--seed", "7", "--out-dir", s(dir)]);
        assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    }
    let rates = std::fs::read_to_string(a.join("rates.csv")).unwrap();
    assert_eq!(rates.lines().count(), 3);
    for name in ["rates.csv", "slopes.csv", "plan_N1.csv", "plan_N6.csv"] {
        assert_eq!(
            std::fs::read(a.join(name)).unwrap(),
            std::fs::read(b.join(name)).unwrap(),
            "{name}"
        );
    }
}
