use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tatefgl")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn nseries_document() {
    let o = run(&["fgl", "nseries", "--law", "gm", "--k", "2", "--trunc", "4"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "2*x - x^2");
    let j = run(&["--format", "json", "fgl", "nseries", "--law", "gm", "--k", "2", "--trunc", "4"]);
    let doc: serde_json::Value = serde_json::from_slice(&j.stdout).unwrap();
    assert_eq!(doc["coeff_ring"], "QQ");
    assert_eq!(doc["terms"][1]["exponents"][0], 2);
    assert_eq!(doc["terms"][1]["coeff"], "-1");
}

#[test]
fn json_law_file_round_trip() {
    let j = run(&["--format", "json", "fgl", "transport", "--law", "gm", "--theta", "x + x^2", "--trunc", "4"]);
    let path = std::env::temp_dir().join(format!("tatefgl-law-{}.json", std::process::id()));
    std::fs::write(&path, &j.stdout).unwrap();
    let law = format!("file:{}", path.display());
    let v = run(&["fgl", "validate", "--law", &law, "--trunc", "4"]);
    std::fs::remove_file(&path).ok();
    assert_eq!(v.status.code(), Some(0), "{}", String::from_utf8_lossy(&v.stderr));
}

#[test]
fn check_failures_exit_one() {
    let o = run(&["fgl", "validate", "--law", "series:x + y + x*y^2", "--trunc", "4"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("axioms: failed"));
    let j = run(&["--format", "json", "euler", "--law", "ga", "--block", "x,0,1", "--unit-check", "--trunc", "2"]);
    assert_eq!(j.status.code(), Some(1));
    let doc: serde_json::Value = serde_json::from_slice(&j.stdout).unwrap();
    assert_eq!(doc["passed"], false);
}

#[test]
fn input_errors_exit_two_with_name() {
    for (args, name) in [
        (vec!["genus", "chi", "--manifold", "cp1", "--r", "1"], "Pole"),
        (vec!["genus", "witten", "--manifold", "cp2"], "InvalidInput"),
        (vec!["fgl", "log", "--law", "gm", "--ring", "ZZ/4"], "NotQAlgebra"),
        (vec!["genus", "ahat", "--manifold", "torus"], "Parse"),
    ] {
        let o = run(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        let err = String::from_utf8_lossy(&o.stderr);
        assert!(err.starts_with(&format!("error: {name}:")), "{args:?}: {err}");
    }
    assert_eq!(run(&["fgl", "frobnicate"]).status.code(), Some(2));
}

#[test]
fn documented_examples() {
    assert_eq!(stdout(&run(&["genus", "ahat", "--manifold", "cp2"])).trim(), "-1/8");
    assert_eq!(stdout(&run(&["genus", "ahat", "--manifold", "cp1xcp1"])).trim(), "0");
    assert_eq!(stdout(&run(&["genus", "euler", "--manifold", "hyp2_4"])).trim(), "24");
    let o = run(&["genus", "loop-vs-quotient", "--manifold", "cp1", "--law", "ga", "--N", "3", "--qorder", "6"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&run(&["tate", "order", "--ring", "Presented(ZZ/5,[eps],[eps^2=0])", "--qhat", "0", "--p", "0,1/3"])).trim(), "3");
}

#[test]
fn identical_runs_identical_bytes() {
    let args = ["--format", "json", "theta", "--law", "gm", "--N", "2", "--trunc", "4", "--qorder", "3"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.stdout, b.stdout);
    assert!(!a.stdout.is_empty());
}
