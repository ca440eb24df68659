use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cobloop")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn hirzebruch_specialization_pretty() {
    let o = run(&["--degree", "4", "specialize", "--genus", "hirzebruch"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    for line in ["c1 = -y", "c2 = -y^2", "c4 = -y^4", "t0 = 1 - y", "phi(p2) = 1 + y + y^2"] {
        assert!(s.contains(line), "{line} missing from\n{s}");
    }
}

#[test]
fn generators_json_and_csv() {
    let o = run(&["--degree", "3", "--order", "2", "generators", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v.is_object());
    let o = run(&["--degree", "3", "generators", "--format", "csv"]);
    let s = stdout(&o);
    let mut lines = s.lines();
    assert_eq!(lines.next(), Some("k,b_k,a_k,c_k"));
    assert_eq!(lines.count(), 4);
}

#[test]
fn loop_commands() {
    let o = run(&["loop", "pair", "1/(1-q)", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "-1");
    let o = run(&["loop", "project", "q/(1-q)"]);
    let s = stdout(&o);
    assert!(s.contains("plus: -1") && s.contains("minus: 1/(1 - q)"), "{s}");
    let o = run(&["loop", "residue", "1/(1-q)", "--pole", "1"]);
    assert_eq!(stdout(&o).trim(), "-1");
    let o = run(&["loop", "residue", "q^-1", "--pole", "0"]);
    assert_eq!(stdout(&o).trim(), "1");
}

#[test]
fn usage_and_parse_errors_exit_2() {
    assert_eq!(run(&["verify", "nosuch"]).status.code(), Some(2));
    assert_eq!(run(&["--degree", "1", "generators"]).status.code(), Some(2));
    assert_eq!(run(&["--degree", "3", "--order", "4", "generators"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["specialize", "--genus", "nosuch"]).status.code(), Some(2));
    let o = run(&["loop", "pair", "1/(1-q)\n + w", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("2:4") || stderr(&o).contains("line 2"), "{}", stderr(&o));
    assert_eq!(run(&["loop", "pair", "1/(1+q); poles: 1", "1"]).status.code(), Some(2));
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "# defaults\ndegree = 4\ngenus = hirzebruch\nformat = csv\n").unwrap();
    let c = cfg.to_str().unwrap();
    let o = run(&["--config", c, "specialize"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).lines().count() > 1);
    assert!(!stdout(&o).contains("genus:"));
    let o = run(&["--config", c, "--format", "pretty", "specialize"]);
    assert!(stdout(&o).contains("c4 = -y^4"));
    let o = run(&["--config", c, "--degree", "3", "--format", "pretty", "specialize"]);
    assert!(stdout(&o).contains("c3 = -y^3") && !stdout(&o).contains("c4"));

    std::fs::write(&cfg, "colour = blue\n").unwrap();
    assert_eq!(run(&["--config", c, "generators"]).status.code(), Some(2));
}

#[test]
fn verify_is_deterministic_and_fault_is_caught() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.jsonl"), dir.path().join("b.jsonl"));
    for p in [&a, &b] {
        let o = run(&["verify", "generators", "--seed", "5", "--out", p.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    }
    let (ta, tb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert!(!ta.is_empty());
    assert_eq!(ta, tb);
    for line in String::from_utf8(ta).unwrap().lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(v["status"], "pass");
        assert!(v.get("runtime_ms").is_none());
    }

    let o = run(&["verify", "fgl", "--inject-fault", "exp-sign"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("associativity"), "{}", stderr(&o));

    let o = run(&["verify", "fgl", "--timings"]);
    let first = stdout(&o).lines().next().unwrap().to_string();
    let v: serde_json::Value = serde_json::from_str(&first).unwrap();
    assert!(v.get("runtime_ms").is_some());
}

#[test]
fn loop_json_input() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("f.json");
    let o = run(&["loop", "polarize", "1/(1-q)", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let o = run(&["loop", "project", "q/(1-q)", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    std::fs::write(&f, serde_json::to_string(&v["minus"]).unwrap()).unwrap();
    let o = run(&["loop", "pair", f.to_str().unwrap(), "1"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(stdout(&o).trim(), "-1");
}
