use std::process::Command;

fn ellqa(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_ellqa")).args(args).output().expect("run binary")
}

#[test]
fn list_has_three_columns() {
    let out = ellqa(&["list"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().count() > 50);
    for l in text.lines() {
        assert_eq!(l.splitn(3, '\t').count(), 3, "{l}");
    }
}

#[test]
fn bad_config_exits_2_with_line() {
    let dir = std::env::temp_dir().join(format!("ellqa-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad.cfg");
    std::fs::write(&path, "q = 0.5\nr = 0.5\n").unwrap();
    let out = ellqa(&["run", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("line 2"), "{err}");
}

#[test]
fn bad_flag_exits_2() {
    let out = ellqa(&["run", "--q", "1.5", "--suite", "qseries"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("--q"));
}

#[test]
fn text_lines_and_exit_status() {
    let out = ellqa(&["run", "--suite", "structfuncs", "--samples", "10", "--format", "text"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let any_fail = text.lines().any(|l| l.starts_with("FAIL "));
    assert!(text.lines().all(|l| l.starts_with("PASS ") || l.starts_with("FAIL ")));
    assert_eq!(out.status.code(), Some(if any_fail { 1 } else { 0 }));
}

#[test]
fn eval_kappa_is_one_at_c0() {
    let out = ellqa(&["eval", "--fn", "kappa", "--c", "0"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("= 1.00000000000000000e0,"), "{text}");
}
